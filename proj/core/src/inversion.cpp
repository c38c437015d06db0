#include "ddforge/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ddforge/errors.hpp"

namespace ddforge {

namespace {

struct Band {
  double peak_freq;
  double integral;
};

}  // namespace

double invert_single_peak(const MeasurementRecord& record, double peak_freq_hz,
                          const SinglePeakOptions& opts) {
  if (record.value < 0.0)
    throw validation_error("measured overlap value must be >= 0");
  const PulseSequence& seq = record.sequence;
  const double t_total = seq.total_duration();

  double band_max = opts.f_band;
  if (band_max <= 0.0) {
    if (seq.cpmg() && seq.cpmg()->n > 0)
      band_max = 12.0 * seq.cpmg()->rate_hz;
    else
      band_max = 12.0 * (static_cast<double>(seq.num_pulses()) + 1.0) / t_total;
  }
  int points = opts.grid_points;
  if (points <= 0)
    points = std::max(2001, static_cast<int>(band_max * t_total * 16.0) | 1);

  const FilterSamples grid =
      filter_grid(seq, record.kind, 0.0, band_max, points);
  const double step = grid.frequencies[1] - grid.frequencies[0];

  // strict local maxima (plus the f = 0 endpoint when it dominates)
  const auto& v = grid.values;
  const double vmax = *std::max_element(v.begin(), v.end());
  if (vmax <= 0.0) throw validation_error("filter vanishes on the band");
  std::vector<std::size_t> maxima;
  if (v[0] > v[1] && v[0] > 1e-9 * vmax) maxima.push_back(0);
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > 1e-9 * vmax)
      maxima.push_back(i);
  if (maxima.empty()) throw validation_error("no filter peak found on the band");

  // split the band at the minima between adjacent maxima and integrate
  std::vector<Band> bands;
  std::size_t lo = 0;
  for (std::size_t k = 0; k < maxima.size(); ++k) {
    std::size_t hi = v.size() - 1;
    if (k + 1 < maxima.size()) {
      hi = maxima[k];
      double best = v[maxima[k]];
      for (std::size_t i = maxima[k]; i <= maxima[k + 1]; ++i)
        if (v[i] < best) {
          best = v[i];
          hi = i;
        }
    }
    double integral = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      integral += 0.5 * (v[i] + v[i + 1]) * step;
    bands.push_back({grid.frequencies[maxima[k]], integral});
    lo = hi;
  }

  // dominant band must contain the requested peak
  std::size_t target = bands.size();
  for (std::size_t k = 0; k < bands.size(); ++k)
    if (std::abs(bands[k].peak_freq - peak_freq_hz) <=
        std::max(2.0 * step, 1.0 / t_total))
      target = k;
  if (target == bands.size())
    throw validation_error("no filter peak near the requested frequency");
  double second = 0.0;
  for (std::size_t k = 0; k < bands.size(); ++k)
    if (k != target) second = std::max(second, bands[k].integral);
  if (second > 0.0 &&
      bands[target].integral < opts.dominance_threshold * second)
    throw validation_error(
        "filter peak is not dominant enough for single-peak inversion");

  double full = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    full += 0.5 * (v[i] + v[i + 1]) * step;
  return record.value / (2.0 * full);
}

SpectrumEstimate invert_linear(const std::vector<MeasurementRecord>& records,
                               const std::vector<double>& freq_grid,
                               const InversionOptions& opts) {
  const std::size_t rows = records.size();
  const std::size_t cols = freq_grid.size();
  if (cols == 0) throw validation_error("frequency grid is empty");
  if (rows < cols)
    throw validation_error("underdetermined system: need >= |grid| records");
  for (std::size_t j = 1; j < cols; ++j)
    if (!(freq_grid[j] > freq_grid[j - 1]))
      throw validation_error("frequency grid must be strictly increasing");
  if (freq_grid.front() < 0.0)
    throw validation_error("frequency grid must be one-sided (f >= 0)");
  const FilterKind kind = records.front().kind;
  for (const auto& r : records)
    if (r.kind != kind)
      throw validation_error("all records must share one filter kind");

  // trapezoid weights on the one-sided grid, doubled for f > 0; a singleton
  // grid has no natural bin width and gets a unit one
  std::vector<double> weights(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const double lo = j > 0 ? freq_grid[j - 1] : freq_grid[j];
    const double hi = j + 1 < cols ? freq_grid[j + 1] : freq_grid[j];
    weights[j] = cols == 1 ? 1.0 : 0.5 * (hi - lo);
    if (freq_grid[j] > 0.0) weights[j] *= 2.0;
  }

  const bool weighted = std::all_of(records.begin(), records.end(),
                                    [](const auto& r) { return r.uncertainty > 0.0; });
  std::vector<double> m(rows * cols);
  std::vector<double> y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double w_row = weighted ? 1.0 / records[i].uncertainty : 1.0;
    for (std::size_t j = 0; j < cols; ++j)
      m[i * cols + j] = w_row * weights[j] *
                        filter_value(records[i].sequence, kind, freq_grid[j]);
    y[i] = w_row * records[i].value;
  }

  SpectrumEstimate est;
  est.frequencies = freq_grid;
  est.densities.assign(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    double colmax = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      colmax = std::max(colmax, std::abs(m[i * cols + j]));
    if (colmax == 0.0) est.undetermined.push_back(static_cast<int>(j));
  }

  auto apply = [&](const std::vector<double>& g, std::vector<double>& out) {
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += m[i * cols + j] * g[j];
      out[i] = acc;
    }
  };
  auto apply_t = [&](const std::vector<double>& r, std::vector<double>& out) {
    for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out[j] += m[i * cols + j] * r[i];
  };

  // Lipschitz bound ||M^T M|| by power iteration
  std::vector<double> v(cols, 1.0), mv(rows), atamv(cols);
  double lip = 0.0;
  for (int it = 0; it < 100; ++it) {
    apply(v, mv);
    apply_t(mv, atamv);
    double n = 0.0;
    for (double x : atamv) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) break;
    lip = n;
    for (std::size_t j = 0; j < cols; ++j) v[j] = atamv[j] / n;
  }
  lip *= 1.01;

  std::vector<double> g(cols, 0.0), resid(rows), grad(cols);
  auto objective = [&]() {
    apply(g, resid);
    double o = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      resid[i] -= y[i];
      o += resid[i] * resid[i];
    }
    return 0.5 * o;
  };
  double obj_prev = objective();
  int it = 0;
  if (lip > 0.0) {
    for (it = 1; it <= opts.max_iterations; ++it) {
      apply_t(resid, grad);
      for (std::size_t j = 0; j < cols; ++j)
        g[j] = std::max(0.0, g[j] - grad[j] / lip);
      const double obj = objective();
      if (!std::isfinite(obj))
        throw convergence_error("non-finite objective in spectrum inversion");
      if (std::abs(obj_prev - obj) <
          opts.tolerance * std::max(obj_prev, 1e-300)) {
        est.tolerance_reached = true;
        break;
      }
      obj_prev = obj;
    }
  } else {
    est.tolerance_reached = true;  // zero operator: g = 0 is optimal
  }
  est.iterations = std::min(it, opts.max_iterations);
  est.densities = g;

  // unweighted residual for reporting
  double rn = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j)
      acc += weights[j] * filter_value(records[i].sequence, kind, freq_grid[j]) *
             g[j];
    const double d = acc - records[i].value;
    rn += d * d;
  }
  est.residual_norm = std::sqrt(rn);
  return est;
}

}  // namespace ddforge
