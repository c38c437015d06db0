#ifndef DDFORGE_NUMERICS_HPP
#define DDFORGE_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <vector>

namespace ddforge {

/// sin(x)/x, stable through x = 0.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

/// Exact ∫_a^b e^{-2πi f t} dt = (b-a) e^{-iπf(a+b)} sinc(πf(b-a)).
inline std::complex<double> segment_fourier(double a, double b, double f_hz) {
  const double len = b - a;
  const double mid_phase = -std::numbers::pi * f_hz * (a + b);
  return len * sinc(std::numbers::pi * f_hz * len) *
         std::complex<double>(std::cos(mid_phase), std::sin(mid_phase));
}

/// Counter-based deterministic seed derivation (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace detail {

// Gauss-Kronrod 15(7) abscissae and weights (positive half).
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kG7Weights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * kGk15Nodes[i];
    const double f1 = f(c - dx);
    const double f2 = (i == 7) ? 0.0 : f(c + dx);
    const double fsum = (i == 7) ? f1 : f1 + f2;
    kron += kGk15Weights[i] * fsum;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
    if (i == 7) gauss += kG7Weights[3] * f1;
  }
  value = kron * h;
  err = std::abs((kron - gauss) * h);
}

struct QuadInterval {
  double a, b, value, err;
  bool operator<(const QuadInterval& o) const { return err < o.err; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature over [a, b].
/// `breakpoints` (sorted or not, duplicates fine) force the initial
/// subdivision; intervals are then bisected worst-error-first until the
/// total error estimate is below max(abs_tol, rel_tol*|integral|), the
/// worst interval hits the rounding floor, or the interval budget runs out.
template <class F>
double adaptive_quadrature(const F& f, double a, double b, double abs_tol,
                           double rel_tol, std::span<const double> breakpoints = {},
                           int max_intervals = 20000) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(a);
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::QuadInterval> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    detail::QuadInterval iv{edges[i], edges[i + 1], 0.0, 0.0};
    detail::gk15(f, iv.a, iv.b, iv.value, iv.err);
    total += iv.value;
    total_err += iv.err;
    heap.push(iv);
  }
  int n = static_cast<int>(heap.size());
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         n < max_intervals && !heap.empty()) {
    detail::QuadInterval worst = heap.top();
    // splitting cannot improve below the rounding floor of the estimates
    if (worst.err <= 1e-14 * (std::abs(total) + abs_tol)) break;
    heap.pop();
    total -= worst.value;
    total_err -= worst.err;
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {  // interval at fp resolution
      total += worst.value;
      total_err += 0.0;
      continue;
    }
    for (auto [lo, hi] : {std::pair{worst.a, m}, std::pair{m, worst.b}}) {
      detail::QuadInterval iv{lo, hi, 0.0, 0.0};
      detail::gk15(f, iv.a, iv.b, iv.value, iv.err);
      total += iv.value;
      total_err += iv.err;
      heap.push(iv);
      ++n;
    }
  }
  return total;
}

/// Runs fn(i) for i in [0, count). With threads > 1 the index range is
/// split into contiguous chunks; results must be written to per-index
/// slots so the outcome is identical for any thread count.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

}  // namespace ddforge

#endif
