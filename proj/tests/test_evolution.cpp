#include <doctest.h>

#include <cmath>
#include <random>

#include "ddforge/errors.hpp"
#include "ddforge/evolution.hpp"

using namespace ddforge;

namespace {

SpectralDensity env_of(std::vector<SpectralComponent> c) {
  return SpectralDensity{SpectrumKind::environment, std::move(c)};
}
SpectralDensity ctrl_of(std::vector<SpectralComponent> c) {
  return SpectralDensity{SpectrumKind::control, std::move(c)};
}

}  // namespace

TEST_CASE("delta_rho structure") {
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  const auto zero_env = env_of({});
  const auto zero_ctrl = ctrl_of({});

  SUBCASE("zero spectra give zero increment") {
    const auto d = delta_rho({0.3, -0.2, 0.5}, seq, zero_env, zero_ctrl);
    CHECK(d.x == 0.0);
    CHECK(d.y == 0.0);
    CHECK(d.z == 0.0);
  }
  SUBCASE("environment-only couples to x and y") {
    const auto env = env_of({Lorentzian{1e-3, 0.01}});
    const auto rep = overlap_report(seq, env, zero_ctrl);
    const auto d = delta_rho({0.0, 1.0, 0.0}, rep);
    CHECK(d.y == doctest::Approx(-rep.env / 2.0).epsilon(1e-12));
    CHECK(d.x == 0.0);
    CHECK(d.z == 0.0);
  }
  SUBCASE("x axis is insensitive to control noise") {
    const auto env = env_of({Lorentzian{1e-3, 0.01}});
    const auto ctrl = ctrl_of({SpectralLine{50.0, 1e-6}});
    const auto rep = overlap_report(seq, env, ctrl);
    const auto d = delta_rho({1.0, 0.0, 0.0}, rep);
    CHECK(d.x == doctest::Approx(-rep.env / 2.0).epsilon(1e-12));
    CHECK(d.z == 0.0);  // no cross spectra
  }
  SUBCASE("externally supplied cross overlap couples x and z") {
    OverlapReport rep;
    rep.cross = 0.02;
    rep.duration = 1.0;
    const auto d = delta_rho({0.4, 0.0, 0.6}, rep);
    CHECK(d.x == doctest::Approx(0.6 / 2.0 * 0.02).epsilon(1e-12));
    CHECK(d.z == doctest::Approx(0.4 / 2.0 * 0.02).epsilon(1e-12));
    CHECK(d.y == 0.0);
  }
}

TEST_CASE("delta_rho is linear in the state") {
  OverlapReport rep;
  rep.env = 0.013;
  rep.ctrl = 0.007;
  rep.duration = 1.0;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 50; ++i) {
    const BlochState a{u(rng), u(rng), u(rng)};
    const BlochState b{u(rng), u(rng), u(rng)};
    const double ca = u(rng), cb = u(rng);
    const BlochState sum{ca * a.x + cb * b.x, ca * a.y + cb * b.y,
                         ca * a.z + cb * b.z};
    const auto d_sum = delta_rho(sum, rep);
    const auto da = delta_rho(a, rep);
    const auto db = delta_rho(b, rep);
    CHECK(d_sum.x == doctest::Approx(ca * da.x + cb * db.x).epsilon(1e-12));
    CHECK(d_sum.y == doctest::Approx(ca * da.y + cb * db.y).epsilon(1e-12));
    CHECK(d_sum.z == doctest::Approx(ca * da.z + cb * db.z).epsilon(1e-12));
  }
}

TEST_CASE("rho_y variance") {
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  CHECK(rho_y_variance(seq, ctrl_of({})) == 0.0);
  const double p = 1e-5;
  CHECK(rho_y_variance(seq, ctrl_of({SpectralLine{50.0, p}})) ==
        doctest::Approx(p * filter_control(seq, 50.0)).epsilon(1e-12));
}

TEST_CASE("rho_y variance scan peaks at 200/(2m-1) Hz") {
  const auto ctrl = ctrl_of({SpectralLine{50.0, 1e-6}});
  std::vector<double> rates, values;
  for (double r = 20.0; r <= 220.0 + 1e-9; r += 0.5) {
    rates.push_back(r);
    values.push_back(rho_y_variance(build_cpmg(4, r, 40, 0.0), ctrl));
  }
  for (int m = 1; m <= 4; ++m) {
    const double predicted = 200.0 / (2 * m - 1);
    double best = 1e9;
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
      if (values[i] > values[i - 1] && values[i] > values[i + 1])
        best = std::min(best, std::abs(rates[i] - predicted));
    CHECK(best <= 1.0);
  }
}

TEST_CASE("fidelity values and identities") {
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  const auto env = env_of({Lorentzian{2e-3, 0.01}});
  const auto ctrl = ctrl_of({SpectralLine{50.0, 1e-6}, DcComponent{3e-5}});
  const auto rep = overlap_report(seq, env, ctrl);

  CHECK(fidelity({0.0, 1.0, 0.0}, seq, env_of({}), ctrl_of({})) == 1.0);
  CHECK(fidelity({0.0, 0.0, 1.0}, rep) ==
        doctest::Approx(1.0 - rep.ctrl / 4.0).epsilon(1e-12));
  CHECK(fidelity({0.0, 1.0, 0.0}, rep) ==
        doctest::Approx(1.0 - (rep.env + rep.ctrl) / 4.0).epsilon(1e-12));

  SUBCASE("1 - F = -(1/2) rho . delta_rho at machine precision") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.57, 0.57);
    for (int i = 0; i < 100; ++i) {
      const BlochState s{u(rng), u(rng), u(rng)};
      const auto d = delta_rho(s, rep);
      const double lhs = 1.0 - fidelity(s, rep);
      const double rhs = -0.5 * (s.x * d.x + s.y * d.y + s.z * d.z);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
  SUBCASE("1 - F scales linearly with the spectrum") {
    for (double c : {0.25, 2.0, 7.5}) {
      const auto scaled_env = env_of({Lorentzian{c * 2e-3, 0.01}});
      const auto scaled_ctrl =
          ctrl_of({SpectralLine{50.0, c * 1e-6}, DcComponent{c * 3e-5}});
      const double base = 1.0 - fidelity({0.0, 1.0, 0.0}, rep);
      const double scaled =
          1.0 - fidelity({0.0, 1.0, 0.0}, seq, scaled_env, scaled_ctrl);
      // floor: rounding of the "1 -" subtraction plus a few ulp of scaling
      CHECK(std::abs(scaled - c * base) <=
            (1.0 + c) * 2.3e-16 + 5e-15 * std::abs(scaled));
    }
  }
}

TEST_CASE("process prediction structure") {
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  SUBCASE("environment-only: x and y decay alike, z unaffected") {
    const auto p =
        process_prediction(seq, env_of({Lorentzian{1e-3, 0.01}}), ctrl_of({}));
    CHECK(p.lambda_x == doctest::Approx(p.lambda_y));
    CHECK(p.lambda_x < 1.0);
    CHECK(p.lambda_z == 1.0);
  }
  SUBCASE("control-only: y and z decay alike, x unaffected") {
    const auto p = process_prediction(seq, env_of({}),
                                      ctrl_of({SpectralLine{50.0, 1e-6}}));
    CHECK(p.lambda_y == doctest::Approx(p.lambda_z));
    CHECK(p.lambda_z < 1.0);
    CHECK(p.lambda_x == 1.0);
  }
  SUBCASE("zero noise gives the identity process") {
    const auto p = process_prediction(seq, env_of({}), ctrl_of({}));
    CHECK(p.lambda_x == 1.0);
    CHECK(p.lambda_y == 1.0);
    CHECK(p.lambda_z == 1.0);
    CHECK(p.fidelity_worst == 1.0);
    CHECK(p.decay_rate_worst == 0.0);
    CHECK(p.within_first_order);
  }
}

TEST_CASE("axis decomposition identity over random spectra and sequences") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    OverlapReport rep;
    rep.env = 0.3 * u(rng);
    rep.ctrl = 0.3 * u(rng);
    rep.duration = 0.1 + u(rng);
    const auto p = process_prediction(rep);
    const double lhs = p.lambda_y - 1.0;
    const double rhs = (p.lambda_x - 1.0) + (p.lambda_z - 1.0);
    CHECK(std::abs(lhs - rhs) <= 1e-15);
  }
}

TEST_CASE("fidelity map") {
  const auto zero_env = env_of({});
  const auto line_ctrl = ctrl_of({SpectralLine{50.0, 1e-6}});

  SUBCASE("zero spectra floor") {
    const auto map = fidelity_map({0, 4}, {40.0, 67.0}, 1.0, zero_env,
                                  ctrl_of({}), 0.0);
    for (double v : map.log10_decay_rate) CHECK(v == doctest::Approx(-6.0));
    for (auto f : map.flagged) CHECK(f == 0);
  }
  SUBCASE("n=4 row peaks at 200/(2m-1) Hz with a 50 Hz control line") {
    std::vector<double> rates;
    for (double r = 20.0; r <= 220.0 + 1e-9; r += 0.5) rates.push_back(r);
    const auto map =
        fidelity_map({4}, rates, 1.0, zero_env, line_ctrl, 0.0);
    for (int m = 1; m <= 4; ++m) {
      const double predicted = 200.0 / (2 * m - 1);
      double best = 1e9;
      for (std::size_t j = 1; j + 1 < rates.size(); ++j)
        if (map.at(0, j) > map.at(0, j - 1) && map.at(0, j) > map.at(0, j + 1))
          best = std::min(best, std::abs(rates[j] - predicted));
      CHECK(best <= 1.5);
    }
  }
  SUBCASE("50 vs 67 Hz contrast along the n=4 row") {
    const auto map =
        fidelity_map({4}, {50.0, 67.0}, 1.0, zero_env, line_ctrl, 0.0);
    CHECK(map.at(0, 1) > map.at(0, 0) + 1.0);  // >= 10x in rate
  }
  SUBCASE("large n samples a slow control drift harder") {
    // slow (near-DC) control noise: decay grows with the phase-cycle length
    const auto slow = ctrl_of({Lorentzian{1e-4, 3.0}});
    const auto map = fidelity_map({2, 4, 8, 16}, {100.0}, 1.0, zero_env,
                                  slow, 0.0);
    CHECK(map.at(1, 0) > map.at(0, 0));
    CHECK(map.at(2, 0) > map.at(1, 0));
    CHECK(map.at(3, 0) > map.at(2, 0));
  }
  SUBCASE("strong noise cells are clamped and flagged") {
    // a strong 50 Hz line on the CPMG-4@67 resonance pushes 1-F past 0.5
    const auto strong = ctrl_of({SpectralLine{50.0, 1e-3}});
    const auto map = fidelity_map({4}, {67.0}, 1.0, zero_env, strong, 0.0);
    CHECK(map.flagged_at(0, 0));
    const double t_seq = 64.0 / 67.0;  // round(67) floored to a multiple of 4
    CHECK(map.at(0, 0) == doctest::Approx(std::log10(0.5 / t_seq)).epsilon(1e-9));
  }
  SUBCASE("cell values do not depend on the thread count") {
    std::vector<double> rates;
    for (double r = 30.0; r <= 90.0; r += 5.0) rates.push_back(r);
    FidelityMapOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = fidelity_map({0, 4}, rates, 1.0, zero_env, line_ctrl, 0.0, one);
    const auto b = fidelity_map({0, 4}, rates, 1.0, zero_env, line_ctrl, 0.0, many);
    CHECK(a.log10_decay_rate == b.log10_decay_rate);
    CHECK(a.flagged == b.flagged);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(fidelity_map({}, {50.0}, 1.0, zero_env, line_ctrl, 0.0),
                    validation_error);
    CHECK_THROWS_AS(fidelity_map({3}, {50.0}, 1.0, zero_env, line_ctrl, 0.0),
                    validation_error);
    CHECK_THROWS_AS(fidelity_map({4}, {50.0}, 0.0, zero_env, line_ctrl, 0.0),
                    validation_error);
  }
}

TEST_CASE("bloch state validation") {
  CHECK_THROWS_AS(validate_state({1.2, 0.0, 0.0}), validation_error);
  CHECK_NOTHROW(validate_state({0.6, 0.0, 0.8}));
}
