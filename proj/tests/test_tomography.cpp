#include <doctest.h>

#include <cmath>

#include "ddforge/errors.hpp"
#include "ddforge/tomography.hpp"

using namespace ddforge;

namespace {

SpectralDensity env_of(std::vector<SpectralComponent> c) {
  return SpectralDensity{SpectrumKind::environment, std::move(c)};
}
SpectralDensity ctrl_of(std::vector<SpectralComponent> c) {
  return SpectralDensity{SpectrumKind::control, std::move(c)};
}

std::array<std::pair<BlochState, BlochState>, 4> map_through(
    const ProcessMatrix& p) {
  const BlochState initials[4] = {
      {0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}};
  std::array<std::pair<BlochState, BlochState>, 4> pairs;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d v = p.apply(
        {initials[i].x, initials[i].y, initials[i].z});
    pairs[i] = {initials[i], {v(0), v(1), v(2)}};
  }
  return pairs;
}

}  // namespace

TEST_CASE("predict_process structure") {
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  SUBCASE("zero spectra give the identity") {
    const auto p = predict_process(seq, env_of({}), ctrl_of({}));
    CHECK(p.linear.isApprox(Eigen::Matrix3d::Identity(), 1e-15));
    CHECK(p.offset.norm() == 0.0);
  }
  SUBCASE("control-only: diag(1, l, l)") {
    const auto p =
        predict_process(seq, env_of({}), ctrl_of({SpectralLine{50.0, 1e-6}}));
    CHECK(p.linear(0, 0) == 1.0);
    CHECK(p.linear(1, 1) == doctest::Approx(p.linear(2, 2)).epsilon(1e-15));
    CHECK(p.linear(1, 1) < 1.0);
    CHECK(p.linear(0, 1) == 0.0);
  }
  SUBCASE("environment-only: diag(l, l, 1)") {
    const auto p =
        predict_process(seq, env_of({Lorentzian{1e-3, 0.01}}), ctrl_of({}));
    CHECK(p.linear(0, 0) == doctest::Approx(p.linear(1, 1)).epsilon(1e-15));
    CHECK(p.linear(2, 2) == 1.0);
    CHECK(p.linear(0, 0) < 1.0);
  }
  SUBCASE("lambda_y = lambda_x + lambda_z - 1") {
    const auto p = predict_process(seq, env_of({Lorentzian{1e-3, 0.01}}),
                                   ctrl_of({SpectralLine{50.0, 1e-6}}));
    CHECK(p.linear(1, 1) ==
          doctest::Approx(p.linear(0, 0) + p.linear(2, 2) - 1.0).epsilon(1e-14));
  }
}

TEST_CASE("operator norm and contraction invariant") {
  Eigen::Matrix3d m = Eigen::Vector3d(0.9, 0.8, 0.95).asDiagonal();
  CHECK(operator_norm(m) == doctest::Approx(0.95).epsilon(1e-9));
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  const auto p = predict_process(seq, env_of({Lorentzian{1e-3, 0.01}}),
                                 ctrl_of({SpectralLine{50.0, 1e-6}}));
  CHECK(operator_norm(p.linear) <= 1.0 + 1e-6);
}

TEST_CASE("fit_process") {
  SUBCASE("identity round trip") {
    ProcessMatrix identity;
    const auto fitted = fit_process(map_through(identity));
    CHECK(fitted.linear.isApprox(Eigen::Matrix3d::Identity(), 1e-14));
    CHECK(fitted.offset.norm() <= 1e-15);
  }
  SUBCASE("known diagonal is recovered exactly") {
    ProcessMatrix p;
    p.linear = Eigen::Vector3d(0.9, 0.8, 0.95).asDiagonal();
    const auto fitted = fit_process(map_through(p));
    CHECK(fitted.linear.isApprox(p.linear, 1e-14));
    CHECK(fitted.offset.norm() <= 1e-15);
  }
  SUBCASE("general affine map is recovered exactly") {
    ProcessMatrix p;
    p.linear << 0.8, 0.05, -0.02, 0.0, 0.7, 0.1, 0.03, -0.04, 0.9;
    p.offset << 0.01, -0.02, 0.005;
    const auto fitted = fit_process(map_through(p));
    CHECK(fitted.linear.isApprox(p.linear, 1e-13));
    CHECK((fitted.offset - p.offset).norm() <= 1e-14);
  }
  SUBCASE("input order does not matter") {
    ProcessMatrix p;
    p.linear = Eigen::Vector3d(0.9, 0.8, 0.95).asDiagonal();
    auto pairs = map_through(p);
    std::swap(pairs[0], pairs[3]);
    std::swap(pairs[1], pairs[2]);
    const auto fitted = fit_process(pairs);
    CHECK(fitted.linear.isApprox(p.linear, 1e-14));
  }
  SUBCASE("degenerate input set is rejected") {
    auto pairs = map_through(ProcessMatrix{});
    pairs[1].first = {0, 0, 1};  // duplicate +z
    CHECK_THROWS_AS(fit_process(pairs), validation_error);
    pairs = map_through(ProcessMatrix{});
    pairs[2].first = {0.5, 0.5, 0.0};  // not a canonical state
    CHECK_THROWS_AS(fit_process(pairs), validation_error);
  }
}

TEST_CASE("sphere samples") {
  SUBCASE("identity maps the grid onto itself") {
    const auto samples = sphere_samples(ProcessMatrix{}, 5);
    CHECK(samples.size() == 5u * 8u);
    for (const auto& [u, v] : samples) {
      CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((u - v).norm() <= 1e-15);
    }
  }
  SUBCASE("diag(1,0,1) collapses y") {
    ProcessMatrix p;
    p.linear = Eigen::Vector3d(1.0, 0.0, 1.0).asDiagonal();
    for (const auto& [u, v] : sphere_samples(p, 4)) {
      CHECK(v(1) == 0.0);
      CHECK(v(0) == doctest::Approx(u(0)));
      CHECK(v(2) == doctest::Approx(u(2)));
    }
  }
  SUBCASE("ctrl-only prediction shortens y and z") {
    const auto seq = build_cpmg(4, 67.0, 40, 0.0);
    const auto p =
        predict_process(seq, env_of({}), ctrl_of({SpectralLine{50.0, 1e-5}}));
    double max_x = 0.0, max_y = 0.0, max_z = 0.0;
    // odd resolution puts the equator and longitude pi/2 on the grid
    for (const auto& [u, v] : sphere_samples(p, 9)) {
      max_x = std::max(max_x, std::abs(v(0)));
      max_y = std::max(max_y, std::abs(v(1)));
      max_z = std::max(max_z, std::abs(v(2)));
    }
    CHECK(max_x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(max_y < 1.0);
    CHECK(max_z < 1.0);
    CHECK(max_y == doctest::Approx(max_z).epsilon(1e-9));
  }
  CHECK_THROWS_AS(sphere_samples(ProcessMatrix{}, 1), validation_error);
}
