#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gis/system.hpp"

using namespace gis;

namespace {

// Reference solution by many small classical RK4 substeps, written out
// independently of rk4_discretize.
Vec fine_solution(const VectorField& f, Vec x, std::span<const double> u, double h, int substeps) {
  const std::size_t n = x.size();
  const double dt = h / substeps;
  Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (int s = 0; s < substeps; ++s) {
    f(x.span(), u, k1.span());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    f(tmp.span(), u, k2.span());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    f(tmp.span(), u, k3.span());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    f(tmp.span(), u, k4.span());
    for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return x;
}

double scaled_error(const Vec& a, const Vec& b) {
  // c_A is O(1), T is O(350): compare relative to each state's scale.
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]) / 350.0);
}

}  // namespace

TEST_CASE("rk4_discretize: zero field leaves the state unchanged") {
  const VectorField zero = [](std::span<const double>, std::span<const double>, std::span<double> dx) {
    std::fill(dx.begin(), dx.end(), 0.0);
  };
  const Vec x{0.3, -2.0};
  const double u = 1.0;
  CHECK(rk4_discretize(zero, x.span(), std::span(&u, 1), 0.1) == x);
}

TEST_CASE("rk4_discretize: exponential decay matches exp(-h)") {
  const VectorField decay = [](std::span<const double> x, std::span<const double>, std::span<double> dx) {
    dx[0] = -x[0];
  };
  const double x0 = 1.0;
  const Vec x1 = rk4_discretize(decay, std::span(&x0, 1), {}, 0.1);
  CHECK(x1[0] == doctest::Approx(0.904837418).epsilon(1e-6));
  CHECK(std::abs(x1[0] - std::exp(-0.1)) < 1e-6);
  CHECK_THROWS_AS(rk4_discretize(decay, std::span(&x0, 1), {}, 0.0), ContractViolation);
}

TEST_CASE("rk4_discretize converges at fourth order on the CSTR field") {
  const CstrParameters p;
  const VectorField f = cstr_vector_field(p);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> c(0.0, 1.0), temp(345.0, 355.0), tc(285.0, 315.0);
  const double h = 0.05;
  std::vector<double> ratios;
  for (int i = 0; i < 100; ++i) {
    const Vec x{c(rng), temp(rng)};
    const double u = tc(rng);
    const std::span<const double> us(&u, 1);
    const Vec ref = fine_solution(f, x, us, h, 4000);
    const Vec one = rk4_discretize(f, x.span(), us, h);
    const Vec half = rk4_discretize(f, x.span(), us, h / 2);
    const Vec two = rk4_discretize(f, half.span(), us, h / 2);
    const double e1 = scaled_error(one, ref);
    const double e2 = scaled_error(two, ref);
    if (e2 > 1e-13) ratios.push_back(e1 / e2);
  }
  REQUIRE(ratios.size() >= 50);
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios[ratios.size() / 2];
  MESSAGE("median error ratio for halved h: " << median);
  CHECK(median > 13.0);
  CHECK(median < 19.0);
}

TEST_CASE("cstr_model: constraint boxes and Table 2 defaults") {
  const SystemModel m = cstr_model();
  CHECK(m.n == 2);
  CHECK(m.m == 1);
  CHECK(m.state_box == Box{{0.0, 1.0}, {345.0, 355.0}});
  CHECK(m.input_box == Box{{285.0, 315.0}});
  const CstrParameters p;
  CHECK(p.q == 100.0);
  CHECK(p.V == 100.0);
  CHECK(p.c_Af == 1.0);
  CHECK(p.T_f == 350.0);
  CHECK(p.E_over_R == 8750.0);
  CHECK(p.k0 == 7.2e10);
  CHECK(p.minus_dH == 5.0e4);
  CHECK(p.UA == 5.0e4);
  CHECK(p.c_p == 0.239);
  CHECK(p.rho == 1000.0);
  CHECK(p.h == 0.1);
}

TEST_CASE("cstr_model: golden step value") {
  // Independent integration (DOP853, rtol 1e-13) of the CSTR ODE from
  // x = (0.5, 350), T_c = 300 over 0.1 min.
  const SystemModel m = cstr_model();
  const double u = 300.0;
  const Vec next = m(Vec{0.5, 350.0}.span(), std::span(&u, 1));
  CHECK(next[0] > 0.0);
  CHECK(next[0] < 1.0);
  CHECK(std::abs(next[0] - 0.5000044200072831) < 1e-6);
  CHECK(std::abs(next[1] - 349.999156121837) < 1e-6);
}

TEST_CASE("cstr_model: steady states are fixed points of the step") {
  // Roots of both right-hand sides at T_c = 300 (found with an independent
  // nonlinear solver).
  const SystemModel m = cstr_model();
  const double u = 300.0;
  const std::vector<Vec> equilibria{
      {0.49991828595865606, 350.0055286902127},
      {0.8772529460809678, 324.47544343159893},
      {0.20876137961455535, 369.70491342256054},
  };
  for (const Vec& x : equilibria) {
    const Vec next = m(x.span(), std::span(&u, 1));
    CHECK(std::abs(next[0] - x[0]) < 1e-9);
    CHECK(std::abs(next[1] - x[1]) < 1e-7);
  }
}

TEST_CASE("linear_test_model: x+ = a x + u") {
  const SystemModel m = linear_test_model(2.0, -1.0, 1.0, -0.5, 0.5);
  CHECK(m.n == 1);
  CHECK(m.m == 1);
  CHECK(m.state_box == Box{{-1.0, 1.0}});
  CHECK(m.input_box == Box{{-0.5, 0.5}});
  const double x = 0.3;
  const double u = -0.25;
  CHECK(m(std::span(&x, 1), std::span(&u, 1))[0] == doctest::Approx(0.35));

  const SystemModel id = linear_test_model(1.0, 0.0, 1.0, 0.0, 0.0);
  const double z = 0.0;
  CHECK(id(std::span(&x, 1), std::span(&z, 1))[0] == x);
}

TEST_CASE("identity and shift models") {
  const SystemModel id = identity_model(3);
  CHECK(id.n == 3);
  const Vec x{0.1, 0.2, 0.3};
  const double u = 0.0;
  CHECK(id(x.span(), std::span(&u, 1)) == x);
  const SystemModel sh = shift_model(10.0);
  const double y = 0.5;
  CHECK(sh(std::span(&y, 1), std::span(&u, 1))[0] == 10.5);
}

TEST_CASE("sample_inputs: uniform grid with endpoints") {
  const std::size_t three[] = {3};
  const InputGrid g = sample_inputs(Box{{285.0, 315.0}}, three);
  REQUIRE(g.points.size() == 3);
  CHECK(g.points[0][0] == 285.0);
  CHECK(g.points[1][0] == 300.0);
  CHECK(g.points[2][0] == 315.0);

  const std::size_t two_two[] = {2, 2};
  const InputGrid corners = sample_inputs(Box{{-0.5, 0.5}, {-0.5, 0.5}}, two_two);
  REQUIRE(corners.points.size() == 4);
  CHECK(corners.points[0] == Vec{-0.5, -0.5});
  CHECK(corners.points[1] == Vec{-0.5, 0.5});
  CHECK(corners.points[2] == Vec{0.5, -0.5});
  CHECK(corners.points[3] == Vec{0.5, 0.5});

  const std::size_t two[] = {2};
  const InputGrid ends = sample_inputs(Box{{-2.0, 7.0}}, two);
  REQUIRE(ends.points.size() == 2);
  CHECK(ends.points[0][0] == -2.0);
  CHECK(ends.points[1][0] == 7.0);

  const std::size_t one[] = {1};
  CHECK_THROWS_AS(sample_inputs(Box{{0.0, 1.0}}, one), ContractViolation);
  CHECK_THROWS_AS(sample_inputs(Box{{0.0, 1.0}}, two_two), ContractViolation);
}

TEST_CASE("sample_inputs: count and bounds property") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng() % 3;
    Vec lo(m), hi(m);
    std::vector<std::size_t> counts;
    std::size_t product = 1;
    for (std::size_t d = 0; d < m; ++d) {
      lo[d] = -static_cast<double>(rng() % 100) / 7.0;
      hi[d] = lo[d] + 0.1 + static_cast<double>(rng() % 100) / 3.0;
      counts.push_back(2 + rng() % 5);
      product *= counts.back();
    }
    const Box U(lo, hi);
    const InputGrid g = sample_inputs(U, counts);
    CHECK(g.points.size() == product);
    for (const Vec& p : g.points) CHECK(U.contains(p.span()));
  }
}

TEST_CASE("model registry") {
  const auto names = model_names();
  for (const auto& name : names) {
    const SystemModel m = make_model(name, {});
    CHECK(m.name == name);
    CHECK(!model_defaults(name).empty());
    CHECK(make_model(name, model_defaults(name)).n == m.n);
  }
  CHECK(std::find(names.begin(), names.end(), "cstr") != names.end());
  CHECK_THROWS_WITH_AS(make_model("pendulum", {}), doctest::Contains("model"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_model("linear", {{"linear.a", "two"}}), doctest::Contains("linear.a"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_model("linear", {{"cstr.q", "1"}}), doctest::Contains("cstr.q"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_model("cstr", {{"cstr.V", "-1"}}), doctest::Contains("cstr.V"), std::invalid_argument);
  CHECK(make_model("linear", {{"linear.a", "3"}}).state_box == Box{{-1.0, 1.0}});
  CHECK(make_model("identity", {{"identity.dim", "2"}}).n == 2);
}
