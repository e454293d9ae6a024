#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "gis/image.hpp"
#include "gis/system.hpp"

using namespace gis;

namespace {

SystemModel affine_model(const double A[2][2], const double b[2]) {
  SystemModel m;
  m.name = "affine";
  m.n = 2;
  m.m = 1;
  m.state_box = Box{{-10.0, 10.0}, {-10.0, 10.0}};
  m.input_box = Box{{0.0, 0.0}};
  std::array<double, 6> c{A[0][0], A[0][1], A[1][0], A[1][1], b[0], b[1]};
  m.step = [c](std::span<const double> x, std::span<const double>, std::span<double> y) {
    y[0] = c[0] * x[0] + c[1] * x[1] + c[4];
    y[1] = c[2] * x[0] + c[3] * x[1] + c[5];
  };
  return m;
}

Box random_cell(std::mt19937_64& rng, const Box& within) {
  Vec lo(within.dim()), hi(within.dim());
  for (std::size_t d = 0; d < within.dim(); ++d) {
    std::uniform_real_distribution<double> u(within.lo(d), within.hi(d));
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (a == b) b = std::nextafter(b, within.hi(d) + 1);
    lo[d] = a;
    hi[d] = b;
  }
  return {lo, hi};
}

const double kZero = 0.0;

}  // namespace

TEST_CASE("cell_sample_points") {
  const Box unit{{0.0, 1.0}, {0.0, 1.0}};
  const auto two = cell_sample_points(unit, 2);
  CHECK(two == vertices(unit));
  const auto three = cell_sample_points(unit, 3);
  CHECK(three.size() == 9);
  CHECK(std::find(three.begin(), three.end(), Vec{0.5, 0.5}) != three.end());
  const auto rect = cell_sample_points(Box{{0.0, 2.0}, {0.0, 4.0}}, 3);
  CHECK(std::find(rect.begin(), rect.end(), Vec{1.0, 2.0}) != rect.end());
  for (const Vec& p : rect) CHECK(Box{{0.0, 2.0}, {0.0, 4.0}}.contains(p.span()));
  CHECK_THROWS_AS(cell_sample_points(unit, 1), ContractViolation);
}

TEST_CASE("cell_image: identity and linear maps") {
  const SystemModel id = identity_model(2);
  const Box b{{0.2, 0.4}, {0.1, 0.7}};
  const auto exact = cell_image(id, b, std::span(&kZero, 1), {3, 0.0});
  REQUIRE(exact);
  CHECK(*exact == b);
  const auto bloated = cell_image(id, b, std::span(&kZero, 1), {3, 0.1});
  REQUIRE(bloated);
  CHECK(bloated->contains(b));
  CHECK_FALSE(*bloated == b);

  const SystemModel lin = linear_test_model(2.0, -1.0, 1.0, -0.5, 0.5);
  const auto img = cell_image(lin, Box{{0.0, 0.1}}, std::span(&kZero, 1), {3, 0.0});
  REQUIRE(img);
  CHECK(img->lo(0) == 0.0);
  CHECK(img->hi(0) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("cell_image: CSTR enclosure contains unseen interior images") {
  const SystemModel m = cstr_model();
  const Box cell{{0.475, 0.525}, {349.75, 350.25}};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(cell.lo(0), cell.hi(0)), uy(cell.lo(1), cell.hi(1));
  std::vector<Vec> probes;
  for (int i = 0; i < 200; ++i) probes.push_back(Vec{ux(rng), uy(rng)});

  auto contains_all = [&](double bloat, double u) {
    const auto img = cell_image(m, cell, std::span(&u, 1), {3, bloat});
    if (!img) return false;
    for (const Vec& p : probes) {
      if (!img->contains(m(p.span(), std::span(&u, 1)).span())) return false;
    }
    return true;
  };

  for (double u : {285.0, 300.0, 315.0}) {
    CHECK(contains_all(0.05, u));
    CHECK(contains_all(0.1, u));
    double lo = 0.0, hi = 0.05;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (contains_all(mid, u) ? hi : lo) = mid;
    }
    MESSAGE("minimal sufficient bloat at T_c=" << u << ": " << hi);
  }
}

TEST_CASE("cell_images preserves input order") {
  const SystemModel m = cstr_model();
  const std::size_t counts[] = {3};
  const InputGrid grid = sample_inputs(m.input_box, counts);
  const Box cell{{0.45, 0.5}, {349.5, 350.0}};
  const auto all = cell_images(m, cell, grid, {});
  REQUIRE(all.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(all[i].u == grid.points[i]);
    CHECK(all[i].image == cell_image(m, cell, grid.points[i].span(), {}));
  }

  const SystemModel id = identity_model(1);
  const std::size_t two[] = {2};
  const InputGrid g2 = sample_inputs(Box{{-1.0, 1.0}}, two);
  for (const auto& r : cell_images(id, Box{{0.25, 0.5}}, g2, {3, 0.0})) {
    REQUIRE(r.image);
    CHECK(r.image->contains(Box{{0.25, 0.5}}));
  }
}

TEST_CASE("evaluate_images is cell-major and matches cell_image") {
  const SystemModel m = cstr_model();
  const std::size_t counts[] = {4};
  const InputGrid grid = sample_inputs(m.input_box, counts);
  std::vector<Cell> cells;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 7; ++i) cells.push_back(Cell{CellId::root(), random_cell(rng, m.state_box)});
  std::vector<std::optional<Box>> out;
  evaluate_images(m, cells, grid, {}, out);
  REQUIRE(out.size() == cells.size() * grid.points.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t u = 0; u < grid.points.size(); ++u) {
      CHECK(out[c * grid.points.size() + u] == cell_image(m, cells[c].box, grid.points[u].span(), {}));
    }
  }
}

TEST_CASE("escaped and partially non-finite images") {
  SystemModel m = identity_model(1);
  m.step = [](std::span<const double> x, std::span<const double>, std::span<double> y) {
    y[0] = x[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  CHECK_FALSE(cell_image(m, Box{{0.0, 0.25}}, std::span(&kZero, 1), {}).has_value());
  const auto partial = cell_image(m, Box{{0.0, 1.0}}, std::span(&kZero, 1), {3, 0.0});
  REQUIRE(partial);
  CHECK(*partial == Box{{0.5, 1.0}});
}

TEST_CASE("soundness at sample points and bloat monotonicity") {
  const SystemModel m = cstr_model();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> tc(285.0, 315.0);
  for (int t = 0; t < 200; ++t) {
    const Box cell = random_cell(rng, m.state_box);
    const double u = tc(rng);
    const std::size_t s = 2 + t % 4;
    const auto b0 = cell_image(m, cell, std::span(&u, 1), {s, 0.0});
    const auto b1 = cell_image(m, cell, std::span(&u, 1), {s, 0.05});
    const auto b2 = cell_image(m, cell, std::span(&u, 1), {s, 0.3});
    REQUIRE(b0);
    REQUIRE(b1);
    REQUIRE(b2);
    for (const Vec& p : cell_sample_points(cell, s)) {
      const Vec y = m(p.span(), std::span(&u, 1));
      CHECK(b0->contains(y.span()));
    }
    CHECK(b1->contains(*b0));
    CHECK(b2->contains(*b1));
  }
}

TEST_CASE("affine maps: vertex images give the exact image bounding box") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const double A[2][2] = {{coef(rng), coef(rng)}, {coef(rng), coef(rng)}};
    const double b[2] = {coef(rng), coef(rng)};
    const SystemModel m = affine_model(A, b);
    const Box cell = random_cell(rng, Box{{-1.0, 1.0}, {-1.0, 1.0}});
    const auto img = cell_image(m, cell, std::span(&kZero, 1), {2, 0.0});
    REQUIRE(img);
    // Interval image of an affine map: center A c + b, radius |A| r.
    for (std::size_t i = 0; i < 2; ++i) {
      const double c = A[i][0] * cell.center(0) + A[i][1] * cell.center(1) + b[i];
      const double r = std::abs(A[i][0]) * cell.width(0) / 2 + std::abs(A[i][1]) * cell.width(1) / 2;
      CHECK(img->lo(i) == doctest::Approx(c - r).epsilon(1e-12).scale(10));
      CHECK(img->hi(i) == doctest::Approx(c + r).epsilon(1e-12).scale(10));
    }
  }
}

TEST_CASE("enlarging the cell never shrinks an enclosure") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), grow(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double A[2][2] = {{coef(rng), coef(rng)}, {coef(rng), coef(rng)}};
    const double b[2] = {coef(rng), coef(rng)};
    const SystemModel m = affine_model(A, b);
    const Box inner = random_cell(rng, Box{{-1.0, 1.0}, {-1.0, 1.0}});
    const Box outer({inner.lo(0) - grow(rng), inner.lo(1) - grow(rng)},
                    {inner.hi(0) + grow(rng), inner.hi(1) + grow(rng)});
    const ImageConfig cfg{2 + static_cast<std::size_t>(t % 3), 0.1 * (t % 2)};
    const auto small = cell_image(m, inner, std::span(&kZero, 1), cfg);
    const auto big = cell_image(m, outer, std::span(&kZero, 1), cfg);
    REQUIRE(small);
    REQUIRE(big);
    CHECK(big->contains(*small));
  }
  // Nonlinear case: CSTR cells nested around random centers, default config.
  const SystemModel cstr = cstr_model();
  std::uniform_real_distribution<double> tc(285.0, 315.0);
  for (int t = 0; t < 200; ++t) {
    const Box inner = random_cell(rng, Box{{0.2, 0.8}, {347.0, 353.0}});
    const Box outer = enlarge(inner, grow(rng));
    const double u = tc(rng);
    const auto small = cell_image(cstr, inner, std::span(&u, 1), {});
    const auto big = cell_image(cstr, outer, std::span(&u, 1), {});
    REQUIRE(small);
    REQUIRE(big);
    CHECK(big->contains(*small));
  }
}

TEST_CASE("ImageConfig validation") {
  CHECK_NOTHROW(ImageConfig{}.validate());
  CHECK_THROWS_AS((ImageConfig{1, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ImageConfig{3, -0.1}.validate()), std::invalid_argument);
  const Box b{{1.0, 3.0}};
  CHECK(bloat_box(b, 0.5) == Box{{0.5, 3.5}});
}
