#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gis/adaptive.hpp"
#include "gis_bench/oracle.hpp"
#include "gis_bench/replicate.hpp"

using namespace gis;
using namespace gis::bench;

TEST_CASE("linear_cis_interval closed form") {
  const auto i = linear_cis_interval(2.0, -1.0, 1.0, -0.5, 0.5);
  CHECK(i.lo == -0.5);
  CHECK(i.hi == 0.5);
  const auto clipped = linear_cis_interval(2.0, -0.2, 1.0, -0.5, 0.5);
  CHECK(clipped.lo == -0.2);
  CHECK(clipped.hi == 0.5);
  const auto none = linear_cis_interval(2.0, 0.0, 1.0, 0.5, 0.7);
  CHECK(none.lo > none.hi);
  const auto oracle = linear_cis_oracle(2.0, -1.0, 1.0, -0.5, 0.5);
  const double in = 0.5, out = 0.5000001;
  CHECK(oracle.contains(std::span(&in, 1)));
  CHECK_FALSE(oracle.contains(std::span(&out, 1)));
}

TEST_CASE("brute_force_cis_1d: linear benchmark") {
  // x+ = 2x + u keeps |x| <= 0.5 with u = -x; any x > 0.5 drifts out since
  // x+ - 0.5 >= 2 (x - 0.5). The one-step feasible set [-0.75, 0.75] is
  // therefore not invariant.
  const auto runs = brute_force_cis_1d(linear_test_model(2.0, -1.0, 1.0, -0.5, 0.5), 1e-4);
  REQUIRE(runs.size() == 1);
  CHECK(std::abs(runs[0].lo + 0.5) <= 2e-4);
  CHECK(std::abs(runs[0].hi - 0.5) <= 2e-4);
}

TEST_CASE("brute_force_cis_1d: trivial systems") {
  const auto id = brute_force_cis_1d(identity_model(1), 1e-3);
  REQUIRE(id.size() == 1);
  CHECK(id[0].lo == 0.0);
  CHECK(id[0].hi == 1.0);

  CHECK(brute_force_cis_1d(shift_model(10.0), 1e-3).empty());

  const auto zero = brute_force_cis_1d(linear_test_model(0.0, -1.0, 1.0, -0.5, 0.5), 1e-3);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].lo == -1.0);
  CHECK(zero[0].hi == 1.0);

  const auto one = brute_force_cis_1d(linear_test_model(1.0, -1.0, 1.0, 0.0, 0.0), 1e-3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].lo == -1.0);
  CHECK(one[0].hi == 1.0);

  CHECK_THROWS_AS(brute_force_cis_1d(cstr_model(), 1e-2), ContractViolation);
}

TEST_CASE("brute_force_graph") {
  const SystemModel id = identity_model(1);
  Covering c(id.state_box);
  for (int i = 0; i < 4; ++i) c = subdivide_all(c);
  const std::size_t two[] = {2};
  const auto inputs = sample_inputs(id.input_box, two);
  const auto g = brute_force_graph(c, id, inputs, {3, 0.0});
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto s = g.successors(v);
    CHECK(std::find(s.begin(), s.end(), v) != s.end());
  }

  const Covering empty(id.state_box, {});
  CHECK(brute_force_graph(empty, id, inputs, {}).vertex_count() == 0);

  Covering big(id.state_box);
  for (int i = 0; i < 10; ++i) big = subdivide_all(big);
  CHECK_THROWS_AS(brute_force_graph(big, id, inputs, {}), ContractViolation);
}

TEST_CASE("replication report on a short run") {
  ReplicateOptions opt;
  opt.iterations = 10;
  opt.N_values = {0, 3};
  opt.parallel_iterations = 8;
  opt.worker_counts = {2};
  const auto report = replicate_paper_experiments(opt);
  CHECK(report.rows.size() == 5);  // full, N=0, N=3, serial, 2 workers
  for (const auto& check : report.checks) {
    if (check.name.find("equals serial") != std::string::npos) CHECK(check.passed);
  }
  REQUIRE(report.parallel_speedups.size() == 1);
  CHECK(report.parallel_speedups[0].first == 2);
  std::ostringstream os;
  write_report(os, report);
  CHECK(os.str().find("full") != std::string::npos);
}
