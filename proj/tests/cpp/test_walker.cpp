#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "liouville/walker.hpp"

using namespace liouville;

namespace {

FiniteGraph halfline_ball(std::int64_t R) {
  return materialize(spec_preset("halfline_unit"), R);
}

WalkConfig exit_from_root(std::int64_t R, std::int64_t n, std::uint64_t seed) {
  WalkConfig cfg;
  cfg.start = "0";
  cfg.absorbing = {std::to_string(R)};
  cfg.n_samples = n;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("exit time from B_2 matches the Dirichlet value 3") {
  FiniteGraph g = halfline_ball(2);
  WalkStats s = simulate_exit(g, exit_from_root(2, 20000, 12345));
  CHECK(s.count_absorbed == 20000);
  CHECK(s.count_censored == 0);
  CHECK(s.std_error > 0.0);
  CHECK(std::fabs(s.mean - 3.0) <= 4.0 * s.std_error);
}

TEST_CASE("runs are deterministic and seed-sensitive") {
  FiniteGraph g = halfline_ball(2);
  WalkStats a = simulate_exit(g, exit_from_root(2, 5000, 7));
  WalkStats b = simulate_exit(g, exit_from_root(2, 5000, 7));
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.count_absorbed == b.count_absorbed);

  WalkStats c = simulate_exit(g, exit_from_root(2, 5000, 8));
  CHECK(a.mean != c.mean);
}

TEST_CASE("thread cap does not change the sampled statistics") {
  FiniteGraph g = halfline_ball(2);
  WalkStats solo = simulate_exit(g, exit_from_root(2, 9000, 99));
  setenv("LIOUVILLE_LAB_THREADS", "3", 1);
  WalkStats pool = simulate_exit(g, exit_from_root(2, 9000, 99));
  unsetenv("LIOUVILLE_LAB_THREADS");
  CHECK(solo.mean == pool.mean);
  CHECK(solo.variance == pool.variance);
}

TEST_CASE("starting on the absorbing set exits immediately") {
  FiniteGraph g = halfline_ball(2);
  WalkConfig cfg = exit_from_root(2, 50, 1);
  cfg.start = "2";
  WalkStats s = simulate_exit(g, cfg);
  CHECK(s.count_absorbed == 50);
  CHECK(s.mean == 0.0);
}

TEST_CASE("censoring at t_max keeps the books balanced") {
  FiniteGraph g = halfline_ball(2);
  WalkConfig cfg = exit_from_root(2, 4000, 3);
  cfg.t_max = 0.5;  // mean exit is 3, so many walks get cut
  WalkStats s = simulate_exit(g, cfg);
  CHECK(s.count_absorbed + s.count_censored == 4000);
  CHECK(s.count_censored > 0);
  CHECK(s.mean <= 0.5);
}

TEST_CASE("walks that could fall off the truncation are refused") {
  FiniteGraph g = halfline_ball(3);
  WalkConfig cfg;
  cfg.start = "2";
  cfg.absorbing = {"0"};  // vertex 3 is frontier and reachable: unsafe
  cfg.n_samples = 10;
  CHECK_THROWS_AS(simulate_exit(g, cfg), SpecError);
  cfg.t_max = 1.0;  // even a finite horizon must not trust a lossy truncation
  CHECK_THROWS_AS(simulate_exit(g, cfg), SpecError);

  WalkConfig bad = exit_from_root(2, 0, 1);
  CHECK_THROWS_AS(simulate_exit(halfline_ball(2), bad), SpecError);
  WalkConfig none = exit_from_root(2, 5, 1);
  none.absorbing.clear();
  CHECK_THROWS_AS(simulate_exit(halfline_ball(2), none), SpecError);
}

TEST_CASE("survival probability: exact at t = 0, e^{-t} on the unit ball") {
  FiniteGraph g = halfline_ball(1);
  SurvivalEstimate zero = survival_probability(g, "0", 1, 0.0, 500, 5);
  CHECK(zero.probability == 1.0);
  CHECK(zero.std_error == 0.0);

  // single interior vertex with rate 1: P(alive at t) = e^{-1}
  SurvivalEstimate one = survival_probability(g, "0", 1, 1.0, 40000, 5);
  double p = std::exp(-1.0);
  double se = std::sqrt(p * (1.0 - p) / 40000.0);
  CHECK(std::fabs(one.probability - p) <= 4.0 * se);
  CHECK(one.n_samples == 40000);
}

TEST_CASE("survival is monotone in t under a shared seed") {
  FiniteGraph g = halfline_ball(3);
  double last = 1.0;
  for (double t : {0.25, 1.0, 4.0, 16.0}) {
    SurvivalEstimate e = survival_probability(g, "0", 3, t, 3000, 77);
    CHECK(e.probability <= last + 1e-15);
    last = e.probability;
  }
  CHECK_THROWS_AS(survival_probability(g, "3", 3, 1.0, 100, 1), SpecError);
}
