#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "liouville/graph.hpp"

namespace liouville {

// Minimal continuous-time walk: holding time at x is exponential with rate
// equal to the weighted degree, jumps proportional to edge weight, absorbed on
// the configured set. Truncation only; the walk must never be able to reach a
// frontier vertex that is not absorbing.
struct WalkConfig {
  std::string start;
  std::vector<std::string> absorbing;
  double t_max = std::numeric_limits<double>::infinity();
  std::int64_t n_samples = 1;
  std::uint64_t seed = 0;
};

struct WalkStats {
  double mean = 0.0;       // over absorbed samples
  double variance = 0.0;   // unbiased, over absorbed samples
  double std_error = 0.0;  // sqrt(variance / count_absorbed)
  std::int64_t count_absorbed = 0;
  std::int64_t count_censored = 0;  // still alive at t_max, excluded from mean
};

// Exit-time statistics, deterministic given (graph, config): sample i draws
// from its own counter-based stream keyed by (seed, i), so results do not
// depend on scheduling or thread count (capped by LIOUVILLE_LAB_THREADS).
WalkStats simulate_exit(const FiniteGraph& g, const WalkConfig& cfg);

// Fraction of walks from x0 still inside B_R at time t (estimates the
// Dirichlet heat-kernel mass), with a binomial standard error. Same seed and
// growing t reuse identical trajectories, so estimates are monotone.
struct SurvivalEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

SurvivalEstimate survival_probability(const FiniteGraph& g, const std::string& x0_label,
                                      std::int64_t R, double t, std::int64_t n,
                                      std::uint64_t seed);

}  // namespace liouville
