#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/graph.hpp"

namespace liouville {

// Curvature-growth comparison of a graph against a radial model:
//   Stronger: k_+(x) >= k~_+(r) and k_-(x) <= k~_-(r) for all x in S_r, r >= R0
//   Weaker:   the reversed inequalities; Equal: both.
enum class Dominance { Stronger, Weaker, Neither, Equal };

const char* dominance_name(Dominance d);

struct DominanceReport {
  Dominance direction = Dominance::Neither;
  std::int64_t R0 = 0;              // first radius from which inequalities hold
  std::int64_t checked_radius = 0;  // inequalities verified for r in [0, checked_radius]

  struct Violation {
    std::string label;
    std::int64_t radius;
    std::string inequality;  // which side failed
    double slack;            // amount by which it failed (negative slack)
  };
  std::vector<Violation> violations;  // below R0, for the winning direction

  std::vector<double> volume_ratio;  // r -> m(S_r(x0)) / m~(S_r)
  double C = 0.0;                    // max volume ratio over r >= R0
  std::int64_t C_argmax = 0;
};

// Exact per-vertex inequality scan for r in [0, R]; the spec is materialized
// to R+1 so outer curvature at radius R is trusted.
DominanceReport curvature_dominance(const GraphSpec& spec, const RadialModel& model,
                                    const std::string& x0_label, std::int64_t R);

// Transplant of the model Green function g~ onto the graph: v(x) = g~(r(x))
// and u = min(v, g~(R0+1)), built from shared-truncation partial sums so that
// differences are exact. Verifies super-harmonicity and the weighted-sum bound
//   sum_{B_R} u m <= g~(R0+1) m(B_{R0}) + C sum_{r=R0+1}^{R} g~(r) m~(S_r).
struct TransplantGreenReport {
  std::int64_t R = 0;
  std::int64_t R0 = 0;
  double min_slack_v = 0.0;    // min Delta v over checked radii (>= -1e-10 required)
  double min_slack_u = 0.0;    // min Delta u over all non-frontier vertices
  double weighted_sum = 0.0;   // sum u m over B_R
  double bound = 0.0;          // right-hand side of the displayed bound
  bool pass = false;
  std::string detail;
};

TransplantGreenReport transplant_green_check(const GraphSpec& spec,
                                             const RadialModel& model,
                                             const std::string& x0_label,
                                             std::int64_t R,
                                             const DominanceReport& dominance);

// Transplant of F_R(r) = sum_{k=r}^{R-1} m~(B_k)/dB~(k): checks
// Delta F_R >= 1 - 1e-10 on radii [R0, R-1]; when R0 = 0 additionally checks
// the pointwise domination F_R(r(x)) >= E_R(x) against the exit-time solve.
struct TransplantExitReport {
  std::int64_t R = 0;
  std::int64_t R0 = 0;
  double min_slack_laplacian = 0.0;  // min (Delta F_R - 1) over checked vertices
  double min_slack_domination = 0.0; // min (F_R - E_R); NaN when R0 > 0 (skipped)
  bool pass = false;
  std::string detail;
};

TransplantExitReport transplant_exit_check(const GraphSpec& spec, const RadialModel& model,
                                           const std::string& x0_label, std::int64_t R,
                                           const DominanceReport& dominance);

// max over 1 <= r <= R of |k~_+(r-1) m~(S_{r-1}) - k~_-(r) m~(S_r)| / dB~(r-1);
// an identity by construction, expected <= 1e-12.
double compatibility_check(const RadialModel& model, std::int64_t R);

}  // namespace liouville
