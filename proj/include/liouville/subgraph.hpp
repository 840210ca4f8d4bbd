#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "liouville/dirichlet.hpp"
#include "liouville/generators.hpp"
#include "liouville/graph.hpp"

namespace liouville {

// An infinite connected subgraph N of an ambient graph, described by a label
// predicate. Exhaustions are W intersected with the ambient balls: Dirichlet
// data sits on the vertex boundary of W plus the radius cut.
struct SubgraphProblem {
  GraphSpec ambient;
  std::function<bool(const std::string&)> membership;
  std::vector<std::int64_t> schedule;
};

// Green function of the subgraph problem at radius R: delta source at x0 on
// the interior of W cap B_R, zero on the boundary. x0 must be interior.
GreenTable dirichlet_green_subgraph(const SubgraphProblem& p, const std::string& x0_label,
                                    std::int64_t R);

// Mean exit time from the subgraph exhaustion: Laplacian equal to one on the
// interior of W cap B_R, zero on the boundary. Monotone in R.
ExitTable dirichlet_exit(const SubgraphProblem& p, std::int64_t R);

// The ambient mean exit time dominates the subgraph one pointwise on W cap
// B_R; returns the minimum slack (negative would indicate a solver bug).
double domination_check(const SubgraphProblem& p, std::int64_t R);

// Connected components of B_R minus a finite set K, flagged unbounded when
// they touch the frontier; re-derived at R2 > R for stability.
struct EndsReport {
  std::vector<std::string> K;
  std::int64_t R = 0, R2 = 0;
  std::vector<std::vector<std::string>> components;  // label lists, at radius R
  std::vector<bool> unbounded;
  bool stable = false;
  std::string detail;
};

EndsReport ends(const GraphSpec& spec, std::span<const std::string> K, std::int64_t R,
                std::int64_t R2);

// The exit-time system on V minus K is block diagonal across the components,
// so the joint solve must equal the per-component solves extended by zero.
// Returns the maximum pointwise discrepancy.
double end_additivity_check(const GraphSpec& spec, std::span<const std::string> K,
                            std::int64_t R);

}  // namespace liouville
