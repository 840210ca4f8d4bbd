#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/graph.hpp"

namespace liouville {

// Dirichlet Green kernel on a finite ball: values[v] = g_R(source, v), zero on
// the boundary, positive on the interior, Delta_y values = delta_source/m(source).
struct GreenTable {
  FiniteGraph graph;
  VertexId source = 0;
  std::int64_t radius = 0;
  std::vector<double> values;  // indexed by vertex id of `graph`
  double residual = 0.0;       // max relative linear-system residual

  double value(const std::string& label) const { return values[graph.vertex(label)]; }
};

// Mean exit times: Delta values = 1 on the interior, 0 on the boundary.
struct ExitTable {
  FiniteGraph graph;
  std::int64_t radius = 0;
  std::vector<double> values;
  double residual = 0.0;

  double value(const std::string& label) const { return values[graph.vertex(label)]; }
};

// Core linear kernel: solve Delta f = rhs on `interior`, f = bval on `boundary`.
// Every neighbor of an interior vertex must be interior or boundary, the two
// sets must be disjoint, and no interior vertex may be a frontier vertex.
// Returns a full-length vector (vertices outside both sets get 0). The system
// is assembled in the m-weighted symmetric form and solved by sparse LDLT
// (conjugate gradient beyond 2e5 unknowns), with iterative refinement; a
// relative residual above 1e-10 raises SolverError.
std::vector<double> solve_dirichlet(const FiniteGraph& g,
                                    std::span<const VertexId> interior,
                                    std::span<const VertexId> boundary,
                                    const std::function<double(VertexId)>& rhs,
                                    const std::function<double(VertexId)>& bval,
                                    double* residual_out = nullptr);

// Green kernel of the ball of radius R around the graph's root (the graph is
// expected to be such a ball: interior = radius < R and not frontier).
GreenTable dirichlet_green(const FiniteGraph& g, VertexId x0, std::int64_t R);

// Mean exit time from the ball of radius R.
ExitTable mean_exit(const FiniteGraph& g, std::int64_t R);

// Monotone exhaustion of Green kernels g_R for R = 2..R_max.
struct GreenLimit {
  enum class Verdict { Converged, StillGrowing };
  Verdict verdict = Verdict::StillGrowing;
  std::vector<std::int64_t> radii;
  std::vector<double> value_at_x0;  // g_R(x0, x0) per radius
  std::vector<GreenTable> tables;
  double limit_estimate = 0.0;  // last g_R(x0,x0)
  double analytic_tail = 0.0;   // radial models only: bound on g - g_R at x0
  std::string rate_report;
};

// Computes the exhaustion, asserts pointwise monotonicity in R (violations
// beyond 1e-10 indicate a solver bug and throw), and declares Converged only
// when increments fall below tol and, for radial models, the analytic tail
// sum_{k>=R} 1/dB(k) is certified <= tol. Everything else is StillGrowing
// with a growth-rate report (parabolicity evidence).
GreenLimit green_limit(const GraphSpec& spec, const std::string& x0_label,
                       std::int64_t R_max, double tol = 1e-9);

// Dirichlet heat kernel rows p_t^R(x0, .) at the requested times.
struct HeatCurve {
  FiniteGraph graph;
  VertexId source = 0;
  std::int64_t radius = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> kernel;  // kernel[i][v] at times[i]

  double mass_at(std::size_t i) const;  // sum_v kernel[i][v] m(v)
};

enum class HeatMode {
  Adaptive,    // TR-BDF2 with step-doubling error control
  KrylovExpm,  // Lanczos matrix exponential; balls <= 2000 interior vertices
};

// Integrates (d/dt + Delta) p = 0 with Dirichlet data 0 on the boundary of
// B_R from p_0 = delta_{x0}/m(x0); local error <= tol per unit time. Requested
// times are landed on exactly.
HeatCurve heat_kernel(const FiniteGraph& g, VertexId x0, std::int64_t R,
                      std::span<const double> times, HeatMode mode = HeatMode::Adaptive,
                      double tol_per_unit_time = 1e-8);

// Quadrature of int_0^inf p_t dt: trapezoid on the curve's grid plus an
// exponential tail fitted on the trailing decade of times. The curve must
// start at t = 0. Nonmonotone late-time mass makes the tail fit unreliable
// and raises CheckFailure.
GreenTable green_via_time_integration(const HeatCurve& curve);

// Strong minimum principle check: if Delta f >= -tol on the interior, f >= -tol
// on the neighboring boundary, and f is non-constant, then f must be > 0 on
// the interior. `applicable` is false when the hypothesis fails (nothing to
// check); `pass` carries the verdict with a witness vertex on failure.
struct MinPrincipleReport {
  bool applicable = false;
  bool pass = false;
  std::optional<VertexId> witness;
  std::string detail;
};

MinPrincipleReport check_min_principle(const FiniteGraph& g, std::span<const double> f,
                                       std::span<const VertexId> interior,
                                       double tol = 1e-12);

}  // namespace liouville
