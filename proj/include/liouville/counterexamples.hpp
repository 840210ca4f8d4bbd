#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/series.hpp"

namespace liouville {

// ---- L1 growth certification for conformally rescaled graphs ----------------
//
// One Dirichlet Green solve at max(schedule)+1, then partial sums of
// sum_{B_R} g m~ over the nested balls of the schedule. When a ray prefix is
// given, each window also gets the analytic minorant: the original measure of
// the rescaled ray inside B_R (the rescale is built so g m~ >= m there), and
// the partial sum is asserted to stay above it.

struct L1GrowthRow {
  std::int64_t R = 0;
  double partial_sum = 0.0;
  double minorant = 0.0;
  double margin = 0.0;
};

struct L1GrowthReport {
  std::int64_t solve_radius = 0;
  std::string ray_prefix;
  std::vector<L1GrowthRow> rows;
  std::string detail;
};

L1GrowthReport certify_l1_after_rescale(const GraphSpec& spec, const std::string& x0_label,
                                        std::span<const std::int64_t> schedule,
                                        const std::string& ray_prefix = "");

// Dirichlet Green functions are blind to the vertex measure, so any conformal
// change m -> lambda^2 m must leave them untouched. Solves both sides
// independently and compares by label.
struct GreenPreservationReport {
  std::int64_t radius = 0;
  double max_abs_diff = 0.0;
  bool pass = false;
};

GreenPreservationReport check_green_preservation(const GraphSpec& base,
                                                 const GraphSpec& rescaled,
                                                 const std::string& x0_label,
                                                 std::int64_t R);

// ---- glued-rescale construction ---------------------------------------------
//
// Glue an infinite-volume graph onto a decisively incomplete model at their
// roots, then blow up the measure on the first side by
// lambda^2(y) = max(1, 1/g_T(x1, y)) from one fixed Green table at
// table_radius. The measure change preserves the Green function while the
// weighted Green sums now grow at least like the volume of the first side.

struct GluedRescaleOptions {
  std::int64_t table_radius = 41;
  std::int64_t preservation_radius = 20;
  std::vector<std::int64_t> schedule = {10, 20, 40};
  // certifies sum m(S_r) = infinity for the first side when it is radial;
  // otherwise volume evidence comes from materialized growth
  std::optional<SeriesCertificate> volume_certificate;
};

struct GluedRescaleReport {
  GraphSpec base;
  GraphSpec rescaled;
  std::int64_t table_radius = 0;
  double green_at_root = 0.0;
  GreenPreservationReport preservation;
  L1GrowthReport growth;
  SeriesVerdict side_b_complete;
  std::string notes;
};

GluedRescaleReport build_glued_rescale(const GraphSpec& side_a, const RadialModel& side_b,
                                       const GluedRescaleOptions& opts = {});

// ---- antitree violator -------------------------------------------------------
//
// Rescale the measure along one ray of a stochastically incomplete antitree so
// the weighted Green sums diverge, and certify incompleteness survives by
// exhibiting a bounded function whose Laplacian stays below -1 + 3 epsilon < 0
// on a superlevel set reaching to infinity (a maximum-principle violation).

struct OmoriYauReport {
  double epsilon = 0.0;
  std::int64_t n = 0;
  double alpha = 0.0;       // sum of the first n ratio terms a_l
  double f_star = 0.0;      // sum of all a_l (certified)
  double f_star_tail = 0.0; // certificate tail bound on f_star
  std::int64_t checked_radius = 0;  // sweep covered Omega within this ball
  std::int64_t omega_size = 0;      // vertices of the superlevel set checked
  double max_laplacian_on_omega = 0.0;
  double bound = 0.0;  // -1 + 3 epsilon
  bool cond_epsilon_small = false;  // -1 + 3 eps < 0
  bool cond_increments = false;     // a_r - a_{r-1} < eps on the checked range
  bool cond_tail = false;           // f* - sum_{l <= n-2} a_l < eps
  bool pass = false;
  std::string detail;
};

struct AntitreeViolatorOptions {
  std::int64_t table_radius = 41;
  std::int64_t sweep_radius = 51;  // Laplacian sweep covers Omega within B_{sweep-1}
  std::vector<std::int64_t> schedule = {10, 20, 40};
  // explicit parameters are validated; leave unset to search (smallest n, then
  // the midpoint of the feasible epsilon interval)
  std::optional<double> epsilon = 0.3;
  std::optional<std::int64_t> n = 2;
};

struct AntitreeViolatorReport {
  GraphSpec base;      // exact two-track quotient (ray vs sphere remainder)
  GraphSpec rescaled;  // conformal rescale of the ray track
  OmoriYauReport omori_yau;
  L1GrowthReport growth;
  std::string notes;
};

AntitreeViolatorReport build_antitree_violator(const GraphSpec& antitree,
                                               const AntitreeViolatorOptions& opts = {});

// Exact quotient of an antitree under sphere symmetries fixing one ray:
// per radius a unit-measure "ray:r" vertex and an aggregated "rest:r" vertex
// carrying the remaining |S_r| - 1 measure; weights add up over the collapsed
// complete-bipartite edges. Green values on it equal the per-vertex values of
// the full antitree.
FiniteGraph antitree_ray_quotient(const RadialModel& antitree, std::int64_t R);

}  // namespace liouville
