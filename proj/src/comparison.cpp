#include "liouville/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"
#include "liouville/model_analysis.hpp"
#include "liouville/series.hpp"

namespace liouville {

const char* dominance_name(Dominance d) {
  switch (d) {
    case Dominance::Stronger: return "Stronger";
    case Dominance::Weaker: return "Weaker";
    case Dominance::Neither: return "Neither";
    default: return "Equal";
  }
}

namespace {

constexpr double kIneqTol = 1e-12;   // per-comparison tolerance, ties satisfied
constexpr double kSlackTol = 1e-10;  // transplant inequality slack

// a <= b up to relative tolerance; ties count as satisfied.
bool leq(double a, double b) {
  return a <= b + kIneqTol * std::max({std::abs(a), std::abs(b), 1.0});
}

// Materialize deep enough that spheres around x0 are complete to depth R and
// return the graph, the vertex, and its decomposition from x0.
struct Scene {
  FiniteGraph graph;
  VertexId x0;
  SphereDecomposition dec;
};

Scene make_scene(const GraphSpec& spec, const std::string& x0_label, std::int64_t depth) {
  FiniteGraph g = materialize(spec, depth);
  auto v = x0_label.empty() ? std::optional<VertexId>(g.root()) : g.find_vertex(x0_label);
  if (!v) throw SpecError("no vertex '" + x0_label + "' within radius " +
                          std::to_string(depth));
  auto dec_root = sphere_decompose(g);
  std::int64_t d0 = dec_root.radius[*v];
  if (d0 > 0) {
    g = materialize(spec, depth + d0);
    v = g.find_vertex(x0_label);
  }
  Scene s{std::move(g), *v, {}};
  s.dec = sphere_decompose(s.graph, s.x0);
  return s;
}

}  // namespace

DominanceReport curvature_dominance(const GraphSpec& spec, const RadialModel& model,
                                    const std::string& x0_label, std::int64_t R) {
  if (R < 1) throw SpecError("curvature_dominance needs R >= 1");
  Scene s = make_scene(spec, x0_label, R + 1);

  struct RadiusFlags {
    bool stronger = true, weaker = true;
  };
  std::vector<RadiusFlags> flags(R + 1);
  struct RawViolation {
    std::string label;
    std::int64_t radius;
    bool against_stronger;
    std::string inequality;
    double slack;
  };
  std::vector<RawViolation> raw;

  DominanceReport rep;
  rep.checked_radius = R;
  rep.volume_ratio.resize(R + 1, 0.0);
  for (std::int64_t r = 0; r <= R; ++r) {
    if (r > s.dec.max_radius()) throw SpecError("sphere S_" + std::to_string(r) +
                                                " around x0 is empty");
    double km_model = model.k_minus(r);
    double kp_model = model.k_plus(r);
    rep.volume_ratio[r] = sphere_measure(s.graph, s.dec, r) / model.sphere_measure(r);
    for (VertexId x : s.dec.spheres[r]) {
      CurvaturePair c = curvature(s.graph, s.dec, x);
      if (!c.k_plus_trusted)
        throw SpecError("outer curvature untrusted at '" + s.graph.label(x) +
                        "'; materialization too shallow");
      if (!leq(kp_model, c.k_plus)) {
        flags[r].stronger = false;
        raw.push_back({s.graph.label(x), r, true, "k_plus(x) >= k~_plus(r)",
                       c.k_plus - kp_model});
      }
      if (!leq(c.k_minus, km_model)) {
        flags[r].stronger = false;
        raw.push_back({s.graph.label(x), r, true, "k_minus(x) <= k~_minus(r)",
                       km_model - c.k_minus});
      }
      if (!leq(c.k_plus, kp_model)) {
        flags[r].weaker = false;
        raw.push_back({s.graph.label(x), r, false, "k_plus(x) <= k~_plus(r)",
                       kp_model - c.k_plus});
      }
      if (!leq(km_model, c.k_minus)) {
        flags[r].weaker = false;
        raw.push_back({s.graph.label(x), r, false, "k_minus(x) >= k~_minus(r)",
                       c.k_minus - km_model});
      }
    }
  }

  std::int64_t last_bad_s = -1, last_bad_w = -1, last_bad_e = -1;
  for (std::int64_t r = 0; r <= R; ++r) {
    if (!flags[r].stronger) last_bad_s = r;
    if (!flags[r].weaker) last_bad_w = r;
    if (!flags[r].stronger || !flags[r].weaker) last_bad_e = r;
  }
  bool s_ok = last_bad_s < R, w_ok = last_bad_w < R, e_ok = last_bad_e < R;
  if (s_ok && w_ok && last_bad_s == last_bad_w && e_ok) {
    rep.direction = Dominance::Equal;
    rep.R0 = last_bad_e + 1;
  } else if (s_ok && (!w_ok || last_bad_s <= last_bad_w)) {
    rep.direction = Dominance::Stronger;
    rep.R0 = last_bad_s + 1;
  } else if (w_ok) {
    rep.direction = Dominance::Weaker;
    rep.R0 = last_bad_w + 1;
  } else {
    rep.direction = Dominance::Neither;
    rep.R0 = 0;
  }

  bool want_stronger_violations =
      rep.direction == Dominance::Stronger || rep.direction == Dominance::Equal;
  for (const RawViolation& rv : raw) {
    bool relevant = rep.direction == Dominance::Neither
                        ? true
                        : (rv.against_stronger == want_stronger_violations &&
                           rv.radius < rep.R0);
    if (relevant && rep.violations.size() < 50)
      rep.violations.push_back({rv.label, rv.radius, rv.inequality, rv.slack});
  }

  rep.C = 0.0;
  rep.C_argmax = rep.R0;
  for (std::int64_t r = rep.R0; r <= R; ++r)
    if (rep.volume_ratio[r] > rep.C) {
      rep.C = rep.volume_ratio[r];
      rep.C_argmax = r;
    }
  return rep;
}

TransplantGreenReport transplant_green_check(const GraphSpec& spec,
                                             const RadialModel& model,
                                             const std::string& x0_label, std::int64_t R,
                                             const DominanceReport& dominance) {
  if (dominance.direction != Dominance::Stronger && dominance.direction != Dominance::Equal)
    throw SpecError("transplant needs Stronger curvature growth; "
                    "run curvature_dominance first");
  if (R < 2) throw SpecError("transplant_green_check needs R >= 2");
  SeriesVerdict g0 = model_green(model, 0);
  if (g0.kind != SeriesVerdict::Kind::ConvergesTo)
    throw SpecError("model '" + model.name() +
                    "' is not certified non-parabolic: g~ may be infinite");

  const std::int64_t R0 = dominance.R0;
  // shared-truncation partial sums of g~: differences are exact, tails cancel
  const std::int64_t N = R + 64;
  std::vector<double> gt(std::size_t(N) + 2, 0.0);
  {
    CompensatedSum acc;
    for (std::int64_t k = N; k >= 0; --k) {
      acc.add(1.0 / model.boundary_weight(k));
      gt[k] = acc.value();
    }
  }

  Scene s = make_scene(spec, x0_label, R);
  const double cutoff = gt[R0 + 1];
  auto v_of = [&](VertexId y) { return gt[s.dec.radius[y]]; };
  auto u_of = [&](VertexId y) { return std::min(gt[s.dec.radius[y]], cutoff); };

  TransplantGreenReport rep;
  rep.R = R;
  rep.R0 = R0;
  rep.min_slack_v = std::numeric_limits<double>::infinity();
  rep.min_slack_u = std::numeric_limits<double>::infinity();
  for (VertexId x = 0; x < s.graph.vertex_count(); ++x) {
    if (s.graph.is_frontier(x)) continue;
    std::int64_t r = s.dec.radius[x];
    if (r > R - 1) continue;
    double lap_v = 0.0, lap_u = 0.0;
    for (const Edge& e : s.graph.neighbors(x)) {
      lap_v += e.weight * (v_of(x) - v_of(e.to));
      lap_u += e.weight * (u_of(x) - u_of(e.to));
    }
    lap_v /= s.graph.measure(x);
    lap_u /= s.graph.measure(x);
    if (r >= R0) rep.min_slack_v = std::min(rep.min_slack_v, lap_v);
    rep.min_slack_u = std::min(rep.min_slack_u, lap_u);
  }

  CompensatedSum weighted;
  double ball_R0 = 0.0;
  for (VertexId x = 0; x < s.graph.vertex_count(); ++x) {
    weighted.add(u_of(x) * s.graph.measure(x));
    if (s.dec.radius[x] <= R0) ball_R0 += s.graph.measure(x);
  }
  rep.weighted_sum = weighted.value();
  CompensatedSum model_side;
  for (std::int64_t r = R0 + 1; r <= R; ++r)
    model_side.add(gt[r] * model.sphere_measure(r));
  rep.bound = cutoff * ball_R0 + dominance.C * model_side.value();

  bool slacks_ok = rep.min_slack_v >= -kSlackTol && rep.min_slack_u >= -kSlackTol;
  bool bound_ok = rep.weighted_sum <= rep.bound + 1e-9 * std::max(1.0, std::abs(rep.bound));
  rep.pass = slacks_ok && bound_ok;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "min Delta v = %.3g on r in [%lld,%lld]; min Delta u = %.3g; "
                "sum u m = %.6g vs bound %.6g",
                rep.min_slack_v, static_cast<long long>(R0),
                static_cast<long long>(R - 1), rep.min_slack_u, rep.weighted_sum,
                rep.bound);
  rep.detail = buf;
  return rep;
}

TransplantExitReport transplant_exit_check(const GraphSpec& spec, const RadialModel& model,
                                           const std::string& x0_label, std::int64_t R,
                                           const DominanceReport& dominance) {
  if (dominance.direction != Dominance::Stronger && dominance.direction != Dominance::Equal)
    throw SpecError("transplant needs Stronger curvature growth; "
                    "run curvature_dominance first");
  if (R < 2) throw SpecError("transplant_exit_check needs R >= 2");
  Classification cls = classify(model);
  if (cls.complete_ans != Classification::Answer::No)
    throw SpecError("model '" + model.name() +
                    "' is not certified stochastically incomplete; F would diverge");

  const std::int64_t R0 = dominance.R0;
  // F_R(r) = sum_{k=r}^{R-1} m~(B_k)/dB~(k), computed as an exact suffix
  std::vector<double> F(std::size_t(R) + 2, 0.0);
  {
    std::vector<double> ballm(std::size_t(R) + 1);
    CompensatedSum acc;
    for (std::int64_t k = 0; k <= R; ++k) {
      acc.add(model.sphere_measure(k));
      ballm[k] = acc.value();
    }
    CompensatedSum suf;
    for (std::int64_t k = R - 1; k >= 0; --k) {
      suf.add(ballm[k] / model.boundary_weight(k));
      F[k] = suf.value();
    }
  }

  Scene s = make_scene(spec, x0_label, R);
  TransplantExitReport rep;
  rep.R = R;
  rep.R0 = R0;
  rep.min_slack_laplacian = std::numeric_limits<double>::infinity();
  for (VertexId x = 0; x < s.graph.vertex_count(); ++x) {
    if (s.graph.is_frontier(x)) continue;
    std::int64_t r = s.dec.radius[x];
    if (r < R0 || r > R - 1) continue;
    double lap = 0.0;
    for (const Edge& e : s.graph.neighbors(x))
      lap += e.weight * (F[r] - F[s.dec.radius[e.to]]);
    lap /= s.graph.measure(x);
    rep.min_slack_laplacian = std::min(rep.min_slack_laplacian, lap - 1.0);
  }

  rep.min_slack_domination = std::numeric_limits<double>::quiet_NaN();
  bool domination_ok = true;
  if (R0 == 0) {
    if (s.x0 != s.graph.root())
      throw SpecError("exit-time domination requires x0 at the root");
    ExitTable E = mean_exit(s.graph, R);
    double min_dom = std::numeric_limits<double>::infinity();
    for (VertexId x = 0; x < s.graph.vertex_count(); ++x)
      min_dom = std::min(min_dom, F[s.dec.radius[x]] - E.values[x]);
    rep.min_slack_domination = min_dom;
    domination_ok = min_dom >= -kSlackTol;
  }

  rep.pass = rep.min_slack_laplacian >= -kSlackTol && domination_ok;
  char buf[256];
  if (R0 == 0)
    std::snprintf(buf, sizeof buf,
                  "min (Delta F - 1) = %.3g on r in [0,%lld]; min (F - E) = %.3g",
                  rep.min_slack_laplacian, static_cast<long long>(R - 1),
                  rep.min_slack_domination);
  else
    std::snprintf(buf, sizeof buf,
                  "min (Delta F - 1) = %.3g on r in [%lld,%lld]; domination skipped "
                  "(curvature assumptions hold outside a finite set)",
                  rep.min_slack_laplacian, static_cast<long long>(R0),
                  static_cast<long long>(R - 1));
  rep.detail = buf;
  return rep;
}

double compatibility_check(const RadialModel& model, std::int64_t R) {
  double worst = 0.0;
  for (std::int64_t r = 1; r <= R; ++r) {
    double lhs = model.k_plus(r - 1) * model.sphere_measure(r - 1);
    double rhs = model.k_minus(r) * model.sphere_measure(r);
    worst = std::max(worst, std::abs(lhs - rhs) / model.boundary_weight(r - 1));
  }
  return worst;
}

}  // namespace liouville
