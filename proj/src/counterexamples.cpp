#include "liouville/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>

#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"
#include "liouville/model_analysis.hpp"

namespace liouville {

namespace {

std::string root_label(const GraphSpec& spec) {
  FiniteGraph g = materialize(spec, 0);
  return g.label(g.root());
}

std::vector<std::int64_t> checked_schedule(std::span<const std::int64_t> schedule) {
  if (schedule.empty()) throw SpecError("growth certification needs a nonempty schedule");
  std::vector<std::int64_t> s(schedule.begin(), schedule.end());
  std::sort(s.begin(), s.end());
  if (s.front() < 1) throw SpecError("growth schedule radii must be >= 1");
  return s;
}

// label -> lambda^2 lookup closure over a shared table
std::function<double(const std::string&)> table_lambda(
    std::shared_ptr<std::map<std::string, double>> table) {
  return [table = std::move(table)](const std::string& label) {
    auto it = table->find(label);
    return it == table->end() ? 1.0 : it->second;
  };
}

}  // namespace

L1GrowthReport certify_l1_after_rescale(const GraphSpec& spec, const std::string& x0_label,
                                        std::span<const std::int64_t> schedule,
                                        const std::string& ray_prefix) {
  const auto* conf = std::get_if<ConformalSpec>(&spec.node());
  if (!conf)
    throw SpecError("growth certification expects a conformally rescaled spec");
  std::vector<std::int64_t> s = checked_schedule(schedule);
  const std::int64_t R_solve = s.back() + 1;

  FiniteGraph g = materialize(spec, R_solve);
  auto x0 = g.find_vertex(x0_label);
  if (!x0) throw SpecError("no vertex '" + x0_label + "' within radius " +
                           std::to_string(R_solve));
  GreenTable green = dirichlet_green(g, *x0, R_solve);
  auto dec = sphere_decompose(g);

  // original measures of the rescaled ray, for the minorant
  FiniteGraph base = materialize(*conf->base, R_solve);

  L1GrowthReport rep;
  rep.solve_radius = R_solve;
  rep.ray_prefix = ray_prefix;
  for (std::int64_t R : s) {
    CompensatedSum sum;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (dec.radius[v] <= R) sum.add(green.values[v] * g.measure(v));
    L1GrowthRow row;
    row.R = R;
    row.partial_sum = sum.value();
    if (!ray_prefix.empty()) {
      CompensatedSum vol;
      auto bdec = sphere_decompose(base);
      for (VertexId v = 0; v < base.vertex_count(); ++v)
        if (bdec.radius[v] <= R && base.label(v).rfind(ray_prefix, 0) == 0)
          vol.add(base.measure(v));
      row.minorant = vol.value();
    }
    row.margin = row.partial_sum - row.minorant;
    rep.rows.push_back(row);
  }

  for (const L1GrowthRow& row : rep.rows)
    if (row.partial_sum < row.minorant - 1e-9) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "weighted Green sum %.6g at R=%lld fell below the ray volume %.6g",
                    row.partial_sum, static_cast<long long>(row.R), row.minorant);
      throw CheckFailure(buf);
    }

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "sum g*m over B_R grew from %.6g (R=%lld) to %.6g (R=%lld)",
                rep.rows.front().partial_sum, static_cast<long long>(rep.rows.front().R),
                rep.rows.back().partial_sum, static_cast<long long>(rep.rows.back().R));
  rep.detail = buf;
  return rep;
}

GreenPreservationReport check_green_preservation(const GraphSpec& base,
                                                 const GraphSpec& rescaled,
                                                 const std::string& x0_label,
                                                 std::int64_t R) {
  FiniteGraph g0 = materialize(base, R);
  FiniteGraph g1 = materialize(rescaled, R);
  auto a = g0.find_vertex(x0_label), b = g1.find_vertex(x0_label);
  if (!a || !b) throw SpecError("no vertex '" + x0_label + "' within radius " +
                                std::to_string(R));
  GreenTable t0 = dirichlet_green(g0, *a, R);
  GreenTable t1 = dirichlet_green(g1, *b, R);

  std::map<std::string, double> by_label;
  for (VertexId v = 0; v < g0.vertex_count(); ++v) by_label[g0.label(v)] = t0.values[v];
  if (by_label.size() != g1.vertex_count())
    throw SpecError("rescaled graph does not share the base vertex set");
  GreenPreservationReport rep;
  rep.radius = R;
  for (VertexId v = 0; v < g1.vertex_count(); ++v) {
    auto it = by_label.find(g1.label(v));
    if (it == by_label.end())
      throw SpecError("rescaled graph does not share the base vertex set");
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(it->second - t1.values[v]));
  }
  rep.pass = rep.max_abs_diff <= 1e-9;
  return rep;
}

GluedRescaleReport build_glued_rescale(const GraphSpec& side_a, const RadialModel& side_b,
                                       const GluedRescaleOptions& opts) {
  if (opts.table_radius < 2) throw SpecError("table radius must be >= 2");

  Classification cls = classify(side_b);
  if (cls.complete_ans != Classification::Answer::No)
    throw SpecError("second component '" + side_b.name() +
                    "' must be decisively stochastically incomplete");

  std::string volume_note;
  if (opts.volume_certificate && side_a.as_model()) {
    RadialModel m = *side_a.as_model();
    SeriesVerdict vol = sum_series([&](std::int64_t r) { return m.sphere_measure(r); }, 0,
                                   *opts.volume_certificate)
                            .verdict;
    if (vol.kind != SeriesVerdict::Kind::Diverges)
      throw SpecError("first component's volume series was not certified divergent");
    volume_note = "volume divergence certified";
  } else {
    FiniteGraph probe = materialize(side_a, 64);
    if (!probe.has_frontier())
      throw SpecError("first component is finite; its volume cannot be infinite");
    auto dec = sphere_decompose(probe);
    double half = 0.0, full = 0.0;
    for (VertexId v = 0; v < probe.vertex_count(); ++v) {
      if (dec.radius[v] <= 32) half += probe.measure(v);
      full += probe.measure(v);
    }
    if (!(full > half))
      throw SpecError("first component's volume is not growing over the scanned radii");
    volume_note = "volume growth observed to radius 64 (uncertified)";
  }

  GraphSpec base = GraphSpec::glue(side_a, GraphSpec::model(side_b), root_label(side_a),
                                   root_label(GraphSpec::model(side_b)), 1.0);

  const std::int64_t T = opts.table_radius;
  FiniteGraph ball = materialize(base, T);
  GreenTable table = dirichlet_green(ball, ball.root(), T);
  auto dec = sphere_decompose(ball);
  auto lam = std::make_shared<std::map<std::string, double>>();
  for (VertexId v = 0; v < ball.vertex_count(); ++v)
    if (dec.radius[v] < T && ball.label(v).rfind("a:", 0) == 0)
      (*lam)[ball.label(v)] = std::max(1.0, 1.0 / table.values[v]);

  GluedRescaleReport rep;
  rep.base = base;
  rep.rescaled = GraphSpec::conformal(
      base, table_lambda(lam),
      "first-side measure rescale from the radius-" + std::to_string(T) + " Green table");
  rep.table_radius = T;
  rep.green_at_root = table.values[ball.root()];
  rep.side_b_complete = cls.complete;
  rep.notes = volume_note;

  rep.preservation =
      check_green_preservation(base, rep.rescaled, "a:0", opts.preservation_radius);
  if (!rep.preservation.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "measure rescale shifted the Green function by %.3g at radius %lld",
                  rep.preservation.max_abs_diff,
                  static_cast<long long>(rep.preservation.radius));
    throw CheckFailure(buf);
  }
  rep.growth = certify_l1_after_rescale(rep.rescaled, "a:0", opts.schedule, "a:");
  return rep;
}

FiniteGraph antitree_ray_quotient(const RadialModel& antitree, std::int64_t R) {
  if (!antitree.has_sphere_count())
    throw SpecError("ray quotient needs integer sphere sizes");
  if (antitree.sphere_count(0) != 1)
    throw SpecError("ray quotient needs |S_0| = 1");
  GraphBuilder b;
  std::vector<VertexId> ray(R + 1), rest(R + 1, VertexId(-1));
  for (std::int64_t r = 0; r <= R; ++r) {
    std::int64_t s = antitree.sphere_count(r);
    ray[r] = b.add_vertex("ray:" + std::to_string(r), 1.0);
    if (s > 1) rest[r] = b.add_vertex("rest:" + std::to_string(r), double(s - 1));
  }
  for (std::int64_t r = 0; r < R; ++r) {
    double s0 = double(antitree.sphere_count(r) - 1);
    double s1 = double(antitree.sphere_count(r + 1) - 1);
    b.add_edge(ray[r], ray[r + 1], 1.0);
    if (s1 > 0) b.add_edge(ray[r], rest[r + 1], s1);
    if (s0 > 0) b.add_edge(rest[r], ray[r + 1], s0);
    if (s0 > 0 && s1 > 0) b.add_edge(rest[r], rest[r + 1], s0 * s1);
  }
  b.mark_frontier(ray[R]);
  if (rest[R] != VertexId(-1)) b.mark_frontier(rest[R]);
  b.set_root(ray[0]);
  return b.build();
}

AntitreeViolatorReport build_antitree_violator(const GraphSpec& antitree,
                                               const AntitreeViolatorOptions& opts) {
  const auto* at = std::get_if<AntitreeSpec>(&antitree.node());
  if (!at) throw SpecError("violator construction expects an antitree spec");
  if (opts.sweep_radius < 3 || opts.table_radius < 2)
    throw SpecError("sweep and table radii too small");
  RadialModel model = *antitree.as_model();

  Classification cls = classify(model);
  if (cls.complete_ans == Classification::Answer::Yes)
    throw SpecError("antitree '" + model.name() +
                    "' is stochastically complete; the maximum-principle "
                    "construction needs sum |B_l|/(|S_l||S_{l+1}|) < infinity");
  if (cls.complete_ans != Classification::Answer::No)
    throw SpecError("antitree '" + model.name() +
                    "' needs a decisive incompleteness certificate");
  if (cls.complete.kind != SeriesVerdict::Kind::ConvergesTo)
    throw SpecError("incompleteness verdict carries no certified value");

  const std::int64_t sweep_R = opts.sweep_radius;
  const std::int64_t check_R = std::max<std::int64_t>(sweep_R + 1, 64);
  std::vector<double> a(check_R + 2), A(check_R + 3, 0.0);
  {
    CompensatedSum acc;
    for (std::int64_t l = 0; l <= check_R + 1; ++l) {
      a[l] = model.ball_measure(l) / model.boundary_weight(l);
      A[l] = acc.value();
      acc.add(a[l]);
      A[l + 1] = acc.value();
    }
  }
  const double f_star = cls.complete.value;
  const double f_tail = cls.complete.tail_bound;

  // feasibility of (epsilon, n): -1 + 3 eps < 0; a_r - a_{r-1} < eps for
  // r >= n-1 over the checked range; f* - A_{n-1} < eps
  auto max_increment = [&](std::int64_t n) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::int64_t r = std::max<std::int64_t>(n - 1, 1); r <= check_R; ++r)
      worst = std::max(worst, a[r] - a[r - 1]);
    return worst;
  };
  auto tail_from = [&](std::int64_t n) { return (f_star + f_tail) - A[n - 1]; };

  double eps;
  std::int64_t n;
  if (opts.epsilon && opts.n) {
    eps = *opts.epsilon;
    n = *opts.n;
  } else {
    bool found = false;
    eps = 0.0;
    n = 0;
    for (std::int64_t cand = 2; cand <= 50 && !found; ++cand) {
      double lo = std::max({tail_from(cand), max_increment(cand), 0.0});
      if (lo < 1.0 / 3.0) {
        n = cand;
        eps = (lo + 1.0 / 3.0) / 2.0;
        found = true;
      }
    }
    if (!found)
      throw SpecError("no feasible (epsilon, n) with n <= 50: the ratio terms "
                      "decay too slowly");
  }

  OmoriYauReport oy;
  oy.epsilon = eps;
  oy.n = n;
  oy.f_star = f_star;
  oy.f_star_tail = f_tail;
  oy.cond_epsilon_small = eps > 0.0 && -1.0 + 3.0 * eps < 0.0;
  oy.cond_increments = n > 1 && max_increment(n) < eps;
  oy.cond_tail = n > 1 && n <= check_R && tail_from(n) < eps;
  if (!oy.cond_epsilon_small || !oy.cond_increments || !oy.cond_tail) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "(epsilon=%.6g, n=%lld) infeasible: conditions %d/%d/%d", eps,
                  static_cast<long long>(n), int(oy.cond_epsilon_small),
                  int(oy.cond_increments), int(oy.cond_tail));
    throw SpecError(buf);
  }
  oy.alpha = A[n];
  oy.bound = -1.0 + 3.0 * eps;
  oy.checked_radius = sweep_R - 1;

  // the bounded test function: A_r off the ray, f* - eps on the ray from index
  // n-1 on, 0 on the first ray vertices
  auto f_ray = [&](std::int64_t i) { return i < n - 1 ? 0.0 : f_star - eps; };
  const double threshold = f_star - oy.alpha;  // membership: f > f* - alpha

  // lambda^2 on the ray from one fixed Green table over the exact quotient
  const std::int64_t T = opts.table_radius;
  FiniteGraph table_ball = antitree_ray_quotient(model, T);
  GreenTable table = dirichlet_green(table_ball, table_ball.root(), T);
  auto lam = std::make_shared<std::map<std::string, double>>();
  for (std::int64_t r = 0; r < T; ++r)
    (*lam)["ray:" + std::to_string(r)] =
        std::max(1.0, 1.0 / table.value("ray:" + std::to_string(r)));
  auto lambda_of = [&](std::int64_t r) {
    auto it = lam->find("ray:" + std::to_string(r));
    return it == lam->end() ? 1.0 : it->second;
  };

  // Laplacian sweep over the superlevel set, one class at a time: every
  // off-ray vertex of S_r sees the same neighborhood, so its Laplacian is a
  // closed form in the ratio terms; ray vertices get their own formula.
  oy.max_laplacian_on_omega = -std::numeric_limits<double>::infinity();
  oy.omega_size = 0;
  for (std::int64_t r = 1; r < sweep_R; ++r) {
    std::int64_t members = model.sphere_count(r) - 1;
    if (members > 0 && A[r] > threshold) {
      double delta = -1.0 + (a[r] - a[r - 1]) + (A[r] - f_ray(r - 1)) +
                     (A[r] - f_ray(r + 1));
      oy.max_laplacian_on_omega = std::max(oy.max_laplacian_on_omega, delta);
      oy.omega_size += members;
    }
  }
  for (std::int64_t r = 0; r < sweep_R; ++r) {
    if (!(f_ray(r) > threshold)) continue;  // ray vertices barely below the sup
    double acc = 0.0;
    if (r > 0) {
      acc += double(model.sphere_count(r - 1) - 1) * (f_ray(r) - A[r - 1]);
      acc += f_ray(r) - f_ray(r - 1);
    }
    acc += double(model.sphere_count(r + 1) - 1) * (f_ray(r) - A[r + 1]);
    acc += f_ray(r) - f_ray(r + 1);
    oy.max_laplacian_on_omega =
        std::max(oy.max_laplacian_on_omega, acc / lambda_of(r));
    oy.omega_size += 1;
  }
  oy.pass = oy.omega_size > 0 && oy.max_laplacian_on_omega <= oy.bound + 1e-10;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max Laplacian %.6g over %lld superlevel vertices within B_%lld "
                "(bound %.6g)",
                oy.max_laplacian_on_omega, static_cast<long long>(oy.omega_size),
                static_cast<long long>(oy.checked_radius), oy.bound);
  oy.detail = buf;
  if (!oy.pass) throw CheckFailure(oy.detail);

  AntitreeViolatorReport rep;
  rep.base = GraphSpec::explicit_graph(
      antitree_ray_quotient(model, std::max(T, checked_schedule(opts.schedule).back() + 1)));
  rep.rescaled = GraphSpec::conformal(
      rep.base, table_lambda(lam),
      "ray measure rescale from the radius-" + std::to_string(T) + " Green table");
  rep.omori_yau = oy;
  rep.growth = certify_l1_after_rescale(rep.rescaled, "ray:0", opts.schedule, "ray:");
  rep.notes = "computed on the exact ray/remainder quotient of '" + model.name() + "'";
  return rep;
}

}  // namespace liouville
