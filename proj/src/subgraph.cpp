#include "liouville/subgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

struct Exhaustion {
  FiniteGraph graph;
  std::vector<VertexId> omega;  // W cap B_R
  BoundarySplit split;
};

// BFS component of `seed` within the allowed set.
std::vector<VertexId> component_of(const FiniteGraph& g, const std::vector<char>& allowed,
                                   VertexId seed, std::vector<char>& seen) {
  std::vector<VertexId> comp;
  std::queue<VertexId> q;
  q.push(seed);
  seen[seed] = 1;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    comp.push_back(v);
    for (const Edge& e : g.neighbors(v))
      if (allowed[e.to] && !seen[e.to]) {
        seen[e.to] = 1;
        q.push(e.to);
      }
  }
  return comp;
}

Exhaustion make_exhaustion(const SubgraphProblem& p, std::int64_t R) {
  if (R < 1) throw SpecError("subgraph exhaustion needs R >= 1");
  Exhaustion ex{materialize(p.ambient, R), {}, {}};
  const FiniteGraph& g = ex.graph;
  std::vector<char> in_w(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (p.membership(g.label(v))) {
      in_w[v] = 1;
      ex.omega.push_back(v);
    }
  if (ex.omega.empty()) throw SpecError("subgraph is empty within radius " +
                                        std::to_string(R));

  std::vector<char> seen(g.vertex_count(), 0);
  std::size_t reached = component_of(g, in_w, ex.omega.front(), seen).size();
  if (reached != ex.omega.size())
    throw SpecError("subgraph is disconnected within radius " + std::to_string(R));

  ex.split = boundary_split(g, ex.omega);
  if (ex.split.interior.empty())
    throw SpecError("subgraph has no interior within radius " + std::to_string(R));
  return ex;
}

}  // namespace

GreenTable dirichlet_green_subgraph(const SubgraphProblem& p, const std::string& x0_label,
                                    std::int64_t R) {
  Exhaustion ex = make_exhaustion(p, R);
  auto x0 = ex.graph.find_vertex(x0_label);
  if (!x0) throw SpecError("no vertex '" + x0_label + "' within radius " +
                           std::to_string(R));
  if (std::find(ex.split.interior.begin(), ex.split.interior.end(), *x0) ==
      ex.split.interior.end())
    throw SpecError("source '" + x0_label + "' is not interior to the subgraph");

  GreenTable t;
  t.graph = ex.graph;
  t.source = *x0;
  t.radius = R;
  t.values = solve_dirichlet(
      ex.graph, ex.split.interior, ex.split.boundary,
      [&](VertexId v) { return v == *x0 ? 1.0 / ex.graph.measure(v) : 0.0; },
      [](VertexId) { return 0.0; }, &t.residual);
  return t;
}

ExitTable dirichlet_exit(const SubgraphProblem& p, std::int64_t R) {
  Exhaustion ex = make_exhaustion(p, R);
  ExitTable t;
  t.graph = ex.graph;
  t.radius = R;
  t.values = solve_dirichlet(
      ex.graph, ex.split.interior, ex.split.boundary, [](VertexId) { return 1.0; },
      [](VertexId) { return 0.0; }, &t.residual);
  return t;
}

double domination_check(const SubgraphProblem& p, std::int64_t R) {
  Exhaustion ex = make_exhaustion(p, R);
  ExitTable sub = dirichlet_exit(p, R);
  ExitTable full = mean_exit(ex.graph, R);
  double slack = std::numeric_limits<double>::infinity();
  for (VertexId v : ex.omega) slack = std::min(slack, full.values[v] - sub.values[v]);
  return slack;
}

EndsReport ends(const GraphSpec& spec, std::span<const std::string> K, std::int64_t R,
                std::int64_t R2) {
  if (K.empty()) throw SpecError("ends: K must be nonempty");
  if (R < 3) throw SpecError("ends: R must be >= 3 so K fits inside B_{R-2}");
  if (R2 <= R) throw SpecError("ends: the stability radius must exceed R");

  struct Snapshot {
    std::vector<std::vector<VertexId>> comps;
    std::vector<bool> unbounded;
    FiniteGraph graph;
  };
  auto snapshot = [&](std::int64_t radius) {
    Snapshot s{{}, {}, materialize(spec, radius)};
    const FiniteGraph& g = s.graph;
    auto dec = sphere_decompose(g);
    std::vector<char> allowed(g.vertex_count(), 1);
    for (const std::string& label : K) {
      auto v = g.find_vertex(label);
      if (!v) throw SpecError("ends: no vertex '" + label + "' within radius " +
                              std::to_string(radius));
      if (dec.radius[*v] > R - 2)
        throw SpecError("ends: '" + label + "' is outside B_{R-2}; grow R");
      allowed[*v] = 0;
    }
    std::vector<char> seen(g.vertex_count(), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (!allowed[v] || seen[v]) continue;
      auto comp = component_of(g, allowed, v, seen);
      bool touches = false;
      for (VertexId u : comp) touches = touches || g.is_frontier(u);
      s.comps.push_back(std::move(comp));
      s.unbounded.push_back(touches);
    }
    return s;
  };

  Snapshot at_R = snapshot(R), at_R2 = snapshot(R2);

  EndsReport rep;
  rep.K.assign(K.begin(), K.end());
  rep.R = R;
  rep.R2 = R2;
  for (std::size_t i = 0; i < at_R.comps.size(); ++i) {
    std::vector<std::string> labels;
    for (VertexId v : at_R.comps[i]) labels.push_back(at_R.graph.label(v));
    std::sort(labels.begin(), labels.end(), label_less);
    rep.components.push_back(std::move(labels));
    rep.unbounded.push_back(at_R.unbounded[i]);
  }
  // order components by first label so the report is deterministic
  {
    std::vector<std::size_t> order(rep.components.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return label_less(rep.components[a].front(), rep.components[b].front());
    });
    EndsReport sorted = rep;
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted.components[i] = rep.components[order[i]];
      sorted.unbounded[i] = rep.unbounded[order[i]];
    }
    rep = std::move(sorted);
  }

  auto unbounded_count = [](const Snapshot& s) {
    return std::count(s.unbounded.begin(), s.unbounded.end(), true);
  };
  rep.stable = at_R.comps.size() == at_R2.comps.size() &&
               unbounded_count(at_R) == unbounded_count(at_R2);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu components (%lld unbounded) at R=%lld; %zu (%lld) at R=%lld",
                at_R.comps.size(), static_cast<long long>(unbounded_count(at_R)),
                static_cast<long long>(R), at_R2.comps.size(),
                static_cast<long long>(unbounded_count(at_R2)),
                static_cast<long long>(R2));
  rep.detail = buf;
  return rep;
}

double end_additivity_check(const GraphSpec& spec, std::span<const std::string> K,
                            std::int64_t R) {
  FiniteGraph g = materialize(spec, R);
  std::vector<char> allowed(g.vertex_count(), 1);
  for (const std::string& label : K) {
    auto v = g.find_vertex(label);
    if (!v) throw SpecError("no vertex '" + label + "' within radius " +
                            std::to_string(R));
    allowed[*v] = 0;
  }
  std::vector<VertexId> w;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (allowed[v]) w.push_back(v);
  if (w.empty()) throw SpecError("K covers the whole ball");

  // joint solve on all of V minus K (the system is block diagonal)
  BoundarySplit joint = boundary_split(g, w);
  if (joint.interior.empty()) throw SpecError("V minus K has no interior");
  std::vector<double> joint_sol =
      solve_dirichlet(g, joint.interior, joint.boundary, [](VertexId) { return 1.0; },
                      [](VertexId) { return 0.0; }, nullptr);

  // per-component solves, extended by zero
  std::vector<double> assembled(g.vertex_count(), 0.0);
  std::vector<char> seen(g.vertex_count(), 0);
  for (VertexId v : w) {
    if (seen[v]) continue;
    auto comp = component_of(g, allowed, v, seen);
    BoundarySplit split = boundary_split(g, comp);
    if (split.interior.empty()) continue;  // fully absorbed sliver contributes zero
    std::vector<double> sol =
        solve_dirichlet(g, split.interior, split.boundary, [](VertexId) { return 1.0; },
                        [](VertexId) { return 0.0; }, nullptr);
    for (VertexId u : comp) assembled[u] += sol[u];
  }

  double worst = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    worst = std::max(worst, std::abs(joint_sol[v] - assembled[v]));
  return worst;
}

}  // namespace liouville
