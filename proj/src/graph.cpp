#include "liouville/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "liouville/errors.hpp"

namespace liouville {

void FiniteGraph::check(VertexId v) const {
  if (v >= vertex_count())
    throw SpecError("unknown vertex id " + std::to_string(v));
}

std::optional<VertexId> FiniteGraph::find_vertex(std::string_view label) const {
  auto it = d_->by_label.find(std::string(label));
  if (it == d_->by_label.end()) return std::nullopt;
  return it->second;
}

VertexId FiniteGraph::vertex(std::string_view label) const {
  auto v = find_vertex(label);
  if (!v) throw SpecError("no vertex labeled '" + std::string(label) + "'");
  return *v;
}

double FiniteGraph::weight(VertexId u, VertexId v) const {
  for (const Edge& e : neighbors(u))
    if (e.to == v) return e.weight;
  check(v);
  return 0.0;
}

std::vector<VertexId> FiniteGraph::frontier_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (d_->frontier[v]) out.push_back(v);
  return out;
}

// ---- builder ---------------------------------------------------------------

void GraphBuilder::check(VertexId v) const {
  if (v >= measure_.size())
    throw SpecError("unknown vertex id " + std::to_string(v));
}

VertexId GraphBuilder::add_vertex(std::string label, double m) {
  if (label.empty()) throw SpecError("empty vertex label");
  if (!(std::isfinite(m) && m > 0.0))
    throw SpecError("vertex '" + label + "': measure must be positive and finite");
  if (by_label_.count(label))
    throw SpecError("duplicate vertex label '" + label + "'");
  VertexId id = measure_.size();
  by_label_.emplace(label, id);
  labels_.push_back(std::move(label));
  measure_.push_back(m);
  frontier_.push_back(false);
  return id;
}

void GraphBuilder::add_edge(VertexId u, VertexId v, double b) {
  check(u);
  check(v);
  if (u == v)
    throw SpecError("self-loop at '" + labels_[u] + "' (b must vanish on the diagonal)");
  if (!std::isfinite(b) || b < 0.0)
    throw SpecError("edge " + labels_[u] + " -- " + labels_[v] +
                    ": weight must be finite and nonnegative");
  if (u > v) std::swap(u, v);
  if (measure_.size() > 0xffffffffull)
    throw SpecError("graph too large for edge bookkeeping");
  std::uint64_t key = (u << 32) | v;
  if (!seen_.insert(key).second)
    throw SpecError("duplicate edge " + labels_[u] + " -- " + labels_[v]);
  if (b < kMinEdgeWeight) return;  // below resolution: treated as absent
  edges_.push_back({u, v, b});
}

void GraphBuilder::mark_frontier(VertexId v) {
  check(v);
  frontier_[v] = true;
}

void GraphBuilder::set_root(VertexId v) {
  check(v);
  root_ = v;
}

FiniteGraph GraphBuilder::build() {
  if (measure_.empty()) throw SpecError("graph has no vertices");
  auto data = std::make_shared<FiniteGraph::Data>();
  std::size_t n = measure_.size();
  data->offset.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++data->offset[e.u + 1];
    ++data->offset[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) data->offset[i + 1] += data->offset[i];
  data->flat.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(data->offset.begin(), data->offset.end() - 1);
  for (const auto& e : edges_) {
    data->flat[cursor[e.u]++] = {e.v, e.b};
    data->flat[cursor[e.v]++] = {e.u, e.b};
  }

  VertexId root = root_.value_or(0);
  // connectivity check
  std::vector<bool> seen(n, false);
  std::deque<VertexId> queue{root};
  seen[root] = true;
  std::size_t reached = 0;
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    ++reached;
    for (std::size_t i = data->offset[x]; i < data->offset[x + 1]; ++i) {
      VertexId y = data->flat[i].to;
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  if (reached != n) {
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v])
        throw SpecError("graph is disconnected: '" + labels_[v] +
                        "' unreachable from root '" + labels_[root] + "'");
  }

  data->measure = std::move(measure_);
  data->labels = std::move(labels_);
  data->frontier = std::move(frontier_);
  data->by_label = std::move(by_label_);
  data->root = root;
  for (bool f : data->frontier) data->any_frontier |= f;
  FiniteGraph g;
  g.d_ = std::move(data);
  return g;
}

// ---- sphere structure -------------------------------------------------------

SphereDecomposition sphere_decompose(const FiniteGraph& g, VertexId root) {
  std::size_t n = g.vertex_count();
  if (root >= n) throw SpecError("sphere_decompose: unknown root");
  SphereDecomposition dec;
  dec.root = root;
  dec.radius.assign(n, -1);
  dec.radius[root] = 0;
  std::deque<VertexId> queue{root};
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    auto r = dec.radius[x];
    if (static_cast<std::size_t>(r) >= dec.spheres.size()) dec.spheres.resize(r + 1);
    dec.spheres[r].push_back(x);
    for (const Edge& e : g.neighbors(x)) {
      if (dec.radius[e.to] < 0) {
        dec.radius[e.to] = r + 1;
        queue.push_back(e.to);
      }
    }
  }
  for (auto& sphere : dec.spheres)
    std::sort(sphere.begin(), sphere.end(), [&](VertexId a, VertexId b) {
      return label_less(g.label(a), g.label(b));
    });
  return dec;
}

Degree degree(const FiniteGraph& g, VertexId x) {
  double total = 0.0;
  for (const Edge& e : g.neighbors(x)) total += e.weight;
  return {total / g.measure(x), !g.is_frontier(x)};
}

CurvaturePair curvature(const FiniteGraph& g, const SphereDecomposition& dec,
                        VertexId x) {
  auto r = dec.radius[x];
  if (r < 0) throw SpecError("curvature: vertex not reached by decomposition");
  double in = 0.0, out = 0.0;
  for (const Edge& e : g.neighbors(x)) {
    auto ry = dec.radius[e.to];
    if (ry == r - 1) in += e.weight;
    else if (ry == r + 1) out += e.weight;
  }
  double m = g.measure(x);
  return {in / m, out / m, !g.is_frontier(x)};
}

double laplacian_apply(const FiniteGraph& g, std::span<const double> f, VertexId x) {
  if (f.size() != g.vertex_count())
    throw SpecError("laplacian_apply: value vector has wrong size");
  if (g.is_frontier(x))
    throw SpecError("laplacian_apply at frontier vertex '" + g.label(x) +
                    "': neighborhood incomplete");
  double acc = 0.0;
  double fx = f[x];
  for (const Edge& e : g.neighbors(x)) acc += e.weight * (fx - f[e.to]);
  return acc / g.measure(x);
}

double laplacian_apply(const FiniteGraph& g,
                       const std::unordered_map<VertexId, double>& f, VertexId x) {
  if (g.is_frontier(x))
    throw SpecError("laplacian_apply at frontier vertex '" + g.label(x) +
                    "': neighborhood incomplete");
  auto value = [&](VertexId v) {
    auto it = f.find(v);
    if (it == f.end())
      throw SpecError("laplacian_apply: no value for vertex '" + g.label(v) + "'");
    return it->second;
  };
  double acc = 0.0;
  double fx = value(x);
  for (const Edge& e : g.neighbors(x)) acc += e.weight * (fx - value(e.to));
  return acc / g.measure(x);
}

BoundarySplit boundary_split(const FiniteGraph& g, std::span<const VertexId> w) {
  std::vector<bool> in_w(g.vertex_count(), false);
  for (VertexId v : w) {
    if (v >= g.vertex_count()) throw SpecError("boundary_split: unknown vertex");
    in_w[v] = true;
  }
  BoundarySplit split;
  for (VertexId v : w) {
    bool interior = !g.is_frontier(v);
    if (interior)
      for (const Edge& e : g.neighbors(v))
        if (!in_w[e.to]) { interior = false; break; }
    (interior ? split.interior : split.boundary).push_back(v);
  }
  auto by_id = [](VertexId a, VertexId b) { return a < b; };
  std::sort(split.interior.begin(), split.interior.end(), by_id);
  std::sort(split.boundary.begin(), split.boundary.end(), by_id);
  return split;
}

double sphere_measure(const FiniteGraph& g, const SphereDecomposition& dec,
                      std::int64_t r) {
  if (r < 0 || r > dec.max_radius())
    throw SpecError("sphere_measure: radius " + std::to_string(r) + " out of range");
  double total = 0.0;
  for (VertexId v : dec.spheres[r]) total += g.measure(v);
  return total;
}

double ball_measure(const FiniteGraph& g, const SphereDecomposition& dec,
                    std::int64_t r) {
  double total = 0.0;
  for (std::int64_t k = 0; k <= std::min(r, dec.max_radius()); ++k)
    total += sphere_measure(g, dec, k);
  return total;
}

double boundary_conductance(const FiniteGraph& g, const SphereDecomposition& dec,
                            std::int64_t r) {
  if (r < 0 || r >= dec.max_radius()) return 0.0;
  double total = 0.0;
  for (VertexId x : dec.spheres[r])
    for (const Edge& e : g.neighbors(x))
      if (dec.radius[e.to] == r + 1) total += e.weight;
  return total;
}

// ---- truncation --------------------------------------------------------------

FiniteGraph restrict_ball(const FiniteGraph& g, std::int64_t R) {
  if (R < 0) throw SpecError("restrict_ball: negative radius");
  auto dec = sphere_decompose(g, g.root());
  std::vector<bool> keep(g.vertex_count(), false);
  std::size_t kept = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (dec.radius[v] <= R) { keep[v] = true; ++kept; }
  bool truncated = kept < g.vertex_count();

  GraphBuilder builder;
  std::vector<VertexId> remap(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!keep[v]) continue;
    remap[v] = builder.add_vertex(g.label(v), g.measure(v));
    if (g.is_frontier(v) || (truncated && dec.radius[v] == R))
      builder.mark_frontier(remap[v]);
  }
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    if (!keep[u]) continue;
    for (const Edge& e : g.neighbors(u))
      if (u < e.to && keep[e.to]) builder.add_edge(remap[u], remap[e.to], e.weight);
  }
  builder.set_root(remap[g.root()]);
  return builder.build();
}

// ---- label utilities ----------------------------------------------------------

namespace {

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

bool label_less(std::string_view a, std::string_view b) {
  while (!a.empty() || !b.empty()) {
    if (a.empty()) return true;
    if (b.empty()) return false;
    auto cut = [](std::string_view& s) {
      auto pos = s.find(':');
      std::string_view head = s.substr(0, pos);
      s = (pos == std::string_view::npos) ? std::string_view{} : s.substr(pos + 1);
      return head;
    };
    std::string_view ha = cut(a), hb = cut(b);
    std::int64_t na = 0, nb = 0;
    bool ia = parse_int(ha, na), ib = parse_int(hb, nb);
    if (ia && ib) {
      if (na != nb) return na < nb;
    } else if (ia != ib) {
      return ia;  // numeric components sort before strings
    } else if (ha != hb) {
      return ha < hb;
    }
  }
  return false;
}

std::vector<VertexId> sorted_ball(const FiniteGraph&, const SphereDecomposition& dec,
                                  std::int64_t R) {
  std::vector<VertexId> out;
  for (std::int64_t r = 0; r <= std::min(R, dec.max_radius()); ++r)
    out.insert(out.end(), dec.spheres[r].begin(), dec.spheres[r].end());
  return out;  // spheres are already label-sorted
}

// ---- (de)serialization ----------------------------------------------------------

namespace {

using nlohmann::json;

std::string id_to_label(const json& id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<std::int64_t>());
  if (id.is_number_unsigned()) return std::to_string(id.get<std::uint64_t>());
  throw SpecError("vertex id must be an integer or a string, got: " + id.dump());
}

}  // namespace

FiniteGraph graph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw SpecError("graph document needs 'vertices' and 'edges' arrays");

  GraphBuilder builder;
  for (const auto& v : doc["vertices"]) {
    if (!v.contains("id") || !v.contains("m"))
      throw SpecError("each vertex needs 'id' and 'm'");
    builder.add_vertex(id_to_label(v["id"]), v["m"].get<double>());
  }
  std::unordered_map<std::string, VertexId> ids;
  {
    VertexId next = 0;
    for (const auto& v : doc["vertices"]) ids.emplace(id_to_label(v["id"]), next++);
  }
  auto resolve = [&](const json& id) {
    auto it = ids.find(id_to_label(id));
    if (it == ids.end()) throw SpecError("reference to unknown id " + id.dump());
    return it->second;
  };
  for (const auto& e : doc["edges"]) {
    if (!e.contains("u") || !e.contains("v") || !e.contains("b"))
      throw SpecError("each edge needs 'u', 'v' and 'b'");
    builder.add_edge(resolve(e["u"]), resolve(e["v"]), e["b"].get<double>());
  }
  if (doc.contains("frontier"))
    for (const auto& id : doc["frontier"]) builder.mark_frontier(resolve(id));
  if (doc.contains("root")) builder.set_root(resolve(doc["root"]));
  return builder.build();
}

FiniteGraph graph_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return graph_from_json(buf.str());
}

std::string graph_to_json(const FiniteGraph& g) {
  nlohmann::ordered_json doc;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    doc["vertices"].push_back({{"id", g.label(v)}, {"m", g.measure(v)}});
  doc["edges"] = nlohmann::ordered_json::array();
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (const Edge& e : g.neighbors(u))
      if (u < e.to)
        doc["edges"].push_back({{"u", g.label(u)}, {"v", g.label(e.to)}, {"b", e.weight}});
  doc["frontier"] = nlohmann::ordered_json::array();
  for (VertexId v : g.frontier_vertices()) doc["frontier"].push_back(g.label(v));
  doc["root"] = g.label(g.root());
  return doc.dump(2);
}

bool graphs_equal(const FiniteGraph& a, const FiniteGraph& b, double tol) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
    return false;
  auto close = [tol](double x, double y) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (a.label(a.root()) != b.label(b.root())) return false;
  for (VertexId va = 0; va < a.vertex_count(); ++va) {
    auto vb = b.find_vertex(a.label(va));
    if (!vb) return false;
    if (!close(a.measure(va), b.measure(*vb))) return false;
    if (a.is_frontier(va) != b.is_frontier(*vb)) return false;
    for (const Edge& e : a.neighbors(va)) {
      auto to_b = b.find_vertex(a.label(e.to));
      if (!to_b) return false;
      if (!close(e.weight, b.weight(*vb, *to_b))) return false;
    }
  }
  return true;
}

}  // namespace liouville
