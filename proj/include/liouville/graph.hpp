#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace liouville {

using VertexId = std::uint64_t;

// Edges with weight below this threshold are treated as absent at
// construction time, so "neighbor" stays well defined numerically.
inline constexpr double kMinEdgeWeight = 1e-15;

struct Edge {
  VertexId to;
  double weight;
};

// A finite weighted graph (V, b, m): symmetric positive edge weights b,
// strictly positive vertex measure m, connected, no self-loops.
//
// Graphs produced by truncating an infinite spec carry a *frontier*: the
// outermost vertices whose neighborhoods are incomplete. Any quantity that
// reads the full neighborhood of a frontier vertex (degree, outer curvature,
// the Laplacian) is untrusted or refused there.
//
// Immutable after construction; copies share storage and are safe to read
// from multiple threads.
class FiniteGraph {
 public:
  std::size_t vertex_count() const { return d_->measure.size(); }
  std::size_t edge_count() const { return d_->flat.size() / 2; }

  std::span<const Edge> neighbors(VertexId v) const {
    check(v);
    return {d_->flat.data() + d_->offset[v], d_->offset[v + 1] - d_->offset[v]};
  }
  double measure(VertexId v) const { check(v); return d_->measure[v]; }
  bool is_frontier(VertexId v) const { check(v); return d_->frontier[v]; }
  const std::string& label(VertexId v) const { check(v); return d_->labels[v]; }
  VertexId root() const { return d_->root; }
  bool has_frontier() const { return d_->any_frontier; }

  std::optional<VertexId> find_vertex(std::string_view label) const;
  // Vertex lookup that throws SpecError naming the label when absent.
  VertexId vertex(std::string_view label) const;

  // b(u,v); 0.0 when u and v are not adjacent.
  double weight(VertexId u, VertexId v) const;

  std::vector<VertexId> frontier_vertices() const;

 private:
  friend class GraphBuilder;
  struct Data {
    std::vector<std::size_t> offset;  // CSR offsets, size n+1
    std::vector<Edge> flat;           // both directions of every edge
    std::vector<double> measure;
    std::vector<std::string> labels;
    std::vector<bool> frontier;
    std::unordered_map<std::string, VertexId> by_label;
    VertexId root = 0;
    bool any_frontier = false;
  };
  std::shared_ptr<const Data> d_;
  void check(VertexId v) const;
};

class GraphBuilder {
 public:
  VertexId add_vertex(std::string label, double m);
  void add_edge(VertexId u, VertexId v, double b);  // symmetric, stored once
  void mark_frontier(VertexId v);
  void set_root(VertexId v);
  // Validates connectivity and moves the accumulated data out.
  FiniteGraph build();

  std::size_t vertex_count() const { return measure_.size(); }

 private:
  struct PendingEdge { VertexId u, v; double b; };
  std::vector<double> measure_;
  std::vector<std::string> labels_;
  std::vector<bool> frontier_;
  std::unordered_map<std::string, VertexId> by_label_;
  std::vector<PendingEdge> edges_;
  std::unordered_set<std::uint64_t> seen_;  // packed (u,v) pairs, duplicates rejected
  std::optional<VertexId> root_;
  void check(VertexId v) const;
};

// ---- sphere structure ------------------------------------------------------

struct SphereDecomposition {
  VertexId root;
  std::vector<std::vector<VertexId>> spheres;  // spheres[r] = S_r, label-sorted
  std::vector<std::int64_t> radius;            // radius[v] = d(root, v)
  std::int64_t max_radius() const { return static_cast<std::int64_t>(spheres.size()) - 1; }
};

SphereDecomposition sphere_decompose(const FiniteGraph& g, VertexId root);
inline SphereDecomposition sphere_decompose(const FiniteGraph& g) {
  return sphere_decompose(g, g.root());
}

struct Degree {
  double value;
  bool trusted;  // false at frontier vertices (missing neighbors)
};

// Deg(x) = (1/m(x)) * sum_y b(x,y): total jump rate of the walk at x.
Degree degree(const FiniteGraph& g, VertexId x);

struct CurvaturePair {
  double k_minus;        // weight per measure toward the previous sphere
  double k_plus;         // weight per measure toward the next sphere
  bool k_plus_trusted;   // false at frontier vertices
};

CurvaturePair curvature(const FiniteGraph& g, const SphereDecomposition& dec,
                        VertexId x);

// Delta f(x) = (1/m(x)) * sum_y b(x,y) (f(x) - f(y)).
// Sign convention: Delta f >= 0 means f is super-harmonic at x.
// Refused at frontier vertices (their neighborhoods are incomplete).
double laplacian_apply(const FiniteGraph& g, std::span<const double> f, VertexId x);
// Sparse variant; throws SpecError naming the vertex when a needed value is
// missing from the map.
double laplacian_apply(const FiniteGraph& g,
                       const std::unordered_map<VertexId, double>& f, VertexId x);

struct BoundarySplit {
  std::vector<VertexId> interior;  // all neighbors stay inside W, not frontier
  std::vector<VertexId> boundary;
};

// Splits W into interior and (vertex) boundary. Frontier vertices always land
// in the boundary: their missing edges could leave W.
BoundarySplit boundary_split(const FiniteGraph& g, std::span<const VertexId> w);

// m(S_r), m(B_r) and the radial conductance dB(r) = sum of edge weights
// between S_r and S_{r+1}.
double sphere_measure(const FiniteGraph& g, const SphereDecomposition& dec, std::int64_t r);
double ball_measure(const FiniteGraph& g, const SphereDecomposition& dec, std::int64_t r);
double boundary_conductance(const FiniteGraph& g, const SphereDecomposition& dec, std::int64_t r);

// ---- truncation ------------------------------------------------------------

// The ball B_R around the root as a standalone graph. If anything lies
// outside B_R (or the graph already had a frontier inside), the sphere S_R is
// flagged as the new frontier; a graph fully contained in B_R keeps its flags.
FiniteGraph restrict_ball(const FiniteGraph& g, std::int64_t R);

// ---- label utilities -------------------------------------------------------

// Labels sort by splitting at ':' and comparing numeric components as
// numbers ("2:10" after "2:9"), giving the deterministic row order used by
// CSV export: (radius, label key).
bool label_less(std::string_view a, std::string_view b);

// Ball vertices sorted by (radius, label key).
std::vector<VertexId> sorted_ball(const FiniteGraph& g, const SphereDecomposition& dec,
                                  std::int64_t R);

// ---- (de)serialization -----------------------------------------------------

// JSON document: {"vertices":[{"id":..,"m":..}],"edges":[{"u":..,"v":..,"b":..}],
//                 "frontier":[ids],"root":id}. Ids may be integers or strings;
// they become labels verbatim. Duplicate edges are rejected.
FiniteGraph graph_from_json(const std::string& text);
FiniteGraph graph_from_json_file(const std::string& path);
std::string graph_to_json(const FiniteGraph& g);

// Structural equality by label: same vertex set, measures, frontier flags and
// edge weights within tol (used by generator-consistency checks).
bool graphs_equal(const FiniteGraph& a, const FiniteGraph& b, double tol);

}  // namespace liouville
