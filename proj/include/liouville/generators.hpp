#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "liouville/graph.hpp"
#include "liouville/series.hpp"

namespace liouville {

// Per-series certificates a radial model carries for its three classification
// series: sum 1/dB(k), sum m(B_k)/dB(k), sum g(r) m(S_r).
struct ModelCertificates {
  std::optional<SeriesCertificate> parabolic;
  std::optional<SeriesCertificate> complete;
  std::optional<SeriesCertificate> liouville;
};

// Radial description of a weakly spherically symmetric graph: the measure of
// each sphere m(S_r) and the radial conductance dB(r) between S_r and S_{r+1}.
// Inner/outer curvatures are derived:
//   k_plus(r)  = dB(r)   / m(S_r)
//   k_minus(r) = dB(r-1) / m(S_r),  k_minus(0) = 0.
// When a sphere_count sequence is present the model also has a full vertex
// realization (complete bipartite between consecutive spheres, weight and
// measure split evenly); otherwise only the quotient half-line exists.
class RadialModel {
 public:
  RadialModel(std::string name,
              std::function<double(std::int64_t)> sphere_measure,
              std::function<double(std::int64_t)> boundary_weight,
              std::function<std::int64_t(std::int64_t)> sphere_count = {},
              ModelCertificates certs = {});

  const std::string& name() const { return name_; }
  double sphere_measure(std::int64_t r) const;
  double boundary_weight(std::int64_t r) const;
  // 1/dB(r) for series work: a conductance that overflowed double range is
  // genuine growth, so its reciprocal reads as 0; NaN or <= 0 still error.
  double inv_boundary_weight(std::int64_t r) const;
  bool has_sphere_count() const { return bool(sphere_count_); }
  std::int64_t sphere_count(std::int64_t r) const;
  double k_plus(std::int64_t r) const;
  double k_minus(std::int64_t r) const;
  double ball_measure(std::int64_t r) const;  // m(B_r), compensated prefix sum
  const ModelCertificates& certificates() const { return certs_; }

 private:
  std::string name_;
  std::function<double(std::int64_t)> measure_, weight_;
  std::function<std::int64_t(std::int64_t)> sphere_count_;
  ModelCertificates certs_;
};

// ---- graph specs ------------------------------------------------------------
//
// A GraphSpec describes an (almost always infinite) graph that can be
// truncated to any radius. materialize(spec, R) returns the ball B_R around
// the spec's root with the sphere S_R flagged as frontier; truncations are
// consistent: restrict_ball(materialize(R), R') == materialize(R') for R' <= R.

class GraphSpec;

struct ModelSpec {
  RadialModel model;
};

struct AntitreeSpec {
  std::string name;
  std::function<std::int64_t(std::int64_t)> sizes;  // |S_r|, sizes(0) == 1
  ModelCertificates certs;
};

struct GlueSpec {
  std::shared_ptr<const GraphSpec> a, b;
  std::string at_a, at_b;  // labels within the component specs
  double weight;
};

struct ConformalSpec {
  std::shared_ptr<const GraphSpec> base;
  // lambda^2 as a function of vertex label; must be >= 1e-12 and finite.
  std::function<double(const std::string&)> lambda_sq;
  std::string description;
};

struct ExplicitSpec {
  FiniteGraph graph;
};

class GraphSpec {
 public:
  using Node = std::variant<ModelSpec, AntitreeSpec, GlueSpec, ConformalSpec, ExplicitSpec>;

  static GraphSpec model(RadialModel m);
  static GraphSpec antitree(std::string name,
                            std::function<std::int64_t(std::int64_t)> sizes,
                            ModelCertificates certs = {});
  static GraphSpec glue(GraphSpec a, GraphSpec b, std::string at_a, std::string at_b,
                        double weight);
  static GraphSpec conformal(GraphSpec base,
                             std::function<double(const std::string&)> lambda_sq,
                             std::string description);
  static GraphSpec explicit_graph(FiniteGraph g);

  const Node& node() const { return *node_; }
  // The radial description, when this spec is one (model or antitree).
  std::optional<RadialModel> as_model() const;
  bool is_radial() const { return as_model().has_value(); }
  std::string describe() const;

  // JSON round-trip. Parsed specs remember their source document; specs built
  // in code are serialized structurally (closures are expanded into arrays up
  // to radius R_hint).
  static GraphSpec from_json(const std::string& text);
  static GraphSpec from_json_file(const std::string& path);
  std::string to_json(std::int64_t R_hint = 32) const;

 private:
  std::shared_ptr<const Node> node_;
  std::string source_json_;  // set when parsed from a document
  friend GraphSpec spec_preset(const std::string&);
};

// Ball of radius R around the spec's root. S_R is flagged frontier.
FiniteGraph materialize(const GraphSpec& spec, std::int64_t R);

// Quotient half-line of a radial model: vertices labeled "0".."R",
// m(r) = m(S_r), b(r, r+1) = dB(r). Exact for every radial quantity.
FiniteGraph materialize_quotient(const RadialModel& model, std::int64_t R);

// Full vertex realization of an antitree with the given sphere sizes,
// truncated at radius R: unit measure, unit weights, consecutive spheres
// completely joined, no edges inside a sphere.
FiniteGraph build_antitree(const std::function<std::int64_t(std::int64_t)>& sizes,
                           std::int64_t R);

// The curvature-comparison pair: a stochastically incomplete weakly symmetric
// model together with the half-line that dominates its curvatures from radius
// 1 on while keeping k_minus identical.
struct ComparisonPair {
  GraphSpec model;     // the weakly symmetric reference
  GraphSpec halfline;  // the dominating graph
};
ComparisonPair comparison_pair();

// Named presets: "halfline_unit", "model_geom2", "model_geom32", "model_pow2",
// "model_pow3", "model_poly4", "antitree_cubed", "antitree_squared",
// "cmp_model", "cmp_halfline", "glued_halflines", "threeray_hub".
GraphSpec spec_preset(const std::string& name);
std::vector<std::string> spec_preset_names();

}  // namespace liouville
