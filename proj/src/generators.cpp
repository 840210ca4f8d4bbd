#include "liouville/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "liouville/errors.hpp"

namespace liouville {

namespace {
// Materializing complete-bipartite sphere joins is quadratic in sphere sizes;
// past this many edges the radial quotient is the only sane realization.
constexpr std::int64_t kMaxMaterializedEdges = 30'000'000;
}  // namespace

// ---- RadialModel -------------------------------------------------------------

RadialModel::RadialModel(std::string name,
                         std::function<double(std::int64_t)> sphere_measure,
                         std::function<double(std::int64_t)> boundary_weight,
                         std::function<std::int64_t(std::int64_t)> sphere_count,
                         ModelCertificates certs)
    : name_(std::move(name)),
      measure_(std::move(sphere_measure)),
      weight_(std::move(boundary_weight)),
      sphere_count_(std::move(sphere_count)),
      certs_(std::move(certs)) {
  if (!measure_ || !weight_)
    throw SpecError("radial model '" + name_ + "' needs measure and weight sequences");
}

double RadialModel::sphere_measure(std::int64_t r) const {
  if (r < 0) throw SpecError("sphere_measure at negative radius");
  double v = measure_(r);
  if (!std::isfinite(v) || v <= 0.0)
    throw SpecError("model '" + name_ + "': m(S_" + std::to_string(r) +
                    ") must be positive and finite");
  return v;
}

double RadialModel::boundary_weight(std::int64_t r) const {
  if (r < 0) throw SpecError("boundary_weight at negative radius");
  double v = weight_(r);
  if (!std::isfinite(v) || v <= 0.0)
    throw SpecError("model '" + name_ + "': dB(" + std::to_string(r) +
                    ") must be positive and finite");
  return v;
}

double RadialModel::inv_boundary_weight(std::int64_t r) const {
  if (r < 0) throw SpecError("boundary_weight at negative radius");
  double v = weight_(r);
  if (std::isnan(v) || v <= 0.0)
    throw SpecError("model '" + name_ + "': dB(" + std::to_string(r) +
                    ") must be positive");
  return std::isinf(v) ? 0.0 : 1.0 / v;
}

std::int64_t RadialModel::sphere_count(std::int64_t r) const {
  if (!sphere_count_) throw SpecError("model '" + name_ + "' has no sphere counts");
  std::int64_t c = sphere_count_(r);
  if (c < 1)
    throw SpecError("model '" + name_ + "': sphere count at r=" + std::to_string(r) +
                    " must be at least 1");
  return c;
}

double RadialModel::k_plus(std::int64_t r) const {
  return boundary_weight(r) / sphere_measure(r);
}

double RadialModel::k_minus(std::int64_t r) const {
  if (r == 0) return 0.0;
  return boundary_weight(r - 1) / sphere_measure(r);
}

double RadialModel::ball_measure(std::int64_t r) const {
  CompensatedSum sum;
  for (std::int64_t k = 0; k <= r; ++k) sum.add(sphere_measure(k));
  return sum.value();
}

// ---- GraphSpec construction ----------------------------------------------------

GraphSpec GraphSpec::model(RadialModel m) {
  GraphSpec s;
  s.node_ = std::make_shared<Node>(ModelSpec{std::move(m)});
  return s;
}

GraphSpec GraphSpec::antitree(std::string name,
                              std::function<std::int64_t(std::int64_t)> sizes,
                              ModelCertificates certs) {
  if (!sizes) throw SpecError("antitree needs a size sequence");
  GraphSpec s;
  s.node_ = std::make_shared<Node>(
      AntitreeSpec{std::move(name), std::move(sizes), std::move(certs)});
  return s;
}

GraphSpec GraphSpec::glue(GraphSpec a, GraphSpec b, std::string at_a, std::string at_b,
                          double weight) {
  if (!(std::isfinite(weight)) || weight < kMinEdgeWeight)
    throw SpecError("glue: bridge weight must be finite and at least 1e-15");
  GraphSpec s;
  s.node_ = std::make_shared<Node>(
      GlueSpec{std::make_shared<const GraphSpec>(std::move(a)),
               std::make_shared<const GraphSpec>(std::move(b)), std::move(at_a),
               std::move(at_b), weight});
  return s;
}

GraphSpec GraphSpec::conformal(GraphSpec base,
                               std::function<double(const std::string&)> lambda_sq,
                               std::string description) {
  if (!lambda_sq) throw SpecError("conformal: lambda^2 function required");
  GraphSpec s;
  s.node_ = std::make_shared<Node>(
      ConformalSpec{std::make_shared<const GraphSpec>(std::move(base)),
                    std::move(lambda_sq), std::move(description)});
  return s;
}

GraphSpec GraphSpec::explicit_graph(FiniteGraph g) {
  GraphSpec s;
  s.node_ = std::make_shared<Node>(ExplicitSpec{std::move(g)});
  return s;
}

std::optional<RadialModel> GraphSpec::as_model() const {
  if (const auto* m = std::get_if<ModelSpec>(node_.get())) return m->model;
  if (const auto* a = std::get_if<AntitreeSpec>(node_.get())) {
    auto sizes = a->sizes;
    return RadialModel(
        a->name, [sizes](std::int64_t r) { return double(sizes(r)); },
        [sizes](std::int64_t r) { return double(sizes(r)) * double(sizes(r + 1)); },
        sizes, a->certs);
  }
  return std::nullopt;
}

std::string GraphSpec::describe() const {
  struct V {
    std::string operator()(const ModelSpec& m) const { return "model:" + m.model.name(); }
    std::string operator()(const AntitreeSpec& a) const { return "antitree:" + a.name; }
    std::string operator()(const GlueSpec& g) const {
      return "glue(" + g.a->describe() + "@" + g.at_a + ", " + g.b->describe() + "@" +
             g.at_b + ")";
    }
    std::string operator()(const ConformalSpec& c) const {
      std::string d = c.description.empty() ? "lambda^2" : c.description;
      return "conformal(" + c.base->describe() + "; " + d + ")";
    }
    std::string operator()(const ExplicitSpec& e) const {
      return "explicit:" + std::to_string(e.graph.vertex_count()) + "v";
    }
  };
  return std::visit(V{}, *node_);
}

// ---- materialization -------------------------------------------------------------

FiniteGraph materialize_quotient(const RadialModel& model, std::int64_t R) {
  if (R < 0) throw SpecError("materialize: negative radius");
  GraphBuilder b;
  for (std::int64_t r = 0; r <= R; ++r)
    b.add_vertex(std::to_string(r), model.sphere_measure(r));
  for (std::int64_t r = 0; r < R; ++r)
    b.add_edge(VertexId(r), VertexId(r + 1), model.boundary_weight(r));
  b.mark_frontier(VertexId(R));
  b.set_root(0);
  return b.build();
}

namespace {

// Shared vertex realization for models carrying sphere counts (antitrees are
// the unit-weight case): consecutive spheres completely joined, measure and
// conductance split evenly.
FiniteGraph bipartite_realization(const RadialModel& model, std::int64_t R) {
  if (R < 0) throw SpecError("materialize: negative radius");
  if (model.sphere_count(0) != 1)
    throw SpecError("model '" + model.name() + "': rooted realization needs |S_0| = 1");

  std::int64_t edges = 0;
  for (std::int64_t r = 0; r < R; ++r) {
    edges += model.sphere_count(r) * model.sphere_count(r + 1);
    if (edges > kMaxMaterializedEdges)
      throw SpecError("model '" + model.name() + "': vertex realization to R=" +
                      std::to_string(R) + " exceeds " +
                      std::to_string(kMaxMaterializedEdges) +
                      " edges; use the radial quotient for radial quantities");
  }

  GraphBuilder b;
  std::vector<VertexId> offset(R + 2, 0);
  for (std::int64_t r = 0; r <= R; ++r) {
    std::int64_t count = model.sphere_count(r);
    double m = model.sphere_measure(r) / double(count);
    for (std::int64_t j = 0; j < count; ++j)
      b.add_vertex(std::to_string(r) + ":" + std::to_string(j), m);
    offset[r + 1] = offset[r] + VertexId(count);
  }
  for (std::int64_t r = 0; r < R; ++r) {
    double w = model.boundary_weight(r) /
               (double(model.sphere_count(r)) * double(model.sphere_count(r + 1)));
    for (VertexId u = offset[r]; u < offset[r + 1]; ++u)
      for (VertexId v = offset[r + 1]; v < offset[r + 2]; ++v) b.add_edge(u, v, w);
  }
  for (VertexId v = offset[R]; v < offset[R + 1]; ++v) b.mark_frontier(v);
  b.set_root(0);
  return b.build();
}

// Smallest materialization radius at which `label` appears in `spec`, or
// nullopt if the spec saturates (finite graph) without it.
std::optional<std::int64_t> locate_radius(const GraphSpec& spec, const std::string& label,
                                          std::int64_t cap) {
  for (std::int64_t probe = 2;; probe = std::min(probe * 2, cap)) {
    FiniteGraph g = materialize(spec, probe);
    if (auto v = g.find_vertex(label)) {
      auto dec = sphere_decompose(g);
      return dec.radius[*v];
    }
    if (!g.has_frontier()) return std::nullopt;  // saturated, label absent
    if (probe >= cap)
      throw SpecError("glue: vertex '" + label + "' not found within radius " +
                      std::to_string(cap));
  }
}

FiniteGraph materialize_glue(const GlueSpec& spec, std::int64_t R) {
  std::int64_t cap = std::max<std::int64_t>(2 * R + 2, 64);
  auto ra = locate_radius(*spec.a, spec.at_a, cap);
  if (!ra) throw SpecError("glue: no vertex '" + spec.at_a + "' in " + spec.a->describe());

  FiniteGraph part_a = materialize(*spec.a, R);
  GraphBuilder b;
  std::vector<VertexId> map_a(part_a.vertex_count());
  for (VertexId v = 0; v < part_a.vertex_count(); ++v) {
    map_a[v] = b.add_vertex("a:" + part_a.label(v), part_a.measure(v));
    if (part_a.is_frontier(v)) b.mark_frontier(map_a[v]);
  }
  for (VertexId u = 0; u < part_a.vertex_count(); ++u)
    for (const Edge& e : part_a.neighbors(u))
      if (u < e.to) b.add_edge(map_a[u], map_a[e.to], e.weight);
  b.set_root(map_a[part_a.root()]);

  if (*ra + 1 <= R) {  // the bridge is inside the ball: bring in the second part
    auto rb = locate_radius(*spec.b, spec.at_b, cap);
    if (!rb)
      throw SpecError("glue: no vertex '" + spec.at_b + "' in " + spec.b->describe());
    std::int64_t depth_b = *rb + (R - *ra - 1);
    FiniteGraph part_b = materialize(*spec.b, depth_b);
    std::vector<VertexId> map_b(part_b.vertex_count());
    for (VertexId v = 0; v < part_b.vertex_count(); ++v) {
      map_b[v] = b.add_vertex("b:" + part_b.label(v), part_b.measure(v));
      if (part_b.is_frontier(v)) b.mark_frontier(map_b[v]);
    }
    for (VertexId u = 0; u < part_b.vertex_count(); ++u)
      for (const Edge& e : part_b.neighbors(u))
        if (u < e.to) b.add_edge(map_b[u], map_b[e.to], e.weight);
    b.add_edge(map_a[part_a.vertex(spec.at_a)], map_b[part_b.vertex(spec.at_b)],
               spec.weight);
  }
  return restrict_ball(b.build(), R);
}

FiniteGraph materialize_conformal(const ConformalSpec& spec, std::int64_t R) {
  FiniteGraph base = materialize(*spec.base, R);
  GraphBuilder b;
  for (VertexId v = 0; v < base.vertex_count(); ++v) {
    double lam = spec.lambda_sq(base.label(v));
    if (!std::isfinite(lam) || lam < 1e-12)
      throw SpecError("conformal: lambda^2 at '" + base.label(v) +
                      "' must be finite and at least 1e-12");
    VertexId id = b.add_vertex(base.label(v), base.measure(v) * lam);
    if (base.is_frontier(v)) b.mark_frontier(id);
  }
  for (VertexId u = 0; u < base.vertex_count(); ++u)
    for (const Edge& e : base.neighbors(u))
      if (u < e.to) b.add_edge(u, e.to, e.weight);
  b.set_root(base.root());
  return b.build();
}

}  // namespace

FiniteGraph materialize(const GraphSpec& spec, std::int64_t R) {
  struct V {
    std::int64_t R;
    FiniteGraph operator()(const ModelSpec& m) const {
      if (m.model.has_sphere_count()) return bipartite_realization(m.model, R);
      return materialize_quotient(m.model, R);
    }
    FiniteGraph operator()(const AntitreeSpec& a) const {
      GraphSpec s = GraphSpec::antitree(a.name, a.sizes, a.certs);
      return bipartite_realization(*s.as_model(), R);
    }
    FiniteGraph operator()(const GlueSpec& g) const { return materialize_glue(g, R); }
    FiniteGraph operator()(const ConformalSpec& c) const {
      return materialize_conformal(c, R);
    }
    FiniteGraph operator()(const ExplicitSpec& e) const {
      return restrict_ball(e.graph, R);
    }
  };
  return std::visit(V{R}, spec.node());
}

FiniteGraph build_antitree(const std::function<std::int64_t(std::int64_t)>& sizes,
                           std::int64_t R) {
  return materialize(GraphSpec::antitree("antitree", sizes), R);
}

// ---- the comparison pair ------------------------------------------------------
//
// The weakly symmetric reference: m(S_0) = 1, m(S_r) = e^-r + 2, dB(r) = (r+1)^3.
// The dominating half-line: m(r) = 2 e^r / (e^r + 1), written 2 / (1 + e^-r) so
// it stays finite for every r, and dB(r) = m(r+1) * (r+1)^3 / (e^-(r+1) + 2).
// Outer curvature then dominates from radius 1 on while inner curvature agrees
// identically and the measure drops below the reference.

ComparisonPair comparison_pair() {
  auto m_ref = [](std::int64_t r) {
    return r == 0 ? 1.0 : std::exp(-double(r)) + 2.0;
  };
  auto b_ref = [](std::int64_t r) {
    double c = double(r + 1);
    return c * c * c;
  };
  ModelCertificates certs_ref;
  certs_ref.parabolic = PowerMajorant{1.0, 3.0, 1};
  certs_ref.complete = PowerMajorant{3.0, 2.0, 1};
  certs_ref.liouville = PowerMajorant{4.5, 2.0, 1};
  RadialModel ref("cmp_model", m_ref, b_ref, {}, certs_ref);

  auto m_dom = [](std::int64_t r) { return 2.0 / (1.0 + std::exp(-double(r))); };
  auto b_dom = [m_dom](std::int64_t r) {
    double c = double(r + 1);
    return m_dom(r + 1) * (c * c * c / (std::exp(-double(r + 1)) + 2.0));
  };
  ModelCertificates certs_dom;
  certs_dom.parabolic = PowerMajorant{3.0, 3.0, 1};
  certs_dom.complete = PowerMajorant{4.0, 2.0, 1};
  certs_dom.liouville = PowerMajorant{5.0, 2.0, 1};
  RadialModel dom("cmp_halfline", m_dom, b_dom, {}, certs_dom);

  return {GraphSpec::model(ref), GraphSpec::model(dom)};
}

// ---- presets ---------------------------------------------------------------------

namespace {

std::function<std::int64_t(std::int64_t)> int_power_seq(int exponent) {
  return [exponent](std::int64_t r) {
    std::int64_t v = 1;
    for (int i = 0; i < exponent; ++i) v *= (r + 1);
    return v;
  };
}

GraphSpec make_preset(const std::string& name) {
  auto one = [](std::int64_t) { return 1.0; };
  if (name == "halfline_unit") {
    ModelCertificates c;
    c.parabolic = ConstantMinorant{1.0, 0};
    c.complete = ConstantMinorant{1.0, 0};
    return GraphSpec::model(RadialModel("halfline_unit", one, one, {}, c));
  }
  if (name == "model_geom2" || name == "model_geom32") {
    double q = name == "model_geom2" ? 2.0 : 1.5;
    ModelCertificates c;
    if (q == 2.0) {
      c.parabolic = RatioBound{0.5, 0};
      c.complete = RatioBound{0.75, 1};
      c.liouville = RatioBound{0.5, 0};
    } else {
      c.parabolic = RatioBound{2.0 / 3.0, 0};
      c.complete = RatioBound{8.0 / 9.0, 2};
      c.liouville = RatioBound{2.0 / 3.0, 0};
    }
    return GraphSpec::model(RadialModel(
        name, one, [q](std::int64_t r) { return std::pow(q, double(r)); }, {}, c));
  }
  if (name == "model_pow2") {
    ModelCertificates c;
    c.parabolic = PowerMajorant{1.0, 2.0, 1};
    c.complete = HarmonicMinorant{0.5, 1};
    c.liouville = HarmonicMinorant{0.4, 1};
    return GraphSpec::model(RadialModel(
        name, one,
        [](std::int64_t r) { return double((r + 1) * (r + 1)); }, {}, c));
  }
  if (name == "model_pow3") {
    ModelCertificates c;
    c.parabolic = PowerMajorant{1.0, 3.0, 1};
    c.complete = PowerMajorant{1.0, 2.0, 1};
    c.liouville = PowerMajorant{2.0, 2.0, 1};
    return GraphSpec::model(RadialModel(
        name, one,
        [](std::int64_t r) { return double((r + 1) * (r + 1) * (r + 1)); }, {}, c));
  }
  if (name == "model_poly4") {
    ModelCertificates c;
    c.parabolic = PowerMajorant{1.0, 4.0, 1};
    c.complete = PowerMajorant{1.0, 2.0, 1};
    c.liouville = PowerMajorant{3.0, 2.0, 1};
    return GraphSpec::model(RadialModel(
        name, [](std::int64_t r) { return double(r + 1); },
        [](std::int64_t r) {
          double c4 = double(r + 1);
          return c4 * c4 * c4 * c4;
        },
        {}, c));
  }
  if (name == "antitree_cubed") {
    ModelCertificates c;
    c.parabolic = PowerMajorant{1.0, 6.0, 1};
    c.complete = Telescoping{[](std::int64_t l) { return 0.25 / double(l + 1); }};
    c.liouville = PowerMajorant{12.0, 2.0, 1};
    return GraphSpec::antitree(name, int_power_seq(3), c);
  }
  if (name == "antitree_squared") {
    ModelCertificates c;
    c.parabolic = PowerMajorant{1.0, 4.0, 1};
    c.complete = HarmonicMinorant{1.0 / 12.0, 1};
    c.liouville = HarmonicMinorant{0.04, 1};
    return GraphSpec::antitree(name, int_power_seq(2), c);
  }
  if (name == "cmp_model") return comparison_pair().model;
  if (name == "cmp_halfline") return comparison_pair().halfline;
  if (name == "glued_halflines")
    return GraphSpec::glue(make_preset("halfline_unit"), make_preset("halfline_unit"),
                           "0", "0", 1.0);
  if (name == "threeray_hub")
    return GraphSpec::glue(make_preset("glued_halflines"), make_preset("halfline_unit"),
                           "a:0", "0", 1.0);
  throw SpecError("unknown spec preset '" + name + "'");
}

}  // namespace

GraphSpec spec_preset(const std::string& name) {
  GraphSpec s = make_preset(name);
  nlohmann::ordered_json j{{"kind", "preset"}, {"name", name}};
  s.source_json_ = j.dump(2);
  return s;
}

std::vector<std::string> spec_preset_names() {
  return {"halfline_unit", "model_geom2",  "model_geom32",    "model_pow2",
          "model_pow3",    "model_poly4",  "antitree_cubed",  "antitree_squared",
          "cmp_model",     "cmp_halfline", "glued_halflines", "threeray_hub"};
}

// ---- JSON ------------------------------------------------------------------------

namespace {

using nlohmann::json;

std::function<double(std::int64_t)> parse_real_seq(const json& j, const std::string& what) {
  if (j.is_object() && j.contains("preset")) {
    std::string p = j["preset"].get<std::string>();
    if (p == "one") return [](std::int64_t) { return 1.0; };
    if (p == "linear") return [](std::int64_t r) { return double(r + 1); };
    if (p == "square") return [](std::int64_t r) { return double((r + 1) * (r + 1)); };
    if (p == "cube")
      return [](std::int64_t r) { return double((r + 1) * (r + 1) * (r + 1)); };
    if (p.rfind("pow:", 0) == 0) {
      double e = std::stod(p.substr(4));
      return [e](std::int64_t r) { return std::pow(double(r + 1), e); };
    }
    if (p.rfind("geom:", 0) == 0) {
      double q = std::stod(p.substr(5));
      return [q](std::int64_t r) { return std::pow(q, double(r)); };
    }
    if (p == "cmp_model_m")
      return [](std::int64_t r) { return r == 0 ? 1.0 : std::exp(-double(r)) + 2.0; };
    if (p == "cmp_model_b")
      return [](std::int64_t r) {
        double c = double(r + 1);
        return c * c * c;
      };
    if (p == "cmp_halfline_m")
      return [](std::int64_t r) { return 2.0 / (1.0 + std::exp(-double(r))); };
    if (p == "cmp_halfline_b")
      return [](std::int64_t r) {
        double c = double(r + 1);
        return (2.0 / (1.0 + std::exp(-double(r + 1)))) *
               (c * c * c / (std::exp(-double(r + 1)) + 2.0));
      };
    throw SpecError(what + ": unknown sequence preset '" + p + "'");
  }
  if (j.is_object() && j.contains("array")) {
    auto values = j["array"].get<std::vector<double>>();
    if (values.empty()) throw SpecError(what + ": empty array");
    std::string extend = j.value("extend", "error");
    bool repeat = extend == "repeat_last";
    if (!repeat && extend != "error")
      throw SpecError(what + ": extend must be 'repeat_last' or 'error'");
    return [values, repeat, what](std::int64_t r) {
      if (r < std::int64_t(values.size())) return values[r];
      if (repeat) return values.back();
      throw SpecError(what + ": index " + std::to_string(r) +
                      " beyond declared array (extend=error)");
    };
  }
  throw SpecError(what + ": expected {\"preset\":...} or {\"array\":[...]}");
}

std::function<std::int64_t(std::int64_t)> parse_int_seq(const json& j,
                                                        const std::string& what) {
  if (j.is_object() && j.contains("preset")) {
    std::string p = j["preset"].get<std::string>();
    if (p == "one") return [](std::int64_t) { return std::int64_t(1); };
    if (p == "linear") return int_power_seq(1);
    if (p == "square") return int_power_seq(2);
    if (p == "cube") return int_power_seq(3);
    throw SpecError(what + ": unknown integer sequence preset '" + p + "'");
  }
  if (j.is_object() && j.contains("array")) {
    auto values = j["array"].get<std::vector<std::int64_t>>();
    if (values.empty()) throw SpecError(what + ": empty array");
    std::string extend = j.value("extend", "error");
    bool repeat = extend == "repeat_last";
    if (!repeat && extend != "error")
      throw SpecError(what + ": extend must be 'repeat_last' or 'error'");
    return [values, repeat, what](std::int64_t r) {
      if (r < std::int64_t(values.size())) return values[r];
      if (repeat) return values.back();
      throw SpecError(what + ": index " + std::to_string(r) +
                      " beyond declared array (extend=error)");
    };
  }
  throw SpecError(what + ": expected {\"preset\":...} or {\"array\":[...]}");
}

std::optional<SeriesCertificate> parse_cert(const json& j) {
  if (j.is_null()) return std::nullopt;
  std::string type = j.at("type").get<std::string>();
  if (type == "ratio")
    return RatioBound{j.at("q").get<double>(), j.value("k0", std::int64_t(0))};
  if (type == "power_majorant")
    return PowerMajorant{j.at("C").get<double>(), j.at("p").get<double>(),
                         j.value("k0", std::int64_t(1))};
  if (type == "constant_minorant")
    return ConstantMinorant{j.at("c").get<double>(), j.value("k0", std::int64_t(0))};
  if (type == "harmonic_minorant")
    return HarmonicMinorant{j.at("c").get<double>(), j.value("k0", std::int64_t(1))};
  if (type == "telescoping") {
    double scale = j.at("scale").get<double>();
    double shift = j.at("shift").get<double>();
    return Telescoping{[scale, shift](std::int64_t l) { return scale / (double(l) + shift); }};
  }
  throw SpecError("unknown certificate type '" + type + "'");
}

ModelCertificates parse_certs(const json& j) {
  ModelCertificates c;
  if (j.is_null()) return c;
  if (j.contains("parabolic")) c.parabolic = parse_cert(j["parabolic"]);
  if (j.contains("complete")) c.complete = parse_cert(j["complete"]);
  if (j.contains("liouville")) c.liouville = parse_cert(j["liouville"]);
  return c;
}

GraphSpec parse_spec(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw SpecError("graph spec needs a 'kind' discriminator");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "preset") return spec_preset(j.at("name").get<std::string>());
  if (kind == "model") {
    std::string name = j.value("name", "model");
    auto m = parse_real_seq(j.at("sphere_measure"), name + ".sphere_measure");
    auto b = parse_real_seq(j.at("boundary_weight"), name + ".boundary_weight");
    std::function<std::int64_t(std::int64_t)> counts;
    if (j.contains("sphere_count"))
      counts = parse_int_seq(j["sphere_count"], name + ".sphere_count");
    return GraphSpec::model(RadialModel(name, m, b, counts,
                                        parse_certs(j.value("certificates", json()))));
  }
  if (kind == "antitree") {
    std::string name = j.value("name", "antitree");
    return GraphSpec::antitree(name, parse_int_seq(j.at("sizes"), name + ".sizes"),
                               parse_certs(j.value("certificates", json())));
  }
  if (kind == "glue")
    return GraphSpec::glue(parse_spec(j.at("a")), parse_spec(j.at("b")),
                           j.at("at_a").get<std::string>(),
                           j.at("at_b").get<std::string>(), j.value("weight", 1.0));
  if (kind == "conformal") {
    auto base = parse_spec(j.at("base"));
    const json& lam = j.at("lambda_sq");
    double def = lam.value("default", 1.0);
    std::unordered_map<std::string, double> values;
    if (lam.contains("values"))
      for (auto it = lam["values"].begin(); it != lam["values"].end(); ++it)
        values[it.key()] = it.value().get<double>();
    auto fn = [def, values](const std::string& label) {
      auto it = values.find(label);
      return it == values.end() ? def : it->second;
    };
    return GraphSpec::conformal(std::move(base), fn, j.value("description", ""));
  }
  if (kind == "explicit")
    return GraphSpec::explicit_graph(graph_from_json(j.at("graph").dump()));
  throw SpecError("unknown spec kind '" + kind + "'");
}

json seq_to_array(const std::function<double(std::int64_t)>& f, std::int64_t n) {
  json arr = json::array();
  for (std::int64_t r = 0; r <= n; ++r) arr.push_back(f(r));
  return {{"array", arr}, {"extend", "error"}};
}

json cert_to_json(const SeriesCertificate& cert) {
  struct V {
    json operator()(const RatioBound& c) const {
      return {{"type", "ratio"}, {"q", c.q}, {"k0", c.k0}};
    }
    json operator()(const PowerMajorant& c) const {
      return {{"type", "power_majorant"}, {"C", c.C}, {"p", c.p}, {"k0", c.k0}};
    }
    json operator()(const ConstantMinorant& c) const {
      return {{"type", "constant_minorant"}, {"c", c.c}, {"k0", c.k0}};
    }
    json operator()(const HarmonicMinorant& c) const {
      return {{"type", "harmonic_minorant"}, {"c", c.c}, {"k0", c.k0}};
    }
    json operator()(const Telescoping&) const { return json(); }  // not introspectable
  };
  return std::visit(V{}, cert);
}

json certs_to_json(const ModelCertificates& c) {
  json out = json::object();
  if (c.parabolic) {
    json j = cert_to_json(*c.parabolic);
    if (!j.is_null()) out["parabolic"] = j;
  }
  if (c.complete) {
    json j = cert_to_json(*c.complete);
    if (!j.is_null()) out["complete"] = j;
  }
  if (c.liouville) {
    json j = cert_to_json(*c.liouville);
    if (!j.is_null()) out["liouville"] = j;
  }
  return out;
}

json spec_to_json(const GraphSpec& spec, std::int64_t R_hint) {
  struct V {
    std::int64_t R;
    json operator()(const ModelSpec& m) const {
      json j{{"kind", "model"}, {"name", m.model.name()}};
      j["sphere_measure"] =
          seq_to_array([&](std::int64_t r) { return m.model.sphere_measure(r); }, R);
      j["boundary_weight"] =
          seq_to_array([&](std::int64_t r) { return m.model.boundary_weight(r); }, R);
      if (m.model.has_sphere_count()) {
        json arr = json::array();
        for (std::int64_t r = 0; r <= R; ++r) arr.push_back(m.model.sphere_count(r));
        j["sphere_count"] = {{"array", arr}, {"extend", "error"}};
      }
      json certs = certs_to_json(m.model.certificates());
      if (!certs.empty()) j["certificates"] = certs;
      return j;
    }
    json operator()(const AntitreeSpec& a) const {
      json arr = json::array();
      for (std::int64_t r = 0; r <= R; ++r) arr.push_back(a.sizes(r));
      json j{{"kind", "antitree"}, {"name", a.name}};
      j["sizes"] = {{"array", arr}, {"extend", "error"}};
      json certs = certs_to_json(a.certs);
      if (!certs.empty()) j["certificates"] = certs;
      return j;
    }
    json operator()(const GlueSpec& g) const {
      return {{"kind", "glue"},
              {"a", spec_to_json(*g.a, R)},
              {"b", spec_to_json(*g.b, R)},
              {"at_a", g.at_a},
              {"at_b", g.at_b},
              {"weight", g.weight}};
    }
    json operator()(const ConformalSpec& c) const {
      FiniteGraph base = materialize(*c.base, R);
      json values = json::object();
      for (VertexId v = 0; v < base.vertex_count(); ++v)
        values[base.label(v)] = c.lambda_sq(base.label(v));
      return {{"kind", "conformal"},
              {"base", spec_to_json(*c.base, R)},
              {"lambda_sq", {{"default", 1.0}, {"values", values}}},
              {"description", c.description}};
    }
    json operator()(const ExplicitSpec& e) const {
      return {{"kind", "explicit"}, {"graph", json::parse(graph_to_json(e.graph))}};
    }
  };
  return std::visit(V{R_hint}, spec.node());
}

}  // namespace

GraphSpec GraphSpec::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid spec JSON: ") + e.what());
  }
  GraphSpec s = parse_spec(doc);
  s.source_json_ = doc.dump(2);
  return s;
}

GraphSpec GraphSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string GraphSpec::to_json(std::int64_t R_hint) const {
  if (!source_json_.empty()) return source_json_;
  return spec_to_json(*this, R_hint).dump(2);
}

}  // namespace liouville
