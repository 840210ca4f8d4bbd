// Python surface: thin JSON-string wrappers over the core operations, so the
// bindings stay schema-free and the python side is plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "liouville/graph.hpp"
#include "liouville/model_analysis.hpp"
#include "liouville/subgraph.hpp"
#include "liouville/walker.hpp"

namespace py = pybind11;
using nlohmann::ordered_json;
using namespace liouville;

namespace {

GraphSpec resolve_spec(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return GraphSpec::from_json(arg);
  return spec_preset(arg);
}

const char* kind_name(SeriesVerdict::Kind k) {
  switch (k) {
    case SeriesVerdict::Kind::ConvergesTo: return "ConvergesTo";
    case SeriesVerdict::Kind::Diverges: return "Diverges";
    default: return "Inconclusive";
  }
}

ordered_json verdict_json(const SeriesVerdict& v, Classification::Answer a) {
  ordered_json j;
  j["answer"] = answer_name(a);
  j["kind"] = kind_name(v.kind);
  j["value"] = v.value;
  j["tail_bound"] = v.tail_bound;
  j["terms_used"] = v.terms_used;
  return j;
}

std::string classify_str(const std::string& spec_arg) {
  GraphSpec spec = resolve_spec(spec_arg);
  auto model = spec.as_model();
  if (!model) throw SpecError("spec is not a radial model");
  const Classification cls = classify(*model);
  ordered_json j;
  j["model"] = model->name();
  j["parabolic"] = verdict_json(cls.parabolic, cls.parabolic_ans);
  j["stochastically_complete"] = verdict_json(cls.complete, cls.complete_ans);
  j["l1_liouville"] = verdict_json(cls.liouville, cls.liouville_ans);
  j["decisive"] = cls.decisive();
  j["notes"] = cls.notes;
  return j.dump();
}

ordered_json table_rows(const FiniteGraph& g, const std::vector<double>& values,
                        std::int64_t R) {
  const SphereDecomposition dec = sphere_decompose(g);
  ordered_json rows = ordered_json::array();
  for (VertexId v : sorted_ball(g, dec, R)) {
    ordered_json row;
    row["label"] = g.label(v);
    row["radius"] = dec.radius[v];
    row["value"] = values[v];
    rows.push_back(row);
  }
  return rows;
}

std::string green_str(const std::string& spec_arg, std::int64_t R, const std::string& x0) {
  GraphSpec spec = resolve_spec(spec_arg);
  const FiniteGraph g = materialize(spec, R);
  const VertexId source = x0.empty() ? g.root() : g.vertex(x0);
  const GreenTable t = dirichlet_green(g, source, R);
  ordered_json j;
  j["x0"] = g.label(source);
  j["R"] = R;
  j["rows"] = table_rows(g, t.values, R);
  return j.dump();
}

std::string exit_str(const std::string& spec_arg, std::int64_t R) {
  GraphSpec spec = resolve_spec(spec_arg);
  const FiniteGraph g = materialize(spec, R);
  const ExitTable t = mean_exit(g, R);
  ordered_json j;
  j["R"] = R;
  j["rows"] = table_rows(g, t.values, R);
  return j.dump();
}

std::string ends_str(const std::string& spec_arg, const std::vector<std::string>& K,
                     std::int64_t R, std::int64_t R2) {
  GraphSpec spec = resolve_spec(spec_arg);
  const EndsReport rep = ends(spec, K, R, R2);
  ordered_json j;
  j["component_count"] = rep.components.size();
  std::size_t unbounded = 0;
  for (bool u : rep.unbounded) unbounded += u ? 1 : 0;
  j["unbounded_count"] = unbounded;
  j["stable"] = rep.stable;
  j["sizes"] = ordered_json::array();
  for (const auto& c : rep.components) j["sizes"].push_back(c.size());
  return j.dump();
}

std::string simulate_str(const std::string& spec_arg, const std::string& start,
                         const std::vector<std::string>& absorb, std::int64_t R,
                         std::int64_t n, std::uint64_t seed) {
  GraphSpec spec = resolve_spec(spec_arg);
  const FiniteGraph g = materialize(spec, R);
  WalkConfig cfg;
  cfg.start = start;
  cfg.absorbing = absorb;
  cfg.n_samples = n;
  cfg.seed = seed;
  const WalkStats s = simulate_exit(g, cfg);
  ordered_json j;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["std_error"] = s.std_error;
  j["count_absorbed"] = s.count_absorbed;
  j["count_censored"] = s.count_censored;
  return j.dump();
}

double reindex_check(const std::string& spec_arg, std::int64_t R) {
  GraphSpec spec = resolve_spec(spec_arg);
  auto model = spec.as_model();
  if (!model) throw SpecError("spec is not a radial model");
  return reindex_identity_check(*model, R);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stochastic properties of infinite weighted graphs";
  m.attr("__version__") = "0.1.0";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<CheckFailure>(m, "CheckFailure", PyExc_RuntimeError);

  m.def("presets", &spec_preset_names, "built-in graph spec names");
  m.def("classify", &classify_str, py::arg("spec"),
        "three-series classification of a radial model (JSON string)");
  m.def("green", &green_str, py::arg("spec"), py::arg("R"),
        py::arg("x0") = std::string(), "Dirichlet Green kernel rows on B_R (JSON string)");
  m.def("mean_exit", &exit_str, py::arg("spec"), py::arg("R"),
        "mean exit time rows on B_R (JSON string)");
  m.def("ends", &ends_str, py::arg("spec"), py::arg("K"), py::arg("R"), py::arg("R2"),
        "components of B_R minus K (JSON string)");
  m.def("simulate_exit", &simulate_str, py::arg("spec"), py::arg("start"),
        py::arg("absorb"), py::arg("R"), py::arg("n") = 1000, py::arg("seed") = 1,
        "continuous-time walk exit statistics (JSON string)");
  m.def("reindex_identity_check", &reindex_check, py::arg("spec"), py::arg("R") = 50,
        "relative discrepancy of the finite reindexing identity");
  m.def("spec_to_json", [](const std::string& spec_arg, std::int64_t R_hint) {
          return resolve_spec(spec_arg).to_json(R_hint);
        }, py::arg("spec"), py::arg("R_hint") = 32, "serialized form of a spec");
}
