// liouville-lab: classification, Dirichlet solves, curvature comparisons,
// counterexample reproductions, ends, and walk simulation on graph specs.
//
// Exit codes: 0 success/decisive, 1 check failure, 2 usage or spec error,
// 3 inconclusive.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "liouville/comparison.hpp"
#include "liouville/counterexamples.hpp"
#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "liouville/graph.hpp"
#include "liouville/model_analysis.hpp"
#include "liouville/report.hpp"
#include "liouville/series.hpp"
#include "liouville/subgraph.hpp"
#include "liouville/walker.hpp"

namespace {

using liouville::CheckFailure;
using liouville::GraphSpec;
using liouville::RunManifest;
using liouville::SpecError;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

// --spec accepts a JSON file path or a built-in preset name.
GraphSpec load_spec(const std::string& arg) {
  std::ifstream probe(arg);
  if (probe.good()) return GraphSpec::from_json_file(arg);
  const auto names = liouville::spec_preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end())
    return liouville::spec_preset(arg);
  throw SpecError("'" + arg + "' is neither a readable file nor a preset (presets: " +
                  [&] {
                    std::string all;
                    for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
                    return all;
                  }() + ")");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    liouville::write_text_file(out_path, text);
}

const char* kind_name(liouville::SeriesVerdict::Kind k) {
  using K = liouville::SeriesVerdict::Kind;
  switch (k) {
    case K::ConvergesTo: return "ConvergesTo";
    case K::Diverges: return "Diverges";
    default: return "Inconclusive";
  }
}

ordered_json verdict_json(const liouville::SeriesVerdict& v) {
  ordered_json j;
  j["kind"] = kind_name(v.kind);
  j["value"] = v.value;
  j["tail_bound"] = v.tail_bound;
  j["terms_used"] = v.terms_used;
  j["evidence"] = v.evidence;
  return j;
}

ordered_json growth_json(const liouville::L1GrowthReport& g) {
  ordered_json j;
  j["solve_radius"] = g.solve_radius;
  j["ray_prefix"] = g.ray_prefix;
  j["rows"] = ordered_json::array();
  for (const auto& row : g.rows) {
    ordered_json r;
    r["R"] = row.R;
    r["partial_sum"] = row.partial_sum;
    r["minorant"] = row.minorant;
    r["margin"] = row.margin;
    j["rows"].push_back(r);
  }
  j["detail"] = g.detail;
  return j;
}

ordered_json dominance_json(const liouville::DominanceReport& d) {
  ordered_json j;
  j["direction"] = liouville::dominance_name(d.direction);
  j["R0"] = d.R0;
  j["checked_radius"] = d.checked_radius;
  j["C"] = d.C;
  j["C_argmax"] = d.C_argmax;
  j["violations"] = ordered_json::array();
  for (std::size_t i = 0; i < d.violations.size() && i < 10; ++i) {
    const auto& v = d.violations[i];
    ordered_json e;
    e["label"] = v.label;
    e["radius"] = v.radius;
    e["inequality"] = v.inequality;
    e["slack"] = v.slack;
    j["violations"].push_back(e);
  }
  return j;
}

ordered_json preservation_json(const liouville::GreenPreservationReport& p) {
  ordered_json j;
  j["radius"] = p.radius;
  j["max_abs_diff"] = p.max_abs_diff;
  j["pass"] = p.pass;
  return j;
}

ordered_json omori_yau_json(const liouville::OmoriYauReport& o) {
  ordered_json j;
  j["epsilon"] = o.epsilon;
  j["n"] = o.n;
  j["alpha"] = o.alpha;
  j["f_star"] = o.f_star;
  j["f_star_tail"] = o.f_star_tail;
  j["checked_radius"] = o.checked_radius;
  j["omega_size"] = o.omega_size;
  j["max_laplacian_on_omega"] = o.max_laplacian_on_omega;
  j["bound"] = o.bound;
  j["cond_epsilon_small"] = o.cond_epsilon_small;
  j["cond_increments"] = o.cond_increments;
  j["cond_tail"] = o.cond_tail;
  j["pass"] = o.pass;
  j["detail"] = o.detail;
  return j;
}

ordered_json transplant_green_json(const liouville::TransplantGreenReport& t) {
  ordered_json j;
  j["R"] = t.R;
  j["R0"] = t.R0;
  j["min_slack_v"] = t.min_slack_v;
  j["min_slack_u"] = t.min_slack_u;
  j["weighted_sum"] = t.weighted_sum;
  j["bound"] = t.bound;
  j["pass"] = t.pass;
  j["detail"] = t.detail;
  return j;
}

ordered_json transplant_exit_json(const liouville::TransplantExitReport& t) {
  ordered_json j;
  j["R"] = t.R;
  j["R0"] = t.R0;
  j["min_slack_laplacian"] = t.min_slack_laplacian;
  if (std::isnan(t.min_slack_domination))
    j["min_slack_domination"] = nullptr;
  else
    j["min_slack_domination"] = t.min_slack_domination;
  j["pass"] = t.pass;
  j["detail"] = t.detail;
  return j;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') { out.push_back(cur); cur.clear(); }
    else cur += c;
  }
  out.push_back(cur);
  out.erase(std::remove(out.begin(), out.end(), std::string{}), out.end());
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, int depth);

// ---- classify ---------------------------------------------------------------

int cmd_classify(const std::vector<std::string>& argv, const std::string& spec_arg,
                 std::int64_t n_max, const std::string& out, const std::string& csv_out) {
  GraphSpec spec = load_spec(spec_arg);
  auto model = spec.as_model();
  if (!model)
    throw SpecError("spec '" + spec_arg +
                    "' is not a radial model; use `evidence` for general graphs");
  liouville::SeriesOptions opts;
  opts.n_max = n_max;
  const liouville::Classification cls = liouville::classify(*model, opts);

  ordered_json params;
  params["spec"] = spec_arg;
  params["N_max"] = n_max;
  RunManifest m = liouville::make_manifest("classify", argv, params);

  ordered_json body;
  body["model"] = model->name();
  body["parabolic"] = verdict_json(cls.parabolic);
  body["parabolic"]["answer"] = liouville::answer_name(cls.parabolic_ans);
  body["stochastically_complete"] = verdict_json(cls.complete);
  body["stochastically_complete"]["answer"] = liouville::answer_name(cls.complete_ans);
  body["l1_liouville"] = verdict_json(cls.liouville);
  body["l1_liouville"]["answer"] = liouville::answer_name(cls.liouville_ans);
  body["decisive"] = cls.decisive();
  body["notes"] = cls.notes;

  std::ostringstream os;
  liouville::write_json_report(os, m, body);
  emit(os.str(), out);

  if (!csv_out.empty()) {
    // partial-sum trajectories of the three series, for plotting
    const std::int64_t N = std::min<std::int64_t>(n_max, 2000);
    std::vector<double> inv_db(static_cast<std::size_t>(N) + 1);
    for (std::int64_t k = 0; k <= N; ++k)
      inv_db[static_cast<std::size_t>(k)] = 1.0 / model->boundary_weight(k);
    std::vector<double> green(static_cast<std::size_t>(N) + 2, 0.0);
    for (std::int64_t r = N; r >= 0; --r)
      green[static_cast<std::size_t>(r)] =
          green[static_cast<std::size_t>(r) + 1] + inv_db[static_cast<std::size_t>(r)];
    std::vector<std::vector<std::string>> rows;
    const std::int64_t stride = std::max<std::int64_t>(1, N / 256);
    const char* names[3] = {"parabolic", "complete", "liouville"};
    for (int s = 0; s < 3; ++s) {
      liouville::CompensatedSum sum;
      for (std::int64_t k = 0; k <= N; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        double term = s == 0   ? inv_db[ku]
                      : s == 1 ? model->ball_measure(k) / model->boundary_weight(k)
                               : green[ku] * model->sphere_measure(k);
        sum.add(term);
        if (k % stride == 0 || k == N)
          rows.push_back({names[s], std::to_string(k), liouville::format_double(sum.value())});
      }
    }
    std::ostringstream cs;
    liouville::write_csv(cs, m, {"series", "k", "partial_sum"}, rows);
    liouville::write_text_file(csv_out, cs.str());
  }
  return cls.decisive() ? kOk : kInconclusive;
}

// ---- green / exit -------------------------------------------------------------

int cmd_green_or_exit(bool green, const std::vector<std::string>& argv,
                      const std::string& spec_arg, const std::string& x0,
                      std::int64_t R, const std::string& out) {
  GraphSpec spec = load_spec(spec_arg);
  const liouville::FiniteGraph g = liouville::materialize(spec, R);
  const liouville::SphereDecomposition dec = liouville::sphere_decompose(g);

  ordered_json params;
  params["spec"] = spec_arg;
  if (green) params["x0"] = x0.empty() ? g.label(g.root()) : x0;
  params["R"] = R;
  RunManifest m = liouville::make_manifest(green ? "green" : "exit", argv, params);

  std::vector<double> values;
  if (green) {
    const liouville::VertexId source = x0.empty() ? g.root() : g.vertex(x0);
    values = liouville::dirichlet_green(g, source, R).values;
  } else {
    values = liouville::mean_exit(g, R).values;
  }

  std::vector<std::vector<std::string>> rows;
  for (liouville::VertexId v : liouville::sorted_ball(g, dec, R))
    rows.push_back({g.label(v), std::to_string(dec.radius[v]),
                    liouville::format_double(values[v])});
  std::ostringstream os;
  liouville::write_csv(os, m, {"vertex_label", "radius", "value"}, rows);
  emit(os.str(), out);
  return kOk;
}

// ---- compare ------------------------------------------------------------------

ordered_json run_comparison(const GraphSpec& g_spec, const liouville::RadialModel& model,
                            const std::string& x0, std::int64_t R, bool& any_fail) {
  const liouville::DominanceReport dom =
      liouville::curvature_dominance(g_spec, model, x0, R);
  ordered_json body;
  body["dominance"] = dominance_json(dom);
  body["compatibility_identity_error"] = liouville::compatibility_check(model, R);

  const bool comparable = dom.direction == liouville::Dominance::Stronger ||
                          dom.direction == liouville::Dominance::Equal;
  if (comparable) {
    try {
      const auto tg = liouville::transplant_green_check(g_spec, model, x0, R, dom);
      body["transplant_green"] = transplant_green_json(tg);
      if (!tg.pass) any_fail = true;
    } catch (const SpecError& e) {
      body["transplant_green"] = std::string("skipped: ") + e.what();
    }
    try {
      const auto te = liouville::transplant_exit_check(g_spec, model, x0, R, dom);
      body["transplant_exit"] = transplant_exit_json(te);
      if (!te.pass) any_fail = true;
    } catch (const SpecError& e) {
      body["transplant_exit"] = std::string("skipped: ") + e.what();
    }
  } else {
    body["transplant_green"] = "skipped: transplant requires the Stronger or Equal direction";
    body["transplant_exit"] = "skipped: transplant requires the Stronger or Equal direction";
    if (dom.direction == liouville::Dominance::Neither) any_fail = true;
  }
  return body;
}

int cmd_compare(const std::vector<std::string>& argv, const std::string& g_arg,
                const std::string& model_arg, const std::string& x0, std::int64_t R,
                const std::string& out) {
  GraphSpec g_spec = load_spec(g_arg);
  GraphSpec model_spec = load_spec(model_arg);
  auto model = model_spec.as_model();
  if (!model) throw SpecError("--model '" + model_arg + "' is not a radial model");

  ordered_json params;
  params["g"] = g_arg;
  params["model"] = model_arg;
  params["x0"] = x0;
  params["R"] = R;
  RunManifest m = liouville::make_manifest("compare", argv, params);

  bool any_fail = false;
  ordered_json body = run_comparison(g_spec, *model, x0, R, any_fail);
  std::ostringstream os;
  liouville::write_json_report(os, m, body);
  emit(os.str(), out);
  return any_fail ? kCheckFailed : kOk;
}

// ---- reproduce ------------------------------------------------------------------

ordered_json reproduce_body(const std::string& name, std::int64_t R, bool& any_fail) {
  ordered_json body;
  body["pipeline"] = name;
  if (name == "glued-rescale") {
    liouville::GluedRescaleOptions opts;
    if (R > 0) {
      opts.schedule = {10, 20, R};
      std::sort(opts.schedule.begin(), opts.schedule.end());
      opts.schedule.erase(std::unique(opts.schedule.begin(), opts.schedule.end()),
                          opts.schedule.end());
      opts.table_radius = std::max<std::int64_t>(opts.schedule.back() + 1, 2);
      opts.preservation_radius = std::min<std::int64_t>(20, std::max<std::int64_t>(R, 2));
    }
    opts.volume_certificate = liouville::ConstantMinorant{1.0, 0};  // m(S_r) = 1
    const auto rep = liouville::build_glued_rescale(
        liouville::spec_preset("halfline_unit"),
        *liouville::spec_preset("model_pow3").as_model(), opts);
    body["side_b_complete"] = verdict_json(rep.side_b_complete);
    body["table_radius"] = rep.table_radius;
    body["green_at_root"] = rep.green_at_root;
    body["preservation"] = preservation_json(rep.preservation);
    body["growth"] = growth_json(rep.growth);
    body["notes"] = rep.notes;
    if (!rep.preservation.pass) any_fail = true;
  } else if (name == "antitree-violator") {
    liouville::AntitreeViolatorOptions opts;
    if (R > 0) opts.sweep_radius = R + 1;
    const auto rep = liouville::build_antitree_violator(
        liouville::spec_preset("antitree_cubed"), opts);
    body["omori_yau"] = omori_yau_json(rep.omori_yau);
    body["growth"] = growth_json(rep.growth);
    body["notes"] = rep.notes;
    if (!rep.omori_yau.pass) any_fail = true;
  } else if (name == "comparison-pair") {
    const liouville::ComparisonPair pair = liouville::comparison_pair();
    const auto model = *pair.model.as_model();
    const std::int64_t radius = R > 0 ? R : 60;
    body["comparison"] = run_comparison(pair.halfline, model, "", radius, any_fail);
    const liouville::Classification cls = liouville::classify(model);
    ordered_json mc;
    mc["stochastically_complete"] = verdict_json(cls.complete);
    mc["stochastically_complete"]["answer"] = liouville::answer_name(cls.complete_ans);
    mc["l1_liouville"] = verdict_json(cls.liouville);
    mc["l1_liouville"]["answer"] = liouville::answer_name(cls.liouville_ans);
    body["model_classification"] = mc;
    if (cls.complete_ans != liouville::Classification::Answer::No ||
        cls.liouville_ans != liouville::Classification::Answer::No)
      any_fail = true;
    body["conclusion"] =
        "the compared graph dominates the model's curvature growth, so it inherits "
        "non-L1-Liouville behavior";
  } else {
    throw SpecError("unknown reproduction '" + name +
                    "' (choose glued-rescale, antitree-violator, comparison-pair)");
  }
  return body;
}

int cmd_reproduce(const std::vector<std::string>& argv, const std::string& name,
                  std::int64_t R, const std::string& golden_path,
                  const std::string& write_golden_path, const std::string& out) {
  ordered_json params;
  params["example"] = name;
  if (R > 0) params["R"] = R;
  if (!golden_path.empty()) params["golden"] = golden_path;
  RunManifest m = liouville::make_manifest("reproduce", argv, params);

  bool any_fail = false;
  ordered_json body = reproduce_body(name, R, any_fail);

  if (!write_golden_path.empty()) {
    ordered_json tols;
    tols["default"] = 1e-9;
    liouville::write_text_file(write_golden_path,
                               liouville::make_golden(tols, body).dump(2) + "\n");
  }
  ordered_json golden_block;
  if (!golden_path.empty()) {
    const auto cmp = liouville::compare_golden(liouville::load_json_file(golden_path), body);
    golden_block["pass"] = cmp.pass;
    golden_block["mismatches"] = cmp.mismatches;
    if (!cmp.pass) any_fail = true;
  }
  if (!golden_block.is_null()) body["golden"] = golden_block;

  std::ostringstream os;
  liouville::write_json_report(os, m, body);
  emit(os.str(), out);
  return any_fail ? kCheckFailed : kOk;
}

// ---- ends / evidence ------------------------------------------------------------

int cmd_ends(const std::vector<std::string>& argv, const std::string& spec_arg,
             const std::string& k_arg, std::int64_t R, std::int64_t R2,
             const std::string& out) {
  GraphSpec spec = load_spec(spec_arg);
  const std::vector<std::string> K = split_commas(k_arg);
  if (R2 <= 0) R2 = R + 10;

  ordered_json params;
  params["spec"] = spec_arg;
  params["K"] = K;
  params["R"] = R;
  params["R2"] = R2;
  RunManifest m = liouville::make_manifest("ends", argv, params);

  const liouville::EndsReport rep = liouville::ends(spec, K, R, R2);
  const double additivity = liouville::end_additivity_check(spec, K, R);

  ordered_json body;
  body["component_count"] = rep.components.size();
  std::size_t unbounded = 0;
  for (bool u : rep.unbounded) unbounded += u ? 1 : 0;
  body["unbounded_count"] = unbounded;
  body["stable"] = rep.stable;
  body["components"] = ordered_json::array();
  for (std::size_t i = 0; i < rep.components.size(); ++i) {
    ordered_json c;
    c["size"] = rep.components[i].size();
    c["unbounded"] = static_cast<bool>(rep.unbounded[i]);
    ordered_json sample = ordered_json::array();
    for (std::size_t k = 0; k < rep.components[i].size() && k < 25; ++k)
      sample.push_back(rep.components[i][k]);
    c["labels"] = sample;
    c["truncated"] = rep.components[i].size() > 25;
    body["components"].push_back(c);
  }
  body["exit_additivity_max_discrepancy"] = additivity;
  body["detail"] = rep.detail;

  std::ostringstream os;
  liouville::write_json_report(os, m, body);
  emit(os.str(), out);
  if (additivity > 1e-10) return kCheckFailed;
  return rep.stable ? kOk : kInconclusive;
}

int cmd_evidence(const std::vector<std::string>& argv, const std::string& spec_arg,
                 const std::string& x0, std::int64_t R_max, const std::string& out) {
  GraphSpec spec = load_spec(spec_arg);
  ordered_json params;
  params["spec"] = spec_arg;
  params["x0"] = x0;
  params["R_max"] = R_max;
  RunManifest m = liouville::make_manifest("evidence", argv, params);

  const liouville::EvidenceReport rep = liouville::l1_evidence_general(spec, x0, R_max);
  ordered_json body;
  body["radii"] = rep.radii;
  body["sums"] = rep.sums;
  using T = liouville::EvidenceReport::Trend;
  body["trend"] = rep.trend == T::Growing    ? "Growing"
                  : rep.trend == T::Saturating ? "Saturating"
                                               : "Mixed";
  body["exponent"] = rep.exponent;
  body["fit"] = rep.fit;
  std::ostringstream os;
  liouville::write_json_report(os, m, body);
  emit(os.str(), out);
  return kOk;
}

// ---- simulate --------------------------------------------------------------------

int cmd_simulate(const std::vector<std::string>& argv, const std::string& spec_arg,
                 const std::string& start, const std::string& absorb, std::int64_t n,
                 std::uint64_t seed, double t_max, std::int64_t R_arg,
                 double survival_t, const std::string& out) {
  GraphSpec spec = load_spec(spec_arg);

  std::int64_t sphere_radius = -1;
  if (absorb.size() >= 2 && absorb[0] == 'S' &&
      absorb.find_first_not_of("0123456789", 1) == std::string::npos)
    sphere_radius = std::stoll(absorb.substr(1));

  std::int64_t R = R_arg;
  if (R <= 0) {
    if (sphere_radius < 0)
      throw SpecError("--R is required when --absorb is a label list");
    R = std::max<std::int64_t>(sphere_radius, 1);
  }
  const liouville::FiniteGraph g = liouville::materialize(spec, R);
  const liouville::SphereDecomposition dec = liouville::sphere_decompose(g);

  liouville::WalkConfig cfg;
  cfg.start = start;
  cfg.n_samples = n;
  cfg.seed = seed;
  if (t_max > 0) cfg.t_max = t_max;
  if (sphere_radius >= 0) {
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      if (dec.radius[v] >= sphere_radius) cfg.absorbing.push_back(g.label(v));
    if (cfg.absorbing.empty())
      throw SpecError("sphere S" + std::to_string(sphere_radius) + " is empty in B_" +
                      std::to_string(R));
  } else {
    cfg.absorbing = split_commas(absorb);
  }

  ordered_json params;
  params["spec"] = spec_arg;
  params["start"] = start;
  params["absorb"] = absorb;
  params["n"] = n;
  params["seed"] = seed;
  params["t_max"] = cfg.t_max == std::numeric_limits<double>::infinity()
                        ? ordered_json("inf")
                        : ordered_json(cfg.t_max);
  params["R"] = R;
  if (survival_t >= 0) params["survival_t"] = survival_t;
  RunManifest m = liouville::make_manifest("simulate", argv, params);

  const liouville::WalkStats stats = liouville::simulate_exit(g, cfg);
  ordered_json body;
  body["mean"] = stats.mean;
  body["variance"] = stats.variance;
  body["std_error"] = stats.std_error;
  body["count_absorbed"] = stats.count_absorbed;
  body["count_censored"] = stats.count_censored;

  if (survival_t >= 0) {
    if (sphere_radius < 0)
      throw SpecError("--survival-t needs --absorb S<k> (a sphere) to define the ball");
    const auto est = liouville::survival_probability(g, start, sphere_radius, survival_t,
                                                     n, seed);
    ordered_json s;
    s["t"] = survival_t;
    s["probability"] = est.probability;
    s["std_error"] = est.std_error;
    body["survival"] = s;
  }

  std::ostringstream os;
  liouville::write_json_report(os, m, body);
  emit(os.str(), out);
  return kOk;
}

// ---- rerun -----------------------------------------------------------------------

int cmd_rerun(const std::string& from, int depth) {
  std::ifstream in(from);
  if (!in) throw SpecError("cannot open '" + from + "'");
  std::string first_line;
  std::getline(in, first_line);
  ordered_json manifest;
  const std::string csv_prefix = "# manifest: ";
  if (first_line.rfind(csv_prefix, 0) == 0) {
    manifest = ordered_json::parse(first_line.substr(csv_prefix.size()));
  } else {
    in.seekg(0);
    ordered_json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("'" + from + "' is neither a CSV with a manifest line nor JSON: " +
                      e.what());
    }
    if (!doc.contains("manifest"))
      throw SpecError("'" + from + "' has no manifest");
    manifest = doc["manifest"];
  }
  if (!manifest.contains("argv") || !manifest.contains("timestamp"))
    throw SpecError("manifest in '" + from + "' is missing argv or timestamp");
  std::vector<std::string> argv = manifest["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "rerun")
    throw SpecError("refusing to rerun a rerun");
  setenv("LIOUVILLE_LAB_TIMESTAMP", manifest["timestamp"].get<std::string>().c_str(), 1);
  return run_cli(argv, depth + 1);
}

// ---- dispatcher -------------------------------------------------------------------

int run_cli(const std::vector<std::string>& raw_args, int depth) {
  if (depth > 2) throw SpecError("rerun nesting too deep");

  CLI::App app{"stochastic properties of infinite weighted graphs"};
  app.require_subcommand(1);
#ifdef LIOUVILLE_LAB_VERSION
  app.set_version_flag("--version", std::string(LIOUVILLE_LAB_VERSION));
#endif

  std::string spec_arg, x0, out, csv_out, g_arg, model_arg, k_arg, absorb, start;
  std::string golden_path, write_golden_path, repro_name, from_path;
  std::int64_t R = 0, R2 = 0, n_max = 100000, n_samples = 100000, R_max = 30;
  std::uint64_t seed = 1;
  double t_max = 0.0, survival_t = -1.0;

  CLI::App* c_classify = app.add_subcommand("classify", "three-series classification of a radial model");
  c_classify->add_option("--spec", spec_arg, "spec file or preset")->required();
  c_classify->add_option("--Nmax", n_max, "last series index scanned")->check(CLI::PositiveNumber);
  c_classify->add_option("--out", out, "write the JSON report here (default stdout)");
  c_classify->add_option("--csv", csv_out, "also write partial-sum trajectories CSV");

  CLI::App* c_green = app.add_subcommand("green", "Dirichlet Green kernel on B_R as CSV");
  c_green->add_option("--spec", spec_arg)->required();
  c_green->add_option("--x0", x0, "source vertex label (default: root)");
  c_green->add_option("--R", R, "ball radius")->required()->check(CLI::PositiveNumber);
  c_green->add_option("--out", out);

  CLI::App* c_exit = app.add_subcommand("exit", "mean exit time from B_R as CSV");
  c_exit->add_option("--spec", spec_arg)->required();
  c_exit->add_option("--R", R)->required()->check(CLI::PositiveNumber);
  c_exit->add_option("--out", out);

  CLI::App* c_compare = app.add_subcommand("compare", "curvature dominance + transplant checks");
  c_compare->add_option("--g", g_arg, "graph spec")->required();
  c_compare->add_option("--model", model_arg, "radial model spec")->required();
  c_compare->add_option("--x0", x0, "center label in --g (default: root)");
  c_compare->add_option("--R", R)->required()->check(CLI::PositiveNumber);
  c_compare->add_option("--out", out);

  CLI::App* c_repro = app.add_subcommand("reproduce", "run a pinned pipeline, optionally against a golden file");
  c_repro->add_option("name", repro_name, "glued-rescale | antitree-violator | comparison-pair")->required();
  c_repro->add_option("--R", R, "pipeline radius override")->check(CLI::PositiveNumber);
  c_repro->add_option("--golden", golden_path, "compare against this golden file");
  c_repro->add_option("--write-golden", write_golden_path, "write a fresh golden file");
  c_repro->add_option("--out", out);

  CLI::App* c_ends = app.add_subcommand("ends", "components of B_R minus K and their boundedness");
  c_ends->add_option("--spec", spec_arg)->required();
  c_ends->add_option("--K", k_arg, "comma-separated vertex labels")->required();
  c_ends->add_option("--R", R)->required()->check(CLI::PositiveNumber);
  c_ends->add_option("--R2", R2, "stability re-check radius (default R+10)");
  c_ends->add_option("--out", out);

  CLI::App* c_evidence = app.add_subcommand("evidence", "weighted Green partial sums across an exhaustion");
  c_evidence->add_option("--spec", spec_arg)->required();
  c_evidence->add_option("--x0", x0, "source label (default: root)");
  c_evidence->add_option("--Rmax", R_max)->check(CLI::PositiveNumber);
  c_evidence->add_option("--out", out);

  CLI::App* c_sim = app.add_subcommand("simulate", "continuous-time walk exit statistics");
  c_sim->add_option("--spec", spec_arg)->required();
  c_sim->add_option("--start", start, "start vertex label")->required();
  c_sim->add_option("--absorb", absorb, "S<k> for the sphere of radius k, or labels")->required();
  c_sim->add_option("--n", n_samples, "sample count")->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", seed);
  c_sim->add_option("--tmax", t_max, "censor walks at this time (default: none)");
  c_sim->add_option("--R", R, "materialization radius (default: from S<k>)");
  c_sim->add_option("--survival-t", survival_t, "also estimate survival in B_k at this time");
  c_sim->add_option("--out", out);

  CLI::App* c_rerun = app.add_subcommand("rerun", "re-execute the manifest recorded in an output file");
  c_rerun->add_option("--from", from_path, "output file produced by this tool")->required();

  std::vector<std::string> args(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    // help/version exit 0; anything else is a usage error
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (app.got_subcommand(c_classify))
    return cmd_classify(raw_args, spec_arg, n_max, out, csv_out);
  if (app.got_subcommand(c_green))
    return cmd_green_or_exit(true, raw_args, spec_arg, x0, R, out);
  if (app.got_subcommand(c_exit))
    return cmd_green_or_exit(false, raw_args, spec_arg, x0, R, out);
  if (app.got_subcommand(c_compare))
    return cmd_compare(raw_args, g_arg, model_arg, x0, R, out);
  if (app.got_subcommand(c_repro))
    return cmd_reproduce(raw_args, repro_name, R, golden_path, write_golden_path, out);
  if (app.got_subcommand(c_ends))
    return cmd_ends(raw_args, spec_arg, k_arg, R, R2, out);
  if (app.got_subcommand(c_evidence))
    return cmd_evidence(raw_args, spec_arg, x0, R_max, out);
  if (app.got_subcommand(c_sim))
    return cmd_simulate(raw_args, spec_arg, start, absorb, n_samples, seed, t_max, R,
                        survival_t, out);
  if (app.got_subcommand(c_rerun)) return cmd_rerun(from_path, depth);
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(args, 0);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kUsage;
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}
