// Acceptance gate: twelve independent criteria, one PASS/FAIL line each.
// The first broken requirement inside a criterion prints [FAIL] file:line and
// fails that criterion; any failed criterion makes the binary exit 1.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../cpp/test_util.hpp"
#include "liouville/comparison.hpp"
#include "liouville/counterexamples.hpp"
#include "liouville/dirichlet.hpp"
#include "liouville/generators.hpp"
#include "liouville/graph.hpp"
#include "liouville/model_analysis.hpp"
#include "liouville/subgraph.hpp"
#include "liouville/walker.hpp"

using namespace liouville;

#define REQUIRE(cond)                                                       \
  do {                                                                      \
    if (!(cond)) {                                                          \
      std::fprintf(stderr, "[FAIL] %s:%d %s\n", __FILE__, __LINE__, #cond); \
      return false;                                                         \
    }                                                                       \
  } while (0)

namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// 1. hand-solved half-line ball: green row and exit times
bool hand_oracle() {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 2);
  GreenTable green = dirichlet_green(g, g.root(), 2);
  REQUIRE(near(green.value("0"), 2.0, 1e-10));
  REQUIRE(near(green.value("1"), 1.0, 1e-10));
  REQUIRE(near(green.value("2"), 0.0, 1e-10));
  ExitTable exit_t = mean_exit(g, 2);
  REQUIRE(near(exit_t.value("0"), 3.0, 1e-10));
  REQUIRE(near(exit_t.value("1"), 2.0, 1e-10));
  REQUIRE(near(exit_t.value("2"), 0.0, 1e-10));
  return true;
}

// 2. E_R(x) = sum_y g_R(x,y) m(y) on random weighted graphs, all radii <= 8
bool representation_identity() {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FiniteGraph g = llab_test::random_graph(seed);
    SphereDecomposition dec = sphere_decompose(g);
    const std::int64_t r_top = std::min<std::int64_t>(8, dec.max_radius());
    for (std::int64_t R = 1; R <= r_top; ++R) {
      ExitTable exit_t = mean_exit(g, R);
      for (VertexId x = 0; x < g.vertex_count(); ++x) {
        if (dec.radius[x] >= R) continue;
        GreenTable green = dirichlet_green(g, x, R);
        double sum = 0.0;
        for (VertexId y = 0; y < g.vertex_count(); ++y)
          sum += green.values[y] * g.measure(y);
        REQUIRE(near(sum, exit_t.values[x],
                     1e-10 * std::max(1.0, std::fabs(exit_t.values[x]))));
      }
    }
  }
  return true;
}

// 3. geometric model: solver matches the closed form, limit g(0) = 2
bool model_closed_form() {
  GraphSpec spec = spec_preset("model_geom2");
  for (std::int64_t R = 1; R <= 30; ++R) {
    FiniteGraph g = materialize(spec, R);
    GreenTable green = dirichlet_green(g, g.root(), R);
    for (std::int64_t r = 0; r < R; ++r) {
      double expect = 0.0;
      for (std::int64_t k = R - 1; k >= r; --k) expect += std::pow(2.0, -double(k));
      REQUIRE(near(green.value(std::to_string(r)), expect, 1e-9));
    }
  }
  SeriesVerdict limit = model_green(*spec.as_model(), 0);
  REQUIRE(limit.kind == SeriesVerdict::Kind::ConvergesTo);
  REQUIRE(std::fabs(limit.value - 2.0) <= limit.tail_bound + 1e-12);
  return true;
}

// 4. reindexing identity at every truncation; volume and green-mass verdicts agree
bool reindexing_identity() {
  const char* names[10] = {"halfline_unit",  "model_geom2",  "model_geom32",
                           "model_pow2",     "model_pow3",   "model_poly4",
                           "antitree_cubed", "antitree_squared", "cmp_model",
                           "cmp_halfline"};
  for (const char* name : names) {
    RadialModel model = *spec_preset(name).as_model();
    for (std::int64_t R = 1; R <= 100; ++R)
      REQUIRE(reindex_identity_check(model, R) <= 1e-12);
    Classification cls = classify(model);
    using A = Classification::Answer;
    if (cls.complete_ans != A::Unknown && cls.liouville_ans != A::Unknown)
      REQUIRE(cls.complete_ans == cls.liouville_ans);
  }
  return true;
}

// 5. classifier sanity: quadratic vs cubic growth, exact antitree ratio sum
bool classifier_sanity() {
  using A = Classification::Answer;
  Classification pow2 = classify(*spec_preset("model_pow2").as_model());
  REQUIRE(pow2.complete_ans == A::Yes);
  Classification pow3 = classify(*spec_preset("model_pow3").as_model());
  REQUIRE(pow3.complete_ans == A::No);
  REQUIRE(pow3.liouville_ans == A::No);
  Classification cubed = classify(*spec_preset("antitree_cubed").as_model());
  REQUIRE(cubed.complete_ans == A::No);
  REQUIRE(cubed.complete.kind == SeriesVerdict::Kind::ConvergesTo);
  REQUIRE(near(cubed.complete.value, 0.25, 1e-12));
  return true;
}

// 6. the comparison pair: curvature inequalities, certified series, transplants
bool comparison_pair_checks() {
  ComparisonPair pair = comparison_pair();
  RadialModel model = *pair.model.as_model();
  RadialModel half = *pair.halfline.as_model();
  for (std::int64_t r = 1; r <= 10000; ++r) {
    const double km = model.k_minus(r);
    REQUIRE(std::fabs(half.k_minus(r) - km) <= 1e-12 * std::max(1.0, std::fabs(km)));
    REQUIRE(model.k_plus(r) <= half.k_plus(r));
    REQUIRE(model.sphere_measure(r) >= half.sphere_measure(r));
  }
  Classification cls = classify(model);
  REQUIRE(cls.parabolic.kind == SeriesVerdict::Kind::ConvergesTo);
  REQUIRE(cls.liouville.kind == SeriesVerdict::Kind::ConvergesTo);

  DominanceReport dom = curvature_dominance(pair.halfline, model, "", 60);
  REQUIRE(dom.direction == Dominance::Stronger);
  REQUIRE(dom.R0 == 1);
  TransplantGreenReport tg = transplant_green_check(pair.halfline, model, "", 60, dom);
  REQUIRE(tg.min_slack_v >= -1e-10);
  REQUIRE(tg.pass);
  TransplantExitReport te = transplant_exit_check(pair.halfline, model, "", 60, dom);
  REQUIRE(te.min_slack_laplacian >= -1e-10);  // Delta F_R >= 1 - 1e-10
  REQUIRE(te.pass);
  return true;
}

// 7. maximum-principle violator on the cubed antitree, swept through B_50
bool violator_certification() {
  AntitreeViolatorReport rep = build_antitree_violator(spec_preset("antitree_cubed"), {});
  const OmoriYauReport& oy = rep.omori_yau;
  REQUIRE(oy.epsilon == 0.3);
  REQUIRE(oy.n == 2);
  REQUIRE(near(oy.alpha, 1.0 / 6.0, 1e-12));
  REQUIRE(near(oy.f_star, 0.25, 1e-12));
  REQUIRE(oy.checked_radius == 50);
  REQUIRE(oy.omega_size == 1758225);  // sum_{r=1}^{50} ((r+1)^3 - 1)
  REQUIRE(oy.pass);
  REQUIRE(oy.max_laplacian_on_omega <= -0.1 + 1e-10);
  for (const L1GrowthRow& row : rep.growth.rows) REQUIRE(row.margin >= 0.0);
  return true;
}

// 8. glued rescale: green preserved at R = 20, weighted sums beat the volume
bool glued_rescale_growth() {
  GluedRescaleOptions opts;
  opts.volume_certificate = ConstantMinorant{1.0, 0};
  GluedRescaleReport rep = build_glued_rescale(spec_preset("halfline_unit"),
                                               *spec_preset("model_pow3").as_model(), opts);
  REQUIRE(rep.preservation.radius == 20);
  REQUIRE(rep.preservation.max_abs_diff <= 1e-9);
  REQUIRE(rep.preservation.pass);
  REQUIRE(rep.growth.rows.size() == 3);
  const std::int64_t radii[3] = {10, 20, 40};
  for (int i = 0; i < 3; ++i) {
    REQUIRE(rep.growth.rows[i].R == radii[i]);
    REQUIRE(rep.growth.rows[i].minorant == double(radii[i] + 1));  // |V_1 cap B_R|
    REQUIRE(rep.growth.rows[i].partial_sum >= rep.growth.rows[i].minorant);
  }
  return true;
}

// 9. Dirichlet Green functions ignore random measure rescales
bool conformal_invariance() {
  GraphSpec base = spec_preset("glued_halflines");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto field = [seed](const std::string& label) {
      llab_test::Rng rng{seed * 1000003ULL + std::hash<std::string>{}(label)};
      return 1.0 + 99.0 * rng.uniform();
    };
    GraphSpec scaled = GraphSpec::conformal(base, field, "random measure field");
    GreenPreservationReport rep = check_green_preservation(base, scaled, "a:0", 12);
    REQUIRE(rep.max_abs_diff <= 1e-9);
    REQUIRE(rep.pass);
  }
  return true;
}

// 10. subgraph problems: representation identity, ambient domination, ends
bool subgraph_suite() {
  SubgraphProblem tail;
  tail.ambient = spec_preset("halfline_unit");
  tail.membership = [](const std::string& label) { return label != "0"; };
  SubgraphProblem side;
  side.ambient = spec_preset("glued_halflines");
  side.membership = [](const std::string& label) { return label.rfind("a:", 0) == 0; };

  struct Fixture {
    const SubgraphProblem* p;
    std::vector<std::string> interior;
  };
  Fixture fixtures[2] = {{&tail, {"2", "3", "4", "5"}},
                         {&side, {"a:1", "a:2", "a:3", "a:4", "a:5"}}};
  for (const Fixture& f : fixtures) {
    const std::int64_t R = 6;
    ExitTable exit_t = dirichlet_exit(*f.p, R);
    for (const std::string& x : f.interior) {
      GreenTable green = dirichlet_green_subgraph(*f.p, x, R);
      double sum = 0.0;
      for (VertexId y = 0; y < green.graph.vertex_count(); ++y)
        sum += green.values[y] * green.graph.measure(y);
      REQUIRE(near(sum, exit_t.value(x), 1e-10 * std::max(1.0, exit_t.value(x))));
    }
    REQUIRE(domination_check(*f.p, R) >= -1e-10);
  }

  std::vector<std::string> hub = {"a:0"};
  EndsReport two = ends(spec_preset("glued_halflines"), hub, 20, 30);
  REQUIRE(two.components.size() == 2);
  REQUIRE(two.stable);
  REQUIRE(end_additivity_check(spec_preset("glued_halflines"), hub, 15) <= 1e-10);

  std::vector<std::string> ball1;
  ball1.push_back("0:0");
  for (int j = 0; j < 8; ++j) ball1.push_back("1:" + std::to_string(j));
  EndsReport one = ends(spec_preset("antitree_cubed"), ball1, 6, 8);
  std::int64_t unbounded = 0;
  for (bool u : one.unbounded) unbounded += u ? 1 : 0;
  REQUIRE(unbounded == 1);
  REQUIRE(one.stable);

  std::vector<std::string> center = {"a:a:0"};
  EndsReport three = ends(spec_preset("threeray_hub"), center, 12, 20);
  REQUIRE(three.components.size() == 3);
  REQUIRE(three.stable);
  REQUIRE(end_additivity_check(spec_preset("threeray_hub"), center, 12) <= 1e-10);
  return true;
}

// 11. random walks: exit mean, survival mass, bit-identical reruns
bool monte_carlo() {
  FiniteGraph ball2 = materialize(spec_preset("halfline_unit"), 2);
  WalkConfig cfg;
  cfg.start = "0";
  cfg.absorbing = {"2"};
  cfg.n_samples = 100000;
  cfg.seed = 424242;
  WalkStats stats = simulate_exit(ball2, cfg);
  REQUIRE(stats.count_absorbed == 100000);
  REQUIRE(stats.count_censored == 0);
  REQUIRE(stats.std_error > 0.0);
  REQUIRE(std::fabs(stats.mean - 3.0) <= 4.0 * stats.std_error);
  WalkStats rerun = simulate_exit(ball2, cfg);
  REQUIRE(rerun.mean == stats.mean);
  REQUIRE(rerun.variance == stats.variance);

  FiniteGraph ball1 = materialize(spec_preset("halfline_unit"), 1);
  SurvivalEstimate surv = survival_probability(ball1, "0", 1, 1.0, 100000, 424242);
  const double p = std::exp(-1.0);
  REQUIRE(surv.std_error > 0.0);
  REQUIRE(std::fabs(surv.probability - p) <= 4.0 * surv.std_error);
  SurvivalEstimate again = survival_probability(ball1, "0", 1, 1.0, 100000, 424242);
  REQUIRE(again.probability == surv.probability);
  return true;
}

// 12. heat kernel: exact unit-ball decay, integrated green, mass conservation
bool heat_cross_check() {
  FiniteGraph ball1 = materialize(spec_preset("halfline_unit"), 1);
  std::vector<double> times;
  for (double t = 0.0; t <= 10.0 + 1e-9; t += 0.5) times.push_back(t);
  HeatCurve curve = heat_kernel(ball1, ball1.root(), 1, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    REQUIRE(near(curve.kernel[i][ball1.root()], std::exp(-times[i]), 1e-6));

  FiniteGraph ball3 = materialize(spec_preset("halfline_unit"), 3);
  std::vector<double> grid;
  for (double t = 0.0; t < 2.0; t += 0.01) grid.push_back(t);
  for (double t = 2.0; t <= 80.0 + 1e-9; t += 0.1) grid.push_back(t);
  HeatCurve long_curve = heat_kernel(ball3, ball3.root(), 3, grid);
  GreenTable integrated = green_via_time_integration(long_curve);
  GreenTable direct = dirichlet_green(ball3, ball3.root(), 3);
  for (VertexId v = 0; v < ball3.vertex_count(); ++v)
    REQUIRE(near(integrated.values[v], direct.values[v], 1e-4));

  for (std::uint64_t seed = 31; seed <= 40; ++seed) {
    FiniteGraph g = llab_test::random_graph(seed);
    const std::int64_t R = sphere_decompose(g).max_radius();
    std::vector<double> ts = {0.0, 0.4, 1.2, 3.0};
    HeatCurve mass_curve = heat_kernel(g, g.root(), R, ts);
    double prev = mass_curve.mass_at(0);
    REQUIRE(prev <= 1.0 + 1e-8);
    for (std::size_t i = 1; i < ts.size(); ++i) {
      const double cur = mass_curve.mass_at(i);
      REQUIRE(cur <= prev * (1.0 + 1e-8));
      REQUIRE(cur <= 1.0 + 1e-8);
      prev = cur;
    }
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)();
  };
  const Criterion criteria[] = {
      {"half-line hand oracle", hand_oracle},
      {"exit time equals weighted green mass", representation_identity},
      {"geometric model closed form", model_closed_form},
      {"reindexing identity and verdict agreement", reindexing_identity},
      {"classifier sanity", classifier_sanity},
      {"curvature comparison pair", comparison_pair_checks},
      {"maximum-principle violator", violator_certification},
      {"glued rescale growth", glued_rescale_growth},
      {"conformal green invariance", conformal_invariance},
      {"subgraph exits and ends", subgraph_suite},
      {"monte carlo cross-check", monte_carlo},
      {"heat kernel cross-check", heat_cross_check},
  };
  bool all_ok = true;
  int index = 0;
  for (const Criterion& c : criteria) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "[FAIL] %s threw: %s\n", c.name, e.what());
    }
    std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", ++index, c.name);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
