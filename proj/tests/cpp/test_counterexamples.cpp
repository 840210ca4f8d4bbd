#include <cmath>
#include <vector>

#include "doctest.h"
#include "liouville/counterexamples.hpp"
#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"

using namespace liouville;

TEST_CASE("glued rescale: green preserved, weighted sums track the volume") {
  GluedRescaleOptions opts;
  opts.volume_certificate = ConstantMinorant{1.0, 0};
  GluedRescaleReport rep = build_glued_rescale(spec_preset("halfline_unit"),
                                               *spec_preset("model_pow3").as_model(), opts);
  CHECK(rep.table_radius == 41);
  CHECK(rep.preservation.pass);
  CHECK(rep.preservation.max_abs_diff <= 1e-9);
  CHECK(rep.side_b_complete.kind == SeriesVerdict::Kind::ConvergesTo);

  // independent resistor reduction: the whole second side plus bridge acts as
  // one series resistance c = 1 + sum_k 1/dB(k), so g_T(root) = T c / (T + c)
  double c = 1.0;
  for (std::int64_t k = 0; k <= rep.table_radius - 2; ++k)
    c += 1.0 / std::pow(double(k + 1), 3.0);
  const double expected = double(rep.table_radius) * c / (double(rep.table_radius) + c);
  CHECK(std::fabs(rep.green_at_root - expected) <= 1e-9);

  REQUIRE(rep.growth.rows.size() == 3);
  const std::int64_t want_R[3] = {10, 20, 40};
  for (int i = 0; i < 3; ++i) {
    CHECK(rep.growth.rows[i].R == want_R[i]);
    CHECK(rep.growth.rows[i].minorant == doctest::Approx(double(want_R[i] + 1)));
    CHECK(rep.growth.rows[i].partial_sum >= rep.growth.rows[i].minorant);
    CHECK(rep.growth.rows[i].margin > 0.0);
  }
}

TEST_CASE("glued rescale refuses a complete second side") {
  GluedRescaleOptions opts;
  opts.volume_certificate = ConstantMinorant{1.0, 0};
  CHECK_THROWS_AS(build_glued_rescale(spec_preset("halfline_unit"),
                                      *spec_preset("model_pow2").as_model(), opts),
                  SpecError);
}

TEST_CASE("rescale without blow-up certifies nothing but stays consistent") {
  GraphSpec flat = GraphSpec::conformal(spec_preset("halfline_unit"),
                                        [](const std::string&) { return 1.0; }, "identity");
  std::vector<std::int64_t> schedule = {4, 8};
  L1GrowthReport rep = certify_l1_after_rescale(flat, "0", schedule);
  CHECK(rep.solve_radius == 9);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].minorant == 0.0);
  CHECK(rep.rows[1].partial_sum > rep.rows[0].partial_sum);
}

TEST_CASE("certify requires a conformal spec") {
  std::vector<std::int64_t> schedule = {4};
  CHECK_THROWS_AS(certify_l1_after_rescale(spec_preset("halfline_unit"), "0", schedule),
                  SpecError);
}

TEST_CASE("green preservation detects measure-coupled solves") {
  GraphSpec base = spec_preset("glued_halflines");
  GraphSpec scaled = GraphSpec::conformal(
      base, [](const std::string& l) { return l[0] == 'a' ? 25.0 : 1.0; }, "one side");
  GreenPreservationReport rep = check_green_preservation(base, scaled, "a:0", 12);
  CHECK(rep.pass);
  CHECK(rep.max_abs_diff <= 1e-9);
}

TEST_CASE("two-track quotient reproduces per-vertex antitree green values") {
  auto model = *spec_preset("antitree_cubed").as_model();
  const std::int64_t R = 6;
  FiniteGraph quotient = antitree_ray_quotient(model, R);
  GreenTable qg = dirichlet_green(quotient, quotient.vertex("ray:0"), R);

  FiniteGraph full = build_antitree([](std::int64_t r) { return (r + 1) * (r + 1) * (r + 1); }, R);
  GreenTable fg = dirichlet_green(full, full.vertex("0:0"), R);
  SphereDecomposition dec = sphere_decompose(full);
  for (std::int64_t r = 0; r < R; ++r) {
    const double from_full = fg.values[dec.spheres[r][0]];
    CHECK(std::fabs(qg.value("ray:" + std::to_string(r)) - from_full) <= 1e-10);
    if (r >= 1)
      CHECK(std::fabs(qg.value("rest:" + std::to_string(r)) - from_full) <= 1e-10);
  }
}

TEST_CASE("antitree violator: canonical parameters verify") {
  AntitreeViolatorOptions opts;
  opts.sweep_radius = 21;  // keep the unit run light; acceptance covers B_50
  AntitreeViolatorReport rep = build_antitree_violator(spec_preset("antitree_cubed"), opts);
  const OmoriYauReport& oy = rep.omori_yau;
  CHECK(oy.epsilon == doctest::Approx(0.3));
  CHECK(oy.n == 2);
  CHECK(std::fabs(oy.alpha - 1.0 / 6.0) <= 1e-12);
  CHECK(std::fabs(oy.f_star - 0.25) <= 1e-12);
  CHECK(oy.pass);
  CHECK(oy.max_laplacian_on_omega <= oy.bound + 1e-10);
  CHECK(oy.bound == doctest::Approx(-0.1));
  CHECK(oy.cond_epsilon_small);
  CHECK(oy.cond_increments);
  CHECK(oy.cond_tail);
  // superlevel set within B_20, ray and root excluded
  std::int64_t expected = 0;
  for (std::int64_t r = 1; r <= 20; ++r) expected += (r + 1) * (r + 1) * (r + 1) - 1;
  CHECK(oy.omega_size == expected);

  REQUIRE(rep.growth.rows.size() == 3);
  for (const auto& row : rep.growth.rows) {
    CHECK(row.minorant == doctest::Approx(double(row.R + 1)));
    CHECK(row.partial_sum >= row.minorant);
  }
}

TEST_CASE("violator parameter search agrees with the canonical choice's n") {
  AntitreeViolatorOptions opts;
  opts.sweep_radius = 11;
  opts.epsilon.reset();
  opts.n.reset();
  AntitreeViolatorReport rep = build_antitree_violator(spec_preset("antitree_cubed"), opts);
  CHECK(rep.omori_yau.n == 2);
  CHECK(rep.omori_yau.pass);
}

TEST_CASE("violator rejects infeasible parameters and complete antitrees") {
  AntitreeViolatorOptions bad;
  bad.epsilon = 0.5;  // -1 + 3 eps = 0.5 >= 0
  CHECK_THROWS_AS(build_antitree_violator(spec_preset("antitree_cubed"), bad), SpecError);

  // linear antitree: a_l = 1/2, the ratio series diverges, the walk stays
  ModelCertificates certs;
  certs.complete = ConstantMinorant{0.5, 0};
  GraphSpec linear = GraphSpec::antitree(
      "antitree_linear", [](std::int64_t r) { return r + 1; }, certs);
  CHECK_THROWS_AS(build_antitree_violator(linear, {}), SpecError);
}

TEST_CASE("violator growth rows live on the quotient rescale") {
  AntitreeViolatorOptions opts;
  opts.sweep_radius = 11;
  // deepest certified radius + 1 must reach the lambda table's depth, else
  // the truncated solve undercuts the table-calibrated contributions
  opts.schedule = {5, 10};
  opts.table_radius = 11;
  AntitreeViolatorReport rep = build_antitree_violator(spec_preset("antitree_cubed"), opts);
  REQUIRE(rep.growth.rows.size() == 2);
  CHECK(rep.growth.rows[0].R == 5);
  CHECK(rep.growth.rows[0].minorant == doctest::Approx(6.0));
  CHECK(rep.growth.rows[0].partial_sum >= 6.0);
  CHECK(rep.growth.ray_prefix == "ray:");
}
