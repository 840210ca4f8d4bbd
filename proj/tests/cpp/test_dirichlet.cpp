#include <cmath>
#include <vector>

#include "doctest.h"
#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "liouville/graph.hpp"
#include "test_util.hpp"

using namespace liouville;

TEST_CASE("half-line hand solves at R = 2") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 2);
  GreenTable green = dirichlet_green(g, g.root(), 2);
  CHECK(green.value("0") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(green.value("1") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(green.value("2") == 0.0);

  ExitTable exit = mean_exit(g, 2);
  CHECK(exit.value("0") == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(exit.value("1") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exit.value("2") == 0.0);
}

TEST_CASE("single-interior-vertex ball") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 1);
  CHECK(dirichlet_green(g, g.root(), 1).value("0") == doctest::Approx(1.0));
  CHECK(mean_exit(g, 1).value("0") == doctest::Approx(1.0));
}

TEST_CASE("exit time equals measure-weighted green sums") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FiniteGraph g = llab_test::random_graph(seed);
    SphereDecomposition dec = sphere_decompose(g);
    const std::int64_t R = dec.max_radius();
    REQUIRE(R >= 1);
    ExitTable exit = mean_exit(g, R);
    for (VertexId x0 = 0; x0 < g.vertex_count(); ++x0) {
      if (dec.radius[x0] >= R) continue;
      GreenTable green = dirichlet_green(g, x0, R);
      CompensatedSum sum;
      for (VertexId y = 0; y < g.vertex_count(); ++y)
        sum.add(green.values[y] * g.measure(y));
      CHECK(std::fabs(sum.value() - exit.values[x0]) <=
            1e-10 * std::max(1.0, exit.values[x0]));
    }
  }
}

TEST_CASE("green kernel is symmetric") {
  FiniteGraph g = llab_test::random_graph(11);
  SphereDecomposition dec = sphere_decompose(g);
  const std::int64_t R = dec.max_radius();
  VertexId a = 0, b = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (dec.radius[v] < R) { if (a == 0) a = v; else { b = v; break; } }
  REQUIRE(a != b);
  CHECK(dirichlet_green(g, a, R).values[b] ==
        doctest::Approx(dirichlet_green(g, b, R).values[a]).epsilon(1e-11));
}

TEST_CASE("geometric model: closed-form green values") {
  GraphSpec spec = spec_preset("model_geom2");
  for (std::int64_t R : {5, 12, 25}) {
    FiniteGraph g = materialize(spec, R);
    GreenTable green = dirichlet_green(g, g.root(), R);
    for (std::int64_t r = 0; r < R; ++r) {
      double expect = 0.0;
      for (std::int64_t k = R - 1; k >= r; --k) expect += std::pow(2.0, -double(k));
      CHECK(green.value(std::to_string(r)) == doctest::Approx(expect).epsilon(1e-11));
    }
  }
}

TEST_CASE("green solves are monotone in the radius") {
  GraphSpec spec = spec_preset("glued_halflines");
  FiniteGraph g8 = materialize(spec, 8);
  FiniteGraph g12 = materialize(spec, 12);
  GreenTable a = dirichlet_green(g8, g8.root(), 8);
  GreenTable b = dirichlet_green(g12, g12.root(), 12);
  ExitTable ea = mean_exit(g8, 8);
  ExitTable eb = mean_exit(g12, 12);
  for (VertexId v = 0; v < g8.vertex_count(); ++v) {
    const std::string& label = g8.label(v);
    CHECK(b.value(label) >= a.value(label) - 1e-12);
    CHECK(eb.value(label) >= ea.value(label) - 1e-12);
  }
}

TEST_CASE("green_limit: parabolic grows, transient converges") {
  GreenLimit grow = green_limit(spec_preset("halfline_unit"), "0", 18);
  CHECK(grow.verdict == GreenLimit::Verdict::StillGrowing);
  CHECK(grow.value_at_x0.back() > grow.value_at_x0.front());

  GreenLimit conv = green_limit(spec_preset("model_geom2"), "0", 40, 1e-9);
  CHECK(conv.verdict == GreenLimit::Verdict::Converged);
  CHECK(std::fabs(conv.limit_estimate - 2.0) <= conv.analytic_tail + 1e-9);
}

TEST_CASE("conformal rescale leaves the green kernel alone") {
  GraphSpec base = spec_preset("model_geom2");
  GraphSpec scaled = GraphSpec::conformal(
      base,
      [](const std::string& l) { return 1.0 + 37.0 * double((l.size() * 2654435761u) % 100) / 100.0; },
      "pseudorandom measures");
  const std::int64_t R = 10;
  FiniteGraph g0 = materialize(base, R);
  FiniteGraph g1 = materialize(scaled, R);
  GreenTable t0 = dirichlet_green(g0, g0.root(), R);
  GreenTable t1 = dirichlet_green(g1, g1.root(), R);
  for (VertexId v = 0; v < g0.vertex_count(); ++v)
    CHECK(std::fabs(t0.values[v] - t1.value(g0.label(v))) <= 1e-9);
}

TEST_CASE("minimum principle holds for green solves") {
  FiniteGraph g = materialize(spec_preset("glued_halflines"), 6);
  GreenTable green = dirichlet_green(g, g.root(), 6);
  SphereDecomposition dec = sphere_decompose(g);
  std::vector<VertexId> interior;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (dec.radius[v] < 6 && !g.is_frontier(v)) interior.push_back(v);
  auto mp = check_min_principle(g, green.values, interior);
  CHECK(mp.applicable);
  CHECK(mp.pass);
}

TEST_CASE("solver rejects malformed problems") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 2);
  // interior vertex whose neighbor is in neither set
  std::vector<VertexId> interior = {g.vertex("1")};
  std::vector<VertexId> boundary = {g.vertex("2")};
  CHECK_THROWS_AS(solve_dirichlet(g, interior, boundary,
                                  [](VertexId) { return 0.0; },
                                  [](VertexId) { return 0.0; }),
                  SpecError);
}
