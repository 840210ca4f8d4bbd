#include <cmath>
#include <vector>

#include "doctest.h"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "liouville/graph.hpp"
#include "test_util.hpp"

using namespace liouville;

TEST_CASE("builder basics and lookups") {
  GraphBuilder b;
  auto x = b.add_vertex("x", 1.0);
  auto y = b.add_vertex("y", 2.0);
  auto z = b.add_vertex("z", 0.5);
  b.add_edge(x, y, 3.0);
  b.add_edge(y, z, 1.5);
  b.set_root(x);
  FiniteGraph g = b.build();

  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.measure(y) == 2.0);
  CHECK(g.weight(x, y) == 3.0);
  CHECK(g.weight(y, x) == 3.0);
  CHECK(g.weight(x, z) == 0.0);
  CHECK(g.vertex("z") == z);
  CHECK(!g.find_vertex("w").has_value());
  CHECK_THROWS_AS(g.vertex("w"), SpecError);
  CHECK(g.label(g.root()) == "x");
  CHECK(!g.has_frontier());
}

TEST_CASE("builder rejects duplicates, self loops, disconnection") {
  GraphBuilder b;
  auto u = b.add_vertex("u", 1.0);
  auto v = b.add_vertex("v", 1.0);
  b.add_edge(u, v, 1.0);
  CHECK_THROWS_AS(b.add_edge(v, u, 2.0), SpecError);
  CHECK_THROWS_AS(b.add_edge(u, u, 1.0), SpecError);

  GraphBuilder c;
  c.add_vertex("a", 1.0);
  c.add_vertex("b", 1.0);
  CHECK_THROWS_AS(c.build(), SpecError);
}

TEST_CASE("sphere decomposition of a half-line ball") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 3);
  SphereDecomposition dec = sphere_decompose(g);
  CHECK(dec.max_radius() == 3);
  for (std::int64_t r = 0; r <= 3; ++r) CHECK(dec.spheres[r].size() == 1);
  CHECK(dec.radius[g.vertex("2")] == 2);
  CHECK(g.is_frontier(g.vertex("3")));
  CHECK(!g.is_frontier(g.vertex("2")));
}

TEST_CASE("degree and curvature, frontier trust") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 3);
  SphereDecomposition dec = sphere_decompose(g);
  auto d1 = degree(g, g.vertex("1"));
  CHECK(d1.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d1.trusted);
  CHECK(!degree(g, g.vertex("3")).trusted);

  auto c = curvature(g, dec, g.vertex("1"));
  CHECK(c.k_minus == doctest::Approx(1.0));
  CHECK(c.k_plus == doctest::Approx(1.0));
  CHECK(c.k_plus_trusted);
  CHECK(!curvature(g, dec, g.vertex("3")).k_plus_trusted);
  CHECK(curvature(g, dec, g.root()).k_minus == 0.0);
}

TEST_CASE("laplacian sign convention on a path") {
  GraphBuilder b;
  auto a = b.add_vertex("a", 2.0);
  auto m = b.add_vertex("m", 1.0);
  auto c = b.add_vertex("c", 1.0);
  b.add_edge(a, m, 1.0);
  b.add_edge(m, c, 3.0);
  b.set_root(a);
  FiniteGraph g = b.build();
  std::vector<double> f = {0.0, 1.0, 4.0};
  // (1/1) * (1*(1-0) + 3*(1-4)) = -8
  CHECK(laplacian_apply(g, f, m) == doctest::Approx(-8.0).epsilon(1e-14));
  // at 'a': (1/2) * 1 * (0-1) = -0.5
  CHECK(laplacian_apply(g, f, a) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("boundary split separates incomplete neighborhoods") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 4);
  std::vector<VertexId> w = {g.vertex("1"), g.vertex("2"), g.vertex("3")};
  BoundarySplit s = boundary_split(g, w);
  REQUIRE(s.interior.size() == 1);
  CHECK(g.label(s.interior[0]) == "2");
  CHECK(s.boundary.size() == 2);
}

TEST_CASE("restrict_ball agrees with direct materialization") {
  GraphSpec spec = spec_preset("glued_halflines");
  FiniteGraph big = materialize(spec, 6);
  FiniteGraph small = materialize(spec, 3);
  CHECK(graphs_equal(restrict_ball(big, 3), small, 1e-15));
}

TEST_CASE("label ordering is numeric per component") {
  CHECK(label_less("2:9", "2:10"));
  CHECK(label_less("9", "10"));
  CHECK(!label_less("2:10", "2:9"));
  CHECK(label_less("a:5", "b:1"));
}

TEST_CASE("json round trip preserves the graph") {
  FiniteGraph g = llab_test::random_graph(7);
  FiniteGraph back = graph_from_json(graph_to_json(g));
  CHECK(graphs_equal(g, back, 1e-15));
}

TEST_CASE("sphere measures and conductance on the half-line") {
  FiniteGraph g = materialize(spec_preset("halfline_unit"), 5);
  SphereDecomposition dec = sphere_decompose(g);
  CHECK(sphere_measure(g, dec, 3) == doctest::Approx(1.0));
  CHECK(ball_measure(g, dec, 3) == doctest::Approx(4.0));
  CHECK(boundary_conductance(g, dec, 2) == doctest::Approx(1.0));
}
