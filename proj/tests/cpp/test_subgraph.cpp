#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "liouville/subgraph.hpp"

using namespace liouville;

namespace {

SubgraphProblem halfline_tail() {
  SubgraphProblem p;
  p.ambient = spec_preset("halfline_unit");
  p.membership = [](const std::string& l) { return l != "0"; };
  p.schedule = {4};
  return p;
}

}  // namespace

TEST_CASE("subgraph green on the shifted half-line matches hand elimination") {
  // W = {1,2,...}, boundary rows at 1 (vertex boundary) and 4 (radius cut),
  // interior {2,3}, source at 2:
  //   2 g(2) - g(3) = 1,  2 g(3) - g(2) = 0  =>  g(2) = 2/3, g(3) = 1/3
  SubgraphProblem p = halfline_tail();
  GreenTable g = dirichlet_green_subgraph(p, "2", 4);
  CHECK(std::fabs(g.value("2") - 2.0 / 3.0) <= 1e-12);
  CHECK(std::fabs(g.value("3") - 1.0 / 3.0) <= 1e-12);
  CHECK(g.value("1") == 0.0);
}

TEST_CASE("subgraph exit time and its ambient domination") {
  SubgraphProblem p = halfline_tail();
  ExitTable e = dirichlet_exit(p, 4);
  // same interior: E(2) = E(3) = 1 by symmetry of the two-point system
  CHECK(std::fabs(e.value("2") - 1.0) <= 1e-12);
  CHECK(std::fabs(e.value("3") - 1.0) <= 1e-12);

  // ambient E_4(x) = (4 - x)(5 + x)/2 dominates: E_4(2) = 7 >> 1
  double slack = domination_check(p, 4);
  CHECK(slack >= 0.0);

  ExitTable bigger = dirichlet_exit(p, 6);
  CHECK(bigger.value("2") > e.value("2"));  // monotone exhaustion
}

TEST_CASE("subgraph solves reject bad sources and broken membership") {
  SubgraphProblem p = halfline_tail();
  CHECK_THROWS_AS(dirichlet_green_subgraph(p, "1", 4), SpecError);   // boundary vertex
  CHECK_THROWS_AS(dirichlet_green_subgraph(p, "99", 4), SpecError);  // outside the ball

  SubgraphProblem split;
  split.ambient = spec_preset("glued_halflines");
  // both rays minus the bridge vertices: two pieces
  split.membership = [](const std::string& l) { return l != "a:0" && l != "b:0"; };
  CHECK_THROWS_AS(dirichlet_exit(split, 5), SpecError);

  SubgraphProblem empty;
  empty.ambient = spec_preset("halfline_unit");
  empty.membership = [](const std::string&) { return false; };
  CHECK_THROWS_AS(dirichlet_exit(empty, 4), SpecError);
}

TEST_CASE("ends counts: two rays, one antitree end, three spokes") {
  std::vector<std::string> k1 = {"a:0"};
  EndsReport two = ends(spec_preset("glued_halflines"), k1, 20, 30);
  CHECK(two.components.size() == 2);
  CHECK(two.unbounded[0]);
  CHECK(two.unbounded[1]);
  CHECK(two.stable);

  std::vector<std::string> k2;
  k2.push_back("0:0");
  for (int j = 0; j < 8; ++j) k2.push_back("1:" + std::to_string(j));
  EndsReport one = ends(spec_preset("antitree_cubed"), k2, 6, 8);
  std::int64_t unbounded_count = 0;
  for (bool u : one.unbounded) unbounded_count += u ? 1 : 0;
  CHECK(unbounded_count == 1);
  CHECK(one.stable);

  std::vector<std::string> k3 = {"a:a:0"};
  EndsReport three = ends(spec_preset("threeray_hub"), k3, 12, 20);
  CHECK(three.components.size() == 3);
  CHECK(three.unbounded == std::vector<bool>({true, true, true}));
  CHECK(three.stable);
}

TEST_CASE("ends argument validation") {
  std::vector<std::string> k = {"a:0"};
  std::vector<std::string> none;
  CHECK_THROWS_AS(ends(spec_preset("glued_halflines"), none, 20, 30), SpecError);
  CHECK_THROWS_AS(ends(spec_preset("glued_halflines"), k, 2, 30), SpecError);
  CHECK_THROWS_AS(ends(spec_preset("glued_halflines"), k, 20, 20), SpecError);
  std::vector<std::string> missing = {"zz:9"};
  CHECK_THROWS_AS(ends(spec_preset("glued_halflines"), missing, 20, 30), SpecError);
}

TEST_CASE("exit times split across components exactly") {
  std::vector<std::string> k1 = {"a:0"};
  CHECK(end_additivity_check(spec_preset("glued_halflines"), k1, 15) <= 1e-10);

  std::vector<std::string> k3 = {"a:a:0"};
  CHECK(end_additivity_check(spec_preset("threeray_hub"), k3, 12) <= 1e-10);
}
