#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "ascheme/action.hpp"
#include "ascheme/constructions.hpp"
#include "ascheme/incidence.hpp"

#include "fixtures.hpp"

using namespace ascheme;

TEST_CASE("incidence classification", "[geometry]") {
  IncidenceClass tri = classify_incidence(triangle_space());
  CHECK(tri.partial_linear);
  CHECK(tri.linear);
  CHECK(tri.max_lines_per_point == 2);

  IncidenceClass fano = classify_incidence(fano_plane());
  CHECK(fano.partial_linear);
  CHECK(fano.linear);
  CHECK(fano.max_lines_per_point == 3);

  IncidenceStructure disjoint;
  disjoint.points = 4;
  disjoint.lines = {{0, 1}, {2, 3}};
  IncidenceClass part = classify_incidence(disjoint);
  CHECK(part.partial_linear);
  CHECK_FALSE(part.linear);
  CHECK(part.max_lines_per_point == 1);

  IncidenceStructure doubled;
  doubled.points = 4;
  doubled.lines = {{0, 1, 2}, {0, 1, 3}};
  CHECK_FALSE(classify_incidence(doubled).partial_linear);
}

TEST_CASE("normalize orders points within lines and lines within the list", "[geometry]") {
  IncidenceStructure shuffled;
  shuffled.points = 3;
  shuffled.lines = {{2, 1}, {1, 0}, {2, 0}};
  IncidenceStructure norm = normalize_incidence(shuffled);
  CHECK(norm.lines == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("named spaces", "[geometry]") {
  IncidenceStructure fano = fano_plane();
  CHECK(fano.points == 7);
  CHECK(fano.lines.size() == 7);
  for (const std::vector<int>& l : fano.lines) CHECK(l.size() == 3);
  CHECK(std::count(fano.lines.begin(), fano.lines.end(), std::vector<int>{0, 1, 3}) == 1);

  IncidenceStructure tri = triangle_space();
  CHECK(tri.points == 3);
  CHECK(tri.lines.size() == 3);
}

TEST_CASE("incidence isomorphism", "[geometry]") {
  CHECK(incidence_isomorphic(triangle_space(), triangle_space()).has_value());
  CHECK_FALSE(incidence_isomorphic(fano_plane(), triangle_space()).has_value());

  // a relabeled Fano plane maps back onto the original
  IncidenceStructure relabeled = fano_plane();
  for (std::vector<int>& l : relabeled.lines)
    for (int& q : l) q = (q + 3) % 7;
  auto map = incidence_isomorphic(relabeled, fano_plane());
  REQUIRE(map.has_value());

  // the near-pencil on 4 points is linear but not a projective plane
  IncidenceStructure pencil;
  pencil.points = 4;
  pencil.lines = {{0, 1}, {0, 2}, {0, 3}, {1, 2, 3}};
  CHECK(classify_incidence(pencil).linear);
  CHECK_FALSE(incidence_isomorphic(pencil, triangle_space()).has_value());
}

TEST_CASE("regular line-preserving actions", "[geometry]") {
  CHECK(regular_line_preserving(triangle_space(), regular_action(make_cyclic(3))));
  CHECK(regular_line_preserving(fano_plane(), regular_action(make_cyclic(7))));

  // swapping two points breaks the translation family
  IncidenceStructure relabeled = fano_plane();
  for (std::vector<int>& l : relabeled.lines)
    for (int& q : l) {
      if (q == 5) q = 6;
      else if (q == 6) q = 5;
    }
  CHECK_FALSE(regular_line_preserving(relabeled, regular_action(make_cyclic(7))));

  CHECK_FALSE(regular_line_preserving(triangle_space(), regular_action(make_cyclic(4))));
}

TEST_CASE("incidence extraction from tower schemes", "[geometry]") {
  ExtractResult tri = extract_incidence(build_thm34(2, 3).scheme);
  CHECK(tri.p == 2);
  CHECK(tri.structure.points == 3);
  CHECK(normalize_incidence(tri.structure).lines == triangle_space().lines);
  CHECK_FALSE(tri.stab.asymmetric.empty());  // L_a and L_{a^{-1}} differ for C_3

  // with the Klein group every element is its own inverse, so L is symmetric
  ExtractResult klein = extract_incidence(build_thm34(2, make_elementary_abelian(2, 2)).scheme);
  CHECK(klein.structure.points == 4);
  CHECK(klein.stab.asymmetric.empty());

  ExtractResult affine = extract_incidence(build_sec41(2).scheme);
  CHECK(affine.structure.points == 4);
  IncidenceClass cls = classify_incidence(affine.structure);
  CHECK(cls.partial_linear);
  CHECK(cls.max_lines_per_point <= 3);

  ExtractResult round = extract_incidence(
      build_thm51(triangle_space(), regular_action(make_cyclic(3)), 2).scheme);
  CHECK(normalize_incidence(round.structure).lines == triangle_space().lines);

  ExtractResult fano = extract_incidence(
      build_thm51(fano_plane(), regular_action(make_cyclic(7)), 3).scheme);
  CHECK(fano.structure.points == 7);
  CHECK(incidence_isomorphic(fano.structure, fano_plane()).has_value());

  CHECK_THROWS_AS(extract_incidence(verified(fixtures::thin_of(make_cyclic(2)))), Error);
  CHECK_THROWS_AS(extract_incidence(verified(fixtures::rank2(3))), Error);
}
