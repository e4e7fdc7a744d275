#include <catch2/catch_amalgamated.hpp>

#include "ascheme/constructions.hpp"

using namespace ascheme;

// Hidden by default; select with the [slow] tag.

TEST_CASE("affine map scheme at p=5", "[.][slow]") {
  ConstructionReport rep = build_sec41(5);
  CHECK(rep.scheme.order() == 625);
  CHECK(rep.scheme.rank() == 145);
  CHECK(rep.delta_value == 25);
  CHECK(rep.conditions.a);
  CHECK(rep.conditions.b);
  // 24 outside cosets but only 6 order-5 subgroups as ss* candidates
  CHECK_FALSE(rep.conditions.con_three);
}

TEST_CASE("tower construction at p=5", "[.][slow]") {
  ConstructionReport rep = build_thm34(5, 7);
  CHECK(rep.scheme.order() == 175);
  CHECK(rep.scheme.rank() == 55);
  CHECK(rep.delta_value == 7);
  CHECK(rep.conditions.a);
  CHECK(rep.conditions.b);

  CHECK_THROWS_AS(build_thm34(5, 8), Error);  // delta = 8 > p+2
}
