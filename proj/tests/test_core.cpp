#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "ascheme/action.hpp"
#include "ascheme/automorphism.hpp"
#include "ascheme/constructions.hpp"
#include "ascheme/incidence.hpp"
#include "ascheme/subsets.hpp"

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ascheme;

namespace {

struct CorpusItem {
  std::string name;
  Scheme scheme;
  int p = 0;  // prime the structural conditions refer to
};

// Small schemes exercised by every cross-cutting suite in this file.
const std::vector<CorpusItem>& corpus() {
  static const std::vector<CorpusItem> items = [] {
    std::vector<CorpusItem> out;
    out.push_back({"thin C2", verified(fixtures::thin_of(make_cyclic(2))), 2});
    out.push_back({"thin C4", verified(fixtures::thin_of(make_cyclic(4))), 2});
    out.push_back({"thin klein", verified(fixtures::thin_of(make_elementary_abelian(2, 2))), 2});
    out.push_back({"rank2 n=3", verified(fixtures::rank2(3)), 2});
    out.push_back({"rank2 n=4", verified(fixtures::rank2(4)), 2});
    out.push_back({"tower p=2 d=3", build_thm34(2, 3).scheme, 2});
    out.push_back({"tower p=2 d=4", build_thm34(2, 4).scheme, 2});
    out.push_back({"tower p=3 d=3", build_thm34(3, 3).scheme, 3});
    out.push_back({"tower p=3 d=5", build_thm34(3, 5).scheme, 3});
    out.push_back({"affine p=2", build_sec41(2).scheme, 2});
    out.push_back({"norm-one p=2", build_sec42(2, true).scheme, 2});
    out.push_back({"lines triangle p=2",
                   build_thm51(triangle_space(), regular_action(make_cyclic(3)), 2).scheme, 2});
    return out;
  }();
  return items;
}

}  // namespace

TEST_CASE("axiom verification agrees with the all-pairs oracle", "[core]") {
  for (const CorpusItem& item : corpus()) {
    INFO(item.name);
    CHECK(oracle::verify(item.scheme.table).empty());
    CHECK(verify_scheme(item.scheme.table, VerifyMode::full).ok());
    CHECK(verify_scheme(item.scheme.table, VerifyMode::representative).ok());
  }

  RelationTable broken_star = fixtures::transpose_broken();
  CHECK_FALSE(oracle::verify(broken_star).empty());
  VerifyResult vr = verify_scheme(broken_star);
  REQUIRE_FALSE(vr.ok());

  RelationTable broken_c = fixtures::nonconstant();
  CHECK_FALSE(oracle::verify(broken_c).empty());
  CHECK_FALSE(verify_scheme(broken_c).ok());

  RelationTable broken_diag = fixtures::rank2(3);
  broken_diag.at(0, 0) = 1;
  CHECK_FALSE(oracle::verify(broken_diag).empty());
  CHECK_FALSE(verify_scheme(broken_diag).ok());

  RelationTable empty_rel = fixtures::rank2(3);
  empty_rel.r = 3;
  CHECK_FALSE(oracle::verify(empty_rel).empty());
  CHECK_FALSE(verify_scheme(empty_rel).ok());
}

TEST_CASE("canonicalize starts at the diagonal and is idempotent", "[core]") {
  for (const CorpusItem& item : corpus()) {
    INFO(item.name);
    std::vector<int> old_to_new;
    RelationTable c0 = canonicalize(item.scheme.table, &old_to_new);
    CHECK(c0.at(0, 0) == 0);

    // pure relabeling: the map is a bijection applied pointwise
    std::vector<int> sorted = old_to_new;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == static_cast<int>(i));
    const RelationTable& t = item.scheme.table;
    bool pointwise = true;
    for (int x = 0; x < t.n; ++x)
      for (int y = 0; y < t.n; ++y)
        if (c0.at(x, y) != old_to_new[t.at(x, y)]) pointwise = false;
    CHECK(pointwise);

    RelationTable c1 = canonicalize(c0);
    CHECK(c1.cell == c0.cell);
  }
}

TEST_CASE("intersection numbers match the counting oracle", "[core]") {
  for (const CorpusItem& item : corpus()) {
    INFO(item.name);
    std::vector<long long> want = oracle::tensor(item.scheme.table);
    const IntersectionTensor& have = item.scheme.c();
    REQUIRE(want.size() == have.c.size());
    bool same = true;
    for (std::size_t i = 0; i < want.size(); ++i)
      if (want[i] != have.c[i]) same = false;
    CHECK(same);
  }

  Scheme complete3 = verified(fixtures::rank2(3));
  CHECK(complete3.c(1, 1, 1) == 1);

  FiniteGroup c3 = make_cyclic(3);
  Scheme thin3 = verified(fixtures::thin_of(c3));
  for (int g = 0; g < 3; ++g)
    for (int h = 0; h < 3; ++h)
      for (int u = 0; u < 3; ++u)
        CHECK(thin3.c(g, h, u) == (u == c3.times(g, h) ? 1 : 0));
}

TEST_CASE("complex product identity law", "[core]") {
  Scheme s = build_thm34(2, 3).scheme;
  for (int rel = 0; rel < s.rank(); ++rel) {
    RelationSubset prod = complex_product(s, std::vector<int>{0}, std::vector<int>{rel});
    CHECK(prod.members == std::vector<int>{rel});
  }
}

TEST_CASE("closure examples", "[core]") {
  Scheme thin4 = verified(fixtures::thin_of(make_cyclic(4)));
  CHECK(closure(thin4, {0}).members == std::vector<int>{0});
  CHECK(closure(thin4, {1}).members == std::vector<int>{0, 1, 2, 3});
  CHECK(closure(thin4, {2}).members == std::vector<int>{0, 2});

  Scheme complete4 = verified(fixtures::rank2(4));
  CHECK(closure(complete4, {1}).members == std::vector<int>{0, 1});

  // closure output is closed in the oracle's sense
  for (const CorpusItem& item : corpus())
    for (int rel = 0; rel < item.scheme.rank(); ++rel) {
      RelationSubset cl = closure(item.scheme, {rel});
      CHECK(cl.is_closed);
      CHECK(oracle::closed(item.scheme.table, cl.members));
    }
}

TEST_CASE("thin radical examples", "[core]") {
  Scheme thin4 = verified(fixtures::thin_of(make_cyclic(4)));
  CHECK(thin_radical(thin4).members == std::vector<int>{0, 1, 2, 3});

  Scheme complete3 = verified(fixtures::rank2(3));
  CHECK(thin_radical(complete3).members == std::vector<int>{0});

  ConstructionReport rep = build_thm34(2, 3);
  std::vector<int> h = rep.layout->h_rel;
  std::sort(h.begin(), h.end());
  CHECK(thin_radical(rep.scheme).members == h);
  CHECK(h.size() == 4);
}

TEST_CASE("thin residue agrees with the point-level oracle", "[core]") {
  Scheme thin4 = verified(fixtures::thin_of(make_cyclic(4)));
  CHECK(thin_residue(thin4).members == std::vector<int>{0});

  Scheme complete3 = verified(fixtures::rank2(3));
  CHECK(thin_residue(complete3).members == std::vector<int>{0, 1});

  ConstructionReport rep = build_thm34(2, 3);
  std::vector<int> h = rep.layout->h_rel;
  std::sort(h.begin(), h.end());
  RelationSubset res = thin_residue(rep.scheme);
  CHECK(res.members == h);
  CHECK(res.is_thin);

  for (const CorpusItem& item : corpus()) {
    INFO(item.name);
    CHECK(thin_residue(item.scheme).members == oracle::residue(item.scheme.table));
  }
}

TEST_CASE("factor schemes", "[core]") {
  Scheme s = build_thm34(2, 3).scheme;

  Scheme over_identity = factor_scheme(s, classify_subset(s, {0}));
  CHECK(over_identity.order() == 12);
  CHECK(over_identity.rank() == 8);
  CHECK(are_isomorphic(over_identity, s).has_value());

  std::vector<int> all(s.rank());
  std::iota(all.begin(), all.end(), 0);
  Scheme over_all = factor_scheme(s, classify_subset(s, all));
  CHECK(over_all.order() == 1);
  CHECK(over_all.rank() == 1);

  Scheme over_residue = factor_scheme(s, thin_residue(s));
  CHECK(over_residue.order() == 3);
  CHECK(over_residue.rank() == 3);
  Scheme thin3 = verified(fixtures::thin_of(make_cyclic(3)));
  CHECK(are_isomorphic(over_residue, thin3).has_value());

  // the residue factor is thin for every corpus scheme
  for (const CorpusItem& item : corpus()) {
    INFO(item.name);
    Scheme f = factor_scheme(item.scheme, thin_residue(item.scheme));
    bool thin = true;
    for (int v : f.valency)
      if (v != 1) thin = false;
    CHECK(thin);
  }
}

TEST_CASE("residue index values", "[core]") {
  CHECK(delta(verified(fixtures::thin_of(make_cyclic(2)))) == 2);
  CHECK(delta(verified(fixtures::rank2(3))) == 1);
  CHECK(delta(build_thm34(2, 3).scheme) == 3);
  CHECK(delta(build_sec41(2).scheme) == 4);
  CHECK(delta(build_sec42(2, true).scheme) == 7);
}

TEST_CASE("structural condition flags", "[core]") {
  // thin scheme of C_2: the residue is trivial rather than of order p^2, and
  // the lone non-diagonal relation has valency 1, not p, so condition B reads
  // false; con_three quantifies over relations outside the residue in
  // distinct cosets and holds vacuously.
  ConditionFlags thin2 = check_conditions(verified(fixtures::thin_of(make_cyclic(2))), 2);
  CHECK_FALSE(thin2.a);
  CHECK_FALSE(thin2.b);
  CHECK(thin2.con_three);

  ConditionFlags tower = check_conditions(build_thm34(3, 5).scheme, 3);
  CHECK(tower.a);
  CHECK(tower.b);
  CHECK(tower.con_three);

  ConditionFlags complete = check_conditions(verified(fixtures::rank2(3)), 2);
  CHECK_FALSE(complete.a);

  CHECK_THROWS_AS(check_conditions(verified(fixtures::rank2(3)), 4), Error);
}

TEST_CASE("scheme identities hold across the corpus", "[core]") {
  for (const CorpusItem& item : corpus()) {
    INFO(item.name);
    const Scheme& s = item.scheme;
    const int n = s.order(), r = s.rank();

    long long total = 0;
    for (int v : s.valency) total += v;
    CHECK(total == n);

    for (int rel = 0; rel < r; ++rel) {
      CHECK(s.valency[s.star[rel]] == s.valency[rel]);
      CHECK(s.c(rel, s.star[rel], 0) == s.valency[rel]);
    }

    bool row_sum = true, weighted_sum = true;
    for (int a = 0; a < r; ++a)
      for (int u = 0; u < r; ++u) {
        long long row = 0;
        for (int b = 0; b < r; ++b) row += s.c(a, b, u);
        if (row != s.valency[a]) row_sum = false;
      }
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        long long w = 0;
        for (int u = 0; u < r; ++u) w += static_cast<long long>(s.c(a, b, u)) * s.valency[u];
        if (w != static_cast<long long>(s.valency[a]) * s.valency[b]) weighted_sum = false;
      }
    CHECK(row_sum);
    CHECK(weighted_sum);
  }
}

TEST_CASE("residue index bounds when conditions A and B hold", "[core]") {
  int participating = 0;
  for (const CorpusItem& item : corpus()) {
    if (item.p == 0) continue;
    ConditionFlags f = check_conditions(item.scheme, item.p);
    if (!f.a || !f.b) continue;
    ++participating;
    INFO(item.name);
    long long d = delta(item.scheme);
    CHECK(d >= 3);
    CHECK(d <= static_cast<long long>(item.p) * item.p + item.p + 1);
    CHECK(item.scheme.rank() ==
          item.p * item.p + static_cast<int>(d - 1) * item.p);
  }
  CHECK(participating >= 6);
}
