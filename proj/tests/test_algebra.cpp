#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <map>
#include <set>
#include <vector>

#include "ascheme/action.hpp"
#include "ascheme/automorphism.hpp"
#include "ascheme/constructions.hpp"
#include "ascheme/gf.hpp"
#include "ascheme/group.hpp"

#include "fixtures.hpp"

using namespace ascheme;

namespace {

// Reindexes a subgroup into its own multiplication table.
FiniteGroup subgroup_as_group(const FiniteGroup& g, const std::vector<int>& members) {
  std::map<int, int> pos;
  for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> rows(members.size(), std::vector<int>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < members.size(); ++j)
      rows[i][j] = pos.at(g.times(members[i], members[j]));
  return make_group_from_table(rows);
}

std::vector<int> normalizer(const FiniteGroup& g, const std::vector<int>& h) {
  std::vector<char> in_h(g.order, 0);
  for (int m : h) in_h[m] = 1;
  std::vector<int> out;
  for (int x = 0; x < g.order; ++x) {
    bool ok = true;
    for (int m : h)
      if (!in_h[g.times(g.times(x, m), g.inv[x])]) ok = false;
    if (ok) out.push_back(x);
  }
  return out;
}

// Number of right cosets Hg meeting the double coset H t H.
int double_coset_width(const FiniteGroup& g, const std::vector<int>& h, int t) {
  std::vector<int> coset = right_cosets(g, h, nullptr);
  std::set<int> ids;
  for (int a : h)
    for (int b : h) ids.insert(coset[g.times(g.times(a, t), b)]);
  return static_cast<int>(ids.size());
}

}  // namespace

TEST_CASE("group builders", "[algebra]") {
  FiniteGroup c3 = make_cyclic(3);
  CHECK(c3.order == 3);
  CHECK(c3.mul[1 * 3 + 1] == 2);
  CHECK(c3.inv[1] == 2);

  FiniteGroup klein = make_elementary_abelian(2, 2);
  CHECK(klein.order == 4);
  for (int x = 0; x < 4; ++x) CHECK(klein.inv[x] == x);

  FiniteGroup e9 = make_elementary_abelian(3, 2);
  CHECK(e9.order == 9);
  for (int x = 0; x < 9; ++x) CHECK(e9.times(x, e9.times(x, x)) == e9.identity);

  FiniteGroup c6 = direct_product(make_cyclic(2), make_cyclic(3));
  CHECK(c6.order == 6);
  int g = 1 * 3 + 1, acc = c6.identity, order = 0;
  do {
    acc = c6.times(acc, g);
    ++order;
  } while (acc != c6.identity);
  CHECK(order == 6);

  CHECK_THROWS_AS(make_group_from_table({{0, 1}, {1, 1}}), Error);
}

TEST_CASE("subgroups, cosets and quotients", "[algebra]") {
  FiniteGroup c6 = make_cyclic(6);
  CHECK(subgroup_closure(c6, {2}) == std::vector<int>{0, 2, 4});
  CHECK(is_subgroup(c6, {0, 3}));
  CHECK(is_normal(c6, {0, 3}));
  CHECK_FALSE(is_subgroup(c6, {0, 1}));

  std::vector<int> reps;
  std::vector<int> coset = right_cosets(c6, {0, 3}, &reps);
  CHECK(coset == std::vector<int>{0, 1, 2, 0, 1, 2});
  CHECK(reps == std::vector<int>{0, 1, 2});

  Quotient q = quotient_group(c6, {0, 3});
  CHECK(q.group.order == 3);
  CHECK(q.group.times(1, 1) == 2);
}

TEST_CASE("unitriangular affine map group", "[algebra]") {
  auto [grp, h] = sec41_group(2);
  CHECK(grp.order == 32);
  CHECK(h.size() == 2);
  CHECK(is_subgroup(grp, h));

  bool abelian = true;
  for (int a = 0; a < grp.order && abelian; ++a)
    for (int b = 0; b < grp.order; ++b)
      if (grp.times(a, b) != grp.times(b, a)) {
        abelian = false;
        break;
      }
  CHECK_FALSE(abelian);
}

TEST_CASE("normalizer structure in the affine map group", "[algebra]") {
  auto [grp, h] = sec41_group(2);
  std::vector<int> n = normalizer(grp, h);
  CHECK(n.size() == 8);
  CHECK(is_normal(grp, n));

  // N/H is elementary abelian of rank 2
  FiniteGroup sub = subgroup_as_group(grp, n);
  std::vector<int> h_in_sub;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (std::find(h.begin(), h.end(), n[i]) != h.end()) h_in_sub.push_back(static_cast<int>(i));
  Quotient q = quotient_group(sub, h_in_sub);
  CHECK(q.group.order == 4);
  for (int x = 0; x < 4; ++x) CHECK(q.group.times(x, x) == q.group.identity);

  // H t H meets exactly p right cosets outside N, one inside
  std::vector<char> in_n(grp.order, 0);
  for (int m : n) in_n[m] = 1;
  for (int t = 0; t < grp.order; ++t)
    CHECK(double_coset_width(grp, h, t) == (in_n[t] ? 1 : 2));
}

TEST_CASE("conjugation dichotomy in the norm-one affine group", "[algebra]") {
  for (int p : {2, 3}) {
    auto [grp, h] = sec42_group(Gfp3::with_default_modulus(p));
    CHECK(grp.order == (p * p + p + 1) * p * p * p);
    CHECK(static_cast<int>(h.size()) == p);

    std::vector<int> n = normalizer(grp, h);
    CHECK(static_cast<int>(n.size()) == p * p * p);
    std::vector<char> in_n(grp.order, 0), in_h(grp.order, 0);
    for (int m : n) in_n[m] = 1;
    for (int m : h) in_h[m] = 1;

    // conjugating any nontrivial translation of the prime subfield lands in
    // H exactly for the full translation subgroup
    for (int g = 0; g < grp.order; ++g) {
      bool all_in = true;
      for (int m : h) {
        if (m == grp.identity) continue;
        if (!in_h[grp.times(grp.times(g, m), grp.inv[g])]) all_in = false;
      }
      CHECK(all_in == static_cast<bool>(in_n[g]));
    }

    if (p == 2)
      for (int t = 0; t < grp.order; ++t)
        CHECK(double_coset_width(grp, h, t) == (in_n[t] ? 1 : 2));
  }
}

TEST_CASE("cubic extension field arithmetic", "[algebra]") {
  Gfp3 f2 = Gfp3::with_default_modulus(2);
  int x = f2.from_coeffs(0, 1, 0);
  int x2 = f2.from_coeffs(0, 0, 1);
  CHECK(f2.mul(x, x2) == f2.from_coeffs(1, 1, 0));  // x^3 = x + 1
  CHECK(f2.pow(x, 7) == 1);
  CHECK(f2.inv(x) == f2.from_coeffs(1, 0, 1));  // x * (x^2 + 1) = 1

  std::vector<int> k2 = f2.norm_one_subgroup();
  CHECK(k2.size() == 7);

  Gfp3 f3 = Gfp3::with_default_modulus(3);
  int y = f3.from_coeffs(0, 1, 0);
  CHECK(f3.pow(y, 3) == f3.from_coeffs(2, 1, 0));  // x^3 = x + 2 mod x^3+2x+1
  std::vector<int> k3 = f3.norm_one_subgroup();
  CHECK(k3.size() == 13);
  for (int a : k3) {
    CHECK(f3.pow(a, 13) == 1);
    bool closed = true;
    for (int b : k3)
      if (!std::binary_search(k3.begin(), k3.end(), f3.mul(a, b))) closed = false;
    CHECK(closed);
  }

  CHECK_THROWS_AS(Gfp3(2, {0, 0, 0}), Error);  // x^3 factors
  CHECK_THROWS_AS(Gfp3(4, {1, 1, 0}), Error);
}

TEST_CASE("coset actions", "[algebra]") {
  FiniteGroup c3 = make_cyclic(3);
  GroupAction reg = coset_action(c3, {0});
  CHECK(reg.degree == 3);
  CHECK(is_transitive(reg));
  CHECK(is_regular(reg));

  auto [g41, h41] = sec41_group(2);
  GroupAction a41 = coset_action(g41, h41);
  CHECK(a41.degree == 16);
  CHECK(is_transitive(a41));
  CHECK_FALSE(is_regular(a41));
  CHECK(orbital_scheme(a41).rank() == 10);

  auto [g42, h42] = sec42_group(Gfp3::with_default_modulus(2));
  CHECK(coset_action(g42, h42).degree == 28);

  GroupAction bad;
  bad.group = c3;
  bad.degree = 2;
  bad.perm = {{0, 1}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(validate_action(bad), Error);
}

TEST_CASE("orbital schemes", "[algebra]") {
  FiniteGroup c3 = make_cyclic(3);
  Scheme thin = orbital_scheme(regular_action(c3));
  CHECK(thin.rank() == 3);
  for (int v : thin.valency) CHECK(v == 1);
  CHECK(are_isomorphic(thin, verified(fixtures::thin_of(c3))).has_value());

  // natural action of S_3 is 2-transitive, so the orbital scheme is rank 2
  using Perm = std::array<int, 3>;
  std::vector<Perm> elems;
  Perm id{0, 1, 2};
  std::sort(id.begin(), id.end());
  do {
    elems.push_back(id);
  } while (std::next_permutation(id.begin(), id.end()));
  FiniteGroup s3 = group_from_elements(
      elems, [](const Perm& e) { return e; },
      [](const Perm& a, const Perm& b) {
        Perm r;
        for (int i = 0; i < 3; ++i) r[i] = b[a[i]];
        return r;
      });
  GroupAction nat;
  nat.group = s3;
  nat.degree = 3;
  for (const Perm& e : elems) nat.perm.push_back({e[0], e[1], e[2]});
  validate_action(nat);
  Scheme complete = orbital_scheme(nat);
  CHECK(complete.table.cell == fixtures::rank2(3).cell);

  CHECK(are_isomorphic(thin_scheme(make_cyclic(4)),
                       verified(fixtures::thin_of(make_cyclic(4))))
            .has_value());
}
