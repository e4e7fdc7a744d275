#pragma once

#include "ascheme/scheme.hpp"

namespace ascheme {

// A subset of the relation set, kept sorted. The flags describe the subset as
// classified against a particular scheme; classify_subset computes them.
struct RelationSubset {
  std::vector<int> members;
  bool is_closed = false;
  bool is_thin = false;
  bool is_strongly_normal = false;

  std::size_t size() const { return members.size(); }
  bool contains(int s) const { return set_contains(members, s); }
};

namespace detail {

inline void require_members(const Scheme& s, const std::vector<int>& m, const char* who) {
  if (m.empty()) throw Error(std::string(who) + ": empty relation set");
  for (int v : m)
    if (v < 0 || v >= s.rank()) throw Error(std::string(who) + ": relation index out of range");
}

}  // namespace detail

// Complex product PQ = {u : c_pq^u != 0 for some p in P, q in Q}.
inline RelationSubset complex_product(const Scheme& s, const std::vector<int>& p,
                                      const std::vector<int>& q) {
  detail::require_members(s, p, "complex_product");
  detail::require_members(s, q, "complex_product");
  const int r = s.rank();
  std::vector<char> hit(r, 0);
  for (int a : p)
    for (int b : q)
      for (int u = 0; u < r; ++u)
        if (s.c().at(a, b, u) != 0) hit[u] = 1;
  RelationSubset out;
  for (int u = 0; u < r; ++u)
    if (hit[u]) out.members.push_back(u);
  return out;
}

inline RelationSubset complex_product(const Scheme& s, const RelationSubset& p,
                                      const RelationSubset& q) {
  return complex_product(s, p.members, q.members);
}

inline RelationSubset classify_subset(const Scheme& s, std::vector<int> members);

// Smallest closed subset containing U: add the identity, transposes and
// complex products until nothing changes.
inline RelationSubset closure(const Scheme& s, const std::vector<int>& seed) {
  detail::require_members(s, seed, "closure");
  std::vector<int> t = seed;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  set_insert(t, s.identity);
  for (int v : seed) set_insert(t, s.star[v]);
  for (;;) {
    RelationSubset prod = complex_product(s, t, t);
    std::vector<int> next = set_union(t, prod.members);
    for (int v : prod.members) set_insert(next, s.star[v]);
    if (next == t) break;
    t = std::move(next);
  }
  return classify_subset(s, std::move(t));
}

inline RelationSubset thin_radical(const Scheme& s) {
  std::vector<int> m;
  for (int i = 0; i < s.rank(); ++i)
    if (s.valency[i] == 1) m.push_back(i);
  return classify_subset(s, std::move(m));
}

// Computes the flags of a relation subset against s:
//   closed          -- contains the identity, closed under transpose and product
//   thin            -- every member has valency 1
//   strongly normal -- s* T s is contained in T for every relation s of the scheme
inline RelationSubset classify_subset(const Scheme& s, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  detail::require_members(s, members, "classify_subset");
  RelationSubset out;
  out.members = std::move(members);

  out.is_thin = true;
  for (int v : out.members)
    if (s.valency[v] != 1) out.is_thin = false;

  out.is_closed = set_contains(out.members, s.identity);
  for (int v : out.members)
    if (!set_contains(out.members, s.star[v])) out.is_closed = false;
  if (out.is_closed) {
    RelationSubset prod = complex_product(s, out.members, out.members);
    if (!set_subset(prod.members, out.members)) out.is_closed = false;
  }

  out.is_strongly_normal = out.is_closed;
  if (out.is_strongly_normal) {
    for (int rel = 0; rel < s.rank() && out.is_strongly_normal; ++rel) {
      RelationSubset left = complex_product(s, std::vector<int>{s.star[rel]}, out.members);
      RelationSubset both = complex_product(s, left.members, std::vector<int>{rel});
      if (!set_subset(both.members, out.members)) out.is_strongly_normal = false;
    }
  }
  return out;
}

// Thin residue: closure of the union of all s*s. The factor over it is the
// largest thin factor; that property is re-checked before returning.
inline Scheme factor_scheme(const Scheme& s, const RelationSubset& t);

inline RelationSubset thin_residue(const Scheme& s) {
  std::vector<int> seed;
  for (int rel = 0; rel < s.rank(); ++rel) {
    RelationSubset ss = complex_product(s, std::vector<int>{s.star[rel]}, std::vector<int>{rel});
    for (int v : ss.members) set_insert(seed, v);
  }
  RelationSubset res = closure(s, seed);
  Scheme over = factor_scheme(s, res);
  for (int v : over.valency)
    if (v != 1) throw Error("thin_residue: factor over the residue is not thin");
  return res;
}

// Factor scheme over a closed subset: points become the classes of the
// equivalence relation carried by T, relations become double cosets TsT.
inline Scheme factor_scheme(const Scheme& s, const RelationSubset& t) {
  detail::require_members(s, t.members, "factor_scheme");
  RelationSubset checked = classify_subset(s, t.members);
  if (!checked.is_closed) throw Error("factor_scheme: subset is not closed");
  const int n = s.order();

  std::vector<int> block(n, -1);
  int blocks = 0;
  for (int x = 0; x < n; ++x) {
    if (block[x] >= 0) continue;
    for (int y = x; y < n; ++y)
      if (checked.contains(s.rel(x, y))) block[y] = blocks;
    ++blocks;
  }
  std::vector<int> rep(blocks, -1);
  for (int x = n - 1; x >= 0; --x) rep[block[x]] = x;

  // Double coset id per relation.
  std::vector<int> dc(s.rank(), -1);
  std::vector<std::vector<int>> dc_members;
  for (int rel = 0; rel < s.rank(); ++rel) {
    if (dc[rel] >= 0) continue;
    RelationSubset left = complex_product(s, checked.members, std::vector<int>{rel});
    RelationSubset both = complex_product(s, left.members, checked.members);
    int id = static_cast<int>(dc_members.size());
    dc_members.push_back(both.members);
    for (int v : both.members) {
      if (dc[v] >= 0) throw Error("factor_scheme: double cosets do not partition the relations");
      dc[v] = id;
    }
  }

  RelationTable raw(blocks, static_cast<int>(dc_members.size()));
  for (int i = 0; i < blocks; ++i)
    for (int j = 0; j < blocks; ++j) raw.at(i, j) = dc[s.rel(rep[i], rep[j])];
  return verified(canonicalize(raw), VerifyMode::full);
}

// Index of the scheme over its thin residue; always an exact integer.
inline long long delta(const Scheme& s) {
  RelationSubset res = thin_residue(s);
  long long nt = 0;
  for (int v : res.members) nt += s.valency[v];
  if (nt <= 0 || s.order() % nt != 0)
    throw Error("delta: residue size does not divide the scheme order");
  return s.order() / nt;
}

struct ConditionFlags {
  bool a = false;          // residue is elementary abelian of order p^2
  bool b = false;          // every relation outside the residue has valency p
  bool con_three = false;  // distinct residue cosets give distinct ss*
};

namespace detail {

// Multiplication table of a thin closed subset (local indices into members).
inline std::vector<int> thin_mul_table(const Scheme& s, const std::vector<int>& members) {
  const int k = static_cast<int>(members.size());
  std::vector<int> local(s.rank(), -1);
  for (int i = 0; i < k; ++i) local[members[i]] = i;
  std::vector<int> mul(static_cast<std::size_t>(k) * k, -1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      int prod = -1;
      for (int u = 0; u < s.rank(); ++u)
        if (s.c().at(members[i], members[j], u) != 0) {
          if (prod >= 0) throw Error("thin product not single-valued");
          prod = u;
        }
      if (prod < 0 || local[prod] < 0) throw Error("thin subset not closed under product");
      mul[static_cast<std::size_t>(i) * k + j] = local[prod];
    }
  return mul;
}

}  // namespace detail

// True when the closed thin subset T is a group isomorphic to C_p x C_p:
// order p^2, commutative, every element of order dividing p.
inline bool elementary_abelian_rank2(const Scheme& s, const RelationSubset& t, int p) {
  if (!t.is_thin || static_cast<int>(t.size()) != p * p) return false;
  const int k = static_cast<int>(t.size());
  std::vector<int> mul = detail::thin_mul_table(s, t.members);
  int e = -1;
  for (int i = 0; i < k; ++i)
    if (t.members[i] == s.identity) e = i;
  if (e < 0) return false;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (mul[i * k + j] != mul[j * k + i]) return false;
  for (int i = 0; i < k; ++i) {
    int acc = e;
    for (int step = 0; step < p; ++step) acc = mul[acc * k + i];
    if (acc != e) return false;
  }
  return true;
}

// Checks the three structural conditions relative to a prime p:
//   (A) the thin residue is thin of order p^2, commutative, exponent p;
//   (B) every relation outside the residue has valency p (vacuous only when
//       the scheme equals its residue);
//   (con-three) relations in distinct residue cosets have distinct ss*.
inline ConditionFlags check_conditions(const Scheme& s, int p) {
  if (!is_prime(p)) throw Error("check_conditions: p must be prime");
  ConditionFlags f;
  RelationSubset res = thin_residue(s);

  f.a = elementary_abelian_rank2(s, res, p);

  f.b = true;
  for (int rel = 0; rel < s.rank(); ++rel)
    if (!res.contains(rel) && s.valency[rel] != p) f.b = false;

  // Group the outside relations by their residue coset sT, then require the
  // map coset -> ss* to be injective.
  std::vector<std::vector<int>> coset_keys, ss_keys;
  std::vector<std::pair<int, int>> tagged;  // (coset id, ss* id)
  auto intern = [](std::vector<std::vector<int>>& pool, const std::vector<int>& v) {
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pool[i] == v) return static_cast<int>(i);
    pool.push_back(v);
    return static_cast<int>(pool.size() - 1);
  };
  for (int rel = 0; rel < s.rank(); ++rel) {
    if (res.contains(rel)) continue;
    RelationSubset coset = complex_product(s, std::vector<int>{rel}, res.members);
    RelationSubset ss = complex_product(s, std::vector<int>{rel}, std::vector<int>{s.star[rel]});
    tagged.emplace_back(intern(coset_keys, coset.members), intern(ss_keys, ss.members));
  }
  f.con_three = true;
  for (std::size_t i = 0; i < tagged.size() && f.con_three; ++i)
    for (std::size_t j = i + 1; j < tagged.size(); ++j)
      if (tagged[i].first != tagged[j].first && tagged[i].second == tagged[j].second) {
        f.con_three = false;
        break;
      }
  return f;
}

}  // namespace ascheme
