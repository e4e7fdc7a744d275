#pragma once

#include <functional>
#include <map>

#include "ascheme/common.hpp"

namespace ascheme {

// A finite group as a multiplication table. times(g,h) is the table product
// g*h; the builders that intern map families define it as composition, so
// times(f,g) is the map y -> f(g(y)). Coset actions translate on the right
// and are insensitive to that choice.
struct FiniteGroup {
  int order = 0;
  std::vector<int> mul;  // order*order
  std::vector<int> inv;
  int identity = 0;
  std::vector<std::string> labels;

  int times(int g, int h) const { return mul[static_cast<std::size_t>(g) * order + h]; }
};

namespace detail {

inline void finish_group(FiniteGroup& g, bool full_associativity) {
  const int n = g.order;
  if (n < 1 || g.mul.size() != static_cast<std::size_t>(n) * n)
    throw Error("group table is not order*order");
  for (int v : g.mul)
    if (v < 0 || v >= n) throw Error("group table entry out of range");

  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      if (g.times(e, x) != x || g.times(x, e) != x) ok = false;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw Error("group table has no identity");

  g.inv.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (g.times(x, y) == g.identity && g.times(y, x) == g.identity) {
        g.inv[x] = y;
        break;
      }
    if (g.inv[x] < 0) throw Error("group table element without inverse");
  }

  // Full associativity is cubic; skip it for big internally-built groups
  // whose product is function composition (associative by construction).
  if (full_associativity) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.times(g.times(a, b), c) != g.times(a, g.times(b, c)))
            throw Error("group table fails associativity");
  }
  if (g.labels.empty()) {
    g.labels.resize(n);
    for (int i = 0; i < n; ++i) g.labels[i] = std::to_string(i);
  }
}

}  // namespace detail

inline FiniteGroup make_group_from_table(const std::vector<std::vector<int>>& rows,
                                         std::vector<std::string> labels = {}) {
  FiniteGroup g;
  g.order = static_cast<int>(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != g.order) throw Error("group table is not square");
    g.mul.insert(g.mul.end(), row.begin(), row.end());
  }
  g.labels = std::move(labels);
  if (!g.labels.empty() && static_cast<int>(g.labels.size()) != g.order)
    throw Error("group labels do not match the order");
  detail::finish_group(g, true);
  return g;
}

inline FiniteGroup make_cyclic(int k) {
  if (k < 1) throw Error("cyclic group order must be positive");
  FiniteGroup g;
  g.order = k;
  g.mul.resize(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) g.mul[static_cast<std::size_t>(a) * k + b] = (a + b) % k;
  g.labels.resize(k);
  for (int i = 0; i < k; ++i) g.labels[i] = i == 0 ? "1" : "g" + std::to_string(i);
  detail::finish_group(g, k <= 512);
  return g;
}

// (Z/p)^rank with index digits written big-endian: element i has coordinates
// (i / p^(rank-1), ..., i % p).
inline FiniteGroup make_elementary_abelian(int p, int rank) {
  if (!is_prime(p)) throw Error("elementary abelian group needs a prime p");
  if (rank < 1 || rank > 6) throw Error("unsupported rank");
  int n = 1;
  for (int i = 0; i < rank; ++i) n *= p;
  FiniteGroup g;
  g.order = n;
  g.mul.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int x = a, y = b, pow = 1, sum = 0;
      for (int i = 0; i < rank; ++i) {
        sum += ((x % p) + (y % p)) % p * pow;
        x /= p;
        y /= p;
        pow *= p;
      }
      g.mul[static_cast<std::size_t>(a) * n + b] = sum;
    }
  g.labels.resize(n);
  for (int i = 0; i < n; ++i) g.labels[i] = std::to_string(i);
  detail::finish_group(g, n <= 512);
  return g;
}

// Interns an element universe closed under `compose` into a table group.
// Used for the affine groups, where associativity is structural.
template <class Elem, class KeyFn, class ComposeFn>
FiniteGroup group_from_elements(const std::vector<Elem>& elems, KeyFn key, ComposeFn compose,
                                std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(elems.size());
  std::map<decltype(key(elems[0])), int> index;
  for (int i = 0; i < n; ++i)
    if (!index.emplace(key(elems[i]), i).second) throw Error("duplicate group element");
  FiniteGroup g;
  g.order = n;
  g.mul.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto it = index.find(key(compose(elems[a], elems[b])));
      if (it == index.end()) throw Error("element universe not closed under composition");
      g.mul[static_cast<std::size_t>(a) * n + b] = it->second;
    }
  g.labels = std::move(labels);
  detail::finish_group(g, n <= 512);
  return g;
}

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  // Element (x, y) gets index x*|b| + y.
  const int n = a.order * b.order;
  FiniteGroup g;
  g.order = n;
  g.mul.resize(static_cast<std::size_t>(n) * n);
  for (int x1 = 0; x1 < a.order; ++x1)
    for (int y1 = 0; y1 < b.order; ++y1)
      for (int x2 = 0; x2 < a.order; ++x2)
        for (int y2 = 0; y2 < b.order; ++y2) {
          int lhs = x1 * b.order + y1, rhs = x2 * b.order + y2;
          g.mul[static_cast<std::size_t>(lhs) * n + rhs] =
              a.times(x1, x2) * b.order + b.times(y1, y2);
        }
  g.labels.resize(n);
  for (int x = 0; x < a.order; ++x)
    for (int y = 0; y < b.order; ++y)
      g.labels[x * b.order + y] = "(" + a.labels[x] + "," + b.labels[y] + ")";
  detail::finish_group(g, n <= 512);
  return g;
}

inline bool is_subgroup(const FiniteGroup& g, const std::vector<int>& h) {
  if (h.empty() || !set_contains(h, g.identity)) return false;
  for (int a : h) {
    if (a < 0 || a >= g.order) return false;
    if (!set_contains(h, g.inv[a])) return false;
    for (int b : h)
      if (!set_contains(h, g.times(a, b))) return false;
  }
  return true;
}

inline bool is_normal(const FiniteGroup& g, const std::vector<int>& h) {
  if (!is_subgroup(g, h)) return false;
  for (int x = 0; x < g.order; ++x)
    for (int a : h)
      if (!set_contains(h, g.times(g.times(g.inv[x], a), x))) return false;
  return true;
}

inline std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> gens) {
  std::vector<int> h{g.identity};
  for (int v : gens) set_insert(h, v);
  for (;;) {
    std::vector<int> next = h;
    for (int a : h) {
      set_insert(next, g.inv[a]);
      for (int b : h) set_insert(next, g.times(a, b));
    }
    if (next == h) return h;
    h = std::move(next);
  }
}

// Right cosets Hg; returns the coset id of every element, ids ordered by the
// smallest member.
inline std::vector<int> right_cosets(const FiniteGroup& g, const std::vector<int>& h,
                                     std::vector<int>* reps = nullptr) {
  if (!is_subgroup(g, h)) throw Error("right_cosets: not a subgroup");
  std::vector<int> coset(g.order, -1);
  std::vector<int> rep_list;
  for (int x = 0; x < g.order; ++x) {
    if (coset[x] >= 0) continue;
    int id = static_cast<int>(rep_list.size());
    rep_list.push_back(x);
    for (int a : h) coset[g.times(a, x)] = id;
  }
  if (reps != nullptr) *reps = std::move(rep_list);
  return coset;
}

struct Quotient {
  FiniteGroup group;
  std::vector<int> coset_of;  // element -> quotient index
};

inline Quotient quotient_group(const FiniteGroup& g, const std::vector<int>& h) {
  if (!is_normal(g, h)) throw Error("quotient_group: subgroup is not normal");
  std::vector<int> reps;
  std::vector<int> coset = right_cosets(g, h, &reps);
  const int m = static_cast<int>(reps.size());
  FiniteGroup q;
  q.order = m;
  q.mul.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      q.mul[static_cast<std::size_t>(i) * m + j] = coset[g.times(reps[i], reps[j])];
  q.labels.resize(m);
  for (int i = 0; i < m; ++i) q.labels[i] = g.labels[reps[i]];
  detail::finish_group(q, m <= 512);
  return {std::move(q), std::move(coset)};
}

}  // namespace ascheme
