#pragma once

#include "ascheme/group.hpp"
#include "ascheme/scheme.hpp"

namespace ascheme {

// A right action of a table group on points: perm[g][x] is x^g, and
// perm[gh] = perm[h] o perm[g] (g applied first).
struct GroupAction {
  FiniteGroup group;
  int degree = 0;
  std::vector<std::vector<int>> perm;
};

inline std::vector<int> small_generating_set(const FiniteGroup& g) {
  std::vector<int> gens;
  std::vector<int> have{g.identity};
  for (int x = 0; x < g.order && static_cast<int>(have.size()) < g.order; ++x) {
    if (set_contains(have, x)) continue;
    gens.push_back(x);
    have = subgroup_closure(g, gens);
  }
  return gens;
}

inline void validate_action(const GroupAction& a) {
  const int n = a.group.order, deg = a.degree;
  if (static_cast<int>(a.perm.size()) != n) throw Error("action: one permutation per element");
  std::vector<char> seen(deg);
  for (const auto& pm : a.perm) {
    if (static_cast<int>(pm.size()) != deg) throw Error("action: permutation length mismatch");
    std::fill(seen.begin(), seen.end(), 0);
    for (int v : pm) {
      if (v < 0 || v >= deg || seen[v]) throw Error("action: not a permutation");
      seen[v] = 1;
    }
  }
  for (int x = 0; x < deg; ++x)
    if (a.perm[a.group.identity][x] != x) throw Error("action: identity must act trivially");

  // Homomorphism check; the quadratic sweep is capped, bigger groups are
  // checked against a generating set only.
  auto check = [&](int g, int h) {
    const auto& pg = a.perm[g];
    const auto& ph = a.perm[h];
    const auto& pgh = a.perm[a.group.times(g, h)];
    for (int x = 0; x < deg; ++x)
      if (pgh[x] != ph[pg[x]]) throw Error("action: perm[gh] != perm[h] o perm[g]");
  };
  if (static_cast<long long>(n) * n * deg <= 200'000'000LL) {
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) check(g, h);
  } else {
    std::vector<int> gens = small_generating_set(a.group);
    for (int g = 0; g < n; ++g)
      for (int h : gens) check(g, h);
  }
}

// Action on the right cosets Hg by right multiplication.
inline GroupAction coset_action(const FiniteGroup& g, const std::vector<int>& h) {
  std::vector<int> reps;
  std::vector<int> coset = right_cosets(g, h, &reps);
  GroupAction a;
  a.group = g;
  a.degree = static_cast<int>(reps.size());
  a.perm.assign(g.order, std::vector<int>(a.degree));
  for (int k = 0; k < g.order; ++k)
    for (int i = 0; i < a.degree; ++i) a.perm[k][i] = coset[g.times(reps[i], k)];
  validate_action(a);
  return a;
}

// Right regular action of a group on its own elements.
inline GroupAction regular_action(const FiniteGroup& g) {
  GroupAction a;
  a.group = g;
  a.degree = g.order;
  a.perm.assign(g.order, std::vector<int>(g.order));
  for (int k = 0; k < g.order; ++k)
    for (int x = 0; x < g.order; ++x) a.perm[k][x] = g.times(x, k);
  validate_action(a);
  return a;
}

inline bool is_transitive(const GroupAction& a) {
  std::vector<int> gens = small_generating_set(a.group);
  std::vector<char> seen(a.degree, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    int x = queue.back();
    queue.pop_back();
    for (int g : gens) {
      int y = a.perm[g][x];
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  for (char c : seen)
    if (!c) return false;
  return true;
}

inline bool is_regular(const GroupAction& a) {
  if (a.group.order != a.degree || !is_transitive(a)) return false;
  for (int g = 0; g < a.group.order; ++g) {
    if (g == a.group.identity) continue;
    for (int x = 0; x < a.degree; ++x)
      if (a.perm[g][x] == x) return false;
  }
  return true;
}

// The orbits of a transitive action on ordered pairs, as a scheme. Flood
// fills pair orbits along a generating set, then canonicalizes and verifies.
inline Scheme orbital_scheme(const GroupAction& a) {
  if (!is_transitive(a)) throw Error("orbital_scheme: action must be transitive");
  const int n = a.degree;
  std::vector<int> gens = small_generating_set(a.group);
  if (gens.empty()) gens.push_back(a.group.identity);

  RelationTable t(n, 1);
  std::vector<int> color(static_cast<std::size_t>(n) * n, -1);
  int next = 0;
  std::vector<std::pair<int, int>> queue;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (color[static_cast<std::size_t>(x) * n + y] >= 0) continue;
      int id = next++;
      color[static_cast<std::size_t>(x) * n + y] = id;
      queue.assign(1, {x, y});
      while (!queue.empty()) {
        auto [u, v] = queue.back();
        queue.pop_back();
        for (int g : gens) {
          int u2 = a.perm[g][u], v2 = a.perm[g][v];
          int& c = color[static_cast<std::size_t>(u2) * n + v2];
          if (c < 0) {
            c = id;
            queue.emplace_back(u2, v2);
          }
        }
      }
    }
  t.r = next;
  t.cell = std::move(color);
  return verified(canonicalize(t), n <= 1000 ? VerifyMode::full : VerifyMode::representative);
}

// The thin scheme of a group: relations are the graphs of right translations.
inline Scheme thin_scheme(const FiniteGroup& g) {
  RelationTable t(g.order, g.order);
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y) t.at(x, y) = g.times(g.inv[x], y);
  return verified(canonicalize(t), VerifyMode::full);
}

}  // namespace ascheme
