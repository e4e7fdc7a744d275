#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "ascheme/scheme.hpp"

namespace ascheme {

struct SearchLimits {
  long long nodes = 2000000;
  int max_points = 150;
  static SearchLimits defaults() {
    SearchLimits l;
    l.nodes = env_long("ASCHEME_BUDGET", l.nodes);
    l.max_points = static_cast<int>(env_long("ASCHEME_MAX_POINTS", l.max_points));
    return l;
  }
};

// Exact non-negative integer; only needs multiplication by machine ints, for
// orbit-size products that overflow 64 bits on large symmetric groups.
struct BigCount {
  static constexpr std::uint32_t kBase = 1000000000;
  std::vector<std::uint32_t> limbs{1};  // little-endian base 1e9

  void mul(std::uint64_t m) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs) {
      std::uint64_t v = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(v % kBase);
      carry = v / kBase;
    }
    while (carry != 0) {
      limbs.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
  }

  bool is(std::uint64_t v) const {
    for (std::uint32_t limb : limbs) {
      if (limb != v % kBase) return false;
      v /= kBase;
    }
    return v == 0;
  }

  std::string str() const {
    std::string out = std::to_string(limbs.back());
    for (auto it = limbs.rbegin() + 1; it != limbs.rend(); ++it) {
      std::string part = std::to_string(*it);
      out += std::string(9 - part.size(), '0') + part;
    }
    return out;
  }
};

namespace detail {

// One pass of edge-colored degree refinement over two tables in lockstep.
// Colors are renumbered canonically from the combined signature order, so a
// class in one table matches the like-signed class in the other. Returns
// false when the class size profiles diverge (no color-preserving map can
// exist); `classes` tracks the number of colors.
inline bool refine_colors(const RelationTable& ta, const RelationTable& tb, std::vector<int>& ca,
                          std::vector<int>& cb, int& classes) {
  const int n = ta.n;
  for (;;) {
    std::map<std::vector<int>, int> ids;
    auto signature = [n](const RelationTable& t, const std::vector<int>& c, int x) {
      std::vector<std::pair<int, int>> pr;
      pr.reserve(n);
      for (int y = 0; y < n; ++y) pr.emplace_back(c[y], t.at(x, y));
      std::sort(pr.begin(), pr.end());
      std::vector<int> s;
      s.reserve(2 * n + 1);
      s.push_back(c[x]);
      for (const auto& [cy, rel] : pr) {
        s.push_back(cy);
        s.push_back(rel);
      }
      return s;
    };
    std::vector<std::vector<int>> sa(n), sb(n);
    for (int x = 0; x < n; ++x) {
      sa[x] = signature(ta, ca, x);
      ids.emplace(sa[x], 0);
      sb[x] = signature(tb, cb, x);
      ids.emplace(sb[x], 0);
    }
    int next = 0;
    for (auto& [sig, id] : ids) id = next++;
    std::vector<int> cnta(next, 0), cntb(next, 0);
    for (int x = 0; x < n; ++x) {
      ca[x] = ids[sa[x]];
      cb[x] = ids[sb[x]];
      ++cnta[ca[x]];
      ++cntb[cb[x]];
    }
    if (cnta != cntb) return false;
    if (next == classes) return true;  // a pass that splits nothing is a fixpoint
    classes = next;
  }
}

// Backtracking search for a point bijection phi with tb[phi x][phi y] ==
// ta[x][y], driven by individualization plus refinement. Relation indices
// are compared literally, so both tables must use the same labelling.
struct MapSearch {
  const RelationTable& ta;
  const RelationTable& tb;
  long long& nodes;

  std::optional<std::vector<int>> leaf(const std::vector<int>& ca, const std::vector<int>& cb) {
    const int n = ta.n;
    std::vector<int> where(static_cast<std::size_t>(n), -1);
    for (int y = 0; y < n; ++y) where[cb[y]] = y;
    std::vector<int> phi(n);
    for (int x = 0; x < n; ++x) phi[x] = where[ca[x]];
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (tb.at(phi[x], phi[y]) != ta.at(x, y)) return std::nullopt;
    return phi;
  }

  std::optional<std::vector<int>> run(std::vector<int> ca, std::vector<int> cb, int classes) {
    if (--nodes < 0) throw BudgetExceeded("map search exceeded the node budget");
    if (!refine_colors(ta, tb, ca, cb, classes)) return std::nullopt;
    const int n = ta.n;
    std::vector<int> count(classes, 0), lowest(classes, n);
    for (int x = 0; x < n; ++x) {
      ++count[ca[x]];
      lowest[ca[x]] = std::min(lowest[ca[x]], x);
    }
    int branch_color = -1;
    for (int c = 0; c < classes; ++c)
      if (count[c] > 1 && (branch_color < 0 || count[c] < count[branch_color])) branch_color = c;
    if (branch_color < 0) return leaf(ca, cb);
    int a = lowest[branch_color];
    for (int b = 0; b < n; ++b) {
      if (cb[b] != branch_color) continue;
      std::vector<int> ca2 = ca, cb2 = cb;
      ca2[a] = classes;
      cb2[b] = classes;
      if (auto phi = run(std::move(ca2), std::move(cb2), classes + 1)) return phi;
    }
    return std::nullopt;
  }
};

// Search with pinned points: pins[i] = (x, y) forces phi(x) = y.
inline std::optional<std::vector<int>> find_map(const RelationTable& ta, const RelationTable& tb,
                                                const std::vector<std::pair<int, int>>& pins,
                                                long long& nodes) {
  if (ta.n != tb.n || ta.r != tb.r) return std::nullopt;
  std::vector<int> ca(ta.n, 0), cb(ta.n, 0);
  int next = 1;
  for (const auto& [x, y] : pins) {
    if (ca[x] != 0 || cb[y] != 0) throw Error("find_map: conflicting pins");
    ca[x] = next;
    cb[y] = next;
    ++next;
  }
  detail::MapSearch search{ta, tb, nodes};
  return search.run(std::move(ca), std::move(cb), next);
}

}  // namespace detail

struct AutomorphismReport {
  BigCount order;
  std::vector<std::vector<int>> generators;
  std::vector<int> base_orbit_sizes;  // one factor per stabilizer-chain level
};

// Exact automorphism group of a scheme: a stabilizer chain over the points in
// index order. At each level the orbit of the next base point is grown from
// the generators found so far and completed by explicit searches, so the
// orbit sizes are exact and the collected generators generate the full group.
inline AutomorphismReport automorphisms(const Scheme& s,
                                        const SearchLimits& lim = SearchLimits::defaults()) {
  const RelationTable& t = s.table;
  const int n = t.n;
  if (n > lim.max_points)
    throw BudgetExceeded("automorphisms: point count exceeds the configured limit");
  long long nodes = lim.nodes;

  AutomorphismReport rep;
  std::vector<int> fixed_prefix;  // per generator: first point it moves
  for (int k = 0; k < n; ++k) {
    std::vector<int> ca(n, 0), cb(n, 0);
    for (int i = 0; i < k; ++i) ca[i] = cb[i] = i + 1;
    int classes = k + 1;
    if (!detail::refine_colors(t, t, ca, cb, classes))
      throw Error("automorphisms: self refinement cannot fail");

    std::vector<char> in_orbit(n, 0);
    std::vector<int> orbit{k};
    in_orbit[k] = 1;
    auto close_orbit = [&]() {
      for (std::size_t i = 0; i < orbit.size(); ++i)
        for (std::size_t g = 0; g < rep.generators.size(); ++g) {
          if (fixed_prefix[g] < k) continue;
          int img = rep.generators[g][orbit[i]];
          if (!in_orbit[img]) {
            in_orbit[img] = 1;
            orbit.push_back(img);
          }
        }
    };
    close_orbit();

    for (int c = 0; c < n; ++c) {
      if (c == k || cb[c] != ca[k] || in_orbit[c]) continue;
      std::vector<int> ca2 = ca, cb2 = cb;
      ca2[k] = classes;
      cb2[c] = classes;
      detail::MapSearch search{t, t, nodes};
      if (auto phi = search.run(std::move(ca2), std::move(cb2), classes + 1)) {
        int moved = 0;
        while (moved < n && (*phi)[moved] == moved) ++moved;
        rep.generators.push_back(std::move(*phi));
        fixed_prefix.push_back(moved);
        close_orbit();
      }
    }
    rep.base_orbit_sizes.push_back(static_cast<int>(orbit.size()));
    rep.order.mul(static_cast<std::uint64_t>(orbit.size()));
  }
  return rep;
}

struct SchurianReport {
  bool transitive = false;
  long long pair_orbits = 0;
  bool schurian = false;
  AutomorphismReport aut;
};

// A scheme is recovered by its automorphisms exactly when the group is
// transitive and its pair orbits are the relations themselves.
inline SchurianReport is_schurian(const Scheme& s,
                                  const SearchLimits& lim = SearchLimits::defaults()) {
  SchurianReport rep;
  rep.aut = automorphisms(s, lim);
  const int n = s.order();

  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& g : rep.aut.generators) {
      if (!seen[g[x]]) {
        seen[g[x]] = 1;
        ++reached;
        stack.push_back(g[x]);
      }
    }
  }
  rep.transitive = reached == n;

  std::vector<char> pair_seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::pair<int, int>> pstack;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (pair_seen[static_cast<std::size_t>(x) * n + y]) continue;
      ++rep.pair_orbits;
      pair_seen[static_cast<std::size_t>(x) * n + y] = 1;
      pstack.assign(1, {x, y});
      while (!pstack.empty()) {
        auto [u, v] = pstack.back();
        pstack.pop_back();
        for (const auto& g : rep.aut.generators) {
          std::size_t id = static_cast<std::size_t>(g[u]) * n + g[v];
          if (!pair_seen[id]) {
            pair_seen[id] = 1;
            pstack.push_back({g[u], g[v]});
          }
        }
      }
    }
  rep.schurian = rep.transitive && rep.pair_orbits == s.rank();
  return rep;
}

namespace detail {

// Enumerates relation bijections preserving identity, star, valency and the
// whole intersection tensor; calls sink on each complete one until it
// returns true. Returns whether the sink accepted one.
struct RelationMatch {
  const Scheme& a;
  const Scheme& b;
  long long& nodes;
  std::vector<int> map, used;

  bool consistent(int s, int u) const {
    if (a.valency[s] != b.valency[u]) return false;
    if ((s == a.identity) != (u == b.identity)) return false;
    int st = a.star[s];
    if (st == s && b.star[u] != u) return false;
    if (st < s && map[st] != b.star[u]) return false;
    // tensor entries over mapped triples that touch s
    const int r = a.rank();
    for (int i = 0; i < r; ++i) {
      if (i != s && map[i] < 0) continue;
      int mi = i == s ? u : map[i];
      for (int j = 0; j < r; ++j) {
        if (j != s && map[j] < 0) continue;
        int mj = j == s ? u : map[j];
        for (int k = 0; k < r; ++k) {
          if (k != s && map[k] < 0) continue;
          if (i != s && j != s && k != s) continue;
          int mk = k == s ? u : map[k];
          if (a.c(i, j, k) != b.c(mi, mj, mk)) return false;
        }
      }
    }
    return true;
  }

  template <class Sink>
  bool run(int s, Sink&& sink) {
    if (--nodes < 0) throw BudgetExceeded("relation search exceeded the node budget");
    const int r = a.rank();
    if (s == r) return sink(map);
    for (int u = 0; u < r; ++u) {
      if (used[u] || !consistent(s, u)) continue;
      map[s] = u;
      used[u] = 1;
      if (run(s + 1, sink)) return true;
      map[s] = -1;
      used[u] = 0;
    }
    return false;
  }
};

}  // namespace detail

// Relation bijection carrying one intersection tensor onto the other, if any.
inline std::optional<std::vector<int>> are_algebraically_isomorphic(
    const Scheme& a, const Scheme& b, const SearchLimits& lim = SearchLimits::defaults()) {
  if (a.order() != b.order() || a.rank() != b.rank()) return std::nullopt;
  long long nodes = lim.nodes;
  detail::RelationMatch match{a, b, nodes, std::vector<int>(a.rank(), -1),
                              std::vector<int>(a.rank(), 0)};
  std::optional<std::vector<int>> out;
  match.run(0, [&](const std::vector<int>& m) {
    out = m;
    return true;
  });
  return out;
}

struct IsoWitness {
  std::vector<int> point_map;     // phi: points of a -> points of b
  std::vector<int> relation_map;  // iota: relations of a -> relations of b
};

// Combinatorial isomorphism: a point bijection phi together with a relation
// bijection iota such that b(phi x, phi y) = iota(a(x, y)). The outer loop
// enumerates tensor-preserving iotas; each fixes the labels so the point
// search can compare them literally.
inline std::optional<IsoWitness> are_isomorphic(const Scheme& a, const Scheme& b,
                                                const SearchLimits& lim = SearchLimits::defaults()) {
  if (a.order() != b.order() || a.rank() != b.rank()) return std::nullopt;
  if (a.order() > lim.max_points)
    throw BudgetExceeded("are_isomorphic: point count exceeds the configured limit");
  {
    std::vector<int> va = a.valency, vb = b.valency;
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    if (va != vb) return std::nullopt;
  }
  long long nodes = lim.nodes;
  detail::RelationMatch match{a, b, nodes, std::vector<int>(a.rank(), -1),
                              std::vector<int>(a.rank(), 0)};
  std::optional<IsoWitness> out;
  match.run(0, [&](const std::vector<int>& iota) {
    RelationTable relabeled(b.table.n, b.table.r);
    std::vector<int> inv(iota.size());
    for (std::size_t s = 0; s < iota.size(); ++s) inv[iota[s]] = static_cast<int>(s);
    for (std::size_t i = 0; i < relabeled.cell.size(); ++i)
      relabeled.cell[i] = inv[b.table.cell[i]];
    if (auto phi = detail::find_map(a.table, relabeled, {}, nodes)) {
      for (int x = 0; x < a.order(); ++x)
        for (int y = 0; y < a.order(); ++y)
          if (b.table.at((*phi)[x], (*phi)[y]) != iota[a.table.at(x, y)])
            throw Error("are_isomorphic: witness failed revalidation");
      out = IsoWitness{std::move(*phi), iota};
      return true;
    }
    return false;
  });
  return out;
}

}  // namespace ascheme
