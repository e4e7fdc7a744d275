#pragma once

#include <optional>

#include "ascheme/gf.hpp"
#include "ascheme/incidence.hpp"

namespace ascheme {

struct BuildOptions {
  // Refuses point sets beyond this size; callers opt in to bigger builds.
  int max_points = 20000;
  static BuildOptions defaults() {
    BuildOptions o;
    o.max_points = static_cast<int>(env_long("ASCHEME_MAX_BUILD_POINTS", o.max_points));
    return o;
  }
};

// The p+1 subgroups of order p in V = F_p x F_p, elements encoded e0*p + e1.
// Canonical order: <(0,1)> first, then <(1,k)> for k = 0..p-1.
inline std::vector<std::vector<int>> subgroups_order_p(int p) {
  if (!is_prime(p)) throw Error("subgroups_order_p: p must be prime");
  std::vector<std::vector<int>> out;
  auto span = [&](int e0, int e1) {
    std::vector<int> s;
    for (int k = 0; k < p; ++k) s.push_back((k * e0) % p * p + (k * e1) % p);
    std::sort(s.begin(), s.end());
    return s;
  };
  out.push_back(span(0, 1));
  for (int k = 0; k < p; ++k) out.push_back(span(1, k));
  return out;
}

// The subgroup assignments driving the tower construction: L picks a distinct
// order-p subgroup per non-identity group element, C picks one more per
// inverse pair, never equal to L on either member.
struct LCMaps {
  int p = 0;
  FiniteGroup group;
  std::vector<int> l_of;  // element -> subgroup index, -1 at the identity
  std::vector<int> c_of;
};

inline void validate_lc(const LCMaps& lc) {
  const FiniteGroup& g = lc.group;
  const int nsub = lc.p + 1;
  if (!is_prime(lc.p)) throw Error("lc: p must be prime");
  if (static_cast<int>(lc.l_of.size()) != g.order || static_cast<int>(lc.c_of.size()) != g.order)
    throw Error("lc: maps must cover every group element");
  std::vector<char> seen(nsub, 0);
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity) {
      if (lc.l_of[a] != -1 || lc.c_of[a] != -1) throw Error("lc: identity entries must be -1");
      continue;
    }
    int l = lc.l_of[a], c = lc.c_of[a];
    if (l < 0 || l >= nsub || c < 0 || c >= nsub) throw Error("lc: subgroup index out of range");
    if (seen[l]) throw Error("lc: L must be injective");
    seen[l] = 1;
    if (c == l) throw Error("lc: C must differ from L");
    if (c != lc.c_of[g.inv[a]]) throw Error("lc: C must agree on inverse pairs");
  }
}

inline LCMaps default_lc(int p, const FiniteGroup& g) {
  if (!is_prime(p)) throw Error("default_lc: p must be prime");
  if (g.order - 1 > p + 1) throw Error("default_lc: group too large for injective L");
  LCMaps lc;
  lc.p = p;
  lc.group = g;
  lc.l_of.assign(g.order, -1);
  lc.c_of.assign(g.order, -1);
  int next = 0;
  for (int a = 0; a < g.order; ++a)
    if (a != g.identity) lc.l_of[a] = next++;
  // Inverse pairs in ascending element order; C takes the lowest canonical
  // subgroup excluded on neither member of the pair.
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity || lc.c_of[a] >= 0) continue;
    int b = g.inv[a];
    for (int cand = 0; cand <= p + 1; ++cand)
      if (cand != lc.l_of[a] && cand != lc.l_of[b]) {
        lc.c_of[a] = cand;
        lc.c_of[b] = cand;
        break;
      }
  }
  validate_lc(lc);
  return lc;
}

// Every admissible (L, C) pair for the given p and group.
inline std::vector<LCMaps> enumerate_lc(int p, const FiniteGroup& g) {
  if (g.order - 1 > p + 1) return {};
  std::vector<int> nonid;
  for (int a = 0; a < g.order; ++a)
    if (a != g.identity) nonid.push_back(a);
  std::vector<LCMaps> out;
  LCMaps lc;
  lc.p = p;
  lc.group = g;
  lc.l_of.assign(g.order, -1);
  lc.c_of.assign(g.order, -1);
  const int nsub = p + 1;

  std::function<void(std::size_t)> pick_c = [&](std::size_t i) {
    if (i == nonid.size()) {
      out.push_back(lc);
      return;
    }
    int a = nonid[i];
    if (lc.c_of[a] >= 0) {
      pick_c(i + 1);
      return;
    }
    int b = lc.group.inv[a];
    for (int cand = 0; cand < nsub; ++cand) {
      if (cand == lc.l_of[a] || cand == lc.l_of[b]) continue;
      lc.c_of[a] = lc.c_of[b] = cand;
      pick_c(i + 1);
      lc.c_of[a] = lc.c_of[b] = -1;
    }
  };
  std::vector<char> used(nsub, 0);
  std::function<void(std::size_t)> pick_l = [&](std::size_t i) {
    if (i == nonid.size()) {
      pick_c(0);
      return;
    }
    for (int cand = 0; cand < nsub; ++cand) {
      if (used[cand]) continue;
      used[cand] = 1;
      lc.l_of[nonid[i]] = cand;
      pick_l(i + 1);
      lc.l_of[nonid[i]] = -1;
      used[cand] = 0;
    }
  };
  pick_l(0);
  for (const auto& m : out) validate_lc(m);
  return out;
}

// Where a constructed scheme keeps its pieces after canonical relabelling:
// h_rel by difference vector, t_rel[a] keyed by the class representative.
struct TowerLayout {
  std::vector<int> h_rel;
  std::vector<std::map<int, int>> t_rel;
};

struct ConstructionReport {
  std::string kind;
  int p = 0;
  Scheme scheme;
  long long delta_value = 0;
  int relation_count = 0;
  ConditionFlags conditions;
  std::vector<std::string> relation_labels;
  std::optional<TowerLayout> layout;
};

namespace detail {

struct VSpace {
  int p;
  int size() const { return p * p; }
  int add(int a, int b) const { return (a / p + b / p) % p * p + (a % p + b % p) % p; }
  int neg(int a) const { return (p - a / p) % p * p + (p - a % p) % p; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  std::string str(int a) const {
    return "(" + std::to_string(a / p) + "," + std::to_string(a % p) + ")";
  }
};

// Coset representative (minimum member) of v + subgroup, plus the rank of
// each representative among all of them.
struct CosetIndex {
  std::vector<int> rep;   // by vector
  std::vector<int> rank;  // by vector (rank of its representative)
  int classes = 0;
};

inline CosetIndex coset_index(const VSpace& v, const std::vector<int>& sub) {
  CosetIndex ci;
  ci.rep.assign(v.size(), -1);
  ci.rank.assign(v.size(), -1);
  for (int x = 0; x < v.size(); ++x) {
    if (ci.rep[x] >= 0) continue;
    for (int l : sub) {
      int y = v.add(x, l);
      ci.rep[y] = x;  // x is minimal: scan order guarantees it
    }
  }
  std::vector<int> reps;
  for (int x = 0; x < v.size(); ++x)
    if (ci.rep[x] == x) reps.push_back(x);
  ci.classes = static_cast<int>(reps.size());
  for (int x = 0; x < v.size(); ++x)
    ci.rank[x] = static_cast<int>(std::lower_bound(reps.begin(), reps.end(), ci.rep[x]) -
                                  reps.begin());
  return ci;
}

// Component in C of the direct decomposition V = L + C.
inline std::vector<int> complement_component(const VSpace& v, const std::vector<int>& l,
                                             const std::vector<int>& c) {
  std::vector<int> comp(v.size(), -1);
  for (int x : c)
    for (int ell : l) {
      int y = v.add(ell, x);
      if (comp[y] >= 0) throw Error("subgroups do not decompose the plane");
      comp[y] = x;
    }
  for (int y : comp)
    if (y < 0) throw Error("subgroups do not decompose the plane");
  return comp;
}

inline void finish_report(ConstructionReport& rep, int expected_delta) {
  rep.relation_count = rep.scheme.rank();
  rep.delta_value = delta(rep.scheme);
  rep.conditions = check_conditions(rep.scheme, rep.p);
  if (rep.delta_value != expected_delta)
    throw Error(rep.kind + ": residue index " + std::to_string(rep.delta_value) +
                ", expected " + std::to_string(expected_delta));
  if (!rep.conditions.a || !rep.conditions.b)
    throw Error(rep.kind + ": output misses the rank-2 residue conditions");
}

}  // namespace detail

// The tower scheme on (F_p x F_p) x G for 3 <= |G| <= p+2: thin translation
// relations h_w plus |G|-1 families of valency-p relations shaped by (L, C).
// Point (u, b) has index b*p^2 + u.
inline ConstructionReport build_thm34(int p, const FiniteGroup& g, const LCMaps& lc,
                                      const BuildOptions& opt = BuildOptions::defaults()) {
  if (!is_prime(p)) throw Error("build_thm34: p must be prime");
  const int dlt = g.order;
  if (dlt < 3 || dlt > p + 2)
    throw Error("build_thm34: group order must lie in [3, p+2]");
  if (lc.p != p || lc.group.order != g.order || lc.group.mul != g.mul)
    throw Error("build_thm34: (L,C) maps built for a different p or group");
  validate_lc(lc);

  detail::VSpace v{p};
  const int n = v.size() * dlt;
  if (n > opt.max_points) throw Error("build_thm34: point count exceeds the build guard");
  auto subs = subgroups_order_p(p);

  // Per non-identity element a: decomposition component in C_a of V = L_a + C_a
  // and the coset classes of L_{a^-1}.
  std::vector<std::vector<int>> comp(g.order);
  std::vector<detail::CosetIndex> classes(g.order);
  std::vector<int> tpos(g.order, -1);
  int families = 0;
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity) continue;
    comp[a] = detail::complement_component(v, subs[lc.l_of[a]], subs[lc.c_of[a]]);
    classes[a] = detail::coset_index(v, subs[lc.l_of[g.inv[a]]]);
    tpos[a] = families++;
  }

  RelationTable raw(n, v.size() + families * p);
  auto idx = [&](int b, int u) { return b * v.size() + u; };
  for (int b = 0; b < dlt; ++b)
    for (int u = 0; u < v.size(); ++u)
      for (int c = 0; c < dlt; ++c)
        for (int w = 0; w < v.size(); ++w) {
          int& cellv = raw.at(idx(b, u), idx(c, w));
          if (b == c) {
            cellv = v.sub(u, w);
          } else {
            int a = g.times(g.inv[b], c);
            int x = comp[a][u];
            cellv = v.size() + tpos[a] * p + classes[a].rank[v.sub(x, w)];
          }
        }

  std::vector<int> relabel;
  RelationTable canon = canonicalize(raw, &relabel);

  ConstructionReport rep;
  rep.kind = "thm34";
  rep.p = p;
  rep.scheme = verified(canon, n <= 1000 ? VerifyMode::full : VerifyMode::representative);

  TowerLayout lay;
  lay.h_rel.resize(v.size());
  for (int w = 0; w < v.size(); ++w) lay.h_rel[w] = relabel[w];
  lay.t_rel.assign(g.order, {});
  rep.relation_labels.assign(canon.r, {});
  for (int w = 0; w < v.size(); ++w)
    rep.relation_labels[lay.h_rel[w]] = w == 0 ? "1" : "h" + v.str(w);
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity) continue;
    for (int w = 0; w < v.size(); ++w)
      if (classes[a].rep[w] == w) {
        int rel = relabel[v.size() + tpos[a] * p + classes[a].rank[w]];
        lay.t_rel[a][w] = rel;
        rep.relation_labels[rel] =
            w == 0 ? "t[" + g.labels[a] + "]" : "t[" + g.labels[a] + "]h" + v.str(w);
      }
  }
  rep.layout = std::move(lay);

  detail::finish_report(rep, dlt);
  if (!rep.conditions.con_three)
    throw Error("build_thm34: distinct cosets share an ss* set");
  return rep;
}

inline ConstructionReport build_thm34(int p, const FiniteGroup& g,
                                      const BuildOptions& opt = BuildOptions::defaults()) {
  return build_thm34(p, g, default_lc(p, g), opt);
}

inline ConstructionReport build_thm34(int p, int delta_order,
                                      const BuildOptions& opt = BuildOptions::defaults()) {
  return build_thm34(p, make_cyclic(delta_order), opt);
}

// -------- affine constructions --------

namespace detail {

struct Affine41 {
  int a, b;             // unitriangular matrix with equal superdiagonal
  std::array<int, 3> x; // translation part
};

}  // namespace detail

// Group of maps y -> yA(a,b) + x on F_p^3, A(a,b) unitriangular with (a, a)
// on the superdiagonal and b in the corner; H is generated by the translation
// along the first axis. Returns the group and the subgroup H.
inline std::pair<FiniteGroup, std::vector<int>> sec41_group(int p) {
  if (!is_prime(p)) throw Error("sec41_group: p must be prime");
  std::vector<detail::Affine41> elems;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int x0 = 0; x0 < p; ++x0)
        for (int x1 = 0; x1 < p; ++x1)
          for (int x2 = 0; x2 < p; ++x2)
            elems.push_back({a, b, {x0, x1, x2}});
  auto key = [p](const detail::Affine41& e) {
    return (((e.a * p + e.b) * p + e.x[0]) * p + e.x[1]) * p + e.x[2];
  };
  // compose(f, g) = f after g: y(BA) + zA + x for f = (A, x), g = (B, z).
  auto compose = [p](const detail::Affine41& f, const detail::Affine41& g) {
    detail::Affine41 r;
    r.a = (g.a + f.a) % p;
    r.b = (g.b + f.b + g.a * f.a) % p;
    r.x = {(g.x[0] + f.x[0]) % p,
           (g.x[0] * f.a + g.x[1] + f.x[1]) % p,
           (g.x[0] * f.b + g.x[1] * f.a + g.x[2] + f.x[2]) % p};
    return r;
  };
  FiniteGroup grp = group_from_elements(elems, key, compose);
  std::vector<int> h;
  for (int c = 0; c < p; ++c) h.push_back(key({0, 0, {c, 0, 0}}));
  std::sort(h.begin(), h.end());
  return {std::move(grp), std::move(h)};
}

// Orbit scheme of the unitriangular affine family on p^4 cosets.
inline ConstructionReport build_sec41(int p, const BuildOptions& opt = BuildOptions::defaults()) {
  auto [grp, h] = sec41_group(p);
  const int n = grp.order / static_cast<int>(h.size());
  if (n > opt.max_points) throw Error("build_sec41: point count exceeds the build guard");
  ConstructionReport rep;
  rep.kind = "sec41";
  rep.p = p;
  rep.scheme = orbital_scheme(coset_action(grp, h));
  detail::finish_report(rep, p * p);
  return rep;
}

// Group of maps y -> ay + b on GF(p^3) with a in the norm-one subgroup of
// order p^2+p+1; H is the translation by the prime subfield.
inline std::pair<FiniteGroup, std::vector<int>> sec42_group(const Gfp3& f) {
  std::vector<int> k = f.norm_one_subgroup();
  std::vector<std::pair<int, int>> elems;  // (a, b)
  for (int a : k)
    for (int b = 0; b < f.q(); ++b) elems.emplace_back(a, b);
  auto key = [&f](const std::pair<int, int>& e) { return e.first * f.q() + e.second; };
  auto compose = [&f](const std::pair<int, int>& l, const std::pair<int, int>& r) {
    // l after r: a_l(a_r y + b_r) + b_l
    return std::pair<int, int>(f.mul(l.first, r.first), f.add(f.mul(l.first, r.second), l.second));
  };
  FiniteGroup grp = group_from_elements(elems, key, compose);
  std::vector<int> h;
  for (int c = 0; c < f.p(); ++c) {
    int id = -1;
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (elems[i].first == f.one() && elems[i].second == c) id = static_cast<int>(i);
    h.push_back(id);
  }
  std::sort(h.begin(), h.end());
  return {std::move(grp), std::move(h)};
}

inline ConstructionReport build_sec42(int p, const Gfp3& f, bool allow_even = false,
                                      const BuildOptions& opt = BuildOptions::defaults()) {
  if (!is_prime(p)) throw Error("build_sec42: p must be prime");
  if (p == 2 && !allow_even)
    throw Error("build_sec42: p = 2 sits outside the stated range; pass allow_even to force it");
  if (f.p() != p) throw Error("build_sec42: field characteristic differs from p");
  auto [grp, h] = sec42_group(f);
  const int n = grp.order / static_cast<int>(h.size());
  if (n > opt.max_points) throw Error("build_sec42: point count exceeds the build guard");
  ConstructionReport rep;
  rep.kind = "sec42";
  rep.p = p;
  rep.scheme = orbital_scheme(coset_action(grp, h));
  detail::finish_report(rep, p * p + p + 1);
  return rep;
}

inline ConstructionReport build_sec42(int p, bool allow_even = false,
                                      const BuildOptions& opt = BuildOptions::defaults()) {
  if (!is_prime(p)) throw Error("build_sec42: p must be prime");
  return build_sec42(p, Gfp3::with_default_modulus(p), allow_even, opt);
}

// Tower scheme over a linear space with a regular line-preserving group:
// relations between the V-fibres of points b, c depend on the line through
// the base point and b^-1 c. Point (u, q) has index q*p^2 + u.
inline ConstructionReport build_thm51(const IncidenceStructure& raw_space, const GroupAction& act,
                                      int p, const BuildOptions& opt = BuildOptions::defaults()) {
  if (!is_prime(p)) throw Error("build_thm51: p must be prime");
  IncidenceStructure space = normalize_incidence(raw_space);
  IncidenceClass cls = classify_incidence(space);
  if (!cls.linear) throw Error("build_thm51: the space must be linear");
  if (!regular_line_preserving(space, act))
    throw Error("build_thm51: the action must be regular and line-preserving");
  const int m = space.points;

  // Identify points with group elements through the base point 0.
  std::vector<int> elem_of(m, -1), point_of(act.group.order, -1);
  for (int g = 0; g < act.group.order; ++g) {
    int q = act.perm[g][0];
    if (elem_of[q] >= 0) throw Error("build_thm51: action is not regular");
    elem_of[q] = g;
    point_of[g] = q;
  }

  std::vector<std::vector<int>> through_base;
  for (const auto& l : space.lines)
    if (std::binary_search(l.begin(), l.end(), 0)) through_base.push_back(l);
  if (static_cast<int>(through_base.size()) >= p + 1)
    throw Error("build_thm51: p+1 or more lines through the base point");
  if (through_base.size() < 2)
    throw Error("build_thm51: need at least two lines through the base point");

  auto subs = subgroups_order_p(p);
  std::vector<int> line_sub(through_base.size());
  for (std::size_t i = 0; i < through_base.size(); ++i) line_sub[i] = static_cast<int>(i);
  int c_sub = static_cast<int>(through_base.size());  // first index not assigned to a line

  detail::VSpace v{p};
  const int n = m * v.size();
  if (n > opt.max_points) throw Error("build_thm51: point count exceeds the build guard");

  // For each non-base point a: its line l through 0, the line m = l a^-1, the
  // C-component of the decomposition V = L_l + C, and the coset classes of L_m.
  auto line_through = [&](int q) {
    for (std::size_t i = 0; i < through_base.size(); ++i)
      if (std::binary_search(through_base[i].begin(), through_base[i].end(), q))
        return static_cast<int>(i);
    throw Error("build_thm51: space is not linear");
  };
  std::vector<std::vector<int>> comp(m);
  std::vector<detail::CosetIndex> classes(m);
  std::vector<int> mline(m, -1);
  for (int q = 1; q < m; ++q) {
    int l = line_through(q);
    int ainv = act.group.inv[elem_of[q]];
    int qinv = point_of[ainv];
    mline[q] = line_through(qinv);
    // the image of l under a^-1 must be that same line
    {
      std::vector<int> img;
      for (int d : through_base[l]) img.push_back(act.perm[ainv][d]);
      std::sort(img.begin(), img.end());
      if (img != through_base[mline[q]])
        throw Error("build_thm51: translated line mismatch");
    }
    comp[q] = detail::complement_component(v, subs[line_sub[l]], subs[c_sub]);
    classes[q] = detail::coset_index(v, subs[line_sub[mline[q]]]);
  }

  RelationTable raw(n, v.size() + (m - 1) * p);
  auto idx = [&](int q, int u) { return q * v.size() + u; };
  for (int q1 = 0; q1 < m; ++q1)
    for (int u = 0; u < v.size(); ++u)
      for (int q2 = 0; q2 < m; ++q2)
        for (int w = 0; w < v.size(); ++w) {
          int& cellv = raw.at(idx(q1, u), idx(q2, w));
          if (q1 == q2) {
            cellv = v.sub(u, w);
          } else {
            int a = point_of[act.group.times(act.group.inv[elem_of[q1]], elem_of[q2])];
            int x = comp[a][u];
            cellv = v.size() + (a - 1) * p + classes[a].rank[v.sub(x, w)];
          }
        }

  std::vector<int> relabel;
  RelationTable canon = canonicalize(raw, &relabel);
  ConstructionReport rep;
  rep.kind = "thm51";
  rep.p = p;
  rep.scheme = verified(canon, n <= 1000 ? VerifyMode::full : VerifyMode::representative);

  TowerLayout lay;
  lay.h_rel.resize(v.size());
  for (int w = 0; w < v.size(); ++w) lay.h_rel[w] = relabel[w];
  lay.t_rel.assign(m, {});
  rep.relation_labels.assign(canon.r, {});
  for (int w = 0; w < v.size(); ++w)
    rep.relation_labels[lay.h_rel[w]] = w == 0 ? "1" : "h" + v.str(w);
  for (int a = 1; a < m; ++a)
    for (int w = 0; w < v.size(); ++w)
      if (classes[a].rep[w] == w) {
        int rel = relabel[v.size() + (a - 1) * p + classes[a].rank[w]];
        lay.t_rel[a][w] = rel;
        rep.relation_labels[rel] =
            w == 0 ? "t[" + std::to_string(a) + "]" : "t[" + std::to_string(a) + "]h" + v.str(w);
      }
  rep.layout = std::move(lay);

  detail::finish_report(rep, m);
  return rep;
}

// -------- extension validator --------

// Data for checking that relations prescribed per coset of a normal subgroup
// extend the thin scheme of H to a scheme on the whole group: the group
// (acting on itself), the subgroup H, and one pair set per non-identity coset.
struct ExtensionSpec {
  FiniteGroup group;
  std::vector<int> subgroup;
  std::vector<std::pair<int, std::vector<std::pair<int, int>>>> coset_relations;
};

struct ExtensionReport {
  bool partition = true;
  bool trans = true;
  bool product = true;
  std::vector<std::string> notes;
  std::vector<int> stabilizer_sizes;                   // |K_sigma| per checked coset
  std::vector<std::vector<long long>> multiplicities;  // n_{sigma,tau}, -1 when unconstrained
  std::optional<Scheme> scheme;
  bool ok() const { return partition && trans && product && scheme.has_value(); }
};

namespace detail {

using PairSet = std::vector<char>;  // n*n incidence of a binary relation

inline PairSet shift_rows(const PairSet& t, const std::vector<int>& row_of, int n) {
  PairSet out(static_cast<std::size_t>(n) * n, 0);
  for (int z = 0; z < n; ++z) {
    const char* src = &t[static_cast<std::size_t>(row_of[z]) * n];
    std::copy(src, src + n, &out[static_cast<std::size_t>(z) * n]);
  }
  return out;
}

}  // namespace detail

inline ExtensionReport verify_extension_conditions(const ExtensionSpec& spec) {
  const FiniteGroup& g = spec.group;
  const int n = g.order;
  std::vector<int> h = spec.subgroup;
  std::sort(h.begin(), h.end());
  if (!is_normal(g, h)) throw Error("extension: subgroup must be normal");
  Quotient q = quotient_group(g, h);
  const int mq = q.group.order;

  // one pair set per non-identity coset
  std::vector<detail::PairSet> t(mq);
  std::vector<char> have(mq, 0);
  for (const auto& [rep, pairs] : spec.coset_relations) {
    if (rep < 0 || rep >= n) throw Error("extension: bad coset representative");
    int sigma = q.coset_of[rep];
    if (sigma == q.group.identity) throw Error("extension: identity coset takes no relation");
    if (have[sigma]) throw Error("extension: duplicate coset relation");
    have[sigma] = 1;
    t[sigma].assign(static_cast<std::size_t>(n) * n, 0);
    for (auto [x, y] : pairs) {
      if (x < 0 || x >= n || y < 0 || y >= n) throw Error("extension: pair out of range");
      t[sigma][static_cast<std::size_t>(x) * n + y] = 1;
    }
  }
  for (int sigma = 0; sigma < mq; ++sigma)
    if (sigma != q.group.identity && !have[sigma])
      throw Error("extension: missing relation for a coset");

  ExtensionReport out;
  out.multiplicities.assign(mq, std::vector<long long>(mq, -1));

  // Graphs of the H translations.
  std::vector<detail::PairSet> htilde;
  std::vector<std::vector<int>> hrow;  // row_of maps for left products
  for (int hh : h) {
    detail::PairSet ps(static_cast<std::size_t>(n) * n, 0);
    std::vector<int> row(n);
    for (int z = 0; z < n; ++z) {
      ps[static_cast<std::size_t>(z) * n + g.times(z, hh)] = 1;
      row[z] = g.times(z, hh);
    }
    htilde.push_back(std::move(ps));
    hrow.push_back(std::move(row));
  }

  auto block_of = [&](int sigma) {
    detail::PairSet b(static_cast<std::size_t>(n) * n, 0);
    for (int z = 0; z < n; ++z)
      for (int w = 0; w < n; ++w)
        if (q.coset_of[w] == q.group.times(q.coset_of[z], sigma))
          b[static_cast<std::size_t>(z) * n + w] = 1;
    return b;
  };

  std::vector<std::vector<detail::PairSet>> left_families(mq);
  for (int sigma = 0; sigma < mq; ++sigma) {
    if (sigma == q.group.identity) continue;
    detail::PairSet block = block_of(sigma);
    for (std::size_t i = 0; i < t[sigma].size(); ++i)
      if (t[sigma][i] && !block[i]) {
        out.partition = false;
        out.notes.push_back("relation for coset " + std::to_string(sigma) +
                            " leaves its coset block");
        break;
      }

    // left family h~ . t_sigma (rows shuffled), right family t_sigma . h~
    std::vector<detail::PairSet> left, right;
    for (std::size_t k = 0; k < htilde.size(); ++k) {
      left.push_back(detail::shift_rows(t[sigma], hrow[k], n));
      detail::PairSet rp(static_cast<std::size_t>(n) * n, 0);
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          if (t[sigma][static_cast<std::size_t>(z) * n + w])
            rp[static_cast<std::size_t>(z) * n + g.times(w, h[k])] = 1;
      right.push_back(std::move(rp));
    }
    auto dedupe = [](std::vector<detail::PairSet> f) {
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
      return f;
    };
    std::vector<detail::PairSet> dl = dedupe(left), dr = dedupe(right);
    if (dl != dr) {
      out.partition = false;
      out.notes.push_back("left and right translate families differ for coset " +
                          std::to_string(sigma));
    }
    std::vector<long long> cover(static_cast<std::size_t>(n) * n, 0);
    for (const auto& ps : dl)
      for (std::size_t i = 0; i < ps.size(); ++i) cover[i] += ps[i];
    for (std::size_t i = 0; i < cover.size(); ++i)
      if (cover[i] != static_cast<long long>(block[i])) {
        out.partition = false;
        out.notes.push_back("translates of the coset-" + std::to_string(sigma) +
                            " relation do not partition its block");
        break;
      }
    left_families[sigma] = std::move(dl);

    // stabilizer K_sigma
    int ks = 0;
    for (std::size_t k = 0; k < htilde.size(); ++k)
      if (detail::shift_rows(t[sigma], hrow[k], n) == t[sigma]) ++ks;
    out.stabilizer_sizes.push_back(ks);

    // transpose condition
    int sigma_inv = q.group.inv[sigma];
    detail::PairSet tr(static_cast<std::size_t>(n) * n, 0);
    for (int z = 0; z < n; ++z)
      for (int w = 0; w < n; ++w)
        if (t[sigma][static_cast<std::size_t>(z) * n + w])
          tr[static_cast<std::size_t>(w) * n + z] = 1;
    if (tr != t[sigma_inv]) {
      out.trans = false;
      out.notes.push_back("transpose of the coset-" + std::to_string(sigma) +
                          " relation is not the inverse-coset relation");
    }
  }

  // product condition, evaluated independently so a report carries every failure
  for (int sigma = 0; sigma < mq; ++sigma) {
    if (sigma == q.group.identity) continue;
    for (int tau = 0; tau < mq; ++tau) {
      if (tau == q.group.identity) continue;
      std::vector<long long> prod(static_cast<std::size_t>(n) * n, 0);
      for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
          if (t[sigma][static_cast<std::size_t>(z) * n + y])
            for (int w = 0; w < n; ++w)
              prod[static_cast<std::size_t>(z) * n + w] +=
                  t[tau][static_cast<std::size_t>(y) * n + w];

      int st = q.group.times(sigma, tau);
      std::vector<long long> want(static_cast<std::size_t>(n) * n, 0);
      long long scale = -1;
      if (st == q.group.identity) {
        long long ks = 0;
        for (std::size_t k = 0; k < htilde.size(); ++k)
          if (detail::shift_rows(t[sigma], hrow[k], n) == t[sigma]) {
            ++ks;
            for (std::size_t i = 0; i < want.size(); ++i) want[i] += htilde[k][i];
          }
        for (auto& v0 : want) v0 *= ks;
        scale = ks;
      } else {
        // union of the distinct translates of t_{sigma tau}, uniform multiplicity
        std::vector<char> support(static_cast<std::size_t>(n) * n, 0);
        for (const auto& ps : left_families[st])
          for (std::size_t i = 0; i < ps.size(); ++i)
            if (ps[i]) support[i] = 1;
        long long mval = -1;
        bool uniform = true;
        for (std::size_t i = 0; i < prod.size(); ++i) {
          if (support[i]) {
            if (mval < 0) mval = prod[i];
            if (prod[i] != mval) uniform = false;
          } else if (prod[i] != 0) {
            uniform = false;
          }
        }
        if (!uniform || mval <= 0) {
          out.product = false;
          out.notes.push_back("product of coset relations " + std::to_string(sigma) + "," +
                              std::to_string(tau) + " is not a uniform stack of translates");
          continue;
        }
        for (std::size_t i = 0; i < want.size(); ++i) want[i] = support[i] ? mval : 0;
        scale = mval;
      }
      if (prod != want) {
        out.product = false;
        out.notes.push_back("product of coset relations " + std::to_string(sigma) + "," +
                            std::to_string(tau) + " has the wrong multiplicities");
      } else {
        out.multiplicities[sigma][tau] = scale;
      }
    }
  }

  if (out.partition && out.trans && out.product) {
    // assemble: the H graphs plus every translate family
    std::vector<detail::PairSet> rels = htilde;
    for (int sigma = 0; sigma < mq; ++sigma)
      for (const auto& ps : left_families[sigma]) rels.push_back(ps);
    RelationTable raw(n, static_cast<int>(rels.size()));
    std::vector<char> assigned(static_cast<std::size_t>(n) * n, 0);
    bool cover_ok = true;
    for (std::size_t rid = 0; rid < rels.size() && cover_ok; ++rid)
      for (std::size_t i = 0; i < rels[rid].size(); ++i)
        if (rels[rid][i]) {
          if (assigned[i]) {
            cover_ok = false;
            break;
          }
          assigned[i] = 1;
          raw.cell[i] = static_cast<int>(rid);
        }
    for (char c0 : assigned)
      if (!c0) cover_ok = false;
    if (!cover_ok) {
      out.notes.push_back("assembled relations do not partition the point pairs");
    } else {
      VerifyResult vr = verify_scheme(canonicalize(raw), VerifyMode::full);
      if (vr.ok()) {
        out.scheme = std::move(vr.scheme);
      } else {
        out.notes.push_back("assembled table fails scheme verification");
      }
    }
  }
  return out;
}

}  // namespace ascheme
