#pragma once

// Shared fixtures: tiny schemes, deliberately broken tables, and an
// extension descriptor rebuilt from a tower construction report.

#include <utility>
#include <vector>

#include "ascheme/constructions.hpp"
#include "ascheme/group.hpp"
#include "ascheme/relation_table.hpp"

namespace fixtures {

// Diagonal plus one relation covering everything else.
inline ascheme::RelationTable rank2(int n) {
  ascheme::RelationTable t(n, 2);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t.cell[static_cast<std::size_t>(x) * n + y] = x == y ? 0 : 1;
  return t;
}

// Cayley coloring rel(x, y) = x^{-1} y, written out directly.
inline ascheme::RelationTable thin_of(const ascheme::FiniteGroup& g) {
  const int n = g.order;
  ascheme::RelationTable t(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      t.cell[static_cast<std::size_t>(x) * n + y] = g.times(g.inv[x], y);
  return t;
}

// Relation 1 = {(0,1),(1,0),(0,2)}: its transpose is not a relation.
inline ascheme::RelationTable transpose_broken() {
  ascheme::RelationTable t(3, 3);
  t.cell = {0, 1, 1, 1, 0, 2, 2, 2, 0};
  return t;
}

// Symmetric 2-class coloring whose class-1 row counts differ, so the
// intersection numbers cannot be constant.
inline ascheme::RelationTable nonconstant() {
  ascheme::RelationTable t(4, 3);
  t.cell = {0, 1, 1, 2, 1, 0, 2, 2, 1, 2, 0, 1, 2, 2, 1, 0};
  return t;
}

// Reads a tower report back as an extension descriptor: the group is G x V
// with point index g*p^2 + v, the subgroup is the identity fibre, and each
// non-identity coset contributes one representative t relation.
inline ascheme::ExtensionSpec tower_spec(const ascheme::ConstructionReport& rep,
                                         const ascheme::FiniteGroup& g, int p) {
  ascheme::ExtensionSpec spec;
  spec.group = ascheme::direct_product(g, ascheme::make_elementary_abelian(p, 2));
  for (int v = 0; v < p * p; ++v) spec.subgroup.push_back(g.identity * p * p + v);
  const ascheme::TowerLayout& lay = *rep.layout;
  const int n = rep.scheme.order();
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity) continue;
    int rel = lay.t_rel[a].begin()->second;
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (rep.scheme.rel(x, y) == rel) pairs.push_back({x, y});
    spec.coset_relations.push_back({a * p * p, std::move(pairs)});
  }
  return spec;
}

// Thin descriptor: trivial subgroup, one singleton-graph relation per
// non-identity element.
inline ascheme::ExtensionSpec thin_spec(const ascheme::FiniteGroup& g) {
  ascheme::ExtensionSpec spec;
  spec.group = g;
  spec.subgroup = {g.identity};
  for (int a = 0; a < g.order; ++a) {
    if (a == g.identity) continue;
    std::vector<std::pair<int, int>> pairs;
    for (int z = 0; z < g.order; ++z) pairs.push_back({z, g.times(z, a)});
    spec.coset_relations.push_back({a, std::move(pairs)});
  }
  return spec;
}

}  // namespace fixtures
