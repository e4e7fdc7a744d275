#pragma once

// Slow reference implementations used to cross-check the library. Everything
// here restates a definition by brute force over points and shares nothing
// with the library beyond the raw table type.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "ascheme/relation_table.hpp"

namespace oracle {

// All-pairs axiom check; returns human-readable failures, empty when t is an
// association scheme.
inline std::vector<std::string> verify(const ascheme::RelationTable& t) {
  std::vector<std::string> out;
  const int n = t.n, r = t.r;
  if (n < 1 || r < 1 || t.cell.size() != static_cast<std::size_t>(n) * n) {
    out.push_back("malformed table");
    return out;
  }
  for (int v : t.cell)
    if (v < 0 || v >= r) {
      out.push_back("cell out of range");
      return out;
    }
  for (int x = 0; x < n && out.empty(); ++x)
    for (int y = 0; y < n; ++y)
      if ((t.at(x, y) == 0) != (x == y)) {
        out.push_back("relation 0 is not the diagonal");
        break;
      }
  std::vector<char> seen(r, 0);
  for (int v : t.cell) seen[v] = 1;
  for (int s = 0; s < r; ++s)
    if (!seen[s]) out.push_back("relation " + std::to_string(s) + " is empty");
  if (!out.empty()) return out;

  // transpose of each relation must again be a relation
  std::vector<int> star(r, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int s = t.at(x, y), back = t.at(y, x);
      if (star[s] == -1)
        star[s] = back;
      else if (star[s] != back)
        out.push_back("transpose of relation " + std::to_string(s) + " is not a relation");
    }
  if (!out.empty()) return out;

  // intersection numbers must be constant on each relation
  std::vector<long long> c(static_cast<std::size_t>(r) * r * r, -1);
  for (int s = 0; s < r; ++s)
    for (int tt = 0; tt < r; ++tt)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          long long cnt = 0;
          for (int z = 0; z < n; ++z) cnt += (t.at(x, z) == s && t.at(z, y) == tt);
          long long& slot = c[(static_cast<std::size_t>(s) * r + tt) * r + t.at(x, y)];
          if (slot == -1)
            slot = cnt;
          else if (slot != cnt)
            out.push_back("c(" + std::to_string(s) + "," + std::to_string(tt) +
                          ") is not constant on relation " + std::to_string(t.at(x, y)));
        }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Intersection numbers by direct counting, assuming verify(t) came back empty.
inline std::vector<long long> tensor(const ascheme::RelationTable& t) {
  const int n = t.n, r = t.r;
  std::vector<long long> c(static_cast<std::size_t>(r) * r * r, 0);
  std::vector<char> done(static_cast<std::size_t>(r), 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int u = t.at(x, y);
      if (done[u]) continue;
      done[u] = 1;
      for (int z = 0; z < n; ++z)
        ++c[(static_cast<std::size_t>(t.at(x, z)) * r + t.at(z, y)) * r + u];
    }
  return c;
}

// Number of relation-preserving point permutations, by full scan. Use only
// for tiny n.
inline long long aut_count(const ascheme::RelationTable& t) {
  const int n = t.n;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long long count = 0;
  do {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n; ++y)
        if (t.at(perm[x], perm[y]) != t.at(x, y)) {
          ok = false;
          break;
        }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// A subset is closed exactly when the union of its relations is an
// equivalence relation on the points.
inline bool closed(const ascheme::RelationTable& t, const std::vector<int>& members) {
  const int n = t.n;
  std::vector<char> in(t.r, 0);
  for (int m : members) in[m] = 1;
  auto hit = [&](int x, int y) { return in[t.at(x, y)] != 0; };
  for (int x = 0; x < n; ++x)
    if (!hit(x, x)) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (hit(x, y) != hit(y, x)) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (hit(x, y) && hit(y, z) && !hit(x, z)) return false;
  return true;
}

// Smallest closed subset containing all s*s, computed with point-level
// products only: u lies in a.b when some pair of u has a middle point.
inline std::vector<int> residue(const ascheme::RelationTable& t) {
  const int n = t.n, r = t.r;
  std::vector<std::vector<char>> prod(static_cast<std::size_t>(r) * r,
                                      std::vector<char>(r, 0));
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        prod[static_cast<std::size_t>(t.at(x, z)) * r + t.at(z, y)][t.at(x, y)] = 1;
  std::vector<int> star(r, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) star[t.at(x, y)] = t.at(y, x);

  std::vector<char> in(r, 0);
  in[t.at(0, 0)] = 1;
  for (int s = 0; s < r; ++s)
    for (int u = 0; u < r; ++u)
      if (prod[static_cast<std::size_t>(star[s]) * r + s][u]) in[u] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (int a = 0; a < r; ++a) {
      if (!in[a]) continue;
      if (!in[star[a]]) {
        in[star[a]] = 1;
        grew = true;
      }
      for (int b = 0; b < r; ++b) {
        if (!in[b]) continue;
        for (int u = 0; u < r; ++u)
          if (prod[static_cast<std::size_t>(a) * r + b][u] && !in[u]) {
            in[u] = 1;
            grew = true;
          }
      }
    }
  }
  std::vector<int> out;
  for (int s = 0; s < r; ++s)
    if (in[s]) out.push_back(s);
  return out;
}

}  // namespace oracle
