#pragma once

#include <numeric>
#include <utility>

#include "ascheme/common.hpp"

namespace ascheme {

// A complete colouring of X * X by relation indices 0..r-1.
//
// Invariants expected by the rest of the library (and checked by
// verify_scheme): the diagonal carries a single index, and every index in
// [0, r) occurs at least once.
struct RelationTable {
  int n = 0;
  int r = 0;
  std::vector<int> cell;  // row-major, n*n entries

  RelationTable() = default;
  RelationTable(int n_, int r_) : n(n_), r(r_), cell(static_cast<std::size_t>(n_) * n_, 0) {}

  int at(int x, int y) const { return cell[static_cast<std::size_t>(x) * n + y]; }
  int& at(int x, int y) { return cell[static_cast<std::size_t>(x) * n + y]; }
};

inline void require_well_formed(const RelationTable& t) {
  if (t.n < 1) throw Error("relation table needs at least one point");
  if (t.r < 1) throw Error("relation table needs at least one relation index");
  if (t.cell.size() != static_cast<std::size_t>(t.n) * t.n)
    throw Error("relation table body is not n*n");
  for (int v : t.cell)
    if (v < 0 || v >= t.r) throw Error("relation index out of range");
}

// Relabels relations into the canonical numbering: the diagonal relation gets
// index 0, the rest follow sorted by (valency, first occurrence in a row-major
// scan). Returns the relabelled table; `old_to_new`, when given, receives the
// applied index map.
inline RelationTable canonicalize(const RelationTable& t, std::vector<int>* old_to_new = nullptr) {
  require_well_formed(t);
  const int n = t.n, r = t.r;
  const int diag = t.at(0, 0);

  std::vector<long long> occurrences(r, 0);
  std::vector<int> first(r, -1);
  for (int i = 0; i < n * n; ++i) {
    int v = t.cell[i];
    ++occurrences[v];
    if (first[v] < 0) first[v] = i;
  }
  for (int s = 0; s < r; ++s)
    if (first[s] < 0) throw Error("relation index " + std::to_string(s) + " never occurs");

  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (a == diag || b == diag) return a == diag;  // identity first
    if (occurrences[a] != occurrences[b]) return occurrences[a] < occurrences[b];
    return first[a] < first[b];
  });

  std::vector<int> map(r);
  for (int i = 0; i < r; ++i) map[order[i]] = i;

  RelationTable out(n, r);
  for (int i = 0; i < n * n; ++i) out.cell[i] = map[t.cell[i]];
  if (old_to_new != nullptr) *old_to_new = std::move(map);
  return out;
}

}  // namespace ascheme
