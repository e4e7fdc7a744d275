#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace ascheme {

// Raised when input data breaks a documented operation contract
// (bad parameters, malformed tables, non-subgroups, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a backtracking search runs past its node budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Environment override for numeric knobs; falls back to `dflt` when the
// variable is unset or unparsable.
inline long long env_long(const char* name, long long dflt) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return dflt;
  char* end = nullptr;
  long long out = std::strtoll(v, &end, 10);
  if (end == v || out <= 0) return dflt;
  return out;
}

// Sorted-vector set helpers. Subsets of relations are kept as sorted,
// duplicate-free vectors throughout.
inline bool set_contains(const std::vector<int>& xs, int v) {
  return std::binary_search(xs.begin(), xs.end(), v);
}

inline void set_insert(std::vector<int>& xs, int v) {
  auto it = std::lower_bound(xs.begin(), xs.end(), v);
  if (it == xs.end() || *it != v) xs.insert(it, v);
}

inline bool set_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace ascheme
