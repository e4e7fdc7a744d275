#pragma once

#include <memory>
#include <optional>
#include <sstream>

#include "ascheme/relation_table.hpp"

namespace ascheme {

// Structure constants c[s][t][u] = |{z : (x,z) in s, (z,y) in t}| for any
// (x,y) in u. Built from one representative pair per u.
struct IntersectionTensor {
  int r = 0;
  std::vector<int> c;  // r^3, ((s*r)+t)*r+u

  IntersectionTensor() = default;
  explicit IntersectionTensor(int r_)
      : r(r_), c(static_cast<std::size_t>(r_) * r_ * r_, 0) {}

  int at(int s, int t, int u) const {
    return c[(static_cast<std::size_t>(s) * r + t) * r + u];
  }
  int& at(int s, int t, int u) {
    return c[(static_cast<std::size_t>(s) * r + t) * r + u];
  }
};

enum class VerifyMode {
  full,            // recount |xs ∩ yt*| for every ordered pair (x,y)
  representative,  // count one representative per relation, cross-check a second
};

struct Violation {
  int axiom = 0;  // 0 = table shape, 1..3 = scheme axioms
  std::string detail;
};

// A verified association scheme. Immutable once built; the tensor is shared
// so copies stay cheap and concurrent readers are safe.
struct Scheme {
  RelationTable table;
  int identity = 0;
  std::vector<int> star;     // star[s] = transpose relation of s
  std::vector<int> valency;  // valency[s] = |xs|, constant in x
  std::shared_ptr<const IntersectionTensor> tensor;

  int order() const { return table.n; }
  int rank() const { return table.r; }
  int rel(int x, int y) const { return table.at(x, y); }
  const IntersectionTensor& c() const { return *tensor; }
  int c(int s, int t, int u) const { return tensor->at(s, t, u); }
};

struct VerifyResult {
  std::optional<Scheme> scheme;
  std::vector<Violation> violations;
  bool ok() const { return scheme.has_value(); }
};

namespace detail {

inline std::string pair_str(int x, int y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

}  // namespace detail

// Checks the three scheme axioms on a relation table.
//
//  (1) the diagonal is one relation and that relation contains nothing else,
//  (2) the transpose of every relation is again a relation,
//  (3) the counts |xs ∩ yt*| do not depend on the pair (x,y) within u.
//
// Malformed containers throw; axiom violations are reported in the result.
// VerifyMode::full recounts every ordered pair (the mode used by acceptance
// runs for anything up to a few hundred points); VerifyMode::representative
// checks one extra pair per relation and is intended for bulk construction
// output that is re-checked elsewhere.
inline VerifyResult verify_scheme(const RelationTable& t, VerifyMode mode = VerifyMode::full) {
  require_well_formed(t);
  const int n = t.n, r = t.r;
  VerifyResult res;
  auto& bad = res.violations;
  constexpr std::size_t kMaxViolations = 64;

  std::vector<int> first(r, -1);
  for (int i = 0; i < n * n; ++i)
    if (first[t.cell[i]] < 0) first[t.cell[i]] = i;
  for (int s = 0; s < r; ++s)
    if (first[s] < 0)
      bad.push_back({0, "relation index " + std::to_string(s) + " never occurs"});

  // Axiom 1: constant diagonal, no off-diagonal pair in the diagonal relation.
  const int diag = t.at(0, 0);
  for (int x = 0; x < n && bad.size() < kMaxViolations; ++x)
    if (t.at(x, x) != diag)
      bad.push_back({1, "diagonal not constant: cell(0,0)=" + std::to_string(diag) +
                            " but cell(" + std::to_string(x) + "," + std::to_string(x) +
                            ")=" + std::to_string(t.at(x, x))});
  for (int x = 0; x < n && bad.size() < kMaxViolations; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && t.at(x, y) == diag) {
        bad.push_back({1, "identity relation contains off-diagonal pair " + detail::pair_str(x, y)});
        break;
      }

  // Axiom 2: a consistent transpose map must exist.
  std::vector<int> star(r, -1);
  std::vector<char> star_reported(r, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int s = t.at(x, y), u = t.at(y, x);
      if (star[s] < 0) {
        star[s] = u;
      } else if (star[s] != u && !star_reported[s] && bad.size() < kMaxViolations) {
        star_reported[s] = 1;
        bad.push_back({2, "relation " + std::to_string(s) + " has no single transpose: pair " +
                              detail::pair_str(x, y) + " reverses into " + std::to_string(u) +
                              ", earlier pairs into " + std::to_string(star[s])});
      }
    }

  // Axiom 3: representative counts, then constancy.
  auto tensor = std::make_shared<IntersectionTensor>(r);
  std::vector<std::pair<int, int>> rep(r, {-1, -1}), rep2(r, {-1, -1});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int u = t.at(x, y);
      if (rep[u].first < 0)
        rep[u] = {x, y};
      else if (rep2[u].first < 0)
        rep2[u] = {x, y};
    }
  for (int u = 0; u < r; ++u) {
    auto [x, y] = rep[u];
    if (x < 0) continue;
    for (int z = 0; z < n; ++z) ++tensor->at(t.at(x, z), t.at(z, y), u);
  }
  std::vector<int> nonzero(r, 0);  // nonzero[u] = #{(s,t) : c_st^u > 0}
  for (int s = 0; s < r; ++s)
    for (int v = 0; v < r; ++v)
      for (int u = 0; u < r; ++u)
        if (tensor->at(s, v, u) > 0) ++nonzero[u];

  std::vector<int> cnt(static_cast<std::size_t>(r) * r, 0);
  std::vector<int> touched;
  touched.reserve(n);
  std::size_t axiom3_reports = 0;
  auto check_pair = [&](int x, int y) {
    const int u = t.at(x, y);
    touched.clear();
    for (int z = 0; z < n; ++z) {
      int k = t.at(x, z) * r + t.at(z, y);
      if (cnt[k] == 0) touched.push_back(k);
      ++cnt[k];
    }
    bool ok = static_cast<int>(touched.size()) == nonzero[u];
    int bad_s = -1, bad_t = -1, got = 0, want = 0;
    for (int k : touched) {
      int s = k / r, v = k % r;
      if (cnt[k] != tensor->at(s, v, u)) {
        if (ok || bad_s < 0) {
          bad_s = s;
          bad_t = v;
          got = cnt[k];
          want = tensor->at(s, v, u);
        }
        ok = false;
      }
      cnt[k] = 0;
    }
    if (!ok && axiom3_reports < 8 && bad.size() < kMaxViolations) {
      ++axiom3_reports;
      std::ostringstream os;
      os << "counts differ inside relation " << u << ": pair " << detail::pair_str(x, y)
         << " vs representative " << detail::pair_str(rep[u].first, rep[u].second);
      if (bad_s >= 0)
        os << " at (s,t)=(" << bad_s << "," << bad_t << "): " << got << " vs " << want;
      else
        os << " (different support)";
      bad.push_back({3, os.str()});
    }
    return ok;
  };

  if (mode == VerifyMode::full) {
    for (int x = 0; x < n && axiom3_reports < 8; ++x)
      for (int y = 0; y < n; ++y) check_pair(x, y);
  } else {
    for (int u = 0; u < r; ++u)
      if (rep2[u].first >= 0) check_pair(rep2[u].first, rep2[u].second);
  }

  if (!bad.empty()) return res;

  Scheme s;
  s.table = t;
  s.identity = diag;
  s.star = std::move(star);
  s.valency.resize(r);
  for (int i = 0; i < r; ++i) s.valency[i] = tensor->at(i, s.star[i], diag);
  s.tensor = std::move(tensor);
  res.scheme = std::move(s);
  return res;
}

// Convenience wrapper for callers that treat a violation as a hard error.
inline Scheme verified(const RelationTable& t, VerifyMode mode = VerifyMode::full) {
  VerifyResult r = verify_scheme(t, mode);
  if (!r.ok()) {
    std::string msg = "relation table is not an association scheme:";
    for (const auto& v : r.violations) msg += "\n  axiom " + std::to_string(v.axiom) + ": " + v.detail;
    throw Error(msg);
  }
  return *std::move(r.scheme);
}

inline const IntersectionTensor& intersection_tensor(const Scheme& s) { return s.c(); }

}  // namespace ascheme
