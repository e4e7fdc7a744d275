#pragma once

#include "ascheme/action.hpp"
#include "ascheme/subsets.hpp"

namespace ascheme {

// Points 0..points-1 plus a set of lines (point subsets). Lines are kept
// sorted; duplicates collapse on normalization.
struct IncidenceStructure {
  int points = 0;
  std::vector<std::vector<int>> lines;
};

inline IncidenceStructure normalize_incidence(IncidenceStructure in) {
  for (auto& l : in.lines) {
    std::sort(l.begin(), l.end());
    if (std::adjacent_find(l.begin(), l.end()) != l.end())
      throw Error("incidence: repeated point on a line");
    for (int v : l)
      if (v < 0 || v >= in.points) throw Error("incidence: point index out of range");
  }
  std::sort(in.lines.begin(), in.lines.end());
  in.lines.erase(std::unique(in.lines.begin(), in.lines.end()), in.lines.end());
  return in;
}

struct IncidenceClass {
  bool partial_linear = false;  // every point pair on at most one line
  bool linear = false;          // every point pair on exactly one line
  int max_lines_per_point = 0;
};

inline IncidenceClass classify_incidence(const IncidenceStructure& raw) {
  IncidenceStructure s = normalize_incidence(raw);
  if (s.points < 1) throw Error("incidence: needs at least one point");
  for (const auto& l : s.lines)
    if (l.size() < 2) throw Error("incidence: line with fewer than two points");

  IncidenceClass out;
  std::vector<int> per_point(s.points, 0);
  std::vector<char> covered(static_cast<std::size_t>(s.points) * s.points, 0);
  out.partial_linear = true;
  for (const auto& l : s.lines) {
    for (int v : l) ++per_point[v];
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t j = i + 1; j < l.size(); ++j) {
        char& c = covered[static_cast<std::size_t>(l[i]) * s.points + l[j]];
        if (c) out.partial_linear = false;
        c = 1;
      }
  }
  out.linear = out.partial_linear;
  for (int x = 0; x < s.points && out.linear; ++x)
    for (int y = x + 1; y < s.points; ++y)
      if (!covered[static_cast<std::size_t>(x) * s.points + y]) out.linear = false;
  for (int v : per_point) out.max_lines_per_point = std::max(out.max_lines_per_point, v);
  return out;
}

inline IncidenceStructure fano_plane() {
  IncidenceStructure f;
  f.points = 7;
  for (int i = 0; i < 7; ++i)
    f.lines.push_back({i, (i + 1) % 7, (i + 3) % 7});
  return normalize_incidence(f);
}

inline IncidenceStructure triangle_space() {
  return normalize_incidence({3, {{0, 1}, {1, 2}, {0, 2}}});
}

// True when the action is regular on the points and maps every line to a line.
inline bool regular_line_preserving(const IncidenceStructure& raw, const GroupAction& a) {
  IncidenceStructure s = normalize_incidence(raw);
  if (a.degree != s.points) return false;
  if (!is_regular(a)) return false;
  for (int g = 0; g < a.group.order; ++g)
    for (const auto& l : s.lines) {
      std::vector<int> img;
      img.reserve(l.size());
      for (int v : l) img.push_back(a.perm[g][v]);
      std::sort(img.begin(), img.end());
      if (!std::binary_search(s.lines.begin(), s.lines.end(), img)) return false;
    }
  return true;
}

// Point bijection mapping lines onto lines, or nullopt. Backtracking with
// degree-profile pruning; meant for the small spaces this library handles.
inline std::optional<std::vector<int>> incidence_isomorphic(const IncidenceStructure& rawa,
                                                            const IncidenceStructure& rawb) {
  IncidenceStructure a = normalize_incidence(rawa), b = normalize_incidence(rawb);
  if (a.points != b.points || a.lines.size() != b.lines.size()) return std::nullopt;
  {
    auto sizes = [](const IncidenceStructure& s) {
      std::vector<int> v;
      for (const auto& l : s.lines) v.push_back(static_cast<int>(l.size()));
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sizes(a) != sizes(b)) return std::nullopt;
  }
  const int n = a.points;

  // profile[x] = sorted sizes of lines through x; common[x][y] = size of the
  // line through both, 0 if none (plus 1 to distinguish "no line" later).
  auto profiles = [](const IncidenceStructure& s) {
    std::vector<std::vector<int>> pr(s.points);
    for (const auto& l : s.lines)
      for (int v : l) pr[v].push_back(static_cast<int>(l.size()));
    for (auto& p : pr) std::sort(p.begin(), p.end());
    return pr;
  };
  auto commons = [](const IncidenceStructure& s) {
    std::vector<int> c(static_cast<std::size_t>(s.points) * s.points, 0);
    for (const auto& l : s.lines)
      for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = 0; j < l.size(); ++j)
          if (i != j) c[static_cast<std::size_t>(l[i]) * s.points + l[j]] =
              static_cast<int>(l.size());
    return c;
  };
  auto pra = profiles(a), prb = profiles(b);
  auto ca = commons(a), cb = commons(b);

  std::vector<int> map(n, -1), used(n, 0);
  std::function<bool(int)> place = [&](int x) -> bool {
    if (x == n) {
      for (const auto& l : a.lines) {
        std::vector<int> img;
        for (int v : l) img.push_back(map[v]);
        std::sort(img.begin(), img.end());
        if (!std::binary_search(b.lines.begin(), b.lines.end(), img)) return false;
      }
      return true;
    }
    for (int y = 0; y < n; ++y) {
      if (used[y] || pra[x] != prb[y]) continue;
      bool ok = true;
      for (int x2 = 0; x2 < x && ok; ++x2)
        if (ca[static_cast<std::size_t>(x) * n + x2] !=
            cb[static_cast<std::size_t>(y) * n + map[x2]])
          ok = false;
      if (!ok) continue;
      map[x] = y;
      used[y] = 1;
      if (place(x + 1)) return true;
      map[x] = -1;
      used[y] = 0;
    }
    return false;
  };
  if (!place(0)) return std::nullopt;
  return map;
}

// Left stabilizers recorded while reading the geometry out of a scheme.
struct LineStabilizerMap {
  std::vector<std::vector<int>> subgroups;        // registry of subgroup member lists
  std::vector<std::vector<int>> l_of_relation;    // per relation s: members of L(s)
  std::vector<int> l_ij;                          // m*m registry ids
  std::vector<std::pair<int, int>> asymmetric;    // block pairs with L_ij != L_ji
};

struct ExtractResult {
  int p = 0;
  std::vector<int> block_of_point;
  IncidenceStructure structure;
  LineStabilizerMap stab;
};

// Reads the incidence geometry of a scheme whose thin residue T is C_p x C_p:
// points are the T-classes, and the line through classes i, j collects every
// class reachable with the same left stabilizer L(s) = {t in T : ts = s}.
inline ExtractResult extract_incidence(const Scheme& s) {
  RelationSubset res = thin_residue(s);
  if (!res.is_thin) throw Error("extract_incidence: thin residue is not thin");
  int p = 1;
  while (p * p < static_cast<int>(res.size())) ++p;
  if (p * p != static_cast<int>(res.size()) || !is_prime(p) ||
      !elementary_abelian_rank2(s, res, p))
    throw Error("extract_incidence: residue is not elementary abelian of rank 2");

  ExtractResult out;
  out.p = p;
  const int n = s.order();
  out.block_of_point.assign(n, -1);
  int m = 0;
  for (int x = 0; x < n; ++x) {
    if (out.block_of_point[x] >= 0) continue;
    for (int y = x; y < n; ++y)
      if (res.contains(s.rel(x, y))) out.block_of_point[y] = m;
    ++m;
  }

  // L(s) per relation: for thin t the product ts is a single relation, so
  // tProducts membership reduces to c(t,s,s) = 1.
  auto& stab = out.stab;
  stab.l_of_relation.assign(s.rank(), {});
  for (int rel = 0; rel < s.rank(); ++rel)
    for (int t : res.members)
      if (s.c().at(t, rel, rel) != 0) stab.l_of_relation[rel].push_back(t);

  auto intern = [&](const std::vector<int>& v) {
    for (std::size_t i = 0; i < stab.subgroups.size(); ++i)
      if (stab.subgroups[i] == v) return static_cast<int>(i);
    stab.subgroups.push_back(v);
    return static_cast<int>(stab.subgroups.size() - 1);
  };

  stab.l_ij.assign(static_cast<std::size_t>(m) * m, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int i = out.block_of_point[x], j = out.block_of_point[y];
      int id = intern(stab.l_of_relation[s.rel(x, y)]);
      int& slot = stab.l_ij[static_cast<std::size_t>(i) * m + j];
      if (slot < 0)
        slot = id;
      else if (slot != id)
        throw Error("extract_incidence: left stabilizer not constant between classes " +
                    std::to_string(i) + " and " + std::to_string(j));
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (stab.l_ij[static_cast<std::size_t>(i) * m + j] !=
          stab.l_ij[static_cast<std::size_t>(j) * m + i])
        stab.asymmetric.emplace_back(i, j);

  // Lines: for every block i and proper nontrivial stabilizer M, the set
  // {i} u {j : L_ij = M}, kept when it has at least two blocks.
  const int t_size = static_cast<int>(res.size());
  out.structure.points = m;
  for (int i = 0; i < m; ++i)
    for (int mid = 0; mid < static_cast<int>(stab.subgroups.size()); ++mid) {
      int sz = static_cast<int>(stab.subgroups[mid].size());
      if (sz <= 1 || sz >= t_size) continue;
      std::vector<int> line{i};
      for (int j = 0; j < m; ++j)
        if (j != i && stab.l_ij[static_cast<std::size_t>(i) * m + j] == mid) line.push_back(j);
      if (line.size() >= 2) {
        std::sort(line.begin(), line.end());
        out.structure.lines.push_back(std::move(line));
      }
    }
  out.structure = normalize_incidence(out.structure);

  // Every member of a line must rebuild that same line from its own row.
  for (const auto& line : out.structure.lines)
    for (int j : line) {
      bool found = false;
      for (int mid = 0; mid < static_cast<int>(stab.subgroups.size()) && !found; ++mid) {
        int sz = static_cast<int>(stab.subgroups[mid].size());
        if (sz <= 1 || sz >= t_size) continue;
        std::vector<int> other{j};
        for (int k = 0; k < m; ++k)
          if (k != j && stab.l_ij[static_cast<std::size_t>(j) * m + k] == mid) other.push_back(k);
        std::sort(other.begin(), other.end());
        if (other == line) found = true;
      }
      if (!found)
        throw Error("extract_incidence: line not reproducible from every one of its points");
    }

  IncidenceClass cls = classify_incidence(out.structure);
  if (!cls.partial_linear || cls.max_lines_per_point > p + 1)
    throw Error("extract_incidence: extracted structure violates the partial-linear bound");
  return out;
}

}  // namespace ascheme
