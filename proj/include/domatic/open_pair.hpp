#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domatic/rng.hpp"
#include "domatic/scheme.hpp"

namespace domatic {

using BigInt = boost::multiprecision::cpp_int;

/// Minimal n with 2*e*k*((k*n)^2 + 1) < 2^n, e evaluated with a rational
/// upper bound so the strict inequality is certain.
inline std::uint32_t choose_parameters(std::uint32_t k) {
  if (k == 0) return 0;
  // e < 271828182845904523537 / 10^20
  const BigInt e_num("271828182845904523537");
  const BigInt e_den("100000000000000000000");  // 10^20
  for (std::uint32_t n = 1;; ++n) {
    BigInt kn = BigInt(k) * n;
    BigInt lhs = 2 * e_num * k * (kn * kn + 1);
    BigInt rhs = (BigInt(1) << n) * e_den;
    if (lhs < rhs) return n;
  }
}

/// A perfect set presented as a Cantor scheme subtree.
struct PerfectSetDesc {
  const CantorScheme* scheme = nullptr;
  std::string root;
};

struct SelectedPoint {
  Prefix point;        // q, materialized to at least the family depth
  std::string node;    // scheme node t with U_t inside the depth-l cylinder of q
  std::size_t set_index = 0;
};

/// k sets of n points, all k*n distinct at the common depth, each carrying a
/// scheme node whose cylinder sits inside the point's depth-l cylinder.
struct PointFamily {
  std::uint32_t k = 0;
  std::uint32_t n = 0;
  std::size_t depth = 0;
  std::vector<std::vector<SelectedPoint>> points;  // [k][n]
};

namespace detail {

inline std::string nth_binary_string(std::size_t len, std::size_t idx) {
  std::string s(len, '0');
  for (std::size_t i = 0; i < len; ++i)
    if (idx & (std::size_t{1} << (len - 1 - i))) s[i] = '1';
  return s;
}

// First coordinate where the words differ, or nullopt if equal on the
// common depth.
inline std::optional<std::size_t> first_difference(const Prefix& a, const Prefix& b) {
  std::size_t d = std::min(a.depth(), b.depth());
  for (std::size_t i = 0; i < d; ++i)
    if (a.word[i] != b.word[i]) return i;
  return std::nullopt;
}

}  // namespace detail

/// Picks n points from each perfect set, pairwise distinct at a minimal
/// common depth. Carrier nodes are the first n binary strings at the least
/// relative depth r with 2^r >= n below each root; being pairwise
/// incomparable, their cylinders are disjoint within one scheme. Collisions
/// across schemes are resolved by moving the colliding node to its right
/// child. Each node is then descended along left children until its cylinder
/// fits inside the point's depth-l cylinder.
inline PointFamily select_points(const GroupSpec& g,
                                 const std::vector<PerfectSetDesc>& sets,
                                 std::uint32_t n) {
  PointFamily fam;
  fam.k = static_cast<std::uint32_t>(sets.size());
  fam.n = n;
  if (fam.k == 0 || n == 0) return fam;

  std::size_t rel = 0;
  while ((std::size_t{1} << rel) < n) ++rel;
  if (rel == 0) rel = 1;

  std::vector<std::vector<std::string>> nodes(sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j)
    for (std::uint32_t m = 0; m < n; ++m)
      nodes[j].push_back(sets[j].root + detail::nth_binary_string(rel, m));

  auto materialize = [&](std::size_t j, const std::string& node, std::size_t depth) {
    return sets[j].scheme->point(node, depth);
  };

  for (int attempt = 0; attempt < 256; ++attempt) {
    // Materialize all points deep enough to compare; grow on ties.
    std::size_t probe = 0;
    for (std::size_t j = 0; j < sets.size(); ++j)
      for (const auto& node : nodes[j]) probe = std::max(probe, node.size());
    probe += 1;

    std::vector<std::vector<Prefix>> pts(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j)
      for (const auto& node : nodes[j])
        pts[j].push_back(materialize(j, node, probe));

    // Separation depth of the whole family: the deepest first difference over
    // all pairs is attained by some lexicographically adjacent pair.
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (std::size_t j = 0; j < sets.size(); ++j)
      for (std::uint32_t m = 0; m < n; ++m) idx.emplace_back(j, m);
    std::sort(idx.begin(), idx.end(), [&](const auto& a, const auto& b) {
      if (pts[a.first][a.second].word != pts[b.first][b.second].word)
        return pts[a.first][a.second].word < pts[b.first][b.second].word;
      return a < b;
    });
    std::size_t sep = 1;
    std::optional<std::size_t> coll_t;
    for (std::size_t t = 0; t + 1 < idx.size(); ++t) {
      auto diff = detail::first_difference(pts[idx[t].first][idx[t].second],
                                           pts[idx[t + 1].first][idx[t + 1].second]);
      if (!diff) {
        coll_t = t;
        break;
      }
      sep = std::max(sep, *diff + 1);
    }
    if (coll_t) {
      // Same point seen twice (possible across schemes); move the later node
      // down to whichever child's marked point separates from the partner.
      // Sibling cylinders are disjoint and each contains its own marked
      // point, so at most one child can keep reproducing the partner.
      auto mover = std::max(idx[*coll_t], idx[*coll_t + 1]);
      auto partner = std::min(idx[*coll_t], idx[*coll_t + 1]);
      const std::string base = nodes[mover.first][mover.second];
      std::string chosen = base + "1";
      for (char ch : {'1', '0'}) {
        std::string cand = base + ch;
        Prefix q = materialize(mover.first, cand, cand.size());
        const Prefix& other = pts[partner.first][partner.second];
        if (detail::first_difference(q, other)) {
          chosen = cand;
          break;
        }
      }
      nodes[mover.first][mover.second] = chosen;
      continue;
    }

    // Descend each node until its cylinder lies inside the point's depth-sep
    // cylinder. If descending changes the point, restart.
    bool restart = false;
    fam.points.assign(sets.size(), {});
    for (std::size_t j = 0; j < sets.size() && !restart; ++j) {
      for (std::uint32_t m = 0; m < n && !restart; ++m) {
        std::string node = nodes[j][m];
        Prefix q = materialize(j, node, sep);
        if (!(project(q, std::min(q.depth(), pts[j][m].depth())) ==
              project(pts[j][m], std::min(q.depth(), pts[j][m].depth())))) {
          nodes[j][m] = node;
          restart = true;
          break;
        }
        // Cheap containment test when the scheme exposes its cylinder word;
        // otherwise fall back to bitset subset on the quotient.
        auto fits = [&](const std::string& nd, const Prefix& p) {
          if (auto w = sets[j].scheme->single_cylinder(nd)) {
            return w->depth() >= sep && project(*w, sep) == project(p, sep);
          }
          return ClopenSet::subset(g, sets[j].scheme->cylinder(nd),
                                   ClopenSet::cylinder(g, p, sep));
        };
        for (int steps = 0; steps < 256; ++steps) {
          if (fits(node, q)) break;
          node += "0";
          Prefix q2 = materialize(j, node, sep);
          if (!(project(q2, sep) == project(q, sep))) {
            // Point moved; track the new node and redo the family.
            nodes[j][m] = node;
            restart = true;
            break;
          }
          q = q2;
        }
        if (restart) break;
        if (!fits(node, q))
          throw input_error("select_points: scheme too shallow to isolate a point");
        fam.points[j].push_back(SelectedPoint{q, node, j});
      }
    }
    if (restart) continue;
    fam.depth = sep;
    return fam;
  }
  throw input_error("select_points: could not separate the requested points");
}

/// A disjoint clopen pair covering the quotient, as color classes of a
/// two-coloring f of the depth-l quotient.
struct OpenPairWitness {
  ClopenSet a0, a1;
  std::size_t depth = 0;
  std::vector<std::uint8_t> colors;  // f over the quotient, by rank
  std::uint64_t seed = 0;
  std::uint64_t resample_count = 0;
};

namespace detail {

/// Rank arithmetic on the depth-l quotient, with a fast path when every
/// factor is Z/2 (rank multiplication is XOR).
struct QuotientOps {
  const GroupSpec* g = nullptr;
  std::size_t depth = 0;
  std::size_t size = 1;
  bool xor_fast = false;

  QuotientOps(const GroupSpec& group, std::size_t d) : g(&group), depth(d) {
    size = group.quotient_size(d);
    xor_fast = true;
    for (std::size_t i = 0; i < d; ++i) {
      const FactorGroup& f = group.factor(i);
      if (!f.cyclic || f.order != 2) {
        xor_fast = false;
        break;
      }
    }
  }

  std::size_t mul(std::size_t a, std::size_t b) const {
    if (xor_fast) return a ^ b;
    std::size_t r = 0, pa = a, pb = b;
    std::vector<std::uint32_t> wa(depth), wb(depth);
    for (std::size_t i = depth; i-- > 0;) {
      std::uint32_t m = g->factor(i).order;
      wa[i] = static_cast<std::uint32_t>(pa % m);
      wb[i] = static_cast<std::uint32_t>(pb % m);
      pa /= m;
      pb /= m;
    }
    for (std::size_t i = 0; i < depth; ++i)
      r = r * g->factor(i).order + g->factor(i).mul(wa[i], wb[i]);
    return r;
  }
};

inline std::vector<std::vector<std::size_t>> point_ranks(const GroupSpec& g,
                                                         const PointFamily& fam) {
  std::vector<std::vector<std::size_t>> ranks(fam.k);
  for (std::uint32_t j = 0; j < fam.k; ++j)
    for (const auto& sp : fam.points[j])
      ranks[j].push_back(rank_word(g, project(sp.point, fam.depth).word));
  return ranks;
}

// True iff B_x holds: some set's translated points are f-monochromatic.
inline bool event_violated(const QuotientOps& ops,
                           const std::vector<std::vector<std::size_t>>& ranks,
                           const std::vector<std::uint8_t>& colors, std::size_t x) {
  for (const auto& set : ranks) {
    bool c0 = false, c1 = false;
    for (std::size_t pr : set) {
      (colors[ops.mul(pr, x)] ? c1 : c0) = true;
      if (c0 && c1) break;
    }
    if (!(c0 && c1)) return true;
  }
  return false;
}

}  // namespace detail

constexpr std::uint64_t kDefaultResampleBudget = 1'000'000;

/// Moser-Tardos resampling for the bad events B_x ("some translated point set
/// is monochromatic"): start from a uniformly random two-coloring, repeatedly
/// take the least-rank violated event and redraw its domain, until none is
/// violated. Deterministic per seed.
inline OpenPairWitness moser_tardos_two_coloring(
    const GroupSpec& g, const PointFamily& fam, std::uint64_t seed,
    std::uint64_t budget = kDefaultResampleBudget) {
  detail::QuotientOps ops(g, fam.depth);
  auto ranks = detail::point_ranks(g, fam);

  OpenPairWitness w;
  w.depth = fam.depth;
  w.seed = seed;
  SplitMix64 rng(seed);
  w.colors.resize(ops.size);
  for (auto& c : w.colors) c = static_cast<std::uint8_t>(rng.below(2));

  if (fam.k > 0) {
    for (;;) {
      std::size_t violated = ops.size;
      for (std::size_t x = 0; x < ops.size; ++x)
        if (detail::event_violated(ops, ranks, w.colors, x)) {
          violated = x;
          break;
        }
      if (violated == ops.size) break;
      if (++w.resample_count > budget)
        throw budget_error("moser_tardos: resample budget exceeded");
      for (const auto& set : ranks)
        for (std::size_t pr : set)
          w.colors[ops.mul(pr, violated)] = static_cast<std::uint8_t>(rng.below(2));
    }
  }

  std::vector<bool> b0(ops.size), b1(ops.size);
  for (std::size_t i = 0; i < ops.size; ++i) (w.colors[i] ? b1 : b0)[i] = true;
  w.a0 = ClopenSet(g, fam.depth, std::move(b0));
  w.a1 = ClopenSet(g, fam.depth, std::move(b1));
  return w;
}

struct OpenPairCheck {
  bool ok = true;
  std::size_t counterexample_rank = 0;  // x with some monochromatic translate
  std::uint32_t counterexample_set = 0;
};

/// Exhaustive verifier: every translate of every point set meets both color
/// classes.
inline OpenPairCheck verify_open_pair(const GroupSpec& g, const PointFamily& fam,
                                      const OpenPairWitness& w) {
  detail::QuotientOps ops(g, fam.depth);
  auto ranks = detail::point_ranks(g, fam);
  for (std::size_t x = 0; x < ops.size; ++x)
    for (std::uint32_t j = 0; j < fam.k; ++j) {
      bool c0 = false, c1 = false;
      for (std::size_t pr : ranks[j]) {
        (w.colors[ops.mul(pr, x)] ? c1 : c0) = true;
        if (c0 && c1) break;
      }
      if (!(c0 && c1)) return {false, x, j};
    }
  return {};
}

}  // namespace domatic
