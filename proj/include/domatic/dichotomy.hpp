#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "domatic/graph.hpp"
#include "domatic/open_pair.hpp"

namespace domatic {

/// Bookkeeping for one witness node inserted into a level: which parent it
/// extends, which scheme subtree it came from, and the selected point whose
/// depth-l cylinder contains its cylinder.
struct NodeRecord {
  std::string node;
  std::string parent;
  std::uint32_t scheme = 0;
  Prefix point;
};

struct Level {
  std::vector<NodeRecord> records;
  // Built when this level was formed (absent at level 0).
  OpenPairWitness witness;
  PointFamily family;  // sets ordered parent-major, scheme-minor
  std::vector<std::pair<std::string, std::uint32_t>> set_labels;
};

/// The level-by-level construction state: L_0 = {empty string}; forming
/// L_{n+1} takes, for every node string s in L_n and every scheme k, the
/// perfect subtree below s, and asks the two-coloring machinery for a clopen
/// pair meeting every translate of every such set.
struct LevelData {
  GroupSpec group;
  std::vector<const CantorScheme*> schemes;
  std::vector<Level> levels;

  std::size_t built_levels() const { return levels.size() - 1; }
  std::size_t depth_through(std::size_t n) const {
    std::size_t d = 0;
    for (std::size_t m = 1; m <= n; ++m) d = std::max(d, levels[m].family.depth);
    return d;
  }
};

inline LevelData build_levels(const GroupSpec& g,
                              std::vector<const CantorScheme*> schemes,
                              std::size_t level_count, std::uint64_t seed,
                              std::uint64_t resample_budget = kDefaultResampleBudget) {
  if (schemes.empty()) throw input_error("build_levels: no schemes given");
  LevelData out;
  out.group = g;
  out.schemes = std::move(schemes);
  Level root;
  root.records.push_back(NodeRecord{"", "", 0, Prefix{}});
  out.levels.push_back(std::move(root));

  SplitMix64 seeder(seed);
  for (std::size_t n = 0; n < level_count; ++n) {
    std::uint64_t level_seed = seeder.next();

    std::set<std::string> parent_set;
    for (const auto& r : out.levels[n].records) parent_set.insert(r.node);
    std::vector<std::string> parents(parent_set.begin(), parent_set.end());

    std::vector<PerfectSetDesc> sets;
    std::vector<std::pair<std::string, std::uint32_t>> labels;
    for (const auto& s : parents)
      for (std::uint32_t k = 0; k < out.schemes.size(); ++k) {
        sets.push_back(PerfectSetDesc{out.schemes[k], s});
        labels.emplace_back(s, k);
      }

    std::uint32_t per_set = choose_parameters(static_cast<std::uint32_t>(sets.size()));
    PointFamily fam = select_points(g, sets, per_set);
    OpenPairWitness w = moser_tardos_two_coloring(g, fam, level_seed, resample_budget);

    Level lvl;
    lvl.set_labels = std::move(labels);
    for (std::size_t si = 0; si < sets.size(); ++si)
      for (const auto& sp : fam.points[si])
        lvl.records.push_back(NodeRecord{sp.node, lvl.set_labels[si].first,
                                         lvl.set_labels[si].second, sp.point});
    lvl.family = std::move(fam);
    lvl.witness = std::move(w);
    out.levels.push_back(std::move(lvl));
  }
  return out;
}

struct LevelViolation {
  std::size_t level = 0;
  std::string parent;
  std::uint32_t scheme = 0;
  std::size_t gamma = 0;  // quotient rank
  std::string reason;
};

/// Exhaustive level invariant: for every parent s in L_n, every scheme k, and
/// every gamma in the level's quotient, some witness node t extending s has
/// U_t * gamma inside each color class. Structural side conditions (node
/// extends parent; U_t inside the point's depth-l cylinder) are checked first
/// so the per-gamma test can run on point ranks alone.
inline std::optional<LevelViolation> verify_levels(const LevelData& ld) {
  const GroupSpec& g = ld.group;
  for (std::size_t n = 1; n < ld.levels.size(); ++n) {
    const Level& lvl = ld.levels[n];
    std::size_t depth = lvl.family.depth;

    for (std::size_t si = 0; si < lvl.set_labels.size(); ++si) {
      const auto& [par, k] = lvl.set_labels[si];
      const CantorScheme& sch = *ld.schemes[k];
      for (const auto& sp : lvl.family.points[si]) {
        if (sp.node.compare(0, par.size(), par) != 0)
          return LevelViolation{n, par, k, 0, "witness node does not extend its parent"};
        bool fits;
        if (auto wd = sch.single_cylinder(sp.node))
          fits = wd->depth() >= depth &&
                 project(*wd, depth) == project(sp.point, depth);
        else
          fits = ClopenSet::subset(g, sch.cylinder(sp.node),
                                   ClopenSet::cylinder(g, sp.point, depth));
        if (!fits)
          return LevelViolation{n, par, k, 0,
                                "witness cylinder escapes its point's cylinder"};
      }
    }

    detail::QuotientOps ops(g, depth);
    auto ranks = detail::point_ranks(g, lvl.family);
    for (std::size_t x = 0; x < ops.size; ++x)
      for (std::size_t si = 0; si < ranks.size(); ++si) {
        bool c0 = false, c1 = false;
        for (std::size_t pr : ranks[si]) {
          (lvl.witness.colors[ops.mul(pr, x)] ? c1 : c0) = true;
          if (c0 && c1) break;
        }
        if (!c0 || !c1)
          return LevelViolation{n, lvl.set_labels[si].first, lvl.set_labels[si].second,
                                x, c0 ? "no witness node lands in the 1-side"
                                      : "no witness node lands in the 0-side"};
      }
  }
  return std::nullopt;
}

/// D_n = A^1_n intersected with all earlier A^0_m; returns D_1..D_N and
/// verifies pairwise disjointness (the union covering the group is neither
/// expected nor asserted).
inline std::vector<ClopenSet> emit_domatic_sets(const LevelData& ld, std::size_t n_sets) {
  if (n_sets > ld.built_levels())
    throw input_error("emit_domatic_sets: levels not built that far");
  const GroupSpec& g = ld.group;
  std::vector<ClopenSet> out;
  for (std::size_t n = 1; n <= n_sets; ++n) {
    ClopenSet d = ld.levels[n].witness.a1;
    for (std::size_t m = 1; m < n; ++m)
      d = ClopenSet::set_intersection(g, d, ld.levels[m].witness.a0);
    out.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!ClopenSet::set_intersection(g, out[i], out[j]).is_empty())
        throw std::runtime_error("emit_domatic_sets: internal: emitted sets overlap");
  return out;
}

struct DominationCertificate {
  Prefix gamma;                    // a marked point q_t, so an element of S
  std::vector<std::string> chain;  // s_0 = "" through s_n
};

/// Walks the recorded bookkeeping down one scheme's subtree: picks nested
/// nodes s_1 within A^0_1, ..., s_{n-1} within A^0_{n-1}, s_n within A^1_n
/// (lexicographically least valid candidate at each step), and returns
/// gamma = q_{s_n}; then gamma * x lands in D_n, which is checked before
/// returning.
inline DominationCertificate domination_certificate(const LevelData& ld,
                                                    std::uint32_t scheme, std::size_t n,
                                                    const Prefix& x) {
  if (n < 1 || n > ld.built_levels())
    throw input_error("domination_certificate: level out of range");
  if (scheme >= ld.schemes.size())
    throw input_error("domination_certificate: scheme index out of range");
  const GroupSpec& g = ld.group;
  std::size_t view = ld.depth_through(n);
  if (x.depth() < view)
    throw input_error("domination_certificate: x too shallow for the requested level");

  DominationCertificate cert;
  std::string s;
  cert.chain.push_back(s);
  for (std::size_t m = 1; m <= n; ++m) {
    const Level& lvl = ld.levels[m];
    std::size_t depth = lvl.family.depth;
    detail::QuotientOps ops(g, depth);
    std::size_t xr = detail::rank_word(g, project(x, depth).word);
    std::uint8_t want = (m < n) ? 0 : 1;
    std::optional<std::string> best;
    for (std::size_t si = 0; si < lvl.set_labels.size(); ++si) {
      if (lvl.set_labels[si].second != scheme || lvl.set_labels[si].first != s)
        continue;
      for (const auto& sp : lvl.family.points[si]) {
        std::size_t qr = detail::rank_word(g, project(sp.point, depth).word);
        if (lvl.witness.colors[ops.mul(qr, xr)] != want) continue;
        if (!best || sp.node < *best) best = sp.node;
      }
    }
    if (!best)
      throw std::runtime_error(
          "domination_certificate: internal: no witness node at level " +
          std::to_string(m));
    s = *best;
    cert.chain.push_back(s);
  }

  cert.gamma = ld.schemes[scheme]->point(s, view);
  ClopenSet d = emit_domatic_sets(ld, n).back();
  Prefix gx = mul(g, project(cert.gamma, view), project(x, view));
  if (!d.contains(g, gx))
    throw std::runtime_error("domination_certificate: internal: membership check failed");
  return cert;
}

/// A coloring continuous on its (clopen) domain: finitely many pairwise
/// disjoint clopen pieces, each of one color; undefined off their union.
struct PiecewiseColoring {
  struct Piece {
    ClopenSet set;
    Color color = 0;
  };
  std::vector<Piece> pieces;

  std::size_t max_depth() const {
    std::size_t d = 0;
    for (const auto& p : pieces) d = std::max(d, p.set.depth());
    return d;
  }

  void validate(const GroupSpec& g) const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j)
        if (!ClopenSet::set_intersection(g, pieces[i].set, pieces[j].set).is_empty())
          throw input_error("piecewise coloring: pieces overlap");
  }

  std::optional<Color> at(const GroupSpec& g, const Prefix& x) const {
    for (const auto& p : pieces)
      if (p.set.contains(g, x)) return p.color;
    return std::nullopt;
  }
};

/// One convergent sequence with its limit, both as prefix oracles, plus a
/// declared modulus: all elements from index m(l) on agree with the limit to
/// depth l.
struct ConvergentSequence {
  std::function<Prefix(std::size_t depth)> limit;
  std::function<Prefix(std::size_t index, std::size_t depth)> element;
  std::function<std::size_t(std::size_t depth)> modulus;
};

struct ConvergentFamily {
  std::vector<ConvergentSequence> sequences;
};

struct VisionResult {
  std::set<Color> colors;
  std::size_t tail_index = 0;
};

/// The countable-compact side: with S a finite union of convergent sequences
/// and f piecewise constant at depth l* (the max piece depth), every element
/// past the modulus m(l*) colors s_k * x the same as the limit does, so the
/// color set of the whole neighborhood S * x is computed exactly from the
/// finitely many heads plus one limit evaluation per sequence.
inline VisionResult finite_vision(const GroupSpec& g, const PiecewiseColoring& f,
                                  const ConvergentFamily& fam,
                                  const std::function<Prefix(std::size_t)>& x) {
  f.validate(g);
  std::size_t ell = f.max_depth();
  Prefix xw = project(x(ell), ell);

  VisionResult res;
  for (const auto& seq : fam.sequences) {
    Prefix lim = project(seq.limit(ell), ell);
    auto limit_color = f.at(g, mul(g, lim, xw));
    if (!limit_color)
      throw input_error(
          "finite_vision: limit point lands where the coloring is undefined");
    res.colors.insert(*limit_color);

    std::size_t m = seq.modulus(ell);
    // Spot-check the declared modulus at this depth.
    for (std::size_t k = m; k < m + 4; ++k)
      if (!(project(seq.element(k, ell), ell) == lim))
        throw input_error("finite_vision: modulus dishonest at queried depth");

    for (std::size_t k = 0; k < m; ++k) {
      Prefix ex = mul(g, project(seq.element(k, ell), ell), xw);
      if (auto c = f.at(g, ex)) res.colors.insert(*c);
    }
    res.tail_index = std::max(res.tail_index, m);
  }
  return res;
}

}  // namespace domatic
