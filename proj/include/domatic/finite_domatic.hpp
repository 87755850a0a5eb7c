#pragma once

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "domatic/graph.hpp"
#include "domatic/rng.hpp"

namespace domatic {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

// Rational bracket of e, tight enough that every threshold comparison in
// range is decided; a comparison falling inside the bracket is reported, not
// guessed.
inline const Rational& euler_low() {
  static const Rational v(boost::multiprecision::cpp_int("271828182845904523536"),
                          boost::multiprecision::cpp_int("100000000000000000000"));
  return v;
}
inline const Rational& euler_high() {
  static const Rational v(boost::multiprecision::cpp_int("271828182845904523537"),
                          boost::multiprecision::cpp_int("100000000000000000000"));
  return v;
}

}  // namespace detail

enum class LllFlavor { strong, moser_tardos };

/// Minimal n with k(1-1/k)^n (cn^2+1)^8 <= 2^-15 (strong) or
/// k(1-1/k)^n (cn^2+1) < 1/e (moser_tardos), in exact rationals.
inline std::uint32_t lll_threshold(std::uint32_t k, std::uint32_t c, LllFlavor flavor) {
  if (k < 2) throw input_error("lll_threshold: k must be >= 2");
  if (c < 1) throw input_error("lll_threshold: c must be >= 1");
  const Rational ratio(k - 1, k);
  Rational p(k);
  for (std::uint32_t n = 1; n <= 1'000'000; ++n) {
    p *= ratio;  // p = k (1-1/k)^n
    Rational d1 = Rational(boost::multiprecision::cpp_int(c) * n * n) + 1;
    if (flavor == LllFlavor::strong) {
      Rational lhs = p;
      for (int i = 0; i < 8; ++i) lhs *= d1;
      if (lhs <= Rational(1, boost::multiprecision::cpp_int(1) << 15)) return n;
    } else {
      Rational q = p * d1;
      if (q * detail::euler_high() < 1) return n;
      if (q * detail::euler_low() < 1)
        throw indeterminate_error("lll_threshold: comparison inside the e bracket");
    }
  }
  throw budget_error("lll_threshold: scan bound exceeded");
}

constexpr std::uint64_t kDomaticResampleBudget = 1'000'000;

namespace detail {

inline bool domatic_at(const Graph& g, const std::vector<Color>& f, Vertex x, Color k) {
  std::vector<bool> seen(k, false);
  Color cnt = 0;
  for (Vertex w : g.neighbors(x)) {
    Color c = f[w];
    if (c != kUncolored && c < k && !seen[c]) {
      seen[c] = true;
      if (++cnt == k) return true;
    }
  }
  return cnt == k;
}

}  // namespace detail

/// Exact dependency degree of the (graph, vertex) event family on the union
/// graph: the largest number of *other* events sharing a vertex with a given
/// event's neighborhood. Reported for diagnostics; the resampling loop itself
/// only requires the per-graph degree threshold.
inline std::size_t union_dependency_degree(const std::vector<Graph>& graphs) {
  if (graphs.empty()) return 0;
  std::size_t vcount = graphs[0].vertex_count();
  std::size_t events = graphs.size() * vcount;
  std::vector<std::vector<std::uint32_t>> at(vcount);
  for (std::size_t gi = 0; gi < graphs.size(); ++gi)
    for (Vertex x = 0; x < vcount; ++x)
      for (Vertex w : graphs[gi].neighbors(x))
        at[w].push_back(static_cast<std::uint32_t>(gi * vcount + x));
  std::size_t dep = 0;
  std::vector<std::uint32_t> stamp(events, ~0u);
  for (std::size_t gi = 0; gi < graphs.size(); ++gi)
    for (Vertex x = 0; x < vcount; ++x) {
      auto id = static_cast<std::uint32_t>(gi * vcount + x);
      std::size_t d = 0;
      for (Vertex w : graphs[gi].neighbors(x))
        for (std::uint32_t other : at[w])
          if (other != id && stamp[other] != id) {
            stamp[other] = id;
            ++d;
          }
      dep = std::max(dep, d);
    }
  return dep;
}

/// One coloring domatic for every listed graph at once: bad events are
/// (graph, vertex) pairs, scanned least vertex first (then graph), each
/// resample redrawing the event's whole neighborhood. Each graph must meet
/// the single-graph resampling threshold on its own.
inline Coloring simultaneous_domatic(const std::vector<Graph>& graphs, Color k,
                                     std::uint32_t c, std::uint64_t seed,
                                     std::uint64_t budget = kDomaticResampleBudget) {
  if (graphs.empty()) throw input_error("simultaneous_domatic: no graphs");
  if (k < 1) throw input_error("simultaneous_domatic: k must be >= 1");
  std::size_t vcount = graphs[0].vertex_count();
  for (const Graph& g : graphs)
    if (g.vertex_count() != vcount)
      throw input_error("simultaneous_domatic: graphs disagree on vertex count");

  for (const Graph& g : graphs) {
    std::size_t deg = g.min_out_degree();
    if (deg != g.max_out_degree())
      throw input_error("simultaneous_domatic: graph is not regular");
    if (deg == 0) throw input_error("simultaneous_domatic: empty neighborhoods");
    auto in = g.in_degrees();
    std::size_t max_in = *std::max_element(in.begin(), in.end());
    if (max_in > std::size_t{c} * deg)
      throw input_error("simultaneous_domatic: in-degree exceeds c * n");
  }

  if (k >= 2) {
    for (const Graph& g : graphs)
      if (g.min_out_degree() < lll_threshold(k, c, LllFlavor::moser_tardos))
        throw input_error("simultaneous_domatic: degree below the resampling threshold");
  }

  Coloring col;
  col.color_bound = k;
  col.assignment.resize(vcount);
  SplitMix64 rng(seed);
  for (auto& cv : col.assignment) cv = static_cast<Color>(rng.below(k));

  std::uint64_t resamples = 0;
  for (;;) {
    const Graph* hit = nullptr;
    Vertex hx = 0;
    for (Vertex x = 0; x < vcount && !hit; ++x)
      for (const Graph& g : graphs)
        if (!detail::domatic_at(g, col.assignment, x, k)) {
          hit = &g;
          hx = x;
          break;
        }
    if (!hit) break;
    if (++resamples > budget)
      throw budget_error("simultaneous_domatic: resample budget exceeded");
    for (Vertex w : hit->neighbors(hx))
      col.assignment[w] = static_cast<Color>(rng.below(k));
  }
  return col;
}

inline Coloring moser_tardos_domatic(const Graph& g, Color k, std::uint32_t c,
                                     std::uint64_t seed,
                                     std::uint64_t budget = kDomaticResampleBudget) {
  return simultaneous_domatic({g}, k, c, seed, budget);
}

struct ApproxReport {
  std::uint32_t k = 0;
  Rational eps;
  std::uint64_t sample_size = 0;  // N
  std::uint64_t attempts = 0;
  Rational fraction;
  std::uint64_t seed = 0;
  bool accepted = false;
};

/// Minimal N with k(1-1/k)^N < eps/3 (N=1 when k=1, where the base is 0).
inline std::uint64_t approx_sample_count(std::uint32_t k, const Rational& eps) {
  if (k < 1) throw input_error("approx: k must be >= 1");
  if (!(eps > 0 && eps < 1)) throw input_error("approx: eps must be in (0,1)");
  if (k == 1) return 1;
  const Rational ratio(k - 1, k), target = eps / 3;
  Rational v(k);
  std::uint64_t n = 0;
  while (!(v < target)) {
    v *= ratio;
    ++n;
  }
  return n;
}

/// Random piecewise coloring (desk model: each vertex its own piece): color
/// vertices uniformly, measure the weight of vertices whose first N
/// enumerated neighbors show all k colors, retry until the fraction reaches
/// 1 - eps. Exhausting attempts returns the best coloring found, flagged.
inline std::pair<Coloring, ApproxReport> approx_domatic(
    std::size_t vertex_count,
    const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& neighbor,
    const std::vector<Rational>& weight, std::uint32_t k, const Rational& eps,
    std::uint64_t seed, std::uint64_t max_attempts) {
  if (weight.size() != vertex_count)
    throw input_error("approx: weight vector length mismatch");
  Rational total = 0;
  for (const Rational& w : weight) {
    if (w < 0) throw input_error("approx: negative weight");
    total += w;
  }
  if (total != 1) throw input_error("approx: weights do not sum to 1");

  std::uint64_t n_samples = approx_sample_count(k, eps);
  ApproxReport rep;
  rep.k = k;
  rep.eps = eps;
  rep.sample_size = n_samples;
  rep.seed = seed;

  SplitMix64 rng(seed);
  Coloring best;
  Rational best_fraction(-1);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    rep.attempts = attempt;
    Coloring col;
    col.color_bound = k;
    col.assignment.resize(vertex_count);
    for (auto& cv : col.assignment) cv = static_cast<Color>(rng.below(k));

    Rational frac = 0;
    std::vector<bool> seen(k);
    for (std::size_t v = 0; v < vertex_count; ++v) {
      std::fill(seen.begin(), seen.end(), false);
      std::uint32_t cnt = 0;
      for (std::uint64_t j = 0; j < n_samples && cnt < k; ++j) {
        std::uint64_t w = neighbor(v, j);
        if (w >= vertex_count) throw input_error("approx: neighbor out of range");
        Color cw = col.assignment[w];
        if (!seen[cw]) {
          seen[cw] = true;
          ++cnt;
        }
      }
      if (cnt == k) frac += weight[v];
    }
    if (frac > best_fraction) {
      best_fraction = frac;
      best = col;
    }
    if (frac >= 1 - eps) {
      rep.fraction = frac;
      rep.accepted = true;
      return {std::move(col), std::move(rep)};
    }
  }
  rep.fraction = best_fraction;
  rep.accepted = false;
  return {std::move(best), std::move(rep)};
}

/// Convenience wrapper for finite graphs with uniform weights: neighbor j of
/// v is the j-th out-list entry, so every vertex needs out-degree >= N.
inline std::pair<Coloring, ApproxReport> approx_domatic(const Graph& g, std::uint32_t k,
                                                        const Rational& eps,
                                                        std::uint64_t seed,
                                                        std::uint64_t max_attempts) {
  std::uint64_t need = approx_sample_count(k, eps);
  if (g.min_out_degree() < need)
    throw input_error("approx: a vertex has fewer than N enumerable neighbors");
  std::vector<Rational> weight(g.vertex_count(), Rational(1, g.vertex_count()));
  auto neighbor = [&g](std::uint64_t v, std::uint64_t j) {
    return static_cast<std::uint64_t>(g.neighbors(static_cast<Vertex>(v))[j]);
  };
  return approx_domatic(g.vertex_count(), neighbor, weight, k, eps, seed, max_attempts);
}

/// Paths of 6..12 edges, pairwise vertex-distinct within each path,
/// consecutive vertices mutually adjacent in the host; an optional
/// precoloring supplies the boundary context.
struct PathDecomposition {
  std::vector<std::vector<Vertex>> paths;
  Coloring context;  // empty assignment = everything uncolored
};

inline void validate_path_decomposition(const Graph& host, const PathDecomposition& d,
                                        Color k) {
  if (k < 2) throw input_error("path coloring: k must be >= 2");
  for (const auto& p : d.paths) {
    if (p.size() < 7 || p.size() > 13)
      throw input_error("path coloring: path length outside [6,12] edges");
    std::set<Vertex> distinct(p.begin(), p.end());
    if (distinct.size() != p.size())
      throw input_error("path coloring: repeated vertex within a path");
    for (std::size_t i = 0; i < p.size(); ++i) {
      Vertex v = p[i];
      if (v >= host.vertex_count())
        throw input_error("path coloring: path vertex out of range");
      const auto& nb = host.neighbors(v);
      if (std::find(nb.begin(), nb.end(), v) != nb.end())
        throw input_error("path coloring: self-loop at a decomposed vertex");
      if (nb.size() < std::size_t{k} + 1)
        throw input_error("path coloring: decomposed vertex has degree below k+1");
      if (i + 1 < p.size()) {
        const auto& nb2 = host.neighbors(p[i + 1]);
        if (std::find(nb.begin(), nb.end(), p[i + 1]) == nb.end() ||
            std::find(nb2.begin(), nb2.end(), v) == nb2.end())
          throw input_error("path coloring: consecutive path vertices not adjacent");
      }
    }
  }
}

/// Colors each path in order with the lexicographically least assignment of
/// its uncolored vertices such that (interior rule) every interior vertex has
/// a differently-colored interior path-neighbor, and (endpoint rule, applied
/// if possible) each endpoint's unique path-neighbor takes a color missing
/// from that endpoint's already-colored host neighborhood. When the endpoint
/// rules cannot both hold, the first endpoint is preferred, then the last,
/// then neither — the "if possible" clause, not an error.
inline Coloring path_coloring(const Graph& host, const PathDecomposition& d, Color k) {
  validate_path_decomposition(host, d, k);
  Coloring col = d.context;
  if (col.assignment.empty())
    col.assignment.assign(host.vertex_count(), kUncolored);
  if (col.assignment.size() != host.vertex_count())
    throw input_error("path coloring: context length mismatch");
  for (Color c : col.assignment)
    if (c != kUncolored && c >= k)
      throw input_error("path coloring: context color out of range");
  col.color_bound = k;

  for (const auto& p : d.paths) {
    const std::size_t last = p.size() - 1;
    auto missing = [&](Vertex v) {
      std::vector<bool> miss(k, true);
      for (Vertex w : host.neighbors(v)) {
        Color c = col.assignment[w];
        if (c != kUncolored && c < k) miss[c] = false;
      }
      bool any = std::find(miss.begin(), miss.end(), true) != miss.end();
      return std::make_pair(miss, any);
    };
    auto [miss0, any0] = missing(p.front());
    auto [missL, anyL] = missing(p.back());

    std::vector<std::size_t> free_pos;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (col.assignment[p[i]] == kUncolored) free_pos.push_back(i);

    std::vector<Color> pc(p.size());
    auto fill = [&](const std::vector<Color>& asg) {
      for (std::size_t i = 0; i < p.size(); ++i) pc[i] = col.assignment[p[i]];
      for (std::size_t t = 0; t < free_pos.size(); ++t) pc[free_pos[t]] = asg[t];
    };
    auto interior_ok = [&]() {
      for (std::size_t i = 1; i < last; ++i) {
        bool ok = (i > 1 && pc[i - 1] != pc[i]) || (i + 1 < last && pc[i + 1] != pc[i]);
        if (!ok) return false;
      }
      return true;
    };

    const std::array<std::pair<bool, bool>, 4> tiers{
        {{true, true}, {true, false}, {false, true}, {false, false}}};
    bool placed = false;
    for (auto [want0, wantL] : tiers) {
      if (placed) break;
      if ((want0 && !any0) || (wantL && !anyL)) continue;
      std::vector<Color> asg(free_pos.size(), 0);
      for (;;) {
        fill(asg);
        bool ok = interior_ok() && (!want0 || miss0[pc[1]]) && (!wantL || missL[pc[last - 1]]);
        if (ok) {
          for (std::size_t i = 0; i < p.size(); ++i) col.assignment[p[i]] = pc[i];
          placed = true;
          break;
        }
        // next assignment in lexicographic order
        std::size_t t = asg.size();
        while (t > 0 && asg[t - 1] == k - 1) asg[--t] = 0;
        if (t == 0) break;
        ++asg[t - 1];
      }
    }
    if (!placed)
      throw input_error("path coloring: no assignment meets the interior rule");
  }
  return col;
}

}  // namespace domatic
