#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domatic/errors.hpp"
#include "domatic/graph.hpp"

namespace domatic {

using Rational = boost::multiprecision::cpp_rational;

/// A graph whose out-neighborhoods are infinite deterministic streams,
/// queried by index. On a finite carrier the streams cycle through the
/// vertices, so repeated neighbors are distinct parallel edges
/// (a multigraph in the limit).
class LazyGraph {
 public:
  using Stream = std::function<std::uint64_t(std::uint64_t vertex, std::uint64_t index)>;

  LazyGraph(std::size_t carrier, Stream stream, bool omega_regular = false)
      : carrier_(carrier), stream_(std::move(stream)), omega_regular_(omega_regular) {
    if (carrier_ == 0) throw input_error("lazy graph: empty carrier");
  }

  std::size_t carrier_size() const { return carrier_; }
  bool omega_regular() const { return omega_regular_; }

  std::uint64_t neighbor(std::uint64_t v, std::uint64_t i) const {
    std::uint64_t w = stream_(v, i);
    if (w >= carrier_) throw input_error("lazy graph: stream leaves the carrier");
    return w;
  }

  /// Duplicate-freeness and loop-freeness on a stream prefix.
  void spot_check(std::uint64_t v, std::uint64_t prefix) const {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < prefix; ++i) {
      std::uint64_t w = neighbor(v, i);
      if (w == v) throw input_error("lazy graph: non-regular stream (self-loop)");
      if (omega_regular_ && !seen.insert(w).second)
        throw input_error("lazy graph: non-regular stream (duplicate neighbor)");
    }
  }

  /// neighbor(v, i) = v + 1 + (i mod (V-1)), wrapping.
  static LazyGraph round_robin(std::size_t carrier) {
    if (carrier < 2) throw input_error("round robin: carrier needs >= 2 vertices");
    return LazyGraph(carrier, [carrier](std::uint64_t v, std::uint64_t i) {
      return (v + 1 + i % (carrier - 1)) % carrier;
    });
  }

 private:
  std::size_t carrier_ = 0;
  Stream stream_;
  bool omega_regular_ = false;
};

/// Smooth structure: finitely many classes, vertices (class, index), the
/// classifier nu = index (injective per class by construction), and a
/// within-class neighbor stream.
struct ClassVertex {
  std::size_t cls = 0;
  std::uint64_t index = 0;
};

struct ClassSpace {
  std::size_t class_count = 1;
  // i-th enumerated neighbor index of vertex (cls, j); never equal to j.
  std::function<std::uint64_t(std::size_t cls, std::uint64_t j, std::uint64_t i)> stream;
};

/// First component of the inverse Cantor pairing: the fixed surjection onto
/// omega with infinite fibers used for both stage coloring and block
/// designation. p(n) <= n always.
inline std::uint64_t pair_first(std::uint64_t n) {
  std::uint64_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  return w - (n - w * (w + 1) / 2);
}

struct SmoothWitness {
  ClassVertex y;
  std::uint64_t stage = 0;  // y lies in A_stage, and pair_first(stage) = color
};

/// Lazily replays the greedy stage construction inside x's class:
/// A_0 = nu^{-1}{0}; each later A_{n+1} collects, for every vertex already
/// reached, its least-index enumerated neighbor outside the reached set (plus
/// the next nu-fiber). The color of stage n is pair_first(n); the witness is
/// x's own pick at the first stage past nu(x) with the requested color.
inline SmoothWitness smooth_domatic_query(const ClassSpace& cs, ClassVertex x, Color i,
                                          std::uint64_t stage_budget,
                                          std::uint64_t scan_budget = 1'000'000) {
  if (x.cls >= cs.class_count) throw input_error("smooth query: class out of range");

  std::uint64_t target = x.index + 1;
  while (target <= stage_budget && pair_first(target) != i) ++target;
  if (target > stage_budget)
    throw budget_error("smooth query: no stage of color " + std::to_string(i) +
                       " within budget " + std::to_string(stage_budget) +
                       " past index " + std::to_string(x.index));

  auto pick = [&](std::uint64_t v, const std::set<std::uint64_t>& reached) {
    for (std::uint64_t idx = 0; idx < scan_budget; ++idx) {
      std::uint64_t w = cs.stream(x.cls, v, idx);
      if (w == v) throw input_error("smooth query: stream yields a self-loop");
      if (!reached.count(w)) return w;
    }
    throw budget_error("smooth query: neighbor scan budget exhausted");
  };

  std::set<std::uint64_t> reached{0};  // E_0 = A_0 = nu^{-1}{0}
  std::optional<std::uint64_t> witness;
  for (std::uint64_t n = 1; n <= target; ++n) {
    std::set<std::uint64_t> stage_set;
    for (std::uint64_t v : reached) {
      std::uint64_t w = pick(v, reached);
      stage_set.insert(w);
      if (n == target && v == x.index) witness = w;
    }
    if (!reached.count(n)) stage_set.insert(n);
    reached.insert(stage_set.begin(), stage_set.end());
  }
  if (!witness)
    throw std::runtime_error("smooth query: internal: x never entered the reached set");
  return SmoothWitness{ClassVertex{x.cls, *witness}, target};
}

/// A function with enumerated fibers: value(x) names the fiber,
/// fiber_element(p, i) enumerates it without repetition, fiber_size(p) is its
/// size (nullopt = infinite).
struct FiberFunction {
  std::function<std::uint64_t(std::uint64_t)> value;
  std::function<std::uint64_t(std::uint64_t parent, std::uint64_t i)> fiber_element;
  std::function<std::optional<std::uint64_t>(std::uint64_t parent)> fiber_size;
};

/// d(x) = rank of x in the enumeration of its fiber; returned only when below
/// k (the partial coloring d restricted to d^{-1}[k]). For the inverse graph
/// N(y) = fiber(y), the i-th fiber element always supplies color i, so the
/// partial coloring is k-domatic there.
inline std::optional<Color> fiber_rank_coloring(const FiberFunction& f, Color k,
                                                std::uint64_t x,
                                                std::uint64_t scan_budget = 1'000'000) {
  std::uint64_t parent = f.value(x);
  auto size = f.fiber_size(parent);
  if (size && *size < k)
    throw input_error("fiber rank: fiber of " + std::to_string(parent) +
                      " has size " + std::to_string(*size) + " < k");
  std::uint64_t cap = size ? *size : scan_budget;
  for (std::uint64_t i = 0; i < cap; ++i) {
    std::uint64_t e = f.fiber_element(parent, i);
    if (f.value(e) != parent)
      throw input_error("fiber rank: enumeration leaves the fiber");
    if (e == x) return i < k ? std::optional<Color>(static_cast<Color>(i)) : std::nullopt;
  }
  throw input_error("fiber rank: x not found in its fiber's enumeration");
}

/// Finite probability space: carrier weights sum to exactly 1; optional
/// auxiliary weight functions for the multi-weight variant.
struct WeightedCarrier {
  std::vector<Rational> weight;
  std::vector<std::vector<Rational>> aux;

  std::size_t size() const { return weight.size(); }

  void validate() const {
    auto check = [this](const std::vector<Rational>& w) {
      if (w.size() != weight.size())
        throw input_error("weighted carrier: weight vector length mismatch");
      Rational total = 0;
      for (const Rational& r : w) {
        if (r < 0) throw input_error("weighted carrier: negative weight");
        total += r;
      }
      if (total != 1) throw input_error("weighted carrier: weights do not sum to 1");
    };
    check(weight);
    for (const auto& w : aux) check(w);
  }
};

inline Rational mass(const std::vector<Rational>& w, const std::vector<bool>& set) {
  Rational total = 0;
  for (std::size_t v = 0; v < set.size(); ++v)
    if (set[v]) total += w[v];
  return total;
}

struct EdgeInstance {
  std::uint64_t id = 0;  // stage order: round * carrier + vertex
  std::uint64_t a = 0, b = 0;
  std::uint64_t color = 0;
};

struct BlockLedger {
  std::size_t lo = 0, hi = 0;        // color window [lo, hi)
  std::vector<bool> covered;         // M_i: vertices incident to a window color
  std::vector<bool> independent0;    // B_i^0, greedy maximal independent in G_i
  std::vector<bool> chosen_set;      // C_i
  int chosen = 0;                    // which of B^0 / B^1 was taken
  std::size_t designated_weight = 0; // multi-weight designation (0 otherwise)
};

constexpr std::uint64_t kUnoriented = ~std::uint64_t{0};

struct Orientation {
  std::vector<EdgeInstance> edges;
  std::vector<std::uint64_t> eta;  // per edge id, the grabbed endpoint (or kUnoriented)
  std::vector<BlockLedger> blocks;
  std::vector<std::vector<std::uint64_t>> out_edges;  // per vertex, ids in stage order
};

struct GrabEntry {
  std::uint64_t k = 0;
  std::uint64_t m_k = 0;
  Rational measure;  // mu(E_{m_k})
  Rational bound;    // 1 - 2^{-k}(k+1)
  bool holds = false;
};

struct GrabReport {
  std::vector<GrabEntry> entries;
};

namespace detail {

/// Materializes T rounds of edge instances (round r contributes one edge per
/// vertex) and colors them greedily with the first color unused at both
/// endpoints, giving the proper-coloring surrogate.
inline std::vector<EdgeInstance> grab_edges(const LazyGraph& lg, std::uint64_t rounds) {
  std::size_t carrier = lg.carrier_size();
  std::vector<EdgeInstance> edges;
  edges.reserve(rounds * carrier);
  std::vector<std::vector<bool>> used(carrier);
  for (std::uint64_t r = 0; r < rounds; ++r)
    for (std::uint64_t v = 0; v < carrier; ++v) {
      std::uint64_t w = lg.neighbor(v, r);
      if (w == v) throw input_error("edge grab: non-regular stream (self-loop)");
      std::uint64_t c = 0;
      while ((c < used[v].size() && used[v][c]) || (c < used[w].size() && used[w][c])) ++c;
      for (std::uint64_t u : {v, w}) {
        if (used[u].size() <= c) used[u].resize(c + 1, false);
        used[u][c] = true;
      }
      edges.push_back(EdgeInstance{r * carrier + v, v, w, c});
    }
  return edges;
}

/// Greedy maximal independent set of the block graph, vertex order 0..V-1.
inline std::vector<bool> greedy_mis(std::size_t carrier,
                                    const std::vector<const EdgeInstance*>& block) {
  std::vector<bool> in(carrier, false);
  std::vector<std::vector<std::uint64_t>> adj(carrier);
  for (const EdgeInstance* e : block) {
    adj[e->a].push_back(e->b);
    adj[e->b].push_back(e->a);
  }
  for (std::uint64_t v = 0; v < carrier; ++v) {
    bool blocked = false;
    for (std::uint64_t w : adj[v])
      if (in[w]) { blocked = true; break; }
    if (!blocked) in[v] = true;
  }
  return in;
}

struct GrabCore {
  std::size_t carrier = 0;
  std::vector<EdgeInstance> edges;
  std::uint64_t color_count = 0;
  std::vector<std::vector<std::uint64_t>> incident;  // color -> vertices (A_n)
  std::vector<std::vector<const EdgeInstance*>> by_color;

  GrabCore(const LazyGraph& lg, std::uint64_t rounds) : carrier(lg.carrier_size()) {
    edges = grab_edges(lg, rounds);
    for (const auto& e : edges) color_count = std::max(color_count, e.color + 1);
    incident.resize(color_count);
    by_color.resize(color_count);
    for (const auto& e : edges) {
      incident[e.color].push_back(e.a);
      incident[e.color].push_back(e.b);
      by_color[e.color].push_back(&e);
    }
  }
};

/// The block machinery shared by the single- and multi-weight variants.
/// `aux` lists the weights standing in for the basic open sets; the carrier
/// measure always drives the 1 - 2^{-i-1} coverage rule, and the designated
/// auxiliary weight (k-th element of each p-fiber, index capped) must stay
/// positive on C_i within M_i.
inline Orientation grab_orient(const GrabCore& core, const WeightedCarrier& wc,
                               const std::vector<std::vector<Rational>>& aux,
                               std::size_t blocks_wanted) {
  std::size_t carrier = core.carrier;
  Orientation o;
  o.edges = core.edges;
  o.eta.assign(core.edges.size(), kUnoriented);
  o.out_edges.resize(carrier);

  std::vector<bool> grabbed_union(carrier, false);  // union of C_n cap M_n so far
  std::vector<std::vector<bool>> block_grab;        // per block, C_n cap M_n
  std::map<std::uint64_t, std::uint64_t> fiber_rank_seen;

  std::size_t n_lo = 0;
  Rational eps(1, 2);
  for (std::size_t i = 0; i < blocks_wanted; ++i, eps /= 2) {
    // sigma: scan until the covered carrier mass exceeds 1 - eps and every
    // applicable auxiliary weight sees positive mass.
    std::vector<bool> covered(carrier, false);
    std::size_t n_hi = n_lo;
    auto window_ok = [&]() {
      if (!(mass(wc.weight, covered) > 1 - eps)) return false;
      for (std::size_t j = 0; j < aux.size() && j <= i; ++j)
        if (!(mass(aux[j], covered) > 0)) return false;
      return true;
    };
    while (!window_ok()) {
      if (n_hi >= core.color_count)
        throw budget_error("edge grab: colors exhausted at block " + std::to_string(i) +
                           " (materialize more stages)");
      for (std::uint64_t v : core.incident[n_hi]) covered[v] = true;
      ++n_hi;
    }

    std::vector<const EdgeInstance*> block;
    for (std::size_t c = n_lo; c < n_hi; ++c)
      for (const EdgeInstance* e : core.by_color[c]) block.push_back(e);
    std::vector<bool> b0 = greedy_mis(carrier, block);

    // D_i = X minus the grabs of blocks p(i) <= n < i.
    std::uint64_t p_i = pair_first(i);
    std::vector<bool> d(carrier, true);
    for (std::size_t n = p_i; n < i; ++n)
      for (std::size_t v = 0; v < carrier; ++v)
        if (block_grab[n][v]) d[v] = false;

    std::size_t designated = 0;
    if (!aux.empty()) {
      std::uint64_t rank = fiber_rank_seen[p_i]++;
      designated = static_cast<std::size_t>(
          std::min<std::uint64_t>(rank, aux.size() - 1));
    }

    auto restrict_to = [&](const std::vector<bool>& s, const std::vector<bool>& t) {
      std::vector<bool> r(carrier, false);
      for (std::size_t v = 0; v < carrier; ++v) r[v] = s[v] && t[v];
      return r;
    };
    std::vector<bool> b1(carrier);
    for (std::size_t v = 0; v < carrier; ++v) b1[v] = !b0[v];

    // Choose the half carrying at least half of D_i's mass; under auxiliary
    // weights, fall back to the other half if the designated weight vanishes
    // on the choice within M_i.
    Rational m0 = mass(wc.weight, restrict_to(b0, d));
    int chosen = (2 * m0 >= mass(wc.weight, d)) ? 0 : 1;
    if (!aux.empty()) {
      const std::vector<bool>& first = chosen == 0 ? b0 : b1;
      if (!(mass(aux[designated], restrict_to(first, covered)) > 0)) chosen = 1 - chosen;
    }
    const std::vector<bool>& c_set = chosen == 0 ? b0 : b1;

    // Orient the window edges toward C_i; ties (both or neither endpoint
    // inside) go to the smaller vertex id.
    for (const EdgeInstance* e : block) {
      bool ia = c_set[e->a], ib = c_set[e->b];
      std::uint64_t to = ia == ib ? std::min(e->a, e->b) : (ia ? e->a : e->b);
      o.eta[e->id] = to;
    }

    std::vector<bool> grab = restrict_to(c_set, covered);
    for (std::size_t v = 0; v < carrier; ++v)
      if (grab[v]) grabbed_union[v] = true;
    block_grab.push_back(std::move(grab));

    BlockLedger bl;
    bl.lo = n_lo;
    bl.hi = n_hi;
    bl.chosen_set = c_set;  // copy first: c_set aliases b0 or b1
    bl.covered = std::move(covered);
    bl.independent0 = std::move(b0);
    bl.chosen = chosen;
    bl.designated_weight = designated;
    o.blocks.push_back(std::move(bl));
    n_lo = n_hi;
  }

  for (const auto& e : o.edges)
    if (o.eta[e.id] != kUnoriented) o.out_edges[o.eta[e.id]].push_back(e.id);
  return o;
}

inline std::vector<bool> grab_union(const Orientation& o, std::size_t carrier,
                                    std::size_t from, std::size_t to) {
  std::vector<bool> u(carrier, false);
  for (std::size_t n = from; n < to && n < o.blocks.size(); ++n)
    for (std::size_t v = 0; v < carrier; ++v)
      if (o.blocks[n].chosen_set[v] && o.blocks[n].covered[v]) u[v] = true;
  return u;
}

}  // namespace detail

/// m_k: the k-th element of the p-fiber of 0 (0, 2, 5, 9, 14, 20, ...).
inline std::uint64_t grab_fiber_index(std::uint64_t k) { return k * (k + 3) / 2; }

/// Edge-grabbing on a finite weighted carrier: greedy proper edge coloring of
/// T rounds of enumerated edges, coverage blocks by the doubling rule, greedy
/// independent halves, and per-block grabs of at least half the remaining
/// mass. Reports mu(E_{m_k}) against the bound 1 - 2^{-k}(k+1) for k up to
/// k_report, all in exact rationals.
inline std::pair<Orientation, GrabReport> edge_grab(const LazyGraph& lg,
                                                    const WeightedCarrier& wc,
                                                    std::uint64_t rounds,
                                                    std::uint64_t k_report) {
  wc.validate();
  if (wc.size() != lg.carrier_size())
    throw input_error("edge grab: carrier/weight size mismatch");
  detail::GrabCore core(lg, rounds);
  std::size_t blocks = static_cast<std::size_t>(grab_fiber_index(k_report));
  Orientation o = detail::grab_orient(core, wc, {}, blocks);

  GrabReport rep;
  for (std::uint64_t k = 0; k <= k_report; ++k) {
    GrabEntry e;
    e.k = k;
    e.m_k = grab_fiber_index(k);
    e.measure = mass(wc.weight, detail::grab_union(o, wc.size(), 0,
                                                   static_cast<std::size_t>(e.m_k)));
    e.bound = 1 - Rational(boost::multiprecision::cpp_int(k + 1),
                           boost::multiprecision::cpp_int(1) << k);
    e.holds = e.measure >= e.bound;
    rep.entries.push_back(std::move(e));
  }
  return {std::move(o), std::move(rep)};
}

struct EdgeDomaticResult {
  bool ok = false;
  std::vector<std::uint64_t> edges;  // color i -> incident edge id (its rank-i out-edge)
  Rational failing_weight;           // weight of {v : fewer than k out-edges} when !ok
};

/// The fiber-rank trick applied to eta: x's out-oriented edges, ranked in
/// stage order, give edge colors 0,1,2,...; a vertex with >= k out-edges is
/// incident to every color below k.
inline EdgeDomaticResult edge_domatic_from_orientation(const Orientation& o,
                                                       const WeightedCarrier& wc,
                                                       std::uint64_t k,
                                                       std::uint64_t x) {
  if (x >= o.out_edges.size()) throw input_error("edge domatic: vertex out of range");
  EdgeDomaticResult r;
  if (o.out_edges[x].size() >= k) {
    r.ok = true;
    r.edges.assign(o.out_edges[x].begin(), o.out_edges[x].begin() + k);
    r.failing_weight = 0;
    return r;
  }
  std::vector<bool> failing(o.out_edges.size(), false);
  for (std::size_t v = 0; v < o.out_edges.size(); ++v)
    failing[v] = o.out_edges[v].size() < k;
  r.failing_weight = mass(wc.weight, failing);
  return r;
}

struct MultiWeightEntry {
  std::size_t weight_index = 0;
  Rational measure;  // w_i of the union of grabs from block i on
  bool covered = false;
};

struct MultiWeightReport {
  std::vector<MultiWeightEntry> entries;
};

/// The finite analog of the category refinement: auxiliary weights stand in
/// for basic open sets; block m designated to weight rank-of-m-in-its-p-fiber
/// (capped at the list length) must keep that weight positive on its grab.
/// With a single auxiliary weight equal to the carrier measure this
/// coincides with edge_grab whenever the half-mass choice is itself positive
/// on the window. Declared an analog, not the theorem, in all output.
inline std::pair<Orientation, MultiWeightReport> edge_grab_multiweight(
    const LazyGraph& lg, const WeightedCarrier& wc, std::uint64_t rounds,
    std::size_t blocks, const Rational& tolerance = Rational(0)) {
  wc.validate();
  if (wc.size() != lg.carrier_size())
    throw input_error("edge grab: carrier/weight size mismatch");
  if (wc.aux.empty())
    throw input_error("edge grab multiweight: no auxiliary weights supplied");
  detail::GrabCore core(lg, rounds);
  Orientation o = detail::grab_orient(core, wc, wc.aux, blocks);

  MultiWeightReport rep;
  for (std::size_t j = 0; j < wc.aux.size(); ++j) {
    MultiWeightEntry e;
    e.weight_index = j;
    e.measure = mass(wc.aux[j], detail::grab_union(o, wc.size(), j, blocks));
    e.covered = e.measure >= 1 - tolerance;
    rep.entries.push_back(std::move(e));
  }
  return {std::move(o), std::move(rep)};
}

/// No two materialized edges sharing a vertex have the same color.
inline bool verify_proper_edge_coloring(const Orientation& o, std::size_t carrier) {
  std::vector<std::set<std::uint64_t>> at(carrier);
  for (const auto& e : o.edges)
    for (std::uint64_t v : {e.a, e.b})
      if (!at[v].insert(e.color).second) return false;
  return true;
}

}  // namespace domatic
