#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domatic/errors.hpp"

namespace domatic {

using Vertex = std::uint32_t;

/// Finite directed graph with out-neighborhood semantics. Self-loops are
/// allowed, duplicate entries within one out-list are not. Undirected graphs
/// are encoded as symmetric digraphs.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<std::vector<Vertex>> out)
      : out_(std::move(out)) {
    if (out_.size() != vertex_count)
      throw input_error("graph: out-list count does not match vertex count");
    for (std::size_t v = 0; v < out_.size(); ++v) {
      std::vector<Vertex> seen = out_[v];
      std::sort(seen.begin(), seen.end());
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] >= vertex_count)
          throw input_error("graph: neighbor id out of range at vertex " +
                            std::to_string(v));
        if (i > 0 && seen[i] == seen[i - 1])
          throw input_error("graph: duplicate neighbor at vertex " +
                            std::to_string(v));
      }
    }
  }

  std::size_t vertex_count() const { return out_.size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return out_[v]; }

  std::size_t max_out_degree() const {
    std::size_t d = 0;
    for (const auto& ns : out_) d = std::max(d, ns.size());
    return d;
  }
  std::size_t min_out_degree() const {
    std::size_t d = out_.empty() ? 0 : out_[0].size();
    for (const auto& ns : out_) d = std::min(d, ns.size());
    return d;
  }

  std::vector<std::size_t> in_degrees() const {
    std::vector<std::size_t> deg(vertex_count(), 0);
    for (const auto& ns : out_)
      for (Vertex w : ns) ++deg[w];
    return deg;
  }

 private:
  std::vector<std::vector<Vertex>> out_;
};

using Color = std::uint32_t;
constexpr Color kUncolored = ~Color{0};

/// Partial coloring. Unassigned vertices never contribute colors.
struct Coloring {
  std::vector<Color> assignment;               // kUncolored = unassigned
  std::optional<Color> color_bound;            // nullopt = unbounded

  bool assigned(Vertex v) const { return assignment[v] != kUncolored; }

  void check(std::size_t vertex_count) const {
    if (assignment.size() != vertex_count)
      throw input_error("coloring: size does not match vertex count");
    if (color_bound)
      for (Color c : assignment)
        if (c != kUncolored && c >= *color_bound)
          throw input_error("coloring: assigned color exceeds bound");
  }
};

struct DomaticReport {
  // missing[v] lists the colors < k absent from f[N(v)]; empty = domatic at v.
  std::vector<std::vector<Color>> missing;
  bool all_domatic = true;
  std::optional<Vertex> first_counterexample;
};

/// Checks f[N(x)] >= {0,...,k-1} at every vertex.
inline DomaticReport verify_domatic(const Graph& g, const Coloring& c, Color k) {
  c.check(g.vertex_count());
  DomaticReport rep;
  rep.missing.resize(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::vector<bool> seen(k, false);
    for (Vertex w : g.neighbors(v)) {
      Color cw = c.assignment[w];
      if (cw != kUncolored && cw < k) seen[cw] = true;
    }
    for (Color i = 0; i < k; ++i)
      if (!seen[i]) rep.missing[v].push_back(i);
    if (!rep.missing[v].empty() && rep.all_domatic) {
      rep.all_domatic = false;
      rep.first_counterexample = v;
    }
  }
  return rep;
}

inline bool is_domatic(const Graph& g, const Coloring& c, Color k) {
  return verify_domatic(g, c, k).all_domatic;
}

namespace detail {

// Backtracking feasibility check: does g admit a k-domatic partial coloring?
// Vertices are colored in ascending out-degree order (ties by id); each takes
// a color in {0..k-1} or stays unassigned. Prunes a branch as soon as some
// fully-decided neighborhood misses a color.
class DomaticSearch {
 public:
  DomaticSearch(const Graph& g, Color k, std::uint64_t budget)
      : g_(g), k_(k), budget_(budget) {
    const std::size_t n = g.vertex_count();
    order_.resize(n);
    for (Vertex v = 0; v < n; ++v) order_[v] = v;
    std::sort(order_.begin(), order_.end(), [&](Vertex a, Vertex b) {
      auto da = g.neighbors(a).size(), db = g.neighbors(b).size();
      return da != db ? da < db : a < b;
    });
    position_.resize(n);
    for (std::size_t i = 0; i < n; ++i) position_[order_[i]] = i;
    // in_of[v]: vertices whose neighborhood contains v.
    in_of_.resize(n);
    for (Vertex v = 0; v < n; ++v)
      for (Vertex w : g.neighbors(v)) in_of_[w].push_back(v);
    seen_.assign(n, std::vector<std::uint16_t>(k, 0));
    undecided_.resize(n);
    for (Vertex v = 0; v < n; ++v) undecided_[v] = g.neighbors(v).size();
    assignment_.assign(n, kUncolored);
  }

  std::optional<Coloring> run() {
    if (found(0)) {
      Coloring c;
      c.assignment = assignment_;
      c.color_bound = k_;
      return c;
    }
    return std::nullopt;
  }

  std::uint64_t expansions() const { return expansions_; }

 private:
  bool feasible_at(Vertex x) const {
    // Colors still missing from N(x) must fit in the undecided neighbors.
    std::size_t miss = 0;
    for (Color i = 0; i < k_; ++i)
      if (seen_[x][i] == 0) ++miss;
    return miss <= undecided_[x];
  }

  bool place(std::size_t idx, Color c) {
    Vertex v = order_[idx];
    assignment_[v] = c;
    for (Vertex x : in_of_[v]) {
      --undecided_[x];
      if (c != kUncolored) ++seen_[x][c];
      if (!feasible_at(x)) {
        unplace_partial(v, c, x);
        return false;
      }
    }
    return true;
  }

  void unplace_partial(Vertex v, Color c, Vertex stop) {
    for (Vertex x : in_of_[v]) {
      ++undecided_[x];
      if (c != kUncolored) --seen_[x][c];
      if (x == stop) break;
    }
    assignment_[v] = kUncolored;
  }

  void unplace(std::size_t idx, Color c) {
    Vertex v = order_[idx];
    for (Vertex x : in_of_[v]) {
      ++undecided_[x];
      if (c != kUncolored) --seen_[x][c];
    }
    assignment_[v] = kUncolored;
  }

  bool found(std::size_t idx) {
    if (++expansions_ > budget_)
      throw budget_error("domatic search: node expansion budget exceeded");
    if (idx == order_.size()) return true;
    for (Color c = 0; c <= k_; ++c) {
      Color col = (c == k_) ? kUncolored : c;
      if (!place(idx, col)) continue;
      if (found(idx + 1)) return true;
      unplace(idx, col);
    }
    return false;
  }

  const Graph& g_;
  Color k_;
  std::uint64_t budget_;
  std::uint64_t expansions_ = 0;
  std::vector<Vertex> order_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<Vertex>> in_of_;
  std::vector<std::vector<std::uint16_t>> seen_;
  std::vector<std::size_t> undecided_;
  std::vector<Color> assignment_;
};

}  // namespace detail

constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;

struct DomaticNumberResult {
  Color k = 0;
  Coloring witness;
};

/// Maximum k such that a k-domatic partial coloring exists, with a witness.
/// Exhaustive (branch-and-bound) proof that k+1 is infeasible.
inline DomaticNumberResult max_domatic_number(
    const Graph& g, std::uint64_t budget = kDefaultSearchBudget) {
  if (g.vertex_count() == 0)
    throw input_error("max_domatic_number: empty graph");
  DomaticNumberResult res;
  res.witness.assignment.assign(g.vertex_count(), kUncolored);
  res.witness.color_bound = 0;
  // Counting prune: a chosen vertex dominates exactly the vertices whose
  // out-neighborhood contains it, so every dominating set has size
  // >= ceil(V / max-in-degree) and at most floor(V / that bound) disjoint
  // ones fit. Also k <= min out-degree.
  const std::size_t V = g.vertex_count();
  if (g.max_out_degree() == 0) return res;  // some neighborhood is empty at k=1
  auto in = g.in_degrees();
  const std::size_t dmax = *std::max_element(in.begin(), in.end());
  const std::size_t min_dom = (V + dmax - 1) / dmax;
  const std::size_t k_cap = std::min(V / min_dom, g.min_out_degree());
  for (Color k = 1; k <= k_cap; ++k) {
    detail::DomaticSearch search(g, k, budget);
    auto witness = search.run();
    if (!witness) break;
    res.k = k;
    res.witness = *witness;
  }
  return res;
}

struct GreedyResult {
  std::optional<Coloring> coloring;             // set on success
  std::optional<Vertex> failed_at;              // set on failure
};

/// Greedy baseline: sweeps vertices in the given order, assigning missing
/// colors of N(x) to x's unassigned neighbors (smallest color first).
/// Assignments only add colors to neighborhoods, so locally satisfied
/// vertices stay satisfied.
inline GreedyResult greedy_domatic(const Graph& g, Color k,
                                   const std::vector<Vertex>& order) {
  if (k < 1) throw input_error("greedy_domatic: k must be >= 1");
  if (order.size() != g.vertex_count())
    throw input_error("greedy_domatic: order is not a permutation");
  Coloring c;
  c.assignment.assign(g.vertex_count(), kUncolored);
  c.color_bound = k;
  for (Vertex x : order) {
    std::vector<bool> seen(k, false);
    std::vector<Vertex> free;
    for (Vertex w : g.neighbors(x)) {
      if (c.assigned(w)) {
        if (c.assignment[w] < k) seen[c.assignment[w]] = true;
      } else {
        free.push_back(w);
      }
    }
    std::size_t next_free = 0;
    for (Color i = 0; i < k; ++i) {
      if (seen[i]) continue;
      if (next_free == free.size()) return {std::nullopt, x};
      c.assignment[free[next_free++]] = i;
    }
  }
  return {c, std::nullopt};
}

}  // namespace domatic
