#pragma once

#include <cstdint>

#include "domatic/graph.hpp"

namespace domatic {

inline bool is_power_of_two(std::uint32_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Q_n: 2^n vertices indexed by bit-vectors, N(x) = {x ^ (1<<i) : i < n}.
inline Graph hypercube_graph(std::uint32_t n) {
  if (n < 1 || n > 20) throw input_error("hypercube: dimension out of range [1,20]");
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::vector<Vertex>> out(size);
  for (std::size_t x = 0; x < size; ++x) {
    out[x].reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
      out[x].push_back(static_cast<Vertex>(x ^ (std::size_t{1} << i)));
  }
  return Graph(size, std::move(out));
}

/// For n = 2^k: colors are the k-dimensional binary vector space, and
/// c(x) = XOR of the binary expansions of the set bit positions of x.
/// The basis images enumerate all 2^k colors, so every neighborhood is
/// rainbow (each color exactly once).
inline Coloring power_of_two_domatic(std::uint32_t n) {
  if (!is_power_of_two(n)) throw input_error("power_of_two_domatic: n is not a power of two");
  if (n > 20) throw input_error("power_of_two_domatic: dimension out of range");
  const std::size_t size = std::size_t{1} << n;
  Coloring c;
  c.color_bound = n;
  c.assignment.resize(size);
  for (std::size_t x = 0; x < size; ++x) {
    Color acc = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (x & (std::size_t{1} << i)) acc ^= i;
    c.assignment[x] = acc;
  }
  return c;
}

/// Counting refutation: each vertex covers exactly n neighborhoods, so a
/// dominating set of Q_n has size >= ceil(2^n / n); n disjoint ones need
/// n * ceil(2^n / n) <= 2^n, which fails exactly when n does not divide 2^n.
struct CountingCertificate {
  std::uint32_t n = 0;
  std::uint64_t per_class_lower_bound = 0;  // ceil(2^n / n)
  std::uint64_t total = 0;                  // n * per_class_lower_bound
  std::uint64_t vertex_budget = 0;          // 2^n
  bool applicable = false;                  // total > vertex_budget
};

inline CountingCertificate nonexistence_certificate(std::uint32_t n) {
  if (n < 1 || n > 30) throw input_error("nonexistence_certificate: n out of range [1,30]");
  CountingCertificate cert;
  cert.n = n;
  cert.vertex_budget = std::uint64_t{1} << n;
  cert.per_class_lower_bound = (cert.vertex_budget + n - 1) / n;
  cert.total = std::uint64_t{n} * cert.per_class_lower_bound;
  cert.applicable = cert.total > cert.vertex_budget;
  return cert;
}

/// Every neighborhood sees each color < n exactly once.
inline bool verify_rainbow(const Graph& g, const Coloring& c, Color n) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::vector<std::uint8_t> count(n, 0);
    for (Vertex w : g.neighbors(v)) {
      Color cw = c.assignment[w];
      if (cw == kUncolored || cw >= n) return false;
      if (++count[cw] > 1) return false;
    }
    for (Color i = 0; i < n; ++i)
      if (count[i] != 1) return false;
  }
  return true;
}

}  // namespace domatic
