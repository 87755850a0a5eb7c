#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "domatic/finite_domatic.hpp"
#include "domatic/rng.hpp"

using namespace domatic;

namespace {

using boost::multiprecision::cpp_int;

// Union of `deg` random fixed-point-free permutations with distinct images at
// every vertex: out-degree = in-degree = deg.
Graph random_regular_digraph(SplitMix64& rng, std::size_t n, std::size_t deg) {
  std::vector<std::vector<Vertex>> out(n);
  for (std::size_t d = 0; d < deg; ++d) {
    for (;;) {
      std::vector<Vertex> perm(n);
      for (Vertex v = 0; v < n; ++v) perm[v] = v;
      for (std::size_t i = 0; i < n; ++i)
        std::swap(perm[i], perm[i + rng.below(n - i)]);
      bool ok = true;
      for (Vertex v = 0; v < n && ok; ++v) {
        if (perm[v] == v) ok = false;
        if (std::find(out[v].begin(), out[v].end(), perm[v]) != out[v].end())
          ok = false;
      }
      if (!ok) continue;
      for (Vertex v = 0; v < n; ++v) out[v].push_back(perm[v]);
      break;
    }
  }
  return Graph(n, std::move(out));
}

Graph circulant(std::size_t n, const std::vector<std::size_t>& shifts) {
  std::vector<std::vector<Vertex>> out(n);
  for (Vertex v = 0; v < n; ++v)
    for (std::size_t s : shifts) out[v].push_back(static_cast<Vertex>((v + s) % n));
  return Graph(n, std::move(out));
}

// Independent oracle for the resampling threshold, in long double (all values
// in the tested range sit far from the e boundary).
std::uint32_t oracle_mt_threshold(std::uint32_t k, std::uint32_t c) {
  const long double e = 2.718281828459045L;
  for (std::uint32_t n = 1;; ++n) {
    long double p = k * std::pow(1.0L - 1.0L / k, (long double)n);
    long double d1 = (long double)c * n * n + 1.0L;
    if (p * d1 * e < 1.0L) return n;
  }
}

// Brute-force path coloring oracle: mirrors the documented rule set
// independently — tier preference over endpoint rules, lexicographically
// least assignment of the uncolored positions, interior vertices need a
// differently-colored interior path-neighbor.
std::optional<std::vector<Color>> oracle_path(const Graph& host,
                                              const std::vector<Vertex>& path,
                                              const Coloring& context, Color k) {
  std::size_t len = path.size(), last = len - 1;
  auto missing = [&](Vertex v) {
    std::vector<bool> miss(k, true);
    for (Vertex w : host.neighbors(v)) {
      Color c = context.assignment[w];
      if (c != kUncolored && c < k) miss[c] = false;
    }
    return miss;
  };
  auto miss0 = missing(path[0]), missL = missing(path[last]);
  bool any0 = std::count(miss0.begin(), miss0.end(), true) > 0;
  bool anyL = std::count(missL.begin(), missL.end(), true) > 0;

  std::vector<std::size_t> free_pos;
  for (std::size_t i = 0; i < len; ++i)
    if (context.assignment[path[i]] == kUncolored) free_pos.push_back(i);

  for (auto [w0, wL] : std::vector<std::pair<bool, bool>>{
           {true, true}, {true, false}, {false, true}, {false, false}}) {
    if ((w0 && !any0) || (wL && !anyL)) continue;
    std::size_t states = 1;
    for (std::size_t i = 0; i < free_pos.size(); ++i) states *= k;
    for (std::size_t code = 0; code < states; ++code) {
      std::vector<Color> pc(len);
      for (std::size_t i = 0; i < len; ++i) pc[i] = context.assignment[path[i]];
      // Decode most-significant-first so ascending code is lexicographic order.
      std::size_t c = code;
      for (std::size_t t = free_pos.size(); t-- > 0;) {
        pc[free_pos[t]] = static_cast<Color>(c % k);
        c /= k;
      }
      bool ok = true;
      for (std::size_t i = 1; i < last && ok; ++i)
        ok = (i > 1 && pc[i - 1] != pc[i]) || (i + 1 < last && pc[i + 1] != pc[i]);
      if (ok && w0) ok = miss0[pc[1]];
      if (ok && wL) ok = missL[pc[last - 1]];
      if (ok) return pc;
    }
  }
  return std::nullopt;
}

// Host graph: the path plus one pendant neighbor per path vertex, so every
// decomposed vertex reaches degree k+1 for k = 2.
struct PathInstance {
  Graph host;
  std::vector<Vertex> path;
};

PathInstance make_path_host(std::size_t edges) {
  std::size_t len = edges + 1;
  std::size_t total = 2 * len;  // path vertices 0..len-1, pendant i+len
  std::vector<std::vector<Vertex>> out(total);
  for (std::size_t i = 0; i + 1 < len; ++i) {
    out[i].push_back(static_cast<Vertex>(i + 1));
    out[i + 1].push_back(static_cast<Vertex>(i));
  }
  for (std::size_t i = 0; i < len; ++i) {
    out[i].push_back(static_cast<Vertex>(len + i));
    out[len + i].push_back(static_cast<Vertex>(i));
  }
  // The endpoints borrow the opposite end's pendant so they reach degree 3.
  std::vector<Vertex> path(len);
  for (std::size_t i = 0; i < len; ++i) path[i] = static_cast<Vertex>(i);
  out[0].push_back(static_cast<Vertex>(2 * len - 1));
  out[2 * len - 1].push_back(0);
  out[len - 1].push_back(static_cast<Vertex>(len));
  out[len].push_back(static_cast<Vertex>(len - 1));
  return {Graph(total, std::move(out)), path};
}

}  // namespace

TEST_CASE("resampling thresholds match the frozen values") {
  REQUIRE(lll_threshold(2, 1, LllFlavor::moser_tardos) == 9);
  REQUIRE(lll_threshold(2, 1, LllFlavor::strong) == 129);
  REQUIRE_THROWS_AS(lll_threshold(1, 1, LllFlavor::strong), input_error);
  REQUIRE_THROWS_AS(lll_threshold(2, 0, LllFlavor::strong), input_error);
}

TEST_CASE("resampling threshold agrees with a floating-point oracle") {
  for (std::uint32_t k = 2; k <= 5; ++k)
    for (std::uint32_t c = 1; c <= 3; ++c) {
      REQUIRE(lll_threshold(k, c, LllFlavor::moser_tardos) ==
              oracle_mt_threshold(k, c));
      // The strong form demands much more than the resampling form.
      REQUIRE(lll_threshold(k, c, LllFlavor::strong) >=
              lll_threshold(k, c, LllFlavor::moser_tardos));
    }
}

TEST_CASE("moser_tardos_domatic colors random regular digraphs") {
  SplitMix64 rng(1234);
  for (int trial = 0; trial < 5; ++trial) {
    Graph g = random_regular_digraph(rng, 512, 9);
    Coloring c = moser_tardos_domatic(g, 2, 1, 1000 + trial);
    REQUIRE(is_domatic(g, c, 2));
    REQUIRE(*c.color_bound == 2);
  }
}

TEST_CASE("moser_tardos_domatic is deterministic per seed") {
  SplitMix64 rng(55);
  Graph g = random_regular_digraph(rng, 512, 9);
  Coloring a = moser_tardos_domatic(g, 2, 1, 7);
  Coloring b = moser_tardos_domatic(g, 2, 1, 7);
  REQUIRE(a.assignment == b.assignment);
}

TEST_CASE("k=1 resampling is the constant coloring") {
  SplitMix64 rng(3);
  Graph g = random_regular_digraph(rng, 64, 3);
  Coloring c = moser_tardos_domatic(g, 1, 1, 9);
  for (Color v : c.assignment) REQUIRE(v == 0);
  REQUIRE(is_domatic(g, c, 1));
}

TEST_CASE("resampling validates its regularity preconditions") {
  Graph irregular(3, {{1, 2}, {0}, {0, 1}});
  REQUIRE_THROWS_AS(moser_tardos_domatic(irregular, 1, 1, 0), input_error);
  Graph empty_nbrs(2, {{}, {}});
  REQUIRE_THROWS_AS(moser_tardos_domatic(empty_nbrs, 1, 1, 0), input_error);
  // 9-regular is below the k=3 threshold.
  Graph c9 = circulant(64, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  REQUIRE(lll_threshold(3, 1, LllFlavor::moser_tardos) > 9);
  REQUIRE_THROWS_AS(moser_tardos_domatic(c9, 3, 1, 0), input_error);
  // In-degree above c * n.
  Graph skew(4, {{1, 2}, {2, 3}, {3, 0}, {2, 0}});
  auto in = skew.in_degrees();
  REQUIRE(*std::max_element(in.begin(), in.end()) > 2);
  REQUIRE_THROWS_AS(moser_tardos_domatic(skew, 1, 1, 0), input_error);
}

TEST_CASE("simultaneous resampling on the circulant demo") {
  Graph a = circulant(512, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Graph b = circulant(512, {10, 11, 12, 13, 14, 15, 16, 17, 18});
  Coloring c = simultaneous_domatic({a, b}, 2, 1, 2026);
  REQUIRE(is_domatic(a, c, 2));
  REQUIRE(is_domatic(b, c, 2));
  // The shared-coloring dependency structure is wider than either graph's own.
  REQUIRE(union_dependency_degree({a, b}) > union_dependency_degree({a}));
}

TEST_CASE("a single-graph simultaneous run equals moser_tardos_domatic") {
  Graph a = circulant(128, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Coloring c1 = moser_tardos_domatic(a, 2, 1, 77);
  Coloring c2 = simultaneous_domatic({a}, 2, 1, 77);
  REQUIRE(c1.assignment == c2.assignment);
  REQUIRE_THROWS_AS(simultaneous_domatic({}, 2, 1, 0), input_error);
  Graph small = circulant(64, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  REQUIRE_THROWS_AS(simultaneous_domatic({a, small}, 2, 1, 0), input_error);
}

TEST_CASE("approximate sample counts match the frozen derivation") {
  REQUIRE(approx_sample_count(2, Rational(3, 10)) == 5);
  REQUIRE(approx_sample_count(1, Rational(3, 10)) == 1);
  REQUIRE(approx_sample_count(3, Rational(1, 10)) == 12);
  // Minimality: k (1-1/k)^N < eps/3 at N, not at N-1.
  for (std::uint32_t k = 2; k <= 4; ++k) {
    Rational eps(3, 10);
    std::uint64_t n = approx_sample_count(k, eps);
    Rational ratio(k - 1, k);
    Rational at_n(k), at_prev(k);
    for (std::uint64_t i = 0; i < n; ++i) at_n *= ratio;
    for (std::uint64_t i = 0; i + 1 < n; ++i) at_prev *= ratio;
    REQUIRE(at_n < eps / 3);
    REQUIRE_FALSE(at_prev < eps / 3);
  }
}

TEST_CASE("approx_domatic accepts and reports an honest fraction") {
  Graph g = circulant(400, {1, 2, 3, 4, 5, 6, 7});
  auto [col, rep] = approx_domatic(g, 2, Rational(3, 10), 11, 50);
  REQUIRE(rep.accepted);
  REQUIRE(rep.fraction >= Rational(7, 10));
  REQUIRE(rep.sample_size == 5);
  // Recount the fraction independently from the returned coloring.
  std::size_t good = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::set<Color> seen;
    for (std::size_t j = 0; j < 5; ++j) seen.insert(col.assignment[g.neighbors(v)[j]]);
    if (seen.size() == 2) ++good;
  }
  REQUIRE(rep.fraction == Rational(good, g.vertex_count()));
}

TEST_CASE("approx_domatic is deterministic and flags exhaustion") {
  Graph g = circulant(100, {1, 2, 3, 4, 5});
  auto [c1, r1] = approx_domatic(g, 2, Rational(3, 10), 5, 20);
  auto [c2, r2] = approx_domatic(g, 2, Rational(3, 10), 5, 20);
  REQUIRE(c1.assignment == c2.assignment);
  REQUIRE(r1.attempts == r2.attempts);
  // An impossible demand runs out of attempts and says so: both vertices only
  // ever enumerate the other one, so no neighborhood can show two colors.
  auto one_other = [](std::uint64_t v, std::uint64_t) { return 1 - v; };
  std::vector<Rational> half{Rational(1, 2), Rational(1, 2)};
  auto [c3, r3] = approx_domatic(2, one_other, half, 2, Rational(3, 10), 5, 3);
  REQUIRE_FALSE(r3.accepted);
  REQUIRE(r3.attempts == 3);
  REQUIRE(r3.fraction == 0);
  REQUIRE(c3.assignment.size() == 2);  // best-so-far coloring is still returned
  // Too few enumerable neighbors.
  Graph thin = circulant(10, {1, 2});
  REQUIRE_THROWS_AS(approx_domatic(thin, 2, Rational(3, 10), 1, 1), input_error);
}

TEST_CASE("approx acceptance is frequent at the nominal parameters") {
  // Mean failure weight per vertex is 2 * 2^{-5} = 1/16, far below eps = 3/10;
  // across a seed sweep nearly every attempt lands above the 0.7 bar.
  Graph g = circulant(2000, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto [c, rep] = approx_domatic(g, 2, Rational(3, 10), seed, 1);
    (void)c;
    if (rep.accepted) ++accepted;
  }
  REQUIRE(accepted >= 15);
}

TEST_CASE("path coloring equals the brute-force oracle on a bare path") {
  auto inst = make_path_host(7);
  PathDecomposition d;
  d.paths = {inst.path};
  Coloring out = path_coloring(inst.host, d, 2);
  Coloring blank;
  blank.assignment.assign(inst.host.vertex_count(), kUncolored);
  auto expect = oracle_path(inst.host, inst.path, blank, 2);
  REQUIRE(expect.has_value());
  for (std::size_t i = 0; i < inst.path.size(); ++i)
    REQUIRE(out.assignment[inst.path[i]] == (*expect)[i]);
}

TEST_CASE("path coloring matches the oracle on randomized contexts") {
  SplitMix64 rng(424242);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t edges = 6 + rng.below(7);
    auto inst = make_path_host(edges);
    Coloring ctx;
    ctx.assignment.assign(inst.host.vertex_count(), kUncolored);
    // Randomly precolor pendants and a few path vertices.
    for (Vertex v = 0; v < inst.host.vertex_count(); ++v) {
      bool on_path = v < inst.path.size();
      std::uint64_t roll = rng.below(on_path ? 8 : 3);
      if (roll == 0) ctx.assignment[v] = static_cast<Color>(rng.below(2));
    }
    PathDecomposition d;
    d.paths = {inst.path};
    d.context = ctx;
    auto expect = oracle_path(inst.host, inst.path, ctx, 2);
    if (!expect) {
      REQUIRE_THROWS_AS(path_coloring(inst.host, d, 2), input_error);
      continue;
    }
    Coloring out = path_coloring(inst.host, d, 2);
    for (std::size_t i = 0; i < inst.path.size(); ++i)
      REQUIRE(out.assignment[inst.path[i]] == (*expect)[i]);
    // Off-path colors are untouched.
    for (Vertex v = static_cast<Vertex>(inst.path.size());
         v < inst.host.vertex_count(); ++v)
      REQUIRE(out.assignment[v] == ctx.assignment[v]);
  }
}

TEST_CASE("the worked interior-rule pattern comes out as documented") {
  // Path 0..6 with vertices 0, 1, 5, 6 precolored (0, 0, 1, 1): the free
  // middle 2, 3, 4 must come out (1, 0, 0), making the pairs (1,2), (2,3),
  // (4,5) bichromatic.
  auto inst = make_path_host(6);
  Coloring ctx;
  ctx.assignment.assign(inst.host.vertex_count(), kUncolored);
  ctx.assignment[0] = 0;
  ctx.assignment[1] = 0;
  ctx.assignment[5] = 1;
  ctx.assignment[6] = 1;
  PathDecomposition d;
  d.paths = {inst.path};
  d.context = ctx;
  Coloring out = path_coloring(inst.host, d, 2);
  REQUIRE(out.assignment[2] == 1);
  REQUIRE(out.assignment[3] == 0);
  REQUIRE(out.assignment[4] == 0);
  REQUIRE(out.assignment[1] != out.assignment[2]);
  REQUIRE(out.assignment[2] != out.assignment[3]);
  REQUIRE(out.assignment[4] != out.assignment[5]);
}

TEST_CASE("path decompositions are validated") {
  auto inst = make_path_host(7);
  PathDecomposition d;
  d.paths = {inst.path};
  REQUIRE_THROWS_AS(path_coloring(inst.host, d, 1), input_error);  // k < 2
  PathDecomposition short_path;
  short_path.paths = {{0, 1, 2, 3, 4, 5}};  // 5 edges
  REQUIRE_THROWS_AS(path_coloring(inst.host, short_path, 2), input_error);
  PathDecomposition repeated;
  repeated.paths = {inst.path};
  repeated.paths[0][2] = repeated.paths[0][4];
  REQUIRE_THROWS_AS(path_coloring(inst.host, repeated, 2), input_error);
  PathDecomposition skip;
  skip.paths = {inst.path};
  std::swap(skip.paths[0][2], skip.paths[0][4]);  // breaks adjacency
  REQUIRE_THROWS_AS(path_coloring(inst.host, skip, 2), input_error);
  // A self-loop at a decomposed vertex is rejected.
  std::vector<std::vector<Vertex>> out;
  for (Vertex v = 0; v < inst.host.vertex_count(); ++v)
    out.push_back(inst.host.neighbors(v));
  out[3].push_back(3);
  std::size_t vcount = out.size();
  Graph loop_host(vcount, std::move(out));
  PathDecomposition d2;
  d2.paths = {inst.path};
  REQUIRE_THROWS_AS(path_coloring(loop_host, d2, 2), input_error);
}
