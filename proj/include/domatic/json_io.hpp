#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "domatic/dichotomy.hpp"
#include "domatic/finite_domatic.hpp"
#include "domatic/graph.hpp"
#include "domatic/measurable.hpp"
#include "domatic/torus.hpp"

namespace domatic {

using Json = nlohmann::ordered_json;

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline void require_format(const Json& j, const std::string& expected,
                           const std::string& what) {
  if (!j.contains("format") || j["format"] != expected)
    throw input_error(what + ": expected format \"" + expected + "\"");
}

// ---- graphs and colorings ----

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    for (Vertex w : g.neighbors(v)) edges.push_back({v, w});
  return Json{{"format", "graph/1"}, {"vertices", g.vertex_count()}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j) {
  require_format(j, "graph/1", "graph");
  std::size_t n = j.at("vertices").get<std::size_t>();
  std::vector<std::vector<Vertex>> out(n);
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw input_error("graph: malformed edge");
    std::size_t u = e[0].get<std::size_t>(), v = e[1].get<std::size_t>();
    if (u >= n || v >= n) throw input_error("graph: edge endpoint out of range");
    out[u].push_back(static_cast<Vertex>(v));
  }
  return Graph(n, std::move(out));
}

inline Json to_json(const Coloring& c) {
  Json colors = Json::array();
  for (Color v : c.assignment)
    if (v == kUncolored)
      colors.push_back(nullptr);
    else
      colors.push_back(v);
  Json j{{"format", "coloring/1"}, {"colors", colors}};
  if (c.color_bound)
    j["k"] = *c.color_bound;
  else
    j["k"] = nullptr;
  return j;
}

inline Coloring coloring_from_json(const Json& j) {
  require_format(j, "coloring/1", "coloring");
  Coloring c;
  for (const auto& v : j.at("colors"))
    c.assignment.push_back(v.is_null() ? kUncolored : v.get<Color>());
  if (j.contains("k") && !j["k"].is_null()) c.color_bound = j["k"].get<Color>();
  return c;
}

// ---- exact numbers ----

inline std::string to_string_exact(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational(j.get<std::string>());
    } catch (...) {
      throw input_error("malformed rational \"" + j.get<std::string>() + "\"");
    }
  }
  throw input_error("rational must be an integer or a \"p/q\" string");
}

inline std::string to_string_exact(const BigInt& v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---- profinite ----

inline Json to_json(const GroupSpec& g) {
  Json factors = Json::array();
  for (std::size_t i = 0; i < g.listed_factor_count(); ++i) {
    const FactorGroup& f = g.factor(i);
    if (f.cyclic)
      factors.push_back({{"type", "cyclic"}, {"order", f.order}});
    else {
      Json rows = Json::array();
      for (std::uint32_t a = 0; a < f.order; ++a) {
        Json row = Json::array();
        for (std::uint32_t b = 0; b < f.order; ++b) row.push_back(f.mul(a, b));
        rows.push_back(row);
      }
      factors.push_back({{"type", "table"}, {"table", rows}});
    }
  }
  return Json{{"format", "group/1"}, {"factors", factors}, {"repeat", g.repeats()}};
}

inline GroupSpec group_from_json(const Json& j) {
  require_format(j, "group/1", "group");
  std::vector<FactorGroup> factors;
  for (const auto& f : j.at("factors")) {
    std::string type = f.at("type").get<std::string>();
    if (type == "cyclic")
      factors.push_back(FactorGroup::make_cyclic(f.at("order").get<std::uint32_t>()));
    else if (type == "table") {
      std::vector<std::uint32_t> flat;
      for (const auto& row : f.at("table"))
        for (const auto& v : row) flat.push_back(v.get<std::uint32_t>());
      factors.push_back(FactorGroup::make_table(std::move(flat)));
    } else
      throw input_error("group: unknown factor type \"" + type + "\"");
  }
  bool repeat = j.value("repeat", false);
  return GroupSpec(std::move(factors), repeat);
}

inline Json to_json(const Prefix& p) {
  return Json{{"format", "prefix/1"}, {"word", p.word}};
}

inline Prefix prefix_from_json(const Json& j) {
  require_format(j, "prefix/1", "prefix");
  Prefix p;
  p.word = j.at("word").get<std::vector<std::uint32_t>>();
  return p;
}

inline Json to_json(const GroupSpec& g, const ClopenSet& s) {
  Json members = Json::array();
  auto bits = s.bits_at_depth(g, s.depth());
  for (std::size_t r = 0; r < bits.size(); ++r)
    if (bits[r]) members.push_back(r);
  return Json{{"format", "clopen/1"}, {"depth", s.depth()}, {"members", members}};
}

inline ClopenSet clopen_from_json(const GroupSpec& g, const Json& j) {
  require_format(j, "clopen/1", "clopen set");
  std::size_t depth = j.at("depth").get<std::size_t>();
  std::vector<bool> bits(g.quotient_size(depth), false);
  for (const auto& m : j.at("members")) {
    std::size_t r = m.get<std::size_t>();
    if (r >= bits.size()) throw input_error("clopen set: member rank out of range");
    bits[r] = true;
  }
  return ClopenSet(g, depth, std::move(bits));
}

// ---- schemes ----

struct SchemeSet {
  std::vector<std::unique_ptr<CantorScheme>> owned;
  std::vector<const CantorScheme*> views;
};

inline SchemeSet schemes_from_json(const GroupSpec& g, const Json& j) {
  require_format(j, "schemes/1", "schemes");
  SchemeSet out;
  for (const auto& s : j.at("schemes")) {
    std::string type = s.at("type").get<std::string>();
    if (type == "canonical") {
      out.owned.push_back(
          std::make_unique<CanonicalScheme>(g, s.value("flip", false)));
    } else if (type == "explicit") {
      auto ex = std::make_unique<ExplicitScheme>(g);
      for (const auto& node : s.at("nodes"))
        ex->add_node(node.at("node").get<std::string>(),
                     clopen_from_json(g, node.at("cylinder")),
                     prefix_from_json(node.at("point")));
      out.owned.push_back(std::move(ex));
    } else
      throw input_error("schemes: unknown type \"" + type + "\"");
  }
  for (const auto& p : out.owned) out.views.push_back(p.get());
  return out;
}

// ---- open pair ----

inline Json to_json(const GroupSpec& g, const PointFamily& fam,
                    const OpenPairWitness& w) {
  Json sets = Json::array();
  for (const auto& set : fam.points) {
    Json pts = Json::array();
    for (const auto& sp : set)
      pts.push_back({{"node", sp.node}, {"word", project(sp.point, fam.depth).word}});
    sets.push_back(pts);
  }
  Json colors = Json::array();
  for (std::uint8_t c : w.colors) colors.push_back(static_cast<int>(c));
  return Json{{"format", "openpair/1"},
              {"k", fam.k},
              {"n", fam.n},
              {"depth", fam.depth},
              {"points", sets},
              {"colors", colors},
              {"seed", w.seed},
              {"resamples", w.resample_count}};
}

// ---- torus ----

inline std::vector<std::vector<TorusPoint>> torus_samples_from_json(const Json& j,
                                                                    unsigned precision) {
  require_format(j, "torus-samples/1", "torus samples");
  std::vector<std::vector<TorusPoint>> out;
  for (const auto& set : j.at("sets")) {
    std::vector<TorusPoint> pts;
    for (const auto& pt : set) {
      TorusPoint p;
      p.precision = precision;
      for (const auto& c : pt) {
        if (c.is_number_float()) {
          // decimal in [0,1), scaled
          p.coords.push_back(
              TorusPoint::from_double({c.get<double>()}, precision).coords[0]);
        } else if (c.is_string()) {
          p.coords.push_back(BigInt(c.get<std::string>()));
        } else {
          throw input_error("torus samples: coordinate must be float or string");
        }
      }
      p.check();
      pts.push_back(std::move(p));
    }
    out.push_back(std::move(pts));
  }
  return out;
}

inline Json to_json(const TorusPairWitness& w) {
  return Json{{"format", "torus-witness/1"},
              {"b", w.b},
              {"multiplier", w.multiplier},
              {"margin", to_string_exact(w.margin)},
              {"precision", w.precision}};
}

// ---- dichotomy ----

inline Json to_json(const GroupSpec& g, const LevelData& ld, const Json& schemes_json) {
  Json levels = Json::array();
  for (std::size_t n = 1; n < ld.levels.size(); ++n) {
    const Level& lvl = ld.levels[n];
    Json sets = Json::array();
    for (std::size_t si = 0; si < lvl.set_labels.size(); ++si) {
      Json pts = Json::array();
      for (const auto& sp : lvl.family.points[si])
        pts.push_back(
            {{"node", sp.node}, {"word", project(sp.point, lvl.family.depth).word}});
      sets.push_back({{"parent", lvl.set_labels[si].first},
                      {"scheme", lvl.set_labels[si].second},
                      {"points", pts}});
    }
    Json colors = Json::array();
    for (std::uint8_t c : lvl.witness.colors) colors.push_back(static_cast<int>(c));
    levels.push_back({{"depth", lvl.family.depth},
                      {"n", lvl.family.n},
                      {"sets", sets},
                      {"colors", colors},
                      {"seed", lvl.witness.seed},
                      {"resamples", lvl.witness.resample_count}});
  }
  return Json{{"format", "dichotomy/1"},
              {"group", to_json(g)},
              {"schemes", schemes_json},
              {"levels", levels}};
}

struct LoadedBuild {
  GroupSpec group;
  SchemeSet schemes;
  LevelData data;
};

inline LoadedBuild build_from_json(const Json& j) {
  require_format(j, "dichotomy/1", "dichotomy build");
  LoadedBuild out;
  out.group = group_from_json(j.at("group"));
  out.schemes = schemes_from_json(out.group, j.at("schemes"));
  out.data.group = out.group;
  out.data.schemes = out.schemes.views;
  Level root;
  root.records.push_back(NodeRecord{"", "", 0, Prefix{}});
  out.data.levels.push_back(std::move(root));
  for (const auto& lj : j.at("levels")) {
    Level lvl;
    PointFamily fam;
    fam.depth = lj.at("depth").get<std::size_t>();
    fam.n = lj.at("n").get<std::uint32_t>();
    for (const auto& sj : lj.at("sets")) {
      lvl.set_labels.emplace_back(sj.at("parent").get<std::string>(),
                                  sj.at("scheme").get<std::uint32_t>());
      std::vector<SelectedPoint> pts;
      for (const auto& pj : sj.at("points")) {
        SelectedPoint sp;
        sp.node = pj.at("node").get<std::string>();
        sp.point.word = pj.at("word").get<std::vector<std::uint32_t>>();
        sp.set_index = fam.points.size();
        pts.push_back(std::move(sp));
      }
      fam.points.push_back(std::move(pts));
    }
    fam.k = static_cast<std::uint32_t>(fam.points.size());
    OpenPairWitness w;
    w.depth = fam.depth;
    w.seed = lj.at("seed").get<std::uint64_t>();
    w.resample_count = lj.at("resamples").get<std::uint64_t>();
    for (const auto& c : lj.at("colors"))
      w.colors.push_back(static_cast<std::uint8_t>(c.get<int>()));
    if (w.colors.size() != out.group.quotient_size(fam.depth))
      throw input_error("dichotomy build: color table length mismatch");
    std::vector<bool> b0(w.colors.size()), b1(w.colors.size());
    for (std::size_t i = 0; i < w.colors.size(); ++i) (w.colors[i] ? b1 : b0)[i] = true;
    w.a0 = ClopenSet(out.group, fam.depth, std::move(b0));
    w.a1 = ClopenSet(out.group, fam.depth, std::move(b1));
    for (std::size_t si = 0; si < fam.points.size(); ++si)
      for (const auto& sp : fam.points[si])
        lvl.records.push_back(NodeRecord{sp.node, lvl.set_labels[si].first,
                                         lvl.set_labels[si].second, sp.point});
    lvl.family = std::move(fam);
    lvl.witness = std::move(w);
    out.data.levels.push_back(std::move(lvl));
  }
  return out;
}

// ---- piecewise colorings and convergent families ----

inline PiecewiseColoring piecewise_from_json(const GroupSpec& g, const Json& j) {
  require_format(j, "piecewise/1", "piecewise coloring");
  PiecewiseColoring f;
  for (const auto& pj : j.at("pieces"))
    f.pieces.push_back(PiecewiseColoring::Piece{clopen_from_json(g, pj.at("set")),
                                                pj.at("color").get<Color>()});
  return f;
}

inline ConvergentFamily family_from_json(const GroupSpec& g, const Json& j) {
  require_format(j, "family/1", "convergent family");
  ConvergentFamily fam;
  for (const auto& sj : j.at("sequences")) {
    std::string kind = sj.at("kind").get<std::string>();
    ConvergentSequence seq;
    if (kind == "basis") {
      // element k = identity except digit at coordinate k; limit = identity
      auto digit = sj.value("digit", 1u);
      seq.limit = [](std::size_t depth) { return identity_prefix(depth); };
      seq.element = [digit](std::size_t k, std::size_t depth) {
        Prefix p = identity_prefix(depth);
        if (k < depth) p.word[k] = digit;
        return p;
      };
      seq.modulus = [](std::size_t depth) { return depth; };
    } else if (kind == "eventually_constant") {
      auto limit_word = sj.at("limit").get<std::vector<std::uint32_t>>();
      std::uint32_t pad = sj.value("pad", 0u);
      std::vector<std::vector<std::uint32_t>> items;
      for (const auto& it : sj.at("items"))
        items.push_back(it.get<std::vector<std::uint32_t>>());
      auto extend = [pad](std::vector<std::uint32_t> w, std::size_t depth) {
        w.resize(std::max(w.size(), depth), pad);
        return Prefix{std::move(w)};
      };
      seq.limit = [limit_word, extend](std::size_t depth) {
        return extend(limit_word, depth);
      };
      seq.element = [items, limit_word, extend](std::size_t k, std::size_t depth) {
        return extend(k < items.size() ? items[k] : limit_word, depth);
      };
      seq.modulus = [items, limit_word, extend](std::size_t depth) {
        std::size_t m = items.size();
        while (m > 0 &&
               project(extend(items[m - 1], depth), depth) ==
                   project(extend(limit_word, depth), depth))
          --m;
        return m;
      };
    } else
      throw input_error("family: unknown sequence kind \"" + kind + "\"");
    (void)g;
    fam.sequences.push_back(std::move(seq));
  }
  return fam;
}

// ---- lazy graphs and carriers ----

struct LoadedLazyGraph {
  LazyGraph graph;
  WeightedCarrier carrier;
};

inline LoadedLazyGraph lazy_graph_from_json(const Json& j) {
  require_format(j, "lazygraph/1", "lazy graph");
  std::size_t carrier = j.at("carrier").get<std::size_t>();
  const Json& st = j.at("stream");
  std::string type = st.at("type").get<std::string>();
  LazyGraph::Stream stream;
  if (type == "round_robin") {
    if (carrier < 2) throw input_error("lazy graph: round robin needs >= 2 vertices");
    stream = [carrier](std::uint64_t v, std::uint64_t i) {
      return (v + 1 + i % (carrier - 1)) % carrier;
    };
  } else if (type == "arithmetic") {
    std::uint64_t a = st.at("a").get<std::uint64_t>();
    std::uint64_t b = st.at("b").get<std::uint64_t>();
    stream = [carrier, a, b](std::uint64_t v, std::uint64_t i) {
      return (v + a + b * i) % carrier;
    };
  } else if (type == "prefix_periodic") {
    std::vector<std::vector<std::uint64_t>> prefix, period;
    for (const auto& p : st.at("prefix"))
      prefix.push_back(p.get<std::vector<std::uint64_t>>());
    for (const auto& p : st.at("period"))
      period.push_back(p.get<std::vector<std::uint64_t>>());
    if (prefix.size() != carrier || period.size() != carrier)
      throw input_error("lazy graph: prefix/period tables must cover the carrier");
    for (const auto& p : period)
      if (p.empty()) throw input_error("lazy graph: empty period block");
    stream = [prefix, period](std::uint64_t v, std::uint64_t i) {
      if (i < prefix[v].size()) return prefix[v][i];
      return period[v][(i - prefix[v].size()) % period[v].size()];
    };
  } else
    throw input_error("lazy graph: unknown stream type \"" + type + "\"");

  WeightedCarrier wc;
  if (j.contains("weights")) {
    for (const auto& w : j.at("weights")) wc.weight.push_back(rational_from_json(w));
  } else {
    wc.weight.assign(carrier, Rational(1, carrier));
  }
  if (j.contains("aux"))
    for (const auto& vec : j.at("aux")) {
      std::vector<Rational> w;
      for (const auto& r : vec) w.push_back(rational_from_json(r));
      wc.aux.push_back(std::move(w));
    }
  wc.validate();
  if (wc.weight.size() != carrier)
    throw input_error("lazy graph: weight vector length mismatch");
  return LoadedLazyGraph{LazyGraph(carrier, std::move(stream)), std::move(wc)};
}

// ---- path decompositions ----

inline PathDecomposition paths_from_json(const Json& j) {
  require_format(j, "paths/1", "path decomposition");
  PathDecomposition d;
  for (const auto& p : j.at("paths"))
    d.paths.push_back(p.get<std::vector<Vertex>>());
  if (j.contains("context")) {
    for (const auto& c : j.at("context"))
      d.context.assignment.push_back(c.is_null() ? kUncolored : c.get<Color>());
  }
  return d;
}

}  // namespace domatic
