// domatic: build and check domatic partitions of finite, lazily enumerated,
// and profinite-group Schreier graphs, with replayable JSON certificates.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "domatic/hypercube.hpp"
#include "domatic/json_io.hpp"
#include "domatic/manifest.hpp"

namespace {

using namespace domatic;

int g_exit = 0;

void emit(const Json& artifact, const std::optional<std::string>& out_path) {
  std::string text = artifact.dump(2) + "\n";
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw input_error("cannot write " + *out_path);
    out << text;
  } else {
    std::cout << text;
  }
}

Json coloring_report(const Graph& g, const Coloring& c, Color k) {
  DomaticReport rep = verify_domatic(g, c, k);
  Json j{{"format", "verify-report/1"}, {"k", k}, {"domatic", rep.all_domatic}};
  if (!rep.all_domatic) {
    Vertex bad = *rep.first_counterexample;
    j["counterexample"] = bad;
    Json missing = Json::array();
    for (Color m : rep.missing[bad]) missing.push_back(m);
    j["missing_colors"] = missing;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace domatic;
  CLI::App app{"domatic partitions: finite solvers, profinite constructions, "
               "measurable-combinatorics certificates"};
  app.require_subcommand(1);
  std::vector<std::string> argv_copy(argv, argv + argc);

  std::optional<std::string> out_path;
  app.add_option("--out", out_path, "write the artifact here instead of stdout");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "maximum domatic number of a finite graph");
  std::string solve_graph;
  std::uint64_t solve_budget = kDefaultSearchBudget;
  solve->add_option("--graph", solve_graph, "graph JSON")->required();
  solve->add_option("--budget", solve_budget, "search node budget");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "check a coloring for k-domaticity");
  std::string verify_graph, verify_coloring;
  Color verify_k = 1;
  verify->add_option("--graph", verify_graph)->required();
  verify->add_option("--coloring", verify_coloring)->required();
  verify->add_option("--k", verify_k)->required();

  // ---- hypercube ----
  auto* hyper = app.add_subcommand("hypercube", "power-of-two colorings and refutations");
  std::uint32_t hyper_n = 0;
  bool hyper_refute = false;
  hyper->add_option("--n", hyper_n)->required();
  hyper->add_flag("--refute", hyper_refute, "emit the counting certificate instead");

  // ---- openpair ----
  auto* openpair = app.add_subcommand("openpair", "clopen pair meeting every translate");
  std::string op_group, op_schemes;
  std::uint32_t op_k = 0, op_n = 0;
  std::uint64_t op_seed = 0;
  openpair->add_option("--group", op_group)->required();
  openpair->add_option("--schemes", op_schemes)->required();
  openpair->add_option("--k", op_k, "number of perfect sets")->required();
  openpair->add_option("--n", op_n, "points per set (default: derived)");
  openpair->add_option("--seed", op_seed)->required();

  // ---- torus ----
  auto* torus = app.add_subcommand("torus", "good vector and acute multiplier search");
  std::string torus_samples;
  unsigned torus_precision = 96;
  std::uint64_t torus_nmax = 1000;
  torus->add_option("--samples", torus_samples)->required();
  torus->add_option("--precision", torus_precision);
  torus->add_option("--nmax", torus_nmax);

  // ---- dichotomy ----
  auto* dich = app.add_subcommand("dichotomy", "level construction / certify / vision");
  dich->require_subcommand(1);
  auto* dbuild = dich->add_subcommand("build");
  std::string db_group, db_schemes;
  std::size_t db_levels = 1;
  std::uint64_t db_seed = 0;
  dbuild->add_option("--group", db_group)->required();
  dbuild->add_option("--schemes", db_schemes)->required();
  dbuild->add_option("--levels", db_levels)->required();
  dbuild->add_option("--seed", db_seed)->required();
  auto* dcert = dich->add_subcommand("certify");
  std::string dc_build, dc_x;
  std::size_t dc_n = 1;
  std::uint32_t dc_scheme = 0;
  dcert->add_option("--build", dc_build)->required();
  dcert->add_option("--x", dc_x)->required();
  dcert->add_option("--n", dc_n)->required();
  dcert->add_option("--scheme", dc_scheme);
  auto* dvis = dich->add_subcommand("vision");
  std::string dv_coloring, dv_family, dv_x, dv_group;
  dvis->add_option("--group", dv_group)->required();
  dvis->add_option("--coloring", dv_coloring)->required();
  dvis->add_option("--family", dv_family)->required();
  dvis->add_option("--x", dv_x)->required();

  // ---- edgegrab ----
  auto* grab = app.add_subcommand("edgegrab", "orientation with measure ledger");
  std::string grab_graph;
  std::uint64_t grab_stages = 64, grab_report = 3;
  bool grab_multi = false;
  std::size_t grab_blocks = 16;
  std::string grab_tol = "0";
  grab->add_option("--graph", grab_graph)->required();
  grab->add_option("--stages", grab_stages)->required();
  grab->add_option("--report", grab_report);
  grab->add_flag("--multiweight", grab_multi, "use the auxiliary-weight variant");
  grab->add_option("--blocks", grab_blocks, "blocks to build (multiweight)");
  grab->add_option("--tol", grab_tol, "coverage tolerance (multiweight)");

  // ---- approx ----
  auto* approx = app.add_subcommand("approx", "approximately domatic random coloring");
  std::string ap_graph, ap_eps;
  std::uint32_t ap_k = 2;
  std::uint64_t ap_seed = 0, ap_attempts = 100;
  approx->add_option("--graph", ap_graph)->required();
  approx->add_option("--k", ap_k)->required();
  approx->add_option("--eps", ap_eps)->required();
  approx->add_option("--seed", ap_seed)->required();
  approx->add_option("--attempts", ap_attempts);

  // ---- mt ----
  auto* mt = app.add_subcommand("mt", "resampled k-domatic coloring");
  std::string mt_graph;
  std::vector<std::string> mt_extra;
  Color mt_k = 2;
  std::uint32_t mt_c = 1;
  std::uint64_t mt_seed = 0;
  mt->add_option("--graph", mt_graph)->required();
  mt->add_option("--k", mt_k)->required();
  mt->add_option("--c", mt_c)->required();
  mt->add_option("--seed", mt_seed)->required();
  mt->add_option("--simultaneous", mt_extra, "extra graphs sharing the vertex set");

  // ---- paths ----
  auto* paths = app.add_subcommand("paths", "per-path coloring procedure");
  std::string pa_graph, pa_decomp;
  Color pa_k = 2;
  paths->add_option("--graph", pa_graph)->required();
  paths->add_option("--decomp", pa_decomp)->required();
  paths->add_option("--k", pa_k)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  auto t0 = std::chrono::steady_clock::now();
  ManifestBuilder manifest(argv_copy);
  try {
    if (*solve) {
      manifest.add_input("graph", solve_graph);
      Graph g = graph_from_json(load_json(solve_graph));
      auto [k, witness] = max_domatic_number(g, solve_budget);
      Json j{{"format", "solve-report/1"}, {"k", k}, {"witness", to_json(witness)}};
      emit(manifest.seal(j), out_path);
    } else if (*verify) {
      manifest.add_input("graph", verify_graph);
      manifest.add_input("coloring", verify_coloring);
      Graph g = graph_from_json(load_json(verify_graph));
      Coloring c = coloring_from_json(load_json(verify_coloring));
      if (c.assignment.size() != g.vertex_count())
        throw input_error("verify: coloring length does not match the graph");
      Json j = coloring_report(g, c, verify_k);
      emit(manifest.seal(j), out_path);
      if (!j["domatic"].get<bool>()) g_exit = 2;
    } else if (*hyper) {
      if (hyper_refute) {
        CountingCertificate cert = nonexistence_certificate(hyper_n);
        Json j{{"format", "hypercube-refutation/1"},
               {"n", cert.n},
               {"per_class_lower_bound", cert.per_class_lower_bound},
               {"total", cert.total},
               {"vertex_budget", cert.vertex_budget},
               {"applicable", cert.applicable}};
        emit(manifest.seal(j), out_path);
      } else {
        Coloring c = power_of_two_domatic(hyper_n);
        Json j{{"format", "hypercube-coloring/1"},
               {"n", hyper_n},
               {"coloring", to_json(c)}};
        emit(manifest.seal(j), out_path);
      }
    } else if (*openpair) {
      manifest.add_input("group", op_group);
      manifest.add_input("schemes", op_schemes);
      manifest.set_seed(op_seed);
      GroupSpec g = group_from_json(load_json(op_group));
      SchemeSet schemes = schemes_from_json(g, load_json(op_schemes));
      if (schemes.views.size() != op_k)
        throw input_error("openpair: --k must match the number of schemes");
      std::vector<PerfectSetDesc> sets;
      for (const CantorScheme* s : schemes.views) sets.push_back({s, ""});
      std::uint32_t n = op_n ? op_n : choose_parameters(op_k);
      PointFamily fam = select_points(g, sets, n);
      OpenPairWitness w = moser_tardos_two_coloring(g, fam, op_seed);
      OpenPairCheck chk = verify_open_pair(g, fam, w);
      Json j = to_json(g, fam, w);
      j["verified"] = chk.ok;
      emit(manifest.seal(j), out_path);
      if (!chk.ok) g_exit = 2;
    } else if (*torus) {
      manifest.add_input("samples", torus_samples);
      auto samples = torus_samples_from_json(load_json(torus_samples), torus_precision);
      TorusPairWitness w = torus_open_pair(samples, torus_precision, torus_nmax);
      emit(manifest.seal(to_json(w)), out_path);
    } else if (*dbuild) {
      manifest.add_input("group", db_group);
      manifest.add_input("schemes", db_schemes);
      manifest.set_seed(db_seed);
      GroupSpec g = group_from_json(load_json(db_group));
      Json schemes_json = load_json(db_schemes);
      SchemeSet schemes = schemes_from_json(g, schemes_json);
      LevelData ld = build_levels(g, schemes.views, db_levels, db_seed);
      if (auto viol = verify_levels(ld))
        throw std::runtime_error("dichotomy build: level invariant failed: " +
                                 viol->reason);
      emit(manifest.seal(to_json(g, ld, schemes_json)), out_path);
    } else if (*dcert) {
      manifest.add_input("build", dc_build);
      manifest.add_input("x", dc_x);
      LoadedBuild lb = build_from_json(load_json(dc_build));
      Prefix x = prefix_from_json(load_json(dc_x));
      DominationCertificate cert = domination_certificate(lb.data, dc_scheme, dc_n, x);
      Json j{{"format", "domination-certificate/1"},
             {"n", dc_n},
             {"scheme", dc_scheme},
             {"chain", cert.chain},
             {"gamma", to_json(cert.gamma)}};
      emit(manifest.seal(j), out_path);
    } else if (*dvis) {
      manifest.add_input("group", dv_group);
      manifest.add_input("coloring", dv_coloring);
      manifest.add_input("family", dv_family);
      manifest.add_input("x", dv_x);
      GroupSpec g = group_from_json(load_json(dv_group));
      PiecewiseColoring f = piecewise_from_json(g, load_json(dv_coloring));
      ConvergentFamily fam = family_from_json(g, load_json(dv_family));
      Json xj = load_json(dv_x);
      Prefix xw = prefix_from_json(xj);
      std::optional<std::uint32_t> pad;
      if (xj.contains("pad")) pad = xj["pad"].get<std::uint32_t>();
      auto oracle = [&](std::size_t depth) {
        Prefix p = xw;
        if (p.depth() < depth) {
          if (!pad) throw input_error("vision: x too shallow and no pad digit given");
          p.word.resize(depth, *pad);
        }
        return p;
      };
      VisionResult res = finite_vision(g, f, fam, oracle);
      Json colors = Json::array();
      for (Color c : res.colors) colors.push_back(c);
      Json j{{"format", "vision/1"}, {"colors", colors}, {"tail_index", res.tail_index}};
      emit(manifest.seal(j), out_path);
    } else if (*grab) {
      manifest.add_input("graph", grab_graph);
      LoadedLazyGraph lg = lazy_graph_from_json(load_json(grab_graph));
      if (grab_multi) {
        auto [o, rep] = edge_grab_multiweight(lg.graph, lg.carrier, grab_stages,
                                              grab_blocks, Rational(grab_tol));
        Json entries = Json::array();
        for (const auto& e : rep.entries)
          entries.push_back({{"weight", e.weight_index},
                             {"measure", to_string_exact(e.measure)},
                             {"covered", e.covered}});
        Json j{{"format", "edgegrab-multiweight/1"},
               {"note", "category analog with weight family"},
               {"blocks", o.blocks.size()},
               {"entries", entries}};
        emit(manifest.seal(j), out_path);
      } else {
        auto [o, rep] = edge_grab(lg.graph, lg.carrier, grab_stages, grab_report);
        Json entries = Json::array();
        bool all_hold = true;
        for (const auto& e : rep.entries) {
          entries.push_back({{"k", e.k},
                             {"m_k", e.m_k},
                             {"measure", to_string_exact(e.measure)},
                             {"bound", to_string_exact(e.bound)},
                             {"holds", e.holds}});
          all_hold = all_hold && e.holds;
        }
        Json j{{"format", "edgegrab-report/1"},
               {"stages", grab_stages},
               {"blocks", o.blocks.size()},
               {"entries", entries},
               {"all_bounds_hold", all_hold}};
        emit(manifest.seal(j), out_path);
        if (!all_hold) g_exit = 2;
      }
    } else if (*approx) {
      manifest.add_input("graph", ap_graph);
      manifest.set_seed(ap_seed);
      Json gj = load_json(ap_graph);
      Rational eps(ap_eps);
      Coloring col;
      ApproxReport rep;
      if (gj.contains("format") && gj["format"] == "lazygraph/1") {
        LoadedLazyGraph lg = lazy_graph_from_json(gj);
        auto neighbor = [&lg](std::uint64_t v, std::uint64_t j) {
          return lg.graph.neighbor(v, j);
        };
        std::tie(col, rep) = approx_domatic(lg.graph.carrier_size(), neighbor,
                                            lg.carrier.weight, ap_k, eps, ap_seed,
                                            ap_attempts);
      } else {
        Graph g = graph_from_json(gj);
        std::tie(col, rep) = approx_domatic(g, ap_k, eps, ap_seed, ap_attempts);
      }
      Json j{{"format", "approx-report/1"},
             {"k", rep.k},
             {"eps", to_string_exact(rep.eps)},
             {"sample_size", rep.sample_size},
             {"attempts", rep.attempts},
             {"fraction", to_string_exact(rep.fraction)},
             {"accepted", rep.accepted},
             {"coloring", to_json(col)}};
      emit(manifest.seal(j), out_path);
      if (!rep.accepted) g_exit = 2;
    } else if (*mt) {
      manifest.add_input("graph", mt_graph);
      manifest.set_seed(mt_seed);
      std::vector<Graph> graphs{graph_from_json(load_json(mt_graph))};
      for (std::size_t i = 0; i < mt_extra.size(); ++i) {
        manifest.add_input("simultaneous" + std::to_string(i), mt_extra[i]);
        graphs.push_back(graph_from_json(load_json(mt_extra[i])));
      }
      Coloring col = simultaneous_domatic(graphs, mt_k, mt_c, mt_seed);
      bool ok = true;
      for (const Graph& g : graphs) ok = ok && is_domatic(g, col, mt_k);
      Json j{{"format", "mt-coloring/1"},
             {"k", mt_k},
             {"graphs", graphs.size()},
             {"verified", ok},
             {"coloring", to_json(col)}};
      emit(manifest.seal(j), out_path);
      if (!ok) g_exit = 2;
    } else if (*paths) {
      manifest.add_input("graph", pa_graph);
      manifest.add_input("decomp", pa_decomp);
      Graph g = graph_from_json(load_json(pa_graph));
      PathDecomposition d = paths_from_json(load_json(pa_decomp));
      Coloring col = path_coloring(g, d, pa_k);
      Json j{{"format", "paths-coloring/1"}, {"k", pa_k}, {"coloring", to_json(col)}};
      emit(manifest.seal(j), out_path);
    }
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const budget_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 1;
  } catch (const indeterminate_error& e) {
    std::cerr << "indeterminate: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  auto t1 = std::chrono::steady_clock::now();
  std::cerr << "wall_ms="
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
            << "\n";
  return g_exit;
}
