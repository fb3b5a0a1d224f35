#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mendlab/encoding.hpp"
#include "mendlab/engines.hpp"
#include "mendlab/families.hpp"
#include "mendlab/harness.hpp"
#include "mendlab/io.hpp"
#include "mendlab/layered.hpp"
#include "mendlab/menders.hpp"

using namespace mendlab;

namespace {

enum ExitCode { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::size_t max_n = 0;
  std::uint64_t budget = kDefaultBudget;
};

struct Loaded {
  ProblemFile desc;
  LclProblem problem;
  Graph graph;
  Vertex root = kNoVertex;
  PartialLabeling lambda;
};

// Labels are read by name through the problem alphabet; a missing or empty assignment means
// every vertex is unlabeled.
PartialLabeling read_labeling(const json& j, const Alphabet& a, std::size_t n) {
  PartialLabeling out(a, n);
  if (!j.contains("assignment") || j["assignment"].empty()) return out;
  const json& s = j["assignment"];
  if (s.size() != n) throw ArgumentError("labeling has " + std::to_string(s.size()) + " entries, graph has " + std::to_string(n));
  for (std::size_t v = 0; v < n; ++v) {
    out.assignment[v] = s[v].is_null() ? kBottom : a.index_of(s[v].get<std::string>());
  }
  return out;
}

Loaded load(const std::string& problem, const std::string& graph, const std::string& labeling) {
  Loaded l;
  l.desc = problem_file_from_json(read_json_file(problem));
  l.problem = l.desc.build();
  json g = read_json_file(graph);
  l.graph = graph_from_json(g);
  l.root = root_from_json(g);
  l.lambda = read_labeling(read_json_file(labeling), l.problem.alphabet(), l.graph.n());
  return l;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out, j);
  }
}

json vertices(const std::vector<Vertex>& v) { return json(v); }

json run_to_json(const MendRun& r, const std::string& policy, Vertex hole) {
  return json{{"policy", policy},         {"hole", hole},       {"seed", r.seed},
              {"volume", r.explored.size()}, {"explored", vertices(r.explored)}, {"diff", vertices(r.diff)},
              {"mend", labeling_to_json(r.mend)}};
}

// "4,5,6" or "4..12".
std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      for (int x = a; x <= b; ++x) out.push_back(x);
      return out;
    }
    std::stringstream ss(s);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(std::stoi(cell));
  } catch (const std::logic_error&) {
    throw ArgumentError("bad integer list '" + s + "'");
  }
  return out;
}

// "i=2", "p=2,q=3", "p_full=0.7", "j0=5".
FamilySpec family_with_params(const std::string& name, const std::string& params, std::uint64_t& seed) {
  json j{{"name", name}};
  std::stringstream ss(params);
  for (std::string cell; std::getline(ss, cell, params.find(';') != std::string::npos ? ';' : ',');) {
    if (cell.empty() || cell == "-") continue;
    auto eq = cell.find('=');
    if (eq == std::string::npos) throw ArgumentError("bad parameter '" + cell + "'");
    std::string key = cell.substr(0, eq), value = cell.substr(eq + 1);
    try {
      if (key == "p_full") {
        j[key] = std::stod(value);
      } else if (key == "j0") {
        seed = std::stoull(value);
      } else if (key == "i" || key == "p" || key == "q" || key == "k") {
        j[key] = std::stoi(value);
      } else {
        throw ArgumentError("unknown parameter '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ArgumentError("bad parameter '" + cell + "'");
    }
  }
  return family_from_json(j);
}

int cmd_verify(const std::string& problem, const std::string& graph, const std::string& labeling, bool partial) {
  Loaded l = load(problem, graph, labeling);
  if (!partial) {
    auto holes = l.lambda.holes();
    if (!holes.empty()) {
      std::cout << "rejected witness=" << holes.front() << "\n";
      return kNegative;
    }
  }
  auto r = partial ? verify_partial(l.problem, l.graph, l.lambda) : verify_full(l.problem, l.graph, l.lambda);
  if (r.accepted) {
    std::cout << "accepted\n";
    return kOk;
  }
  std::cout << "rejected witness=" << r.witness << "\n";
  return kNegative;
}

int cmd_oracle_dp(const std::string& spec_path, int height, const std::string& engine, const Globals& g) {
  PropagationSpec spec = spec_from_json(read_json_file(spec_path));
  auto inst = worst_case_instance(spec, height);
  std::int64_t volume = 0;
  std::string used = engine;
  if (engine == "dp") {
    volume = exact_min_volume_tree_dp(spec, inst.tree, inst.lambda, inst.hole).volume;
  } else if (engine == "search") {
    auto r = oracle_min_mend(build_problem(spec, true), inst.tree.graph(), inst.lambda, inst.hole, g.budget);
    if (r.status == OracleStatus::BudgetExceeded) {
      std::cout << "budget exceeded lower_bound=" << r.lower_bound << "\n";
      return kBudget;
    }
    if (!r.found) throw Infeasible("no mend exists");
    volume = r.volume;
  } else {
    LclProblem p = build_problem(spec, true);
    MendOracle o(p, inst.tree.graph(), inst.lambda, inst.hole, g.budget);
    volume = o.min_mend().value;
    used = o.engine();
  }
  std::cout << "volume=" << volume << " n=" << inst.tree.n() << " engine=" << used << "\n";
  return kOk;
}

int cmd_gen(const std::string& family, const std::string& params, int height, const std::string& prefix,
            const Globals& g) {
  std::uint64_t seed = g.seed;
  FamilySpec f = family_with_params(family, params, seed);
  Subject s = make_subject(f, height, seed);
  write_json_file(prefix + ".graph.json", graph_to_json(s.graph, s.hole));
  write_json_file(prefix + ".labeling.json", labeling_to_json(s.lambda));
  write_json_file(prefix + ".problem.json", to_json(s.descriptor));
  std::cout << "n=" << s.graph.n() << " hole=" << s.hole << "\n";
  return kOk;
}

int cmd_mend(const std::string& problem, const std::string& graph, const std::string& labeling, long long hole_opt,
             const std::string& policy, std::size_t trials, const std::string& out, const Globals& g) {
  Loaded l = load(problem, graph, labeling);
  Vertex hole = hole_opt >= 0 ? static_cast<Vertex>(hole_opt) : l.root;
  if (hole == kNoVertex) throw ArgumentError("--hole is required when the graph file has no root");
  if (hole < 0 || static_cast<std::size_t>(hole) >= l.graph.n()) throw ArgumentError("hole out of range");
  if (policy == "oracle") {
    MendOracle o(l.problem, l.graph, l.lambda, hole, g.budget);
    auto m = o.min_mend();
    emit(json{{"policy", "oracle"}, {"engine", o.engine()}, {"hole", hole}, {"volume", m.value},
              {"diff", vertices(hamming_diff(l.lambda, m.witness))}, {"mend", labeling_to_json(m.witness)}},
         out);
    return kOk;
  }
  if (policy == "alg1") {
    if (l.desc.kind != "path-to-sink") throw ArgumentError("alg1 needs a path-to-sink problem");
    auto r = algorithm1_mend(l.graph, l.lambda, hole, l.desc.mode != "promise");
    json j = run_to_json(r.run, "alg1", hole);
    j["climb_steps"] = r.climb_steps;
    j["phase2"] = r.phase2;
    emit(j, out);
    return kOk;
  }
  if (policy == "ball") {
    emit(run_to_json(deterministic_ball_mender(l.problem, l.graph, l.lambda, hole), "ball", hole), out);
    return kOk;
  }
  auto make = policy_by_name(policy, l.problem);
  if (trials <= 1) {
    auto pol = make();
    emit(run_to_json(run_policy(l.problem, l.graph, l.lambda, hole, *pol, g.seed), policy, hole), out);
    return kOk;
  }
  json runs = json::array();
  double sum = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto pol = make();
    auto r = run_policy(l.problem, l.graph, l.lambda, hole, *pol, g.seed + i);
    sum += static_cast<double>(r.explored.size());
    runs.push_back(run_to_json(r, policy, hole));
  }
  emit(json{{"policy", policy}, {"trials", trials}, {"mean", sum / static_cast<double>(trials)}, {"runs", runs}}, out);
  return kOk;
}

int cmd_alg1(int height, int j0, Vertex hole, int extra_holes, bool random_partial, bool generalized,
             const std::string& out, const Globals& g) {
  auto t = layered_tree(height, j0);
  if (hole < 0 || static_cast<std::size_t>(hole) >= t.n()) throw ArgumentError("hole out of range");
  Rng rng(g.seed);
  PartialLabeling lam =
      random_partial ? random_partial_solution(t.graph, hole, extra_holes, generalized, rng) : all_black(t.graph, hole);
  auto r = algorithm1_mend(t.graph, lam, hole, generalized);
  auto p = path_to_sink_problem(generalized ? PathToSinkMode::OrientedGeneral : PathToSinkMode::Promise);
  json j = run_to_json(r.run, "alg1", hole);
  j["climb_steps"] = r.climb_steps;
  j["phase2"] = r.phase2;
  j["target"] = r.target;
  j["relabeled"] = r.run.diff.size();
  j["is_mend"] = is_mend(p, t.graph, lam, r.run.mend, hole).is_mend();
  j["input"] = labeling_to_json(lam);
  emit(j, out);
  return kOk;
}

int cmd_sinksearch(int height, int j0, const std::string& strategy, const Globals& g) {
  SinkStrategy s = sink_strategy(strategy);
  auto r = sink_search(layered_tree(height, j0), s, g.seed);
  json q = json::array();
  for (const auto& x : r.queries) q.push_back({{"position", x.position}, {"cost", x.cost}, {"short", x.is_short}});
  std::cout << json{{"height", height},          {"j0", j0},       {"strategy", to_string(s)}, {"explored", r.explored},
                    {"final_walk", r.final_walk}, {"found", r.found}, {"queries", q}}
                   .dump(2)
            << "\n";
  return kOk;
}

int cmd_encode(const std::string& graph, int delta, const std::string& out, const std::string& labeling,
               const std::string& labeling_out, const std::string& filler) {
  Graph g = graph_from_json(read_json_file(graph));
  Graph enc = encode_unoriented(g, delta);
  emit(graph_to_json(enc), out);
  if (!labeling.empty()) {
    PartialLabeling lam = labeling_from_json(read_json_file(labeling));
    if (labeling_out.empty()) throw ArgumentError("--labeling needs --labeling-out");
    write_json_file(labeling_out, labeling_to_json(encode_labeling(lam, enc, lam.alphabet.index_of(filler))));
  }
  return kOk;
}

int cmd_decode(const std::string& graph, int delta, const std::string& out) {
  auto dec = decode_oriented(graph_from_json(read_json_file(graph)), delta);
  json j = graph_to_json(dec.graph);
  j["original"] = vertices(dec.original);
  emit(j, out);
  return kOk;
}

int cmd_experiment(const std::string& config, const std::string& out, const Globals& g, bool jobs_given) {
  ExperimentConfig c = experiment_from_json(read_json_file(config));
  if (jobs_given) c.options.jobs = g.jobs;
  auto t = scaling_experiment(c);
  if (out.empty()) {
    t.write_csv(std::cout);
  } else {
    std::ofstream f(out);
    if (!f) throw ArgumentError("cannot write '" + out + "'");
    t.write_csv(f);
  }
  return kOk;
}

int cmd_fit(const std::string& in, const std::string& model, const std::string& measure, std::optional<double> target,
            std::optional<double> tolerance) {
  std::ifstream f(in);
  if (!f) throw ArgumentError("cannot open '" + in + "'");
  auto t = ExperimentTable::read_csv(f);
  Measure m;
  if (!measure.empty()) {
    m = measure_by_name(measure);
  } else {
    if (t.rows.empty()) throw ArgumentError("empty experiment table");
    m = t.rows.front().measure;
    for (const auto& r : t.rows) {
      if (r.measure != m) throw ArgumentError("table has several measures; pass --measure");
    }
  }
  auto r = fit_exponent(t, m, fit_model_by_name(model), target, tolerance);
  std::cout << to_json(r).dump(2) << "\n";
  return r.in_band.value_or(true) ? kOk : kNegative;
}

int cmd_report(const std::string& pair, const std::string& family, const std::string& params, const std::string& sizes,
               const std::string& seeds, std::size_t trials, const std::string& policy, const Globals& g) {
  std::uint64_t seed = g.seed;
  FamilySpec f = family_with_params(family, params, seed);
  std::vector<int> hs = int_list(sizes);
  if (pair == "dmvol-gap") {
    std::cout << to_json(dmvol_gap_check(f, hs, seed)).dump(2) << "\n";
    return kOk;
  }
  std::vector<std::uint64_t> ss;
  if (seeds.empty()) {
    ss.push_back(seed);
  } else {
    for (int x : int_list(seeds)) ss.push_back(static_cast<std::uint64_t>(x));
  }
  MeasureOptions opt;
  opt.trials = trials;
  opt.jobs = g.jobs;
  opt.policy = policy;
  std::cout << to_json(separation_report(separation_pair(pair), f, hs, ss, opt)).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mendlab: mending volumes of locally checkable labelings"};
  app.set_version_flag("--version", std::string("mendlab ") + MENDLAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  auto* jobs_opt = app.add_option("--jobs", g.jobs, "worker threads for experiments (0: all cores)");
  app.add_option("--max-n", g.max_n, "vertex cap (overrides MENDLAB_MAX_N)");
  app.add_option("--budget", g.budget, "node budget of the exact oracles")->capture_default_str();

  std::string problem, graph, labeling, spec, out, family, params, policy = "ball", strategy = "midpoint";
  std::string config, in, model = "power", measure, pair, sizes, seeds, engine = "auto", labeling_out,
                           filler = "black";
  bool partial = false, random_partial = false, generalized = false;
  int dmax = 0, height = 0, j0 = 0, delta = 5, extra_holes = 0;
  long long hole = -1;
  std::size_t trials = 1;
  std::optional<double> target, tolerance;

  auto* verify = app.add_subcommand("verify", "check a labeling against a problem");
  verify->add_option("--problem", problem)->required();
  verify->add_option("--graph", graph)->required();
  verify->add_option("--labeling", labeling)->required();
  verify->add_flag("--partial", partial, "use the relaxed verifier");

  auto* classify = app.add_subcommand("classify", "growth class of a propagation problem");
  classify->add_option("--spec", spec)->required();

  auto* bounds = app.add_subcommand("bounds", "volume bounds from the demand matrix");
  bounds->add_option("--spec", spec)->required();
  bounds->add_option("--dmax", dmax)->required();

  auto* oracle = app.add_subcommand("oracle-dp", "exact minimum mend on the worst-case instance");
  oracle->add_option("--spec", spec)->required();
  oracle->add_option("--height", height)->required();
  oracle->add_option("--engine", engine)->check(CLI::IsMember({"auto", "dp", "search"}));

  auto* gen = app.add_subcommand("gen", "write graph, labeling and problem files of a family instance");
  gen->add_option("--family", family)->required();
  gen->add_option("--params", params, "e.g. i=2 or p=2,q=3 or j0=5");
  gen->add_option("--height", height)->required();
  gen->add_option("--out", out, "file prefix")->required();

  auto* mend = app.add_subcommand("mend", "mend a hole");
  mend->add_option("--problem", problem)->required();
  mend->add_option("--graph", graph)->required();
  mend->add_option("--labeling", labeling)->required();
  mend->add_option("--hole", hole, "defaults to the graph's root");
  mend->add_option("--policy", policy, "ball, oracle, alg1 or an exploration policy")->capture_default_str();
  mend->add_option("--trials", trials);
  mend->add_option("--out", out);

  auto* alg1 = app.add_subcommand("alg1", "Algorithm 1 on a layered tree");
  alg1->add_option("--height", height)->required();
  alg1->add_option("--j0", j0);
  alg1->add_option("--hole", hole);
  alg1->add_flag("--random-partial", random_partial);
  alg1->add_option("--extra-holes", extra_holes);
  alg1->add_flag("--generalized", generalized);
  alg1->add_option("--out", out);

  auto* sink = app.add_subcommand("sinksearch", "search the sink of a layered tree");
  sink->add_option("--height", height)->required();
  sink->add_option("--j0", j0)->required();
  sink->add_option("--strategy", strategy)->capture_default_str();

  auto* encode = app.add_subcommand("encode", "encode an oriented graph as an unoriented one");
  encode->add_option("--graph", graph)->required();
  encode->add_option("--delta", delta)->capture_default_str();
  encode->add_option("--out", out);
  encode->add_option("--labeling", labeling);
  encode->add_option("--labeling-out", labeling_out);
  encode->add_option("--filler", filler)->capture_default_str();

  auto* decode = app.add_subcommand("decode", "decode an encoded graph");
  decode->add_option("--graph", graph)->required();
  decode->add_option("--delta", delta)->capture_default_str();
  decode->add_option("--out", out);

  auto* experiment = app.add_subcommand("experiment", "run a scaling experiment");
  experiment->add_option("--config", config)->required();
  experiment->add_option("--out", out);

  auto* fit = app.add_subcommand("fit", "fit an exponent to an experiment table");
  fit->add_option("--in", in)->required();
  fit->add_option("--model", model)->check(CLI::IsMember({"power", "polylog", "linear", "constant"}));
  fit->add_option("--measure", measure);
  fit->add_option("--target", target);
  fit->add_option("--tolerance", tolerance);

  auto* report = app.add_subcommand("report", "separation report or DMVol gap check");
  report->add_option("--pair", pair, "mrad-exmvol, exmvol-emvol, emvol-dmvol, dmvol-nmrad or dmvol-gap")->required();
  report->add_option("--family", family)->required();
  report->add_option("--params", params);
  report->add_option("--sizes", sizes, "e.g. 4,5,6 or 4..12")->required();
  report->add_option("--seeds", seeds);
  report->add_option("--trials", trials);
  report->add_option("--policy", policy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    if (rc != 0 && !app.get_subcommands().size()) std::cerr << app.help();
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (g.max_n) set_max_vertices(g.max_n);
    if (verify->parsed()) return cmd_verify(problem, graph, labeling, partial);
    if (classify->parsed()) {
      std::cout << classify_growth(spec_from_json(read_json_file(spec))).describe() << "\n";
      return kOk;
    }
    if (bounds->parsed()) {
      auto b = volume_bounds(spec_from_json(read_json_file(spec)), dmax);
      std::cout << "lower=" << b.lower.str() << " upper=" << b.upper.str() << "\n";
      return kOk;
    }
    if (oracle->parsed()) return cmd_oracle_dp(spec, height, engine, g);
    if (gen->parsed()) return cmd_gen(family, params, height, out, g);
    if (mend->parsed()) return cmd_mend(problem, graph, labeling, hole, policy, trials, out, g);
    if (alg1->parsed()) {
      return cmd_alg1(height, j0, static_cast<Vertex>(hole < 0 ? 0 : hole), extra_holes, random_partial, generalized,
                      out, g);
    }
    if (sink->parsed()) return cmd_sinksearch(height, j0, strategy, g);
    if (encode->parsed()) return cmd_encode(graph, delta, out, labeling, labeling_out, filler);
    if (decode->parsed()) return cmd_decode(graph, delta, out);
    if (experiment->parsed()) return cmd_experiment(config, out, g, jobs_opt->count() > 0);
    if (fit->parsed()) return cmd_fit(in, model, measure, target, tolerance);
    if (report->parsed()) {
      if (policy == "ball" && report->count("--policy") == 0) policy.clear();
      return cmd_report(pair, family, params, sizes, seeds, trials == 1 && report->count("--trials") == 0 ? 200 : trials,
                        policy, g);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kNegative;
  } catch (const PolicyViolation& e) {
    std::cerr << "policy violation: " << e.what() << "\n";
    return kNegative;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
