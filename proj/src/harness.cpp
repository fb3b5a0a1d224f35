#include "mendlab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "mendlab/engines.hpp"
#include "mendlab/families.hpp"
#include "mendlab/layered.hpp"
#include "mendlab/menders.hpp"

namespace mendlab {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string fmt(double x) {
  std::ostringstream o;
  o << std::setprecision(12) << x;
  return o.str();
}

struct Line {
  double slope = 0;
  double intercept = 0;
  double rms = 0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw ModelInapplicable("fit needs at least two distinct sizes");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / static_cast<double>(n));
  return l;
}

PropagationSpec spec_of(const FamilySpec& f) {
  if (f.name == "poly") return polynomial_spec(f.p, f.q);
  if (f.name == "polylog") return polylog_spec(f.k);
  return r_i_problem(f.i);
}

bool balanced_propagation(const FamilySpec& f) {
  return f.name == "ri" || f.name == "poly" || f.name == "polylog";
}

// Size of the balanced delta-ary tree, without the generator cap.
std::size_t tree_size(int delta, int height) {
  long double total = 0, layer = 1;
  for (int d = 0; d <= height; ++d) {
    total += layer;
    layer *= delta;
  }
  if (total > 9.0e18L) throw ArgumentError("tree size overflows");
  return static_cast<std::size_t>(total);
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::MRad: return "MRad";
    case Measure::ExistsMVol: return "ExMVol";
    case Measure::EMVol: return "EMVol";
    case Measure::DMVol: return "DMVol";
    case Measure::BallSize: return "NMRad";
  }
  return "?";
}

Measure measure_by_name(const std::string& name) {
  std::string s = lower(name);
  if (s == "mrad") return Measure::MRad;
  if (s == "exmvol" || s == "exists-mvol" || s == "emvol-exists" || s == "\xe2\x88\x83mvol") return Measure::ExistsMVol;
  if (s == "emvol") return Measure::EMVol;
  if (s == "dmvol") return Measure::DMVol;
  if (s == "nmrad" || s == "ball") return Measure::BallSize;
  throw ArgumentError("unknown measure '" + name + "'");
}

std::string FamilySpec::params() const {
  if (name == "ri" || name == "adversarial") return "i=" + std::to_string(i);
  if (name == "unbalanced") return "i=" + std::to_string(i) + ";p_full=" + fmt(p_full);
  if (name == "poly") return "p=" + std::to_string(p) + ";q=" + std::to_string(q);
  if (name == "polylog") return "k=" + std::to_string(k);
  return "-";
}

bool FamilySpec::propagation() const {
  return balanced_propagation(*this) || name == "adversarial" || name == "unbalanced";
}

FamilySpec family_from_json(const json& j) {
  FamilySpec f;
  if (j.is_string()) {
    f.name = j.get<std::string>();
  } else {
    f.name = j.at("name").get<std::string>();
    f.i = j.value("i", f.i);
    f.p = j.value("p", f.p);
    f.q = j.value("q", f.q);
    f.k = j.value("k", f.k);
    f.p_full = j.value("p_full", f.p_full);
  }
  static const std::vector<std::string> known{"ri",       "poly",     "polylog", "adversarial", "unbalanced",
                                              "deg2sink", "sinkless", "layered", "always-happy"};
  if (std::find(known.begin(), known.end(), f.name) == known.end()) {
    throw ArgumentError("unknown family '" + f.name + "'");
  }
  return f;
}

json family_to_json(const FamilySpec& f) {
  return json{{"name", f.name}, {"i", f.i}, {"p", f.p}, {"q", f.q}, {"k", f.k}, {"p_full", f.p_full}};
}

LclProblem ProblemFile::build() const {
  if (kind == "propagation") {
    if (!spec) throw ArgumentError("propagation problem without a spec");
    return build_problem(*spec, generalized);
  }
  if (kind == "degree-two-sink") return degree_two_sink_problem(max_degree);
  if (kind == "sinkless-orientation") return sinkless_orientation_problem(max_degree);
  if (kind == "path-to-sink") return path_to_sink_problem(path_to_sink_mode(mode), delta);
  if (kind == "always-happy") return always_happy_problem();
  throw ArgumentError("unknown problem '" + kind + "'");
}

ProblemFile problem_file_from_json(const json& j) {
  ProblemFile f;
  if (j.contains("labels")) {
    f.spec = spec_from_json(j);
    f.generalized = j.value("generalized", true);
    return f;
  }
  if (!j.contains("problem")) throw ArgumentError("problem file needs 'labels' or 'problem'");
  f.kind = j["problem"].get<std::string>();
  f.max_degree = j.value("max_degree", f.max_degree);
  f.mode = j.value("mode", f.mode);
  f.delta = j.value("delta", f.delta);
  f.build();
  return f;
}

json to_json(const ProblemFile& f) {
  if (f.kind == "propagation") {
    json j = spec_to_json(*f.spec);
    j["generalized"] = f.generalized;
    return j;
  }
  json j{{"problem", f.kind}};
  if (f.kind == "degree-two-sink" || f.kind == "sinkless-orientation") j["max_degree"] = f.max_degree;
  if (f.kind == "path-to-sink") {
    j["mode"] = f.mode;
    j["delta"] = f.delta;
  }
  return j;
}

Subject make_subject(const FamilySpec& f, int height, std::uint64_t seed) {
  if (height < 0) throw ArgumentError("height must be >= 0");
  Subject s;
  s.family = f.name;
  s.params = f.params();
  s.height = height;
  s.randomized_policy = "uniform-frontier";
  s.deterministic_policy = "ball";
  if (f.propagation()) {
    PropagationSpec spec = spec_of(f);
    s.descriptor.spec = spec;
    s.problem = build_problem(spec, true);
    s.randomized_policy = "random-child";
    if (balanced_propagation(f)) {
      auto inst = worst_case_instance(spec, height);
      s.graph = inst.tree.graph();
      s.lambda = std::move(inst.lambda);
      s.hole = inst.hole;
    } else {
      RootedTree t;
      if (f.name == "adversarial") {
        t = adversarial_tree(height);
        s.deterministic_policy = "ordered-child";
      } else {
        Rng rng(seed);
        t = random_unbalanced_tree(spec.delta, height, f.p_full, rng);
      }
      s.lambda = wildcard_labeling(spec, t);
      s.hole = t.root();
      s.graph = t.graph();
    }
    return s;
  }
  if (f.name == "deg2sink" || f.name == "sinkless") {
    auto inst = f.name == "deg2sink" ? degree_two_sink_instance(height, seed) : sinkless_instance(height);
    s.graph = std::move(inst.graph);
    s.problem = std::move(inst.problem);
    s.lambda = std::move(inst.lambda);
    s.hole = inst.hole;
    s.descriptor.kind = f.name == "deg2sink" ? "degree-two-sink" : "sinkless-orientation";
    if (f.name == "sinkless") {
      s.deterministic_policy = "first-descent";
      s.randomized_policy = "random-dfs";
    }
    return s;
  }
  if (f.name == "layered") {
    if (height > 24) throw ArgumentError("layered height must be <= 24");
    auto t = layered_tree(height, static_cast<int>(seed % (std::uint64_t{1} << height)));
    s.graph = std::move(t.graph);
    s.problem = path_to_sink_problem(PathToSinkMode::Promise);
    s.descriptor.kind = "path-to-sink";
    s.lambda = all_black(s.graph, 0);
    s.hole = 0;
    return s;
  }
  if (f.name == "always-happy") {
    s.graph = build_balanced_tree(2, height).graph();
    s.problem = always_happy_problem();
    s.descriptor.kind = "always-happy";
    s.lambda = PartialLabeling(s.problem.alphabet(), s.graph.n(), 0);
    s.lambda[0] = kBottom;
    s.hole = 0;
    return s;
  }
  throw ArgumentError("unknown family '" + f.name + "'");
}

MeasureValue evaluate(const Subject& s, Measure m, std::uint64_t seed, const MeasureOptions& opt) {
  const Graph& g = s.graph;
  switch (m) {
    case Measure::ExistsMVol:
      return {static_cast<double>(MendOracle(s.problem, g, s.lambda, s.hole).min_mend().value), 0};
    case Measure::MRad:
      return {static_cast<double>(MendOracle(s.problem, g, s.lambda, s.hole).radius().first), 0};
    case Measure::BallSize: {
      int rho = MendOracle(s.problem, g, s.lambda, s.hole).radius().first;
      return {static_cast<double>(ball(g, std::span<const Vertex>(&s.hole, 1), rho).size()), 0};
    }
    case Measure::DMVol: {
      std::string name = opt.policy.empty() ? s.deterministic_policy : opt.policy;
      if (name == "ball") {
        return {static_cast<double>(deterministic_ball_mender(s.problem, g, s.lambda, s.hole).explored.size()), 0};
      }
      auto pol = policy_by_name(name, s.problem)();
      return {static_cast<double>(run_policy(s.problem, g, s.lambda, s.hole, *pol, seed).explored.size()), 0};
    }
    case Measure::EMVol: {
      std::string name = opt.policy.empty() ? s.randomized_policy : opt.policy;
      auto e = estimate_expected_volume(s.problem, g, s.lambda, s.hole, policy_by_name(name, s.problem),
                                        opt.trials, seed, opt.jobs);
      return {e.mean, e.stderr_};
    }
  }
  throw ArgumentError("unknown measure");
}

void ExperimentTable::write_csv(std::ostream& out) const {
  out << "family,params,n,measure,value,stderr,seed\n";
  for (const auto& r : rows) {
    out << r.family << ',' << r.params << ',' << r.n << ',' << to_string(r.measure) << ',';
    if (r.flagged) {
      out << "NA,NA";
    } else {
      out << fmt(r.value) << ',' << fmt(r.stderr_);
    }
    out << ',' << r.seed << '\n';
  }
}

ExperimentTable ExperimentTable::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "family,params,n,measure,value,stderr,seed") {
    throw ArgumentError("experiment table: unexpected header");
  }
  ExperimentTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw ArgumentError("experiment table: bad row '" + line + "'");
    ExperimentRow r;
    r.family = f[0];
    r.params = f[1];
    try {
      r.n = std::stoull(f[2]);
      r.measure = measure_by_name(f[3]);
      if (f[4] == "NA") {
        r.flagged = true;
      } else {
        r.value = std::stod(f[4]);
        r.stderr_ = std::stod(f[5]);
      }
      r.seed = std::stoull(f[6]);
    } catch (const std::logic_error&) {
      throw ArgumentError("experiment table: bad row '" + line + "'");
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::vector<std::pair<double, double>> ExperimentTable::series(Measure m) const {
  std::map<std::size_t, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    if (r.measure != m || r.flagged) continue;
    auto& a = acc[r.n];
    a.first += r.value;
    ++a.second;
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& [n, a] : acc) out.emplace_back(static_cast<double>(n), a.first / a.second);
  return out;
}

ExperimentConfig experiment_from_json(const json& j) {
  ExperimentConfig c;
  c.family = family_from_json(j.at("family"));
  if (j.contains("params")) {
    json merged = family_to_json(c.family);
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) merged[it.key()] = it.value();
    c.family = family_from_json(merged);
  }
  if (j.contains("measures")) {
    c.measures.clear();
    for (const auto& m : j["measures"]) c.measures.push_back(measure_by_name(m.get<std::string>()));
  } else if (j.contains("measure")) {
    c.measures = {measure_by_name(j["measure"].get<std::string>())};
  }
  c.sizes = j.at("sizes").get<std::vector<int>>();
  if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  c.options.trials = j.value("trials", c.options.trials);
  c.options.jobs = j.value("jobs", c.options.jobs);
  c.options.policy = j.value("policy", c.options.policy);
  c.options.max_oracle_n = j.value("max_oracle_n", c.options.max_oracle_n);
  return c;
}

ExperimentTable scaling_experiment(const ExperimentConfig& cfg) {
  for (std::size_t i = 1; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] <= cfg.sizes[i - 1]) throw ArgumentError("sizes must be strictly increasing");
  }
  if (cfg.sizes.empty() || cfg.seeds.empty()) throw ArgumentError("experiment needs sizes and seeds");
  ExperimentTable t;
  for (Measure m : cfg.measures) {
    for (std::uint64_t seed : cfg.seeds) {
      for (int h : cfg.sizes) {
        ExperimentRow r;
        r.family = cfg.family.name;
        r.params = cfg.family.params();
        r.measure = m;
        r.seed = seed;
        if (m == Measure::ExistsMVol && balanced_propagation(cfg.family)) {
          PropagationSpec spec = spec_of(cfg.family);
          std::size_t n = tree_size(spec.delta, h);
          if (n > cfg.options.max_oracle_n) {
            r.n = n;
            r.value = volume_bounds(spec, h).lower.convert_to<double>();
            t.rows.push_back(std::move(r));
            continue;
          }
        }
        Subject s = make_subject(cfg.family, h, seed);
        r.n = s.graph.n();
        try {
          auto v = evaluate(s, m, seed, cfg.options);
          r.value = v.value;
          r.stderr_ = v.stderr_;
        } catch (const BudgetExceeded&) {
          r.flagged = true;
        }
        t.rows.push_back(std::move(r));
      }
    }
  }
  return t;
}

std::string to_string(FitModel m) {
  switch (m) {
    case FitModel::Power: return "power";
    case FitModel::Polylog: return "polylog";
    case FitModel::Linear: return "linear";
    case FitModel::Constant: return "constant";
  }
  return "?";
}

FitModel fit_model_by_name(const std::string& name) {
  std::string s = lower(name);
  if (s == "power") return FitModel::Power;
  if (s == "polylog") return FitModel::Polylog;
  if (s == "linear") return FitModel::Linear;
  if (s == "constant") return FitModel::Constant;
  throw ArgumentError("unknown fit model '" + name + "'");
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, FitModel model,
                       std::optional<double> target, std::optional<double> tolerance) {
  if (points.size() < 4) throw PreconditionError("fit needs at least 4 data points");
  FitResult r;
  r.model = model;
  r.points = points.size();
  std::vector<double> x, y;
  for (auto [n, v] : points) {
    switch (model) {
      case FitModel::Power:
      case FitModel::Polylog:
        if (v <= 0 || n <= 1 || (model == FitModel::Polylog && std::log(n) <= 0)) {
          throw ModelInapplicable(to_string(model) + " model needs positive values and n > 1");
        }
        x.push_back(model == FitModel::Power ? std::log(n) : std::log(std::log(n)));
        y.push_back(std::log(v));
        break;
      default:
        x.push_back(n);
        y.push_back(v);
    }
  }
  if (model == FitModel::Constant) {
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double ss = 0;
    for (double v : y) ss += (v - mean) * (v - mean);
    r.exponent = mean;
    r.residual = std::sqrt(ss / static_cast<double>(y.size()));
  } else {
    Line l = least_squares(x, y);
    r.exponent = l.slope;
    r.intercept = l.intercept;
    r.residual = l.rms;
  }
  if (!std::isfinite(r.exponent)) throw ModelInapplicable("fit produced a non-finite exponent");
  std::ostringstream v;
  v << "empirical: exponent " << std::setprecision(4) << r.exponent;
  if (target) {
    double tol = tolerance.value_or(model == FitModel::Polylog ? 0.15 : 0.05);
    bool ok = std::abs(r.exponent - *target) <= tol;
    r.in_band = ok;
    v << (ok ? " within " : " outside ") << "[" << *target - tol << ", " << *target + tol << "]";
  }
  r.verdict = v.str();
  return r;
}

FitResult fit_exponent(const ExperimentTable& table, Measure m, FitModel model, std::optional<double> target,
                       std::optional<double> tolerance) {
  return fit_exponent(table.series(m), model, target, tolerance);
}

std::pair<Measure, Measure> separation_pair(const std::string& name) {
  std::string s = lower(name);
  auto dash = s.find('-');
  if (dash == std::string::npos) throw ArgumentError("pair must look like emvol-dmvol");
  std::pair<Measure, Measure> p{measure_by_name(s.substr(0, dash)), measure_by_name(s.substr(dash + 1))};
  static const std::vector<std::pair<Measure, Measure>> allowed{{Measure::MRad, Measure::ExistsMVol},
                                                                {Measure::ExistsMVol, Measure::EMVol},
                                                                {Measure::EMVol, Measure::DMVol},
                                                                {Measure::DMVol, Measure::BallSize}};
  if (std::find(allowed.begin(), allowed.end(), p) == allowed.end()) {
    throw ArgumentError("unsupported measure pair '" + name + "'");
  }
  return p;
}

SeparationReport separation_report(std::pair<Measure, Measure> pair, const FamilySpec& f,
                                   const std::vector<int>& sizes, const std::vector<std::uint64_t>& seeds,
                                   const MeasureOptions& opt) {
  if (sizes.size() < 2 || seeds.empty()) throw ArgumentError("separation needs two sizes and a seed");
  SeparationReport rep;
  rep.first = pair.first;
  rep.second = pair.second;
  for (int h : sizes) {
    SeparationRow row;
    for (std::uint64_t seed : seeds) {
      Subject s = make_subject(f, h, seed);
      row.n += s.graph.n();
      row.first += evaluate(s, pair.first, seed, opt).value;
      row.second += evaluate(s, pair.second, seed, opt).value;
    }
    double k = static_cast<double>(seeds.size());
    row.n = static_cast<std::size_t>(std::llround(static_cast<double>(row.n) / k));
    row.first /= k;
    row.second /= k;
    row.ratio = row.first > 0 ? row.second / row.first : std::nan("");
    rep.rows.push_back(row);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    double a = rep.rows[i - 1].ratio, b = rep.rows[i].ratio;
    if (!(b >= a * 0.95)) monotone = false;
  }
  rep.separated = monotone && rep.rows.back().ratio >= 1.5 * rep.rows.front().ratio;
  rep.verdict = rep.separated ? "separated (empirical)" : "inconclusive (empirical)";
  return rep;
}

GapReport dmvol_gap_check(const FamilySpec& f, const std::vector<int>& sizes, std::uint64_t seed) {
  if (sizes.size() < 3) throw ArgumentError("gap check needs at least 3 sizes");
  GapReport rep;
  bool tracks = true;
  bool ball_mender = false;
  std::vector<double> n, v, logn;
  for (int h : sizes) {
    Subject s = make_subject(f, h, seed);
    ball_mender = s.deterministic_policy == "ball";
    double d = evaluate(s, Measure::DMVol, seed).value;
    if (ball_mender) tracks = tracks && d == evaluate(s, Measure::BallSize, seed).value;
    rep.dmvol.emplace_back(static_cast<double>(s.graph.n()), d);
    n.push_back(static_cast<double>(s.graph.n()));
    logn.push_back(std::log(static_cast<double>(s.graph.n())));
    v.push_back(d);
  }
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  rep.constant_residual = std::sqrt(ss / static_cast<double>(v.size())) / mean;
  rep.logarithmic_residual = least_squares(logn, v).rms / mean;
  rep.linear_residual = least_squares(n, v).rms / mean;
  const double tol = 0.05;
  if (rep.constant_residual <= tol) {
    rep.verdict = "constant";
  } else if (rep.logarithmic_residual <= tol) {
    rep.verdict = "logarithmic";
  } else if (rep.linear_residual <= tol) {
    rep.verdict = "linear";
  } else {
    double best = std::min({rep.constant_residual, rep.logarithmic_residual, rep.linear_residual});
    rep.verdict = best == rep.constant_residual ? "constant" : best == rep.logarithmic_residual ? "logarithmic" : "linear";
  }
  if (ball_mender) rep.tracks_ball = tracks;
  return rep;
}

HierarchyReport hierarchy_check(const Subject& s, std::size_t trials, std::uint64_t seed, unsigned jobs) {
  HierarchyReport r;
  r.radius = s.problem.radius();
  MendOracle oracle(s.problem, s.graph, s.lambda, s.hole);
  auto [rho, witness] = oracle.radius();
  r.mrad = rho;
  r.exists = static_cast<double>(oracle.min_mend().value);
  r.ball_size = static_cast<double>(ball(s.graph, std::span<const Vertex>(&s.hole, 1), rho).size());
  r.dmvol_ball = static_cast<double>(deterministic_ball_mender(s.problem, s.graph, s.lambda, s.hole).explored.size());
  MeasureOptions opt;
  opt.trials = trials;
  opt.jobs = jobs;
  r.emvol = evaluate(s, Measure::EMVol, seed, opt);
  double two_r = 2.0 * r.radius;
  if (r.mrad > std::max(two_r, 1.0) * r.exists) r.violations.push_back("MRad > 2r ExMVol");
  if (r.exists > r.emvol.value + 3 * r.emvol.stderr_) r.violations.push_back("ExMVol > EMVol + 3 sigma");
  if (r.dmvol_ball != r.ball_size) r.violations.push_back("ball mender differs from N_MRad");
  return r;
}

json to_json(const FitResult& r) {
  json j{{"model", to_string(r.model)}, {"exponent", r.exponent}, {"intercept", r.intercept},
         {"residual", r.residual},      {"points", r.points},     {"verdict", r.verdict}};
  if (r.in_band) j["in_band"] = *r.in_band;
  return j;
}

json to_json(const SeparationReport& r) {
  json rows = json::array();
  for (const auto& x : r.rows) {
    rows.push_back({{"n", x.n}, {"first", x.first}, {"second", x.second}, {"ratio", x.ratio}});
  }
  return json{{"first", to_string(r.first)}, {"second", to_string(r.second)}, {"rows", rows},
              {"separated", r.separated},    {"verdict", r.verdict}};
}

json to_json(const GapReport& r) {
  json series = json::array();
  for (auto [n, v] : r.dmvol) series.push_back({{"n", n}, {"dmvol", v}});
  json j{{"dmvol", series},
         {"constant_residual", r.constant_residual},
         {"logarithmic_residual", r.logarithmic_residual},
         {"linear_residual", r.linear_residual},
         {"verdict", r.verdict}};
  if (r.tracks_ball) j["tracks_ball"] = *r.tracks_ball;
  return j;
}

}  // namespace mendlab
