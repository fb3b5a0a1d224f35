#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mendlab/graph.hpp"
#include "mendlab/io.hpp"
#include "mendlab/labeling.hpp"
#include "mendlab/lcl.hpp"
#include "mendlab/propagation.hpp"

namespace mendlab {

enum class Measure { MRad, ExistsMVol, EMVol, DMVol, BallSize };
// MRad, ExMVol, EMVol, DMVol, NMRad.
std::string to_string(Measure m);
Measure measure_by_name(const std::string& name);

// Families of worst-case instances, indexed by height.
//   ri (i), poly (p, q), polylog (k): balanced worst case, hole at the root.
//   adversarial (i): R_i on adversarial_tree. unbalanced (i, p_full): R_i on a random unbalanced tree.
//   deg2sink, sinkless, layered (hole at the root of t_{h, seed mod 2^h}), always-happy.
struct FamilySpec {
  std::string name = "ri";
  int i = 2;
  int p = 1;
  int q = 2;
  int k = 2;
  double p_full = 0.5;

  std::string params() const;
  bool propagation() const;
};

FamilySpec family_from_json(const json& j);
json family_to_json(const FamilySpec& f);

// Problem files: a propagation spec (optionally with "generalized"), or
// {"problem": "degree-two-sink" | "sinkless-orientation" | "path-to-sink" | "always-happy", ...}.
struct ProblemFile {
  std::string kind = "propagation";
  std::optional<PropagationSpec> spec;
  bool generalized = true;
  int max_degree = 3;
  std::string mode = "promise";  // path-to-sink
  int delta = 5;                 // path-to-sink, unoriented mode

  LclProblem build() const;
};

ProblemFile problem_file_from_json(const json& j);
json to_json(const ProblemFile& f);

struct Subject {
  std::string family;
  std::string params;
  int height = 0;
  Graph graph;
  LclProblem problem;
  PartialLabeling lambda;
  Vertex hole = 0;
  ProblemFile descriptor;
  std::string randomized_policy;
  // "ball" or the name of a deterministic policy.
  std::string deterministic_policy;
};

Subject make_subject(const FamilySpec& f, int height, std::uint64_t seed);

struct MeasureOptions {
  std::size_t trials = 200;
  unsigned jobs = 0;
  std::string policy;  // overrides the family default for EMVol and DMVol
  // Propagation ExMVol above this size comes from the demand matrix instead of the tree DP.
  std::size_t max_oracle_n = 2'000'000;
};

struct MeasureValue {
  double value = 0;
  double stderr_ = 0;
};

MeasureValue evaluate(const Subject& s, Measure m, std::uint64_t seed, const MeasureOptions& opt = {});

struct ExperimentRow {
  std::string family;
  std::string params;
  std::size_t n = 0;
  Measure measure = Measure::ExistsMVol;
  double value = 0;
  double stderr_ = 0;
  std::uint64_t seed = 0;
  bool flagged = false;  // budget exceeded; value and stderr are written as NA
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;

  // Columns: family,params,n,measure,value,stderr,seed.
  void write_csv(std::ostream& out) const;
  static ExperimentTable read_csv(std::istream& in);
  // Mean value per n over unflagged rows of one measure, n ascending.
  std::vector<std::pair<double, double>> series(Measure m) const;
};

struct ExperimentConfig {
  FamilySpec family;
  std::vector<Measure> measures{Measure::ExistsMVol};
  std::vector<int> sizes;
  std::vector<std::uint64_t> seeds{0};
  MeasureOptions options;
};

ExperimentConfig experiment_from_json(const json& j);
ExperimentTable scaling_experiment(const ExperimentConfig& cfg);

enum class FitModel { Power, Polylog, Linear, Constant };
std::string to_string(FitModel m);
FitModel fit_model_by_name(const std::string& name);

struct FitResult {
  FitModel model = FitModel::Power;
  double exponent = 0;
  double intercept = 0;
  double residual = 0;  // RMS on the transformed axes
  std::size_t points = 0;
  std::optional<bool> in_band;  // set when a target was given
  std::string verdict;
};

// Power: ln V on ln n. Polylog: ln V on ln ln n. Linear: V on n. Constant: mean of V.
// The verdict compares the exponent with `target` (default tolerance 0.05 power, 0.15 polylog).
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points, FitModel model,
                       std::optional<double> target = {}, std::optional<double> tolerance = {});
FitResult fit_exponent(const ExperimentTable& table, Measure m, FitModel model,
                       std::optional<double> target = {}, std::optional<double> tolerance = {});

struct SeparationRow {
  std::size_t n = 0;
  double first = 0;
  double second = 0;
  double ratio = 0;  // second / first
};

struct SeparationReport {
  Measure first = Measure::MRad;
  Measure second = Measure::ExistsMVol;
  std::vector<SeparationRow> rows;
  bool separated = false;
  std::string verdict;
};

// Allowed pairs: MRad-ExMVol, ExMVol-EMVol, EMVol-DMVol, DMVol-NMRad.
std::pair<Measure, Measure> separation_pair(const std::string& name);
SeparationReport separation_report(std::pair<Measure, Measure> pair, const FamilySpec& f,
                                   const std::vector<int>& sizes, const std::vector<std::uint64_t>& seeds,
                                   const MeasureOptions& opt = {});

struct GapReport {
  std::vector<std::pair<double, double>> dmvol;  // (n, DMVol)
  double constant_residual = 0;
  double logarithmic_residual = 0;
  double linear_residual = 0;
  std::string verdict;  // constant, logarithmic or linear
  // DMVol equals |N_MRad| at every size (ball menders only).
  std::optional<bool> tracks_ball;
};

GapReport dmvol_gap_check(const FamilySpec& f, const std::vector<int>& sizes, std::uint64_t seed = 0);

struct HierarchyReport {
  int radius = 0;
  double mrad = 0;
  double exists = 0;
  MeasureValue emvol;
  double dmvol_ball = 0;
  double ball_size = 0;
  std::vector<std::string> violations;
};

// MRad <= 2r ExMVol <= 2r (EMVol + 3 sigma), and the ball mender explores exactly N_MRad.
HierarchyReport hierarchy_check(const Subject& s, std::size_t trials, std::uint64_t seed, unsigned jobs = 0);

json to_json(const FitResult& r);
json to_json(const SeparationReport& r);
json to_json(const GapReport& r);

}  // namespace mendlab
