#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "moralug/mixture.hpp"
#include "moralug/nash.hpp"
#include "moralug/oracle.hpp"
#include "moralug/ug_solver.hpp"

namespace moralug {

inline constexpr int kSchemaVersion = 1;

/// Bad input: malformed files, out-of-range config values. Maps to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  std::vector<double> values() const { return linspace(lo, hi, n); }
};

/// Everything a run reads from --config. Defaults reproduce the w = 10,
/// CRRA 0.05, Beta(2, 4) on [0, 5] setting.
struct RunConfig {
  UgSetting ug = UgSetting::baseline();
  GridAxis map_alpha{-1.0, 3.0, 41};
  GridAxis map_kappa{0.0, 0.98, 50};
  GridAxis statics_kappa{0.0, 0.99, 100};
  double oracle_step = 0.0;  // 0 means w/400
  double nash_step = 0.0;    // 0 means w/400
  double estimation_w = Endowment::kEstimationPoints;
  PayoffCurve estimation_curve = PayoffCurve::shifted_log();
  std::vector<BinaryGame> games = mini_ug_games();
  EmOptions em;
  uint64_t seed = 1;
};

PayoffCurve parse_curve(const nlohmann::json& j);
BeliefDistribution parse_belief(const nlohmann::json& j, double w);
std::vector<BinaryGame> parse_games(const nlohmann::json& j);
nlohmann::json games_to_json(const std::vector<BinaryGame>& games);

RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& j);
std::vector<BinaryGame> load_games(const std::string& path);

// ---------------------------------------------------------------- estimates

struct EstimateRecord {
  std::string id;
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
};

struct ParamSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
};

struct EstimateSet {
  std::vector<EstimateRecord> records;  // kept rows only
  int read = 0;
  int dropped = 0;
  std::vector<std::string> dropped_ids;
  ParamSummary alpha, beta, kappa;
};

/// Reads `id,alpha,beta,kappa`. Rows outside alpha, beta in [-2, 2] or
/// kappa in [0, 1] are dropped and counted. Throws ValidationError naming the
/// line for malformed rows and naming the id for duplicates.
EstimateSet load_estimates(const std::string& path);
EstimateSet parse_estimates(const std::string& text, const std::string& source = "<input>");

struct DistSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  int obs = 0;
};

/// Quartiles by linear interpolation between order statistics.
DistSummary summarize(std::vector<double> x);

struct SubjectPrediction {
  std::string id;
  double dg_transfer = 0.0;
  double ug_threshold = 0.0;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<int> counts;  // values above hi land in the last bin
};

Histogram histogram(const std::vector<double>& x, double lo, double hi, int bins = 20);

struct Predictions {
  double w = 0.0;
  bool kappa_suppressed = false;
  std::vector<SubjectPrediction> subjects;
  DistSummary dg;
  DistSummary ug;
  Histogram dg_hist;
  Histogram ug_hist;
};

/// Per-subject predicted DG transfer and UG threshold. With `suppress_kappa`
/// every subject's kappa is set to 0 first.
Predictions predict_all(const std::vector<EstimateRecord>& est, double w = Endowment::kEstimationPoints,
                        const PayoffCurve& curve = PayoffCurve::shifted_log(),
                        bool suppress_kappa = false);

/// Region label of each subject's (alpha, kappa) under a UG setting.
std::array<int, 3> classify_regions(const std::vector<EstimateRecord>& est, const UgSetting& s);

// ---------------------------------------------------------------- choices

/// Reads `subject_id,game_id,role,action`.
std::vector<ChoiceRecord> load_choices(const std::string& path);
std::vector<ChoiceRecord> parse_choices(const std::string& text, const std::string& source = "<input>");
std::string choices_csv(const std::vector<ChoiceRecord>& records);

// ---------------------------------------------------------------- output

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// JSON numbers for non-finite values become strings "inf", "-inf", "nan".
nlohmann::json number(double x);

nlohmann::json to_json(const SolverOutputs& o);
nlohmann::json to_json(const NashBounds& b, double kappa, double alpha);
nlohmann::json to_json(const MixtureFit& f, const std::vector<PredictedBehavior>& predicted,
                       const BootstrapResult* boot = nullptr);
nlohmann::json to_json(const Predictions& p);
nlohmann::json to_json(const EstimateSet& e);

std::string region_map_csv(const RegionMap& m);
std::string region_curves_csv(const RegionMap& m);
std::string statics_csv(const Statics& s);
std::string switches_csv(const Statics& s);
std::string predictions_csv(const Predictions& p);
std::string histogram_csv(const Predictions& p);
/// One row per type and one per model-level statistic, like the fit table.
std::string fit_summary_csv(const std::vector<MixtureFit>& fits,
                            const std::vector<std::vector<PredictedBehavior>>& predicted);

/// Fixed-precision formatting shared by every CSV writer.
std::string fmt(double x, int digits = 6);

}  // namespace moralug
