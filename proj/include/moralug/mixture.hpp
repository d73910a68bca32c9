#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moralug/preference.hpp"

namespace moralug {

/// Two-stage binary game. Role P picks a row a, role R picks a column b;
/// cells[a][b] holds the (P, R) payoffs in points.
struct BinaryGame {
  struct Payoff {
    double p = 0.0;
    double r = 0.0;
  };
  std::string id;
  std::array<std::array<Payoff, 2>, 2> cells{};
  double q_r_first = 0.5;  // belief that the opponent in role R picks column 0
  double q_p_first = 0.5;  // belief that the opponent in role P picks row 0

  void validate() const;
};

/// (50,50) against each unequal split (60,40)...(85,15); R's second column
/// punishes to (10,10).
std::vector<BinaryGame> mini_ug_games();

/// Nine games with a safe equal row and a row whose two columns trade the
/// players' payoffs off differently. The mini-UGs alone cannot separate
/// alpha, beta and kappa; this battery can, so the recovery harness uses it.
std::vector<BinaryGame> recovery_games();

enum class Role { P, R };

Role parse_role(const std::string& s);
std::string to_string(Role r);

struct ChoiceRecord {
  std::string subject;
  std::string game;
  Role role = Role::P;
  int action = 0;
};

/// Veil utility of each pure strategy (row a when P, column b when R):
/// half the expected payoff utility as P against beliefs over R, half as R
/// against beliefs over P, plus the universalization term at self-matching.
using UtilityTable = std::array<std::array<double, 2>, 2>;
UtilityTable strategy_utilities(const PreferenceParams& p, const PayoffCurve& curve,
                                const BinaryGame& game);

/// Best completion value of each action in `role`: max over the other role's
/// action of the strategy utility.
std::array<double, 2> role_values(const UtilityTable& u, Role role);

/// (1 - l) 1{u_chosen > u_other} + l/2, exactly 1/2 on ties.
double choice_prob(double lambda, double u_chosen, double u_other);
/// 1 / (1 + exp(-(u_chosen - u_other) / l)); a step at l = 0.
double logit_choice_prob(double lambda, double u_chosen, double u_other);

enum class ChoiceModel { ConstantError, Logit };
std::string to_string(ChoiceModel m);

/// Choice records indexed by subject and decision slot (game, role).
class ChoiceData {
 public:
  ChoiceData(const std::vector<ChoiceRecord>& records, const std::vector<BinaryGame>& games);

  size_t subjects() const { return subject_ids_.size(); }
  size_t slots() const { return 2 * games_.size(); }
  size_t decisions() const;
  const std::vector<std::string>& subject_ids() const { return subject_ids_; }
  const std::vector<BinaryGame>& games() const { return games_; }
  /// counts[i][slot][action]; slot = 2 * game_index + (role == R)
  const std::vector<std::vector<std::array<int, 2>>>& counts() const { return counts_; }

  /// Subsample with replacement by subject index; copies get fresh ids.
  ChoiceData resample(const std::vector<size_t>& picks) const;

 private:
  ChoiceData() = default;
  std::vector<BinaryGame> games_;
  std::vector<std::string> subject_ids_;
  std::vector<std::vector<std::array<int, 2>>> counts_;
};

/// Prediction lattice for the constant-error model: every lattice point's
/// predicted action per slot, grouped into cells with identical predictions.
/// Within a cell the likelihood is constant, so each cell is represented by
/// the lattice point nearest its centroid.
class PatternLattice {
 public:
  PatternLattice(const std::vector<BinaryGame>& games, const PayoffCurve& curve, double step = 0.02);

  size_t cells() const { return reps_.size(); }
  size_t slots() const { return slots_; }
  /// predicted action per slot for cell c: 0, 1 or 2 for a tie
  const uint8_t* pattern(size_t c) const { return patterns_.data() + c * slots_; }
  const PreferenceParams& representative(size_t c) const { return reps_[c]; }
  /// cell holding the lattice point nearest to p
  size_t cell_of(const PreferenceParams& p) const;

 private:
  size_t slots_ = 0;
  double step_ = 0.0;
  std::vector<uint8_t> patterns_;
  std::vector<PreferenceParams> reps_;
  std::vector<uint32_t> point_cell_;  // lattice point -> cell
  size_t na_ = 0, nb_ = 0, nk_ = 0;
};

struct EmOptions {
  int k = 1;
  int restarts = 5;
  double tol = 1e-8;
  int max_iter = 500;
  uint64_t seed = 1;
  ChoiceModel model = ChoiceModel::ConstantError;
  double lattice_step = 0.02;
};

struct MixtureFit {
  int k = 0;
  ChoiceModel model = ChoiceModel::ConstantError;
  std::vector<PreferenceParams> types;
  std::vector<double> shares;
  std::vector<std::vector<double>> posteriors;  // N x K
  std::vector<std::string> subjects;
  double log_likelihood = 0.0;
  double entropy = 0.0;
  double icl = 0.0;
  std::optional<double> nec;  // set by callers that also fit K = 1
  std::vector<double> trace;  // lnL after every iteration of the returned run
  bool monotone = true;
  bool converged = false;
  int iterations = 0;
  std::vector<int> degenerate_types;  // share below 1/(10N)
};

/// Log-likelihood of a subject's choices under one type.
double subject_log_likelihood(const PreferenceParams& p, const PayoffCurve& curve,
                              const ChoiceData& data, size_t subject, ChoiceModel model);

/// EM over a K-type mixture. Throws NumericError if the log-likelihood
/// decreases across an iteration.
MixtureFit em_fit(const ChoiceData& data, const PayoffCurve& curve, const EmOptions& opt);
/// Same with a prebuilt lattice (reused across K and bootstrap replicates).
MixtureFit em_fit(const ChoiceData& data, const PayoffCurve& curve, const EmOptions& opt,
                  const PatternLattice& lattice);

/// -sum tau ln tau with 0 ln 0 = 0.
double entropy(const std::vector<std::vector<double>>& posteriors);
/// -2 lnL + (5K - 1) ln N + EN.
double icl(double log_likelihood, int k, int n, double en);
/// EN_K / (lnL_K - lnL_1); throws std::domain_error when the denominator is 0.
double nec(double en_k, double lnl_k, double lnl_1);

struct BootstrapResult {
  int replicates = 0;
  std::vector<std::array<double, 4>> se;  // per type: alpha, beta, kappa, lambda
  std::vector<double> share_se;
  int ambiguous = 0;  // replicates whose type matching was not clear-cut
  bool label_warning = false;  // ambiguous in more than 10% of replicates
};

BootstrapResult bootstrap_se(const ChoiceData& data, const PayoffCurve& curve,
                             const MixtureFit& reference, int replicates, uint64_t seed,
                             const EmOptions& opt, const PatternLattice* lattice = nullptr);

/// Generating side of the recovery harness. Subjects are assigned to types in
/// proportion to `shares` (largest remainder), choices are drawn from the
/// choice model with each type's lambda.
std::vector<ChoiceRecord> simulate_choices(const std::vector<PreferenceParams>& types,
                                           const std::vector<double>& shares,
                                           const std::vector<BinaryGame>& games,
                                           const PayoffCurve& curve, int subjects, uint64_t seed,
                                           ChoiceModel model = ChoiceModel::ConstantError);

struct ImplicitThreshold {
  double threshold = 0.0;
  bool non_monotone = false;
};

/// Largest responder share among rejected unequal splits; input pairs are
/// (responder share, rejected).
ImplicitThreshold implicit_rejection_threshold(const std::vector<std::pair<double, bool>>& decisions);

struct PredictedBehavior {
  double dg_transfer = 0.0;
  double ug_threshold = 0.0;
};

/// DG transfer from the full triple, UG threshold from (alpha, kappa).
PredictedBehavior predict_behavior(const PreferenceParams& p, const Endowment& w = Endowment(),
                                   const PayoffCurve& curve = PayoffCurve::shifted_log());

}  // namespace moralug
