#include "moralug/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "moralug/numerics.hpp"
#include "moralug/ug_solver.hpp"

namespace moralug {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kLambdaLo = 0.01;
constexpr double kLambdaHi = 0.99;
constexpr double kLog2 = 0.69314718055994530942;

// 0, 1, or 2 when the two values tie
uint8_t predicted_action(const std::array<double, 2>& v) {
  if (v[0] > v[1] + kTieTol) return 0;
  if (v[1] > v[0] + kTieTol) return 1;
  return 2;
}

double clamp_lambda(double l) { return std::clamp(l, kLambdaLo, kLambdaHi); }

std::mt19937_64 stream(uint64_t seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double log_sum_exp(const std::vector<double>& x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

// role values per slot for one parameter point
std::vector<std::array<double, 2>> slot_values(const PreferenceParams& p, const PayoffCurve& curve,
                                               const std::vector<BinaryGame>& games) {
  std::vector<std::array<double, 2>> out;
  out.reserve(2 * games.size());
  for (const auto& g : games) {
    const auto u = strategy_utilities(p, curve, g);
    out.push_back(role_values(u, Role::P));
    out.push_back(role_values(u, Role::R));
  }
  return out;
}

double log_prob(ChoiceModel model, double lambda, const std::array<double, 2>& v, int action) {
  const double pr = model == ChoiceModel::ConstantError
                        ? choice_prob(lambda, v[action], v[1 - action])
                        : logit_choice_prob(lambda, v[action], v[1 - action]);
  return std::log(std::max(pr, std::numeric_limits<double>::min()));
}

}  // namespace

void BinaryGame::validate() const {
  for (const auto& row : cells) {
    for (const auto& c : row) {
      if (!(c.p >= 0.0 && c.r >= 0.0)) throw std::invalid_argument("game " + id + ": negative payoff");
    }
  }
  if (!(q_r_first >= 0.0 && q_r_first <= 1.0) || !(q_p_first >= 0.0 && q_p_first <= 1.0)) {
    throw std::invalid_argument("game " + id + ": belief probability outside [0, 1]");
  }
}

std::vector<BinaryGame> mini_ug_games() {
  std::vector<BinaryGame> out;
  for (int i = 0; i < 6; ++i) {
    const double p = 60.0 + 5.0 * i;
    BinaryGame g;
    g.id = "ug" + std::to_string(static_cast<int>(p)) + "_" + std::to_string(static_cast<int>(100 - p));
    g.cells[0][0] = {50.0, 50.0};
    g.cells[0][1] = {50.0, 50.0};
    g.cells[1][0] = {p, 100.0 - p};
    g.cells[1][1] = {10.0, 10.0};
    out.push_back(g);
  }
  return out;
}

std::vector<BinaryGame> recovery_games() {
  // safe payoff s in row 0; row 1 splits differ by column
  constexpr int raw[9][5] = {{63, 25, 26, 91, 70}, {47, 19, 79, 73, 90}, {60, 79, 68, 44, 87},
                             {51, 91, 70, 16, 38}, {24, 12, 46, 55, 50}, {27, 64, 34, 11, 66},
                             {58, 58, 30, 51, 62}, {57, 69, 54, 47, 97}, {51, 24, 57, 85, 94}};
  std::vector<BinaryGame> out;
  for (int i = 0; i < 9; ++i) {
    BinaryGame g;
    g.id = "rec" + std::to_string(i + 1);
    const double safe = raw[i][0];
    g.cells[0][0] = {safe, safe};
    g.cells[0][1] = {safe, safe};
    g.cells[1][0] = {static_cast<double>(raw[i][1]), static_cast<double>(raw[i][2])};
    g.cells[1][1] = {static_cast<double>(raw[i][3]), static_cast<double>(raw[i][4])};
    out.push_back(g);
  }
  return out;
}

Role parse_role(const std::string& s) {
  if (s == "P" || s == "p") return Role::P;
  if (s == "R" || s == "r") return Role::R;
  throw std::invalid_argument("role must be P or R, got '" + s + "'");
}

std::string to_string(Role r) { return r == Role::P ? "P" : "R"; }

std::string to_string(ChoiceModel m) {
  return m == ChoiceModel::ConstantError ? "constant_error" : "logit";
}

UtilityTable strategy_utilities(const PreferenceParams& p, const PayoffCurve& curve,
                                const BinaryGame& game) {
  const auto g = [&](double own, double oth) {
    const double vo = curve.value(own);
    const double vt = curve.value(oth);
    return (1.0 - p.kappa) * vo - p.alpha * std::max(vt - vo, 0.0) -
           p.beta * std::max(vo - vt, 0.0);
  };
  const std::array<double, 2> qr{game.q_r_first, 1.0 - game.q_r_first};
  const std::array<double, 2> qp{game.q_p_first, 1.0 - game.q_p_first};
  UtilityTable u{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double t = 0.0;
      for (int b2 = 0; b2 < 2; ++b2) t += 0.5 * qr[b2] * g(game.cells[a][b2].p, game.cells[a][b2].r);
      for (int a2 = 0; a2 < 2; ++a2) t += 0.5 * qp[a2] * g(game.cells[a2][b].r, game.cells[a2][b].p);
      t += p.kappa * 0.5 * (curve.value(game.cells[a][b].p) + curve.value(game.cells[a][b].r));
      u[a][b] = t;
    }
  }
  return u;
}

std::array<double, 2> role_values(const UtilityTable& u, Role role) {
  if (role == Role::P) return {std::max(u[0][0], u[0][1]), std::max(u[1][0], u[1][1])};
  return {std::max(u[0][0], u[1][0]), std::max(u[0][1], u[1][1])};
}

double choice_prob(double lambda, double u_chosen, double u_other) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const uint8_t a = predicted_action({u_chosen, u_other});
  if (a == 2) return 0.5;
  // the two actions' probabilities add to exactly 1
  return a == 0 ? 1.0 - 0.5 * lambda : 0.5 * lambda;
}

double logit_choice_prob(double lambda, double u_chosen, double u_other) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("logit scale must be nonnegative");
  const double d = u_chosen - u_other;
  if (lambda == 0.0) return d > 0.0 ? 1.0 : (d < 0.0 ? 0.0 : 0.5);
  return 1.0 / (1.0 + std::exp(-d / lambda));
}

// ---------------------------------------------------------------- data

ChoiceData::ChoiceData(const std::vector<ChoiceRecord>& records,
                       const std::vector<BinaryGame>& games)
    : games_(games) {
  if (games_.empty()) throw std::invalid_argument("no games supplied");
  std::unordered_map<std::string, size_t> game_index;
  for (size_t g = 0; g < games_.size(); ++g) {
    games_[g].validate();
    if (!game_index.emplace(games_[g].id, g).second) {
      throw std::invalid_argument("duplicate game id " + games_[g].id);
    }
  }
  std::unordered_map<std::string, size_t> subject_index;
  for (const auto& r : records) {
    const auto git = game_index.find(r.game);
    if (git == game_index.end()) throw std::invalid_argument("unknown game id " + r.game);
    if (r.action != 0 && r.action != 1) throw std::invalid_argument("action must be 0 or 1");
    auto [sit, added] = subject_index.emplace(r.subject, subject_ids_.size());
    if (added) {
      subject_ids_.push_back(r.subject);
      counts_.emplace_back(slots(), std::array<int, 2>{0, 0});
    }
    const size_t slot = 2 * git->second + (r.role == Role::R ? 1 : 0);
    ++counts_[sit->second][slot][static_cast<size_t>(r.action)];
  }
  if (subject_ids_.empty()) throw std::invalid_argument("no choice records");
}

size_t ChoiceData::decisions() const {
  size_t n = 0;
  for (const auto& s : counts_) {
    for (const auto& c : s) n += static_cast<size_t>(c[0] + c[1]);
  }
  return n;
}

ChoiceData ChoiceData::resample(const std::vector<size_t>& picks) const {
  ChoiceData d;
  d.games_ = games_;
  for (size_t n = 0; n < picks.size(); ++n) {
    d.subject_ids_.push_back(subject_ids_.at(picks[n]) + "#" + std::to_string(n));
    d.counts_.push_back(counts_.at(picks[n]));
  }
  return d;
}

// ---------------------------------------------------------------- lattice

PatternLattice::PatternLattice(const std::vector<BinaryGame>& games, const PayoffCurve& curve,
                               double step)
    : slots_(2 * games.size()), step_(step) {
  if (!(step > 0.0)) throw std::invalid_argument("lattice step must be positive");
  na_ = nb_ = static_cast<size_t>(std::llround(4.0 / step)) + 1;
  nk_ = static_cast<size_t>(std::llround(1.0 / step)) + 1;

  // utilities are affine in (alpha, beta, kappa); recover the coefficients
  const size_t ng = games.size();
  std::vector<std::array<UtilityTable, 4>> coef(ng);
  for (size_t g = 0; g < ng; ++g) {
    PreferenceParams e;
    coef[g][0] = strategy_utilities(e, curve, games[g]);
    for (int j = 1; j < 4; ++j) {
      PreferenceParams q;
      (j == 1 ? q.alpha : j == 2 ? q.beta : q.kappa) = 1.0;
      coef[g][j] = strategy_utilities(q, curve, games[g]);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) coef[g][j][a][b] -= coef[g][0][a][b];
      }
    }
  }

  std::unordered_map<std::string, uint32_t> index;
  std::vector<std::array<double, 4>> sums;  // alpha, beta, kappa, count
  point_cell_.resize(na_ * nb_ * nk_);
  std::string key(slots_, '\0');
  for (size_t ia = 0; ia < na_; ++ia) {
    const double a = -2.0 + step * static_cast<double>(ia);
    for (size_t ib = 0; ib < nb_; ++ib) {
      const double b = -2.0 + step * static_cast<double>(ib);
      for (size_t ik = 0; ik < nk_; ++ik) {
        const double k = std::min(1.0, step * static_cast<double>(ik));
        for (size_t g = 0; g < ng; ++g) {
          UtilityTable u;
          for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
              u[x][y] = coef[g][0][x][y] + a * coef[g][1][x][y] + b * coef[g][2][x][y] +
                        k * coef[g][3][x][y];
            }
          }
          key[2 * g] = static_cast<char>(predicted_action(role_values(u, Role::P)));
          key[2 * g + 1] = static_cast<char>(predicted_action(role_values(u, Role::R)));
        }
        auto [it, added] = index.emplace(key, static_cast<uint32_t>(sums.size()));
        if (added) {
          sums.push_back({0.0, 0.0, 0.0, 0.0});
          patterns_.insert(patterns_.end(), key.begin(), key.end());
        }
        auto& s = sums[it->second];
        s[0] += a;
        s[1] += b;
        s[2] += k;
        s[3] += 1.0;
        point_cell_[(ia * nb_ + ib) * nk_ + ik] = it->second;
      }
    }
  }

  // representative: lattice point nearest the cell centroid
  reps_.assign(sums.size(), PreferenceParams{});
  std::vector<double> best(sums.size(), std::numeric_limits<double>::infinity());
  for (size_t ia = 0; ia < na_; ++ia) {
    const double a = -2.0 + step * static_cast<double>(ia);
    for (size_t ib = 0; ib < nb_; ++ib) {
      const double b = -2.0 + step * static_cast<double>(ib);
      for (size_t ik = 0; ik < nk_; ++ik) {
        const double k = std::min(1.0, step * static_cast<double>(ik));
        const uint32_t c = point_cell_[(ia * nb_ + ib) * nk_ + ik];
        const auto& s = sums[c];
        const double da = a - s[0] / s[3], db = b - s[1] / s[3], dk = k - s[2] / s[3];
        const double d = da * da + db * db + dk * dk;
        if (d < best[c]) {
          best[c] = d;
          reps_[c].alpha = a;
          reps_[c].beta = b;
          reps_[c].kappa = k;
        }
      }
    }
  }
}

size_t PatternLattice::cell_of(const PreferenceParams& p) const {
  const auto idx = [&](double x, double lo, size_t n) {
    const double i = std::round((x - lo) / step_);
    return static_cast<size_t>(std::clamp(i, 0.0, static_cast<double>(n - 1)));
  };
  return point_cell_[(idx(p.alpha, -2.0, na_) * nb_ + idx(p.beta, -2.0, nb_)) * nk_ +
                     idx(p.kappa, 0.0, nk_)];
}

// ---------------------------------------------------------------- EM

double subject_log_likelihood(const PreferenceParams& p, const PayoffCurve& curve,
                              const ChoiceData& data, size_t subject, ChoiceModel model) {
  const auto vals = slot_values(p, curve, data.games());
  double ll = 0.0;
  const auto& c = data.counts().at(subject);
  for (size_t d = 0; d < vals.size(); ++d) {
    for (int a = 0; a < 2; ++a) {
      if (c[d][static_cast<size_t>(a)]) {
        ll += c[d][static_cast<size_t>(a)] * log_prob(model, p.lambda, vals[d], a);
      }
    }
  }
  return ll;
}

namespace {

struct TypeState {
  PreferenceParams p;
  size_t cell = 0;  // constant-error model only
};

// per-subject log-likelihood under a type, N x K
std::vector<std::vector<double>> type_log_likelihoods(const ChoiceData& data,
                                                      const PayoffCurve& curve,
                                                      const std::vector<TypeState>& types,
                                                      ChoiceModel model,
                                                      const PatternLattice* lattice) {
  const size_t n = data.subjects(), k = types.size(), slots = data.slots();
  std::vector<std::vector<double>> ll(n, std::vector<double>(k, 0.0));
  for (size_t t = 0; t < k; ++t) {
    if (model == ChoiceModel::ConstantError) {
      const uint8_t* pat = lattice->pattern(types[t].cell);
      const double l = types[t].p.lambda;
      const double lhit = std::log(1.0 - 0.5 * l), lmiss = std::log(0.5 * l);
      for (size_t i = 0; i < n; ++i) {
        const auto& c = data.counts()[i];
        double s = 0.0;
        for (size_t d = 0; d < slots; ++d) {
          if (pat[d] == 2) {
            s -= (c[d][0] + c[d][1]) * kLog2;
          } else {
            s += c[d][pat[d]] * lhit + c[d][1 - pat[d]] * lmiss;
          }
        }
        ll[i][t] = s;
      }
    } else {
      for (size_t i = 0; i < n; ++i) ll[i][t] = subject_log_likelihood(types[t].p, curve, data, i, model);
    }
  }
  return ll;
}

// E-step: posteriors and total log-likelihood
double e_step(const std::vector<std::vector<double>>& ll, const std::vector<double>& shares,
              std::vector<std::vector<double>>& post) {
  const size_t n = ll.size(), k = shares.size();
  post.assign(n, std::vector<double>(k, 0.0));
  double total = 0.0;
  std::vector<double> w(k);
  for (size_t i = 0; i < n; ++i) {
    for (size_t t = 0; t < k; ++t) {
      w[t] = shares[t] > 0.0 ? std::log(shares[t]) + ll[i][t] : -std::numeric_limits<double>::infinity();
    }
    const double z = log_sum_exp(w);
    total += z;
    double s = 0.0;
    for (size_t t = 0; t < k; ++t) {
      post[i][t] = std::exp(w[t] - z);
      s += post[i][t];
    }
    for (size_t t = 0; t < k; ++t) post[i][t] /= s;
  }
  return total;
}

// best lattice cell and profiled lambda for posterior weights of one type
TypeState m_step_lattice(const ChoiceData& data, const PatternLattice& lattice,
                         const std::vector<std::vector<double>>& post, size_t t,
                         const TypeState& current) {
  const size_t slots = data.slots();
  std::vector<std::array<double, 2>> w(slots, {0.0, 0.0});
  for (size_t i = 0; i < data.subjects(); ++i) {
    const double tau = post[i][t];
    if (tau == 0.0) continue;
    const auto& c = data.counts()[i];
    for (size_t d = 0; d < slots; ++d) {
      w[d][0] += tau * c[d][0];
      w[d][1] += tau * c[d][1];
    }
  }
  const auto objective = [&](size_t cell, double* lambda) {
    const uint8_t* pat = lattice.pattern(cell);
    double hit = 0.0, miss = 0.0, tie = 0.0;
    for (size_t d = 0; d < slots; ++d) {
      if (pat[d] == 2) {
        tie += w[d][0] + w[d][1];
      } else {
        hit += w[d][pat[d]];
        miss += w[d][1 - pat[d]];
      }
    }
    const double l = hit + miss > 0.0 ? clamp_lambda(2.0 * miss / (hit + miss)) : kLambdaLo;
    if (lambda) *lambda = l;
    return hit * std::log(1.0 - 0.5 * l) + miss * std::log(0.5 * l) - tie * kLog2;
  };
  TypeState best = current;
  double best_lambda = 0.0;
  double best_obj = objective(current.cell, &best_lambda);
  best.p.lambda = best_lambda;
  for (size_t c = 0; c < lattice.cells(); ++c) {
    double l = 0.0;
    const double o = objective(c, &l);
    if (o > best_obj + 1e-12) {
      best_obj = o;
      best.cell = c;
      best.p = lattice.representative(c);
      best.p.lambda = l;
    }
  }
  return best;
}

// bounded Nelder-Mead on (alpha, beta, kappa, lambda) by projection onto the box
TypeState m_step_logit(const ChoiceData& data, const PayoffCurve& curve,
                       const std::vector<std::vector<double>>& post, size_t t,
                       const TypeState& current) {
  using Vec = std::array<double, 4>;
  const auto project = [](Vec v) {
    v[0] = std::clamp(v[0], -2.0, 2.0);
    v[1] = std::clamp(v[1], -2.0, 2.0);
    v[2] = std::clamp(v[2], 0.0, 1.0);
    v[3] = clamp_lambda(v[3]);
    return v;
  };
  const auto to_params = [](const Vec& v) {
    PreferenceParams p;
    p.alpha = v[0];
    p.beta = v[1];
    p.kappa = v[2];
    p.lambda = v[3];
    return p;
  };
  const auto f = [&](const Vec& v) {
    const auto p = to_params(project(v));
    double s = 0.0;
    for (size_t i = 0; i < data.subjects(); ++i) {
      if (post[i][t] > 0.0) {
        s += post[i][t] * subject_log_likelihood(p, curve, data, i, ChoiceModel::Logit);
      }
    }
    return -s;
  };
  const Vec x0 = project({current.p.alpha, current.p.beta, current.p.kappa, current.p.lambda});
  std::array<Vec, 5> simplex;
  std::array<double, 5> fv;
  simplex[0] = x0;
  for (int j = 0; j < 4; ++j) {
    simplex[j + 1] = x0;
    simplex[j + 1][j] += (j == 3 ? 0.05 : 0.1);
  }
  for (int j = 0; j < 5; ++j) fv[j] = f(simplex[j]);
  for (int it = 0; it < 400; ++it) {
    std::array<int, 5> ord{0, 1, 2, 3, 4};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    if (fv[ord[4]] - fv[ord[0]] < 1e-10) break;
    Vec c{};
    for (int j = 0; j < 4; ++j) {
      for (int d = 0; d < 4; ++d) c[d] += simplex[ord[j]][d] / 4.0;
    }
    const auto along = [&](double s) {
      Vec v;
      for (int d = 0; d < 4; ++d) v[d] = c[d] + s * (simplex[ord[4]][d] - c[d]);
      return v;
    };
    const Vec xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[ord[0]]) {
      const Vec xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[ord[4]] = xe;
        fv[ord[4]] = fe;
      } else {
        simplex[ord[4]] = xr;
        fv[ord[4]] = fr;
      }
    } else if (fr < fv[ord[3]]) {
      simplex[ord[4]] = xr;
      fv[ord[4]] = fr;
    } else {
      const Vec xc = along(0.5);
      const double fc = f(xc);
      if (fc < fv[ord[4]]) {
        simplex[ord[4]] = xc;
        fv[ord[4]] = fc;
      } else {
        for (int j = 1; j < 5; ++j) {
          for (int d = 0; d < 4; ++d) {
            simplex[ord[j]][d] = simplex[ord[0]][d] + 0.5 * (simplex[ord[j]][d] - simplex[ord[0]][d]);
          }
          fv[ord[j]] = f(simplex[ord[j]]);
        }
      }
    }
  }
  const int best = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  TypeState out = current;
  // only move on a strict improvement so EM stays monotone
  if (fv[best] < f(x0) - 1e-12) out.p = to_params(project(simplex[best]));
  return out;
}

struct RunResult {
  std::vector<TypeState> types;
  std::vector<double> shares;
  std::vector<std::vector<double>> post;
  std::vector<double> trace;
  double lnl = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

RunResult em_run(const ChoiceData& data, const PayoffCurve& curve, const EmOptions& opt,
                 const PatternLattice* lattice, std::mt19937_64& rng) {
  const size_t k = static_cast<size_t>(opt.k);
  RunResult r;
  std::uniform_real_distribution<double> ab(-2.0, 2.0), kap(0.0, 1.0), lam(0.1, 0.4);
  r.types.resize(k);
  for (auto& t : r.types) {
    t.p.alpha = ab(rng);
    t.p.beta = ab(rng);
    t.p.kappa = kap(rng);
    t.p.lambda = lam(rng);
    if (lattice) {
      const double l = t.p.lambda;
      t.cell = lattice->cell_of(t.p);
      t.p = lattice->representative(t.cell);
      t.p.lambda = l;
    }
  }
  r.shares.assign(k, 1.0 / static_cast<double>(k));
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opt.max_iter; ++it) {
    const auto ll = type_log_likelihoods(data, curve, r.types, opt.model, lattice);
    const double lnl = e_step(ll, r.shares, r.post);
    r.trace.push_back(lnl);
    if (lnl < prev - 1e-9 * std::max(1.0, std::abs(prev))) {
      throw NumericError("EM log-likelihood decreased from " + std::to_string(prev) + " to " +
                         std::to_string(lnl));
    }
    r.lnl = lnl;
    if (std::abs(lnl - prev) < opt.tol) {
      r.converged = true;
      break;
    }
    prev = lnl;
    // M-step
    const double n = static_cast<double>(data.subjects());
    for (size_t t = 0; t < k; ++t) {
      double s = 0.0;
      for (const auto& row : r.post) s += row[t];
      r.shares[t] = s / n;
    }
    for (size_t t = 0; t < k; ++t) {
      r.types[t] = opt.model == ChoiceModel::ConstantError
                       ? m_step_lattice(data, *lattice, r.post, t, r.types[t])
                       : m_step_logit(data, curve, r.post, t, r.types[t]);
    }
  }
  return r;
}

}  // namespace

MixtureFit em_fit(const ChoiceData& data, const PayoffCurve& curve, const EmOptions& opt) {
  if (opt.model == ChoiceModel::ConstantError) {
    const PatternLattice lattice(data.games(), curve, opt.lattice_step);
    return em_fit(data, curve, opt, lattice);
  }
  // the logit path never touches the lattice
  return em_fit(data, curve, opt, PatternLattice(std::vector<BinaryGame>{}, curve, 1.0));
}

MixtureFit em_fit(const ChoiceData& data, const PayoffCurve& curve, const EmOptions& opt,
                  const PatternLattice& lattice) {
  if (opt.k < 1) throw std::invalid_argument("K must be at least 1");
  if (opt.restarts < 1) throw std::invalid_argument("need at least one restart");
  const PatternLattice* lat = opt.model == ChoiceModel::ConstantError ? &lattice : nullptr;
  if (lat && lat->slots() != data.slots()) {
    throw std::invalid_argument("lattice was built for a different game set");
  }
  RunResult best;
  for (int r = 0; r < opt.restarts; ++r) {
    auto rng = stream(opt.seed, static_cast<uint64_t>(r));
    RunResult run = em_run(data, curve, opt, lat, rng);
    if (run.lnl > best.lnl) best = std::move(run);
  }

  const size_t k = static_cast<size_t>(opt.k);
  // order types by share, largest first
  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return best.shares[a] > best.shares[b]; });

  MixtureFit fit;
  fit.k = opt.k;
  fit.model = opt.model;
  fit.subjects = data.subject_ids();
  for (size_t t : order) {
    fit.types.push_back(best.types[t].p);
    fit.shares.push_back(best.shares[t]);
  }
  fit.posteriors.assign(data.subjects(), std::vector<double>(k));
  for (size_t i = 0; i < data.subjects(); ++i) {
    for (size_t t = 0; t < k; ++t) fit.posteriors[i][t] = best.post[i][order[t]];
  }
  fit.log_likelihood = best.lnl;
  fit.trace = best.trace;
  fit.converged = best.converged;
  fit.iterations = static_cast<int>(best.trace.size());
  fit.monotone = true;
  for (size_t i = 1; i < fit.trace.size(); ++i) {
    if (fit.trace[i] < fit.trace[i - 1] - 1e-9 * std::abs(fit.trace[i - 1])) fit.monotone = false;
  }
  fit.entropy = entropy(fit.posteriors);
  const int n = static_cast<int>(data.subjects());
  fit.icl = icl(fit.log_likelihood, fit.k, n, fit.entropy);
  for (size_t t = 0; t < k; ++t) {
    if (fit.shares[t] < 1.0 / (10.0 * n)) fit.degenerate_types.push_back(static_cast<int>(t));
  }
  return fit;
}

double entropy(const std::vector<std::vector<double>>& posteriors) {
  double en = 0.0;
  for (const auto& row : posteriors) {
    for (double t : row) {
      if (t > 0.0) en -= t * std::log(t);
    }
  }
  return en;
}

double icl(double log_likelihood, int k, int n, double en) {
  if (n <= 0) throw std::invalid_argument("N must be positive");
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  return -2.0 * log_likelihood + (5.0 * k - 1.0) * std::log(static_cast<double>(n)) + en;
}

double nec(double en_k, double lnl_k, double lnl_1) {
  const double d = lnl_k - lnl_1;
  if (d == 0.0) throw std::domain_error("NEC undefined: lnL_K equals lnL_1");
  return en_k / d;
}

// ---------------------------------------------------------------- bootstrap

BootstrapResult bootstrap_se(const ChoiceData& data, const PayoffCurve& curve,
                             const MixtureFit& reference, int replicates, uint64_t seed,
                             const EmOptions& opt, const PatternLattice* lattice) {
  if (replicates < 2) throw std::invalid_argument("bootstrap needs at least 2 replicates");
  std::unique_ptr<PatternLattice> own;
  if (!lattice && opt.model == ChoiceModel::ConstantError) {
    own = std::make_unique<PatternLattice>(data.games(), curve, opt.lattice_step);
    lattice = own.get();
  }
  const size_t k = reference.types.size();
  const size_t n = data.subjects();
  const auto vec = [](const PreferenceParams& p) {
    return std::array<double, 4>{p.alpha, p.beta, p.kappa, p.lambda};
  };
  const auto dist = [&](const PreferenceParams& a, const PreferenceParams& b) {
    const auto x = vec(a), y = vec(b);
    double s = 0.0;
    for (int d = 0; d < 4; ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
    return std::sqrt(s);
  };

  std::vector<std::vector<std::array<double, 4>>> draws(k);
  std::vector<std::vector<double>> share_draws(k);
  BootstrapResult out;
  out.replicates = replicates;
  for (int b = 0; b < replicates; ++b) {
    auto rng = stream(seed, 1000003ULL + static_cast<uint64_t>(b));
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    std::vector<size_t> picks(n);
    for (auto& p : picks) p = pick(rng);
    const ChoiceData boot = data.resample(picks);
    EmOptions o = opt;
    o.k = static_cast<int>(k);
    o.seed = seed + 7919ULL * static_cast<uint64_t>(b + 1);
    const MixtureFit fit = lattice ? em_fit(boot, curve, o, *lattice) : em_fit(boot, curve, o);

    // greedy nearest-pair alignment to the reference types
    std::vector<int> match(k, -1);
    std::vector<bool> used(k, false);
    for (size_t step = 0; step < k; ++step) {
      double best = std::numeric_limits<double>::infinity();
      size_t bi = 0, bj = 0;
      for (size_t i = 0; i < k; ++i) {
        if (match[i] >= 0) continue;
        for (size_t j = 0; j < k; ++j) {
          if (used[j]) continue;
          const double d = dist(reference.types[i], fit.types[j]);
          if (d < best) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      }
      match[bi] = static_cast<int>(bj);
      used[bj] = true;
    }
    bool ambiguous = false;
    if (k > 1) {
      for (size_t i = 0; i < k; ++i) {
        std::vector<double> d;
        for (size_t j = 0; j < k; ++j) d.push_back(dist(reference.types[i], fit.types[j]));
        std::sort(d.begin(), d.end());
        if (d[1] <= 1.1 * d[0]) ambiguous = true;
      }
    }
    if (ambiguous) ++out.ambiguous;
    for (size_t i = 0; i < k; ++i) {
      draws[i].push_back(vec(fit.types[static_cast<size_t>(match[i])]));
      share_draws[i].push_back(fit.shares[static_cast<size_t>(match[i])]);
    }
  }
  const auto sd = [](const std::vector<double>& x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
  };
  for (size_t i = 0; i < k; ++i) {
    std::array<double, 4> se{};
    for (int d = 0; d < 4; ++d) {
      std::vector<double> col;
      for (const auto& v : draws[i]) col.push_back(v[static_cast<size_t>(d)]);
      se[static_cast<size_t>(d)] = sd(col);
    }
    out.se.push_back(se);
    out.share_se.push_back(sd(share_draws[i]));
  }
  out.label_warning = out.ambiguous > 0.1 * replicates;
  return out;
}

// ---------------------------------------------------------------- harness

std::vector<ChoiceRecord> simulate_choices(const std::vector<PreferenceParams>& types,
                                           const std::vector<double>& shares,
                                           const std::vector<BinaryGame>& games,
                                           const PayoffCurve& curve, int subjects, uint64_t seed,
                                           ChoiceModel model) {
  if (types.empty() || types.size() != shares.size()) {
    throw std::invalid_argument("types and shares must be non-empty and of equal length");
  }
  if (subjects < 1) throw std::invalid_argument("need at least one subject");
  const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
  // largest-remainder allocation of subjects to types
  std::vector<int> count(types.size());
  std::vector<std::pair<double, size_t>> rem;
  int assigned = 0;
  for (size_t t = 0; t < types.size(); ++t) {
    const double exact = subjects * shares[t] / total;
    count[t] = static_cast<int>(std::floor(exact));
    assigned += count[t];
    rem.emplace_back(exact - count[t], t);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t j = 0; assigned < subjects; ++j, ++assigned) ++count[rem[j % rem.size()].second];

  auto rng = stream(seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ChoiceRecord> out;
  int id = 0;
  for (size_t t = 0; t < types.size(); ++t) {
    const auto vals = slot_values(types[t], curve, games);
    for (int s = 0; s < count[t]; ++s, ++id) {
      char name[16];
      std::snprintf(name, sizeof name, "s%04d", id + 1);
      for (size_t g = 0; g < games.size(); ++g) {
        for (int role = 0; role < 2; ++role) {
          const auto& v = vals[2 * g + static_cast<size_t>(role)];
          const double p0 = model == ChoiceModel::ConstantError
                                ? choice_prob(types[t].lambda, v[0], v[1])
                                : logit_choice_prob(types[t].lambda, v[0], v[1]);
          const int action = unif(rng) < p0 ? 0 : 1;
          out.push_back(ChoiceRecord{name, games[g].id, role == 0 ? Role::P : Role::R, action});
        }
      }
    }
  }
  return out;
}

ImplicitThreshold implicit_rejection_threshold(const std::vector<std::pair<double, bool>>& decisions) {
  ImplicitThreshold out;
  for (const auto& [share, rejected] : decisions) {
    if (rejected) out.threshold = std::max(out.threshold, share);
  }
  for (const auto& [share, rejected] : decisions) {
    if (!rejected && share < out.threshold) out.non_monotone = true;
  }
  return out;
}

PredictedBehavior predict_behavior(const PreferenceParams& p, const Endowment& w,
                                   const PayoffCurve& curve) {
  PredictedBehavior out;
  out.dg_transfer = dg_transfer(p, curve, w);
  // at kappa = 1 the threshold condition reduces to a v(x) >= a v(w - x)
  out.ug_threshold = p.kappa < 1.0 ? constrained_threshold(p.kappa, p.alpha, curve, w)
                                   : (p.alpha > 0.0 ? w.half() : 0.0);
  return out;
}

}  // namespace moralug
