#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "moralug/io.hpp"
#include "moralug/numerics.hpp"

using namespace moralug;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::string format = "json";
};

// primary outputs keyed by file name; printed to stdout when --out is absent
class Sink {
 public:
  explicit Sink(const Globals& g) : g_(g) {}
  void emit(const std::string& name, const std::string& content) {
    if (g_.out.empty()) {
      std::cout << content;
      if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
      write_file_atomic((std::filesystem::path(g_.out) / name).string(), content);
    }
  }
  void emit_json(const std::string& stem, const json& j) { emit(stem + ".json", j.dump(2) + "\n"); }
  bool csv() const { return g_.format == "csv"; }

 private:
  const Globals& g_;
};

std::string kv_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string h, v;
  for (size_t i = 0; i < rows.size(); ++i) {
    h += (i ? "," : "") + rows[i].first;
    v += (i ? "," : "") + rows[i].second;
  }
  return h + "\n" + v + "\n";
}

std::string opt_fmt(const std::optional<double>& x) { return x ? fmt(*x) : ""; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference-model solver, equilibrium checker and mixture estimator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory; stdout when omitted");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  double alpha = 0.0, beta = 0.0, kappa = 0.0, step = 0.0;

  auto* solve = app.add_subcommand("solve", "Optimal ultimatum strategy and region objects");
  solve->add_option("--alpha", alpha)->required();
  solve->add_option("--kappa", kappa)->required();

  auto* dg = app.add_subcommand("dg", "Optimal dictator transfer");
  dg->add_option("--alpha", alpha)->required();
  dg->add_option("--beta", beta)->required();
  dg->add_option("--kappa", kappa)->required();

  auto* rmap = app.add_subcommand("region-map", "Region label on the (alpha, kappa) grid");

  auto* statics = app.add_subcommand("statics", "Optimal strategy along kappa at fixed alpha");
  statics->add_option("--alpha", alpha)->required();

  auto* nash = app.add_subcommand("nash", "Symmetric equilibrium set");
  nash->add_option("--alpha", alpha)->required();
  nash->add_option("--kappa", kappa)->required();
  nash->add_option("--step", step, "Deviation grid step (default w/400)");

  std::string estimates_path;
  bool suppress_kappa = false;
  auto* predict = app.add_subcommand("predict", "Predicted transfers and thresholds from individual estimates");
  predict->add_option("--estimates", estimates_path, "CSV id,alpha,beta,kappa")->required()->check(CLI::ExistingFile);
  predict->add_flag("--no-kappa", suppress_kappa, "Set kappa to 0 before predicting");
  bool classify = false;
  predict->add_flag("--regions", classify, "Also classify (alpha, kappa) into regions under the UG setting");

  std::string choices_path, games_path, model;
  int k = 0, k_max = 0, boot = 0;
  auto* estimate = app.add_subcommand("estimate", "Finite-mixture EM on binary-choice data");
  estimate->add_option("--choices", choices_path, "CSV subject_id,game_id,role,action")->required()->check(CLI::ExistingFile);
  estimate->add_option("--games", games_path, "Games JSON (default: config or mini-UG set)")->check(CLI::ExistingFile);
  estimate->add_option("--k", k, "Number of types");
  estimate->add_option("--k-max", k_max, "Fit K = 1..k-max and report ICL/NEC for each");
  estimate->add_option("--bootstrap", boot, "Bootstrap replicates for standard errors");
  estimate->add_option("--model", model, "Choice model")->check(CLI::IsMember({"constant_error", "logit"}));

  double lnl = 0.0, en = 0.0;
  int n = 0;
  std::optional<double> lnl1;
  auto* metrics = app.add_subcommand("metrics", "ICL and NEC from lnL, EN and N");
  metrics->add_option("--lnl", lnl)->required();
  metrics->add_option("--k", k)->required();
  metrics->add_option("--n", n)->required();
  metrics->add_option("--en", en)->required();
  metrics->add_option("--lnl1", lnl1, "One-type lnL, enables NEC");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the solver against brute-force grid search");
  oracle->add_option("--alpha", alpha)->required();
  oracle->add_option("--kappa", kappa)->required();
  oracle->add_option("--step", step, "Grid step (default w/400)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
    if (g.seed) {
      cfg.seed = *g.seed;
      cfg.em.seed = *g.seed;
    }
    Sink sink(g);
    const auto& s = cfg.ug;
    const double w = s.w.w;

    if (*solve) {
      const auto o = moralug::solve(PreferenceParams{alpha, 0.0, kappa, 0.0}, s);
      if (sink.csv()) {
        sink.emit("solve.csv",
                  kv_csv({{"alpha", fmt(alpha)},
                          {"kappa", fmt(kappa)},
                          {"region", to_string(o.optimal.region)},
                          {"x1_star", fmt(o.optimal.strategy.x1)},
                          {"x2_star", fmt(o.optimal.strategy.x2)},
                          {"utility", fmt(o.optimal.utility)},
                          {"x_s", fmt(o.x_s)},
                          {"x_tilde1", fmt(o.x_tilde1)},
                          {"x_lower2", opt_fmt(o.x_lower2)},
                          {"x_hat", opt_fmt(o.x_hat)},
                          {"alpha_bar", fmt(o.alpha_bar)},
                          {"alpha_tilde", fmt(o.alpha_tilde_of_kappa)},
                          {"kappa_tilde", opt_fmt(o.kappa_tilde_of_alpha)}}));
      } else {
        json j = to_json(o);
        j["alpha"] = alpha;
        j["kappa"] = kappa;
        sink.emit_json("solve", j);
      }
    } else if (*dg) {
      const Endowment pie(cfg.estimation_w);
      const PreferenceParams p{alpha, beta, kappa, 0.0};
      const double x = dg_transfer(p, cfg.estimation_curve, pie);
      if (sink.csv()) {
        sink.emit("dg.csv", kv_csv({{"alpha", fmt(alpha)}, {"beta", fmt(beta)}, {"kappa", fmt(kappa)},
                                    {"endowment", fmt(pie.w)}, {"transfer", fmt(x)}, {"share", fmt(x / pie.w)}}));
      } else {
        sink.emit_json("dg", {{"schema_version", kSchemaVersion}, {"alpha", alpha}, {"beta", beta}, {"kappa", kappa},
                              {"endowment", pie.w}, {"curve", cfg.estimation_curve.describe()},
                              {"transfer", x}, {"share", x / pie.w}});
      }
    } else if (*rmap) {
      const auto m = region_map(cfg.map_alpha.values(), cfg.map_kappa.values(), s);
      if (sink.csv()) {
        sink.emit("region_map.csv", region_map_csv(m));
        if (!g.out.empty()) sink.emit("region_curves.csv", region_curves_csv(m));
      } else {
        json cells = json::array();
        for (const auto& c : m.cells) {
          cells.push_back({{"alpha", c.alpha}, {"kappa", c.kappa}, {"region", to_string(c.region)},
                           {"x1_star", c.strategy.x1}, {"x2_star", c.strategy.x2}});
        }
        json at = json::array(), kt = json::array();
        for (const auto& p : m.alpha_tilde) at.push_back({p.x, number(p.y)});
        for (const auto& p : m.kappa_tilde) kt.push_back({p.x, p.y});
        sink.emit_json("region_map",
                       {{"schema_version", kSchemaVersion},
                        {"counts", {{"R1", m.count(Region::R1)}, {"R2", m.count(Region::R2)}, {"R3", m.count(Region::R3)}}},
                        {"alpha_bar", number(m.alpha_bar)},
                        {"alpha_tilde", at},
                        {"kappa_tilde", kt},
                        {"cells", cells}});
      }
    } else if (*statics) {
      const auto st = comparative_statics(alpha, cfg.statics_kappa.values(), s);
      if (sink.csv()) {
        sink.emit("statics.csv", statics_csv(st));
        if (!g.out.empty()) sink.emit("switches.csv", switches_csv(st));
      } else {
        json rows = json::array(), sw = json::array();
        for (const auto& r : st.rows) {
          rows.push_back({{"kappa", r.kappa}, {"x1_star", r.strategy.x1}, {"x2_star", r.strategy.x2},
                          {"region", to_string(r.region)}});
        }
        for (const auto& x : st.switches) {
          sw.push_back({{"kappa", x.kappa}, {"from", to_string(x.from)}, {"to", to_string(x.to)},
                        {"before", {x.before.x1, x.before.x2}}, {"after", {x.after.x1, x.after.x2}}});
        }
        sink.emit_json("statics", {{"schema_version", kSchemaVersion}, {"alpha", alpha}, {"rows", rows}, {"switches", sw}});
      }
    } else if (*nash) {
      const double st = step > 0.0 ? step : (cfg.nash_step > 0.0 ? cfg.nash_step : w / 400.0);
      const auto b = nash_set(kappa, alpha, s.curve, s.w, st);
      if (sink.csv()) {
        sink.emit("nash.csv", kv_csv({{"kappa", fmt(kappa)}, {"alpha", fmt(alpha)}, {"tau", fmt(b.tau)},
                                      {"x2_lower", fmt(b.x2_lower)}, {"x1_upper", fmt(b.x1_upper)},
                                      {"rho", fmt(b.rho)}, {"segment_lo", b.empty ? "" : fmt(b.segment_lo)},
                                      {"segment_hi", b.empty ? "" : fmt(b.segment_hi)}, {"kind", to_string(b.kind)},
                                      {"stub_direction", b.kind == NashSetKind::SegmentPlusAsymmetricStub ? b.stub.direction : ""}}));
      } else {
        json j = to_json(b, kappa, alpha);
        j["grid_step"] = st;
        sink.emit_json("nash", j);
      }
    } else if (*predict) {
      const auto est = load_estimates(estimates_path);
      const auto p = predict_all(est.records, cfg.estimation_w, cfg.estimation_curve, suppress_kappa);
      if (sink.csv()) {
        sink.emit("predictions.csv", predictions_csv(p));
        if (!g.out.empty()) sink.emit("histograms.csv", histogram_csv(p));
      } else {
        json j = to_json(p);
        j["filter"] = to_json(est);
        if (classify) {
          const auto r = classify_regions(est.records, s);
          j["regions"] = {{"R1", r[0]}, {"R2", r[1]}, {"R3", r[2]}};
        }
        sink.emit_json("predictions", j);
      }
    } else if (*estimate) {
      const auto games = games_path.empty() ? cfg.games : load_games(games_path);
      const ChoiceData data(load_choices(choices_path), games);
      EmOptions opt = cfg.em;
      if (!model.empty()) opt.model = model == "logit" ? ChoiceModel::Logit : ChoiceModel::ConstantError;
      if (k > 0) opt.k = k;
      std::optional<PatternLattice> lattice;
      if (opt.model == ChoiceModel::ConstantError) lattice.emplace(games, cfg.estimation_curve, opt.lattice_step);
      const auto fit_k = [&](int kk) {
        EmOptions o = opt;
        o.k = kk;
        return lattice ? em_fit(data, cfg.estimation_curve, o, *lattice) : em_fit(data, cfg.estimation_curve, o);
      };
      const Endowment pie(cfg.estimation_w);
      const auto predicted = [&](const MixtureFit& f) {
        std::vector<PredictedBehavior> out;
        for (const auto& t : f.types) out.push_back(predict_behavior(t, pie, cfg.estimation_curve));
        return out;
      };
      std::vector<MixtureFit> fits;
      if (k_max > 0) {
        for (int kk = 1; kk <= k_max; ++kk) fits.push_back(fit_k(kk));
        for (size_t i = 1; i < fits.size(); ++i) {
          if (fits[i].log_likelihood != fits[0].log_likelihood) {
            fits[i].nec = nec(fits[i].entropy, fits[i].log_likelihood, fits[0].log_likelihood);
          }
        }
      } else {
        fits.push_back(fit_k(opt.k));
      }
      std::vector<std::vector<PredictedBehavior>> preds;
      for (const auto& f : fits) preds.push_back(predicted(f));
      std::optional<BootstrapResult> bs;
      if (boot > 0) {
        const auto& ref = fits.back();
        EmOptions o = opt;
        o.k = ref.k;
        bs = bootstrap_se(data, cfg.estimation_curve, ref, boot, cfg.seed, o, lattice ? &*lattice : nullptr);
        if (bs->label_warning) std::cerr << "warning: type labels ambiguous in " << bs->ambiguous << " of " << boot << " bootstrap replicates\n";
      }
      if (sink.csv()) {
        sink.emit("fit_summary.csv", fit_summary_csv(fits, preds));
      } else {
        json arr = json::array();
        for (size_t i = 0; i < fits.size(); ++i) {
          arr.push_back(to_json(fits[i], preds[i], (bs && i + 1 == fits.size()) ? &*bs : nullptr));
        }
        sink.emit_json("fit", {{"schema_version", kSchemaVersion}, {"seed", cfg.seed},
                               {"choice_model", to_string(opt.model)}, {"games", games_to_json(games)["games"]},
                               {"fits", arr}});
        if (!g.out.empty()) sink.emit("fit_summary.csv", fit_summary_csv(fits, preds));
      }
    } else if (*metrics) {
      const double v = icl(lnl, k, n, en);
      std::optional<double> nv;
      if (lnl1) nv = nec(en, lnl, *lnl1);
      if (sink.csv()) {
        sink.emit("metrics.csv", kv_csv({{"lnl", fmt(lnl, 4)}, {"k", std::to_string(k)}, {"n", std::to_string(n)},
                                         {"en", fmt(en, 4)}, {"icl", fmt(v, 4)}, {"nec", nv ? fmt(*nv, 4) : ""}}));
      } else {
        sink.emit_json("metrics", {{"schema_version", kSchemaVersion}, {"lnl", lnl}, {"k", k}, {"n", n}, {"en", en},
                                   {"parameters", 5 * k - 1}, {"icl", v}, {"nec", nv ? json(*nv) : json(nullptr)}});
      }
    } else if (*oracle) {
      const double st = step > 0.0 ? step : (cfg.oracle_step > 0.0 ? cfg.oracle_step : w / 400.0);
      const PreferenceParams p{alpha, 0.0, kappa, 0.0};
      const auto o = optimal_strategy(p, s);
      const auto grid = brute_force_ug(p, s.curve, s.thresholds, s.offers, s.w, GridSpec::square(st));
      const double gap = o.utility - grid.utility;
      const bool ok = gap >= -1e-6;
      if (sink.csv()) {
        sink.emit("oracle_check.csv",
                  kv_csv({{"alpha", fmt(alpha)}, {"kappa", fmt(kappa)}, {"solver_x1", fmt(o.strategy.x1)},
                          {"solver_x2", fmt(o.strategy.x2)}, {"solver_utility", fmt(o.utility, 10)},
                          {"grid_x1", fmt(grid.strategy.x1)}, {"grid_x2", fmt(grid.strategy.x2)},
                          {"grid_utility", fmt(grid.utility, 10)}, {"gap", fmt(gap, 10)}, {"pass", ok ? "1" : "0"}}));
      } else {
        sink.emit_json("oracle_check",
                       {{"schema_version", kSchemaVersion}, {"alpha", alpha}, {"kappa", kappa}, {"grid_step", st},
                        {"solver", {{"x1", o.strategy.x1}, {"x2", o.strategy.x2}, {"utility", o.utility},
                                    {"region", to_string(o.region)}}},
                        {"grid", {{"x1", grid.strategy.x1}, {"x2", grid.strategy.x2}, {"utility", grid.utility},
                                  {"unique", grid.unique}}},
                        {"gap", gap}, {"pass", ok}});
      }
      if (!ok) return 3;
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
