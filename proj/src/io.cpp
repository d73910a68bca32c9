#include "moralug/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "moralug/numerics.hpp"

namespace moralug {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line) + ": ";
}

double parse_double(const std::string& s, const std::string& ctx) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(ctx + "not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ValidationError(ctx + "not a number: '" + s + "'");
  return v;
}

// rows of a CSV with the exact expected header; each row is (line number, cells)
std::vector<std::pair<int, std::vector<std::string>>> read_csv(const std::string& text,
                                                               const std::string& header,
                                                               const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int no = 0;
  bool seen_header = false;
  const size_t width = split(header).size();
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    if (!seen_header) {
      std::string h = trim(line);
      if (h.size() >= 3 && static_cast<unsigned char>(h[0]) == 0xEF) h = h.substr(3);  // BOM
      if (h != header) throw ValidationError(where(source, no) + "expected header '" + header + "'");
      seen_header = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != width) {
      throw ValidationError(where(source, no) + "expected " + std::to_string(width) + " fields, got " +
                            std::to_string(cells.size()));
    }
    rows.emplace_back(no, std::move(cells));
  }
  if (!seen_header) throw ValidationError(source + ": empty file");
  if (rows.empty()) throw ValidationError(source + ": no data rows");
  return rows;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& ctx) {
  if (!j.is_object()) throw ValidationError(ctx + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) ==
        allowed.end()) {
      throw ValidationError(ctx + ": unknown key '" + k + "'");
    }
  }
}

GridAxis parse_axis(const json& j, const GridAxis& fallback, const std::string& ctx) {
  check_keys(j, {"lo", "hi", "n"}, ctx);
  GridAxis a{get_or(j, "lo", fallback.lo), get_or(j, "hi", fallback.hi), get_or(j, "n", fallback.n)};
  if (a.n < 2 || !(a.hi > a.lo)) throw ValidationError(ctx + ": need hi > lo and n >= 2");
  return a;
}

ChoiceModel parse_model(const std::string& s) {
  if (s == "constant_error") return ChoiceModel::ConstantError;
  if (s == "logit") return ChoiceModel::Logit;
  throw ValidationError("choice model must be constant_error or logit, got '" + s + "'");
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t i = static_cast<size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

ParamSummary param_summary(const std::vector<EstimateRecord>& r, double EstimateRecord::*field) {
  std::vector<double> x;
  for (const auto& e : r) x.push_back(e.*field);
  const auto d = summarize(x);
  return ParamSummary{d.min, d.max, d.mean, d.median};
}

json summary_json(const DistSummary& d, double w) {
  json j;
  for (const auto& [k, v] : {std::pair{"min", d.min}, {"q1", d.q1}, {"median", d.median}, {"q3", d.q3},
                             {"max", d.max}, {"mean", d.mean}}) {
    j[k] = v;
    j[std::string(k) + "_share"] = v / w;
  }
  j["obs"] = d.obs;
  return j;
}

}  // namespace

// ---------------------------------------------------------------- config

PayoffCurve parse_curve(const json& j) {
  check_keys(j, {"kind", "rho"}, "curve");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear") return PayoffCurve::linear();
  if (kind == "shifted_log") return PayoffCurve::shifted_log();
  if (kind == "crra") return PayoffCurve::crra(j.at("rho").get<double>());
  throw ValidationError("curve kind must be linear, crra or shifted_log, got '" + kind + "'");
}

BeliefDistribution parse_belief(const json& j, double w) {
  check_keys(j, {"kind", "a", "b", "sample", "bin_width"}, "belief");
  const auto kind = j.at("kind").get<std::string>();
  const double upper = 0.5 * w;
  if (kind == "beta") return BeliefDistribution::scaled_beta(j.at("a").get<double>(), j.at("b").get<double>(), upper);
  if (kind == "uniform") return BeliefDistribution::uniform_on_half(upper);
  if (kind == "always_accept") return BeliefDistribution::always_accept(upper);
  if (kind == "empirical") {
    return BeliefDistribution::empirical(j.at("sample").get<std::vector<double>>(), upper,
                                         get_or(j, "bin_width", 0.0));
  }
  throw ValidationError("belief kind must be beta, uniform, always_accept or empirical, got '" + kind + "'");
}

std::vector<BinaryGame> parse_games(const json& doc) {
  const json& arr = doc.is_object() ? doc.at("games") : doc;
  if (!arr.is_array() || arr.empty()) throw ValidationError("games: expected a non-empty array");
  std::vector<BinaryGame> out;
  std::set<std::string> ids;
  for (const auto& g : arr) {
    check_keys(g, {"id", "cells", "beliefs"}, "game");
    BinaryGame b;
    b.id = g.at("id").get<std::string>();
    if (!ids.insert(b.id).second) throw ValidationError("duplicate game id " + b.id);
    const auto& c = g.at("cells");
    if (!c.is_array() || c.size() != 2) throw ValidationError("game " + b.id + ": cells must be 2x2");
    for (size_t a = 0; a < 2; ++a) {
      if (!c[a].is_array() || c[a].size() != 2) throw ValidationError("game " + b.id + ": cells must be 2x2");
      for (size_t r = 0; r < 2; ++r) {
        const auto pr = c[a][r].get<std::array<double, 2>>();
        b.cells[a][r] = {pr[0], pr[1]};
      }
    }
    if (g.contains("beliefs")) {
      check_keys(g["beliefs"], {"r_first", "p_first"}, "game " + b.id + " beliefs");
      b.q_r_first = get_or(g["beliefs"], "r_first", 0.5);
      b.q_p_first = get_or(g["beliefs"], "p_first", 0.5);
    }
    try {
      b.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    out.push_back(b);
  }
  return out;
}

json games_to_json(const std::vector<BinaryGame>& games) {
  json arr = json::array();
  for (const auto& g : games) {
    json cells = json::array();
    for (const auto& row : g.cells) {
      cells.push_back(json::array({json::array({row[0].p, row[0].r}), json::array({row[1].p, row[1].r})}));
    }
    arr.push_back({{"id", g.id}, {"cells", cells}, {"beliefs", {{"r_first", g.q_r_first}, {"p_first", g.q_p_first}}}});
  }
  return {{"schema_version", kSchemaVersion}, {"games", arr}};
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  try {
    check_keys(j, {"schema_version", "endowment", "curve", "beliefs", "grids", "estimation", "seed"}, "config");
    const double w = get_or(j, "endowment", c.ug.w.w);
    if (!(w > 0.0)) throw ValidationError("endowment must be positive");
    c.ug.w = Endowment(w);
    if (j.contains("curve")) c.ug.curve = parse_curve(j["curve"]);
    if (j.contains("beliefs")) {
      check_keys(j["beliefs"], {"thresholds", "offers"}, "beliefs");
      if (j["beliefs"].contains("thresholds")) c.ug.thresholds = parse_belief(j["beliefs"]["thresholds"], w);
      if (j["beliefs"].contains("offers")) c.ug.offers = parse_belief(j["beliefs"]["offers"], w);
    }
    if (std::abs(c.ug.thresholds.upper() - 0.5 * w) > 1e-12 || std::abs(c.ug.offers.upper() - 0.5 * w) > 1e-12) {
      throw ValidationError("beliefs must be supplied when the endowment changes");
    }
    if (j.contains("grids")) {
      const auto& g = j["grids"];
      check_keys(g, {"map_alpha", "map_kappa", "statics_kappa", "oracle_step", "nash_step"}, "grids");
      if (g.contains("map_alpha")) c.map_alpha = parse_axis(g["map_alpha"], c.map_alpha, "grids.map_alpha");
      if (g.contains("map_kappa")) c.map_kappa = parse_axis(g["map_kappa"], c.map_kappa, "grids.map_kappa");
      if (g.contains("statics_kappa")) c.statics_kappa = parse_axis(g["statics_kappa"], c.statics_kappa, "grids.statics_kappa");
      c.oracle_step = get_or(g, "oracle_step", 0.0);
      c.nash_step = get_or(g, "nash_step", 0.0);
      if (c.oracle_step < 0.0 || c.nash_step < 0.0) throw ValidationError("grid steps must be nonnegative");
    }
    if (j.contains("estimation")) {
      const auto& e = j["estimation"];
      check_keys(e, {"endowment", "curve", "games", "games_file", "k", "restarts", "tol", "max_iter", "model",
                     "lattice_step"},
                 "estimation");
      c.estimation_w = get_or(e, "endowment", c.estimation_w);
      if (!(c.estimation_w > 0.0)) throw ValidationError("estimation endowment must be positive");
      if (e.contains("curve")) c.estimation_curve = parse_curve(e["curve"]);
      if (e.contains("games")) c.games = parse_games(e["games"]);
      if (e.contains("games_file")) c.games = load_games(e["games_file"].get<std::string>());
      c.em.k = get_or(e, "k", c.em.k);
      c.em.restarts = get_or(e, "restarts", c.em.restarts);
      c.em.tol = get_or(e, "tol", c.em.tol);
      c.em.max_iter = get_or(e, "max_iter", c.em.max_iter);
      c.em.lattice_step = get_or(e, "lattice_step", c.em.lattice_step);
      if (e.contains("model")) c.em.model = parse_model(e["model"].get<std::string>());
      if (c.em.k < 1 || c.em.restarts < 1 || !(c.em.tol > 0.0) || c.em.max_iter < 1 || !(c.em.lattice_step > 0.0)) {
        throw ValidationError("estimation: k, restarts, max_iter >= 1 and tol, lattice_step > 0 required");
      }
    }
    c.seed = get_or(j, "seed", c.seed);
    c.em.seed = c.seed;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return parse_config(j);
}

std::vector<BinaryGame> load_games(const std::string& path) {
  try {
    return parse_games(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------- estimates

EstimateSet parse_estimates(const std::string& text, const std::string& source) {
  EstimateSet out;
  std::unordered_set<std::string> ids;
  for (const auto& [no, cells] : read_csv(text, "id,alpha,beta,kappa", source)) {
    const auto ctx = where(source, no);
    EstimateRecord r;
    r.id = cells[0];
    if (r.id.empty()) throw ValidationError(ctx + "empty id");
    if (!ids.insert(r.id).second) throw ValidationError(ctx + "duplicate subject id " + r.id);
    r.alpha = parse_double(cells[1], ctx);
    r.beta = parse_double(cells[2], ctx);
    r.kappa = parse_double(cells[3], ctx);
    ++out.read;
    const PreferenceParams p{r.alpha, r.beta, r.kappa, 0.0};
    if (p.in_test_box()) {
      out.records.push_back(r);
    } else {
      ++out.dropped;
      out.dropped_ids.push_back(r.id);
    }
  }
  if (!out.records.empty()) {
    out.alpha = param_summary(out.records, &EstimateRecord::alpha);
    out.beta = param_summary(out.records, &EstimateRecord::beta);
    out.kappa = param_summary(out.records, &EstimateRecord::kappa);
  }
  return out;
}

EstimateSet load_estimates(const std::string& path) { return parse_estimates(read_file(path), path); }

DistSummary summarize(std::vector<double> x) {
  if (x.empty()) throw std::invalid_argument("summary of an empty sample");
  std::sort(x.begin(), x.end());
  DistSummary d;
  d.min = x.front();
  d.max = x.back();
  d.q1 = quantile(x, 0.25);
  d.median = quantile(x, 0.5);
  d.q3 = quantile(x, 0.75);
  double s = 0.0;
  for (double v : x) s += v;
  d.mean = s / static_cast<double>(x.size());
  d.obs = static_cast<int>(x.size());
  return d;
}

Histogram histogram(const std::vector<double>& x, double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram needs hi > lo and bins >= 1");
  Histogram h{lo, hi, std::vector<int>(static_cast<size_t>(bins), 0)};
  const double width = (hi - lo) / bins;
  for (double v : x) {
    const int b = std::clamp(static_cast<int>(std::floor((v - lo) / width)), 0, bins - 1);
    ++h.counts[static_cast<size_t>(b)];
  }
  return h;
}

Predictions predict_all(const std::vector<EstimateRecord>& est, double w, const PayoffCurve& curve,
                        bool suppress_kappa) {
  if (est.empty()) throw ValidationError("no estimates to predict from");
  Predictions out;
  out.w = w;
  out.kappa_suppressed = suppress_kappa;
  const Endowment pie(w);
  std::vector<double> dg, ug;
  for (const auto& e : est) {
    const PreferenceParams p{e.alpha, e.beta, suppress_kappa ? 0.0 : e.kappa, 0.0};
    const auto b = predict_behavior(p, pie, curve);
    out.subjects.push_back({e.id, b.dg_transfer, b.ug_threshold});
    dg.push_back(b.dg_transfer);
    ug.push_back(b.ug_threshold);
  }
  out.dg = summarize(dg);
  out.ug = summarize(ug);
  out.dg_hist = histogram(dg, 0.0, pie.half());
  out.ug_hist = histogram(ug, 0.0, pie.half());
  return out;
}

std::array<int, 3> classify_regions(const std::vector<EstimateRecord>& est, const UgSetting& s) {
  std::array<int, 3> n{0, 0, 0};
  for (const auto& e : est) {
    const auto o = optimal_strategy(PreferenceParams{e.alpha, e.beta, e.kappa, 0.0}, s);
    ++n[static_cast<size_t>(o.region)];
  }
  return n;
}

// ---------------------------------------------------------------- choices

std::vector<ChoiceRecord> parse_choices(const std::string& text, const std::string& source) {
  std::vector<ChoiceRecord> out;
  for (const auto& [no, cells] : read_csv(text, "subject_id,game_id,role,action", source)) {
    const auto ctx = where(source, no);
    ChoiceRecord r;
    r.subject = cells[0];
    r.game = cells[1];
    if (r.subject.empty() || r.game.empty()) throw ValidationError(ctx + "empty subject or game id");
    try {
      r.role = parse_role(cells[2]);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(ctx + e.what());
    }
    if (cells[3] != "0" && cells[3] != "1") throw ValidationError(ctx + "action must be 0 or 1");
    r.action = cells[3] == "1";
    out.push_back(r);
  }
  return out;
}

std::vector<ChoiceRecord> load_choices(const std::string& path) { return parse_choices(read_file(path), path); }

std::string choices_csv(const std::vector<ChoiceRecord>& records) {
  std::string s = "subject_id,game_id,role,action\n";
  for (const auto& r : records) {
    s += r.subject + "," + r.game + "," + to_string(r.role) + "," + std::to_string(r.action) + "\n";
  }
  return s;
}

// ---------------------------------------------------------------- output

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string fmt(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos) s = std::string("0.") + std::string(static_cast<size_t>(digits), '0');
  return s;
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const SolverOutputs& o) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["x_s"] = o.x_s;
  j["x_tilde1"] = o.x_tilde1;
  j["x_lower2"] = o.x_lower2 ? json(*o.x_lower2) : json(nullptr);
  j["x_hat"] = o.x_hat ? json(*o.x_hat) : json(nullptr);
  j["alpha_bar"] = number(o.alpha_bar);
  j["alpha_tilde"] = number(o.alpha_tilde_of_kappa);
  j["kappa_tilde"] = o.kappa_tilde_of_alpha ? json(*o.kappa_tilde_of_alpha) : json(nullptr);
  j["kappa_tilde_never_reached"] = o.kappa_tilde_never_reached;
  j["region"] = to_string(o.optimal.region);
  j["strategy"] = {{"x1", o.optimal.strategy.x1}, {"x2", o.optimal.strategy.x2}};
  j["utility"] = o.optimal.utility;
  j["threshold_indeterminate"] = o.optimal.threshold_indeterminate;
  j["degenerate_belief"] = o.optimal.degenerate_belief;
  return j;
}

json to_json(const NashBounds& b, double kappa, double alpha) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kappa"] = kappa;
  j["alpha"] = alpha;
  j["tau"] = b.tau;
  j["x2_lower"] = b.x2_lower;
  j["x1_upper"] = b.x1_upper;
  j["x1_cap"] = b.x1_cap;
  j["rho"] = b.rho;
  j["rho_found"] = b.rho_found;
  j["segment"] = b.empty ? json(nullptr) : json::array({b.segment_lo, b.segment_hi});
  j["kind"] = to_string(b.kind);
  if (b.kind == NashSetKind::SegmentPlusAsymmetricStub) {
    json runs = json::array();
    for (const auto& [lo, hi] : b.stub.passing_x2) runs.push_back(json::array({lo, hi}));
    j["asymmetric_stub"] = {{"x1", b.stub.x1}, {"x2_runs", runs}, {"direction", b.stub.direction}};
  } else {
    j["asymmetric_stub"] = nullptr;
  }
  return j;
}

json to_json(const MixtureFit& f, const std::vector<PredictedBehavior>& predicted, const BootstrapResult* boot) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = to_string(f.model);
  j["k"] = f.k;
  j["n_subjects"] = f.subjects.size();
  j["log_likelihood"] = f.log_likelihood;
  j["entropy"] = f.entropy;
  j["icl"] = f.icl;
  j["nec"] = f.nec ? number(*f.nec) : json(nullptr);
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["monotone"] = f.monotone;
  j["trace"] = f.trace;
  j["degenerate_types"] = f.degenerate_types;
  json types = json::array();
  for (size_t t = 0; t < f.types.size(); ++t) {
    json ty = {{"alpha", f.types[t].alpha},   {"beta", f.types[t].beta},
               {"kappa", f.types[t].kappa},   {"lambda", f.types[t].lambda},
               {"share", f.shares[t]}};
    if (t < predicted.size()) {
      ty["predicted_dg_transfer"] = predicted[t].dg_transfer;
      ty["predicted_ug_threshold"] = predicted[t].ug_threshold;
    }
    if (boot && t < boot->se.size()) {
      ty["se"] = {{"alpha", boot->se[t][0]}, {"beta", boot->se[t][1]}, {"kappa", boot->se[t][2]},
                  {"lambda", boot->se[t][3]}, {"share", boot->share_se[t]}};
    }
    types.push_back(ty);
  }
  j["types"] = types;
  if (boot) {
    j["bootstrap"] = {{"replicates", boot->replicates}, {"ambiguous", boot->ambiguous},
                      {"label_warning", boot->label_warning}};
  }
  json post = json::array();
  for (size_t i = 0; i < f.posteriors.size(); ++i) {
    post.push_back({{"subject", f.subjects[i]}, {"tau", f.posteriors[i]}});
  }
  j["posteriors"] = post;
  return j;
}

json to_json(const Predictions& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["endowment"] = p.w;
  j["kappa_suppressed"] = p.kappa_suppressed;
  j["dg_transfer"] = summary_json(p.dg, p.w);
  j["ug_threshold"] = summary_json(p.ug, p.w);
  j["histogram"] = {{"lo", p.dg_hist.lo}, {"hi", p.dg_hist.hi}, {"dg_counts", p.dg_hist.counts},
                    {"ug_counts", p.ug_hist.counts}};
  json subjects = json::array();
  for (const auto& s : p.subjects) {
    subjects.push_back({{"id", s.id}, {"dg_transfer", s.dg_transfer}, {"ug_threshold", s.ug_threshold}});
  }
  j["subjects"] = subjects;
  return j;
}

json to_json(const EstimateSet& e) {
  const auto ps = [](const ParamSummary& s) {
    return json{{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"median", s.median}};
  };
  return {{"schema_version", kSchemaVersion},
          {"read", e.read},
          {"kept", e.records.size()},
          {"dropped", e.dropped},
          {"dropped_ids", e.dropped_ids},
          {"alpha", ps(e.alpha)},
          {"beta", ps(e.beta)},
          {"kappa", ps(e.kappa)}};
}

std::string region_map_csv(const RegionMap& m) {
  std::string s = "alpha,kappa,region,x1_star,x2_star\n";
  for (const auto& c : m.cells) {
    s += fmt(c.alpha) + "," + fmt(c.kappa) + "," + to_string(c.region) + "," + fmt(c.strategy.x1) + "," +
         fmt(c.strategy.x2) + "\n";
  }
  return s;
}

std::string region_curves_csv(const RegionMap& m) {
  std::string s = "curve,x,y\n";
  s += "alpha_bar,," + fmt(m.alpha_bar) + "\n";
  for (const auto& p : m.alpha_tilde) s += "alpha_tilde," + fmt(p.x) + "," + fmt(p.y) + "\n";
  for (const auto& p : m.kappa_tilde) s += "kappa_tilde," + fmt(p.x) + "," + fmt(p.y) + "\n";
  return s;
}

std::string statics_csv(const Statics& st) {
  std::string s = "kappa,x1_star,x2_star,region\n";
  for (const auto& r : st.rows) {
    s += fmt(r.kappa) + "," + fmt(r.strategy.x1) + "," + fmt(r.strategy.x2) + "," + to_string(r.region) + "\n";
  }
  return s;
}

std::string switches_csv(const Statics& st) {
  std::string s = "alpha,kappa,from,to,x1_before,x2_before,x1_after,x2_after\n";
  for (const auto& w : st.switches) {
    s += fmt(st.alpha) + "," + fmt(w.kappa) + "," + to_string(w.from) + "," + to_string(w.to) + "," +
         fmt(w.before.x1) + "," + fmt(w.before.x2) + "," + fmt(w.after.x1) + "," + fmt(w.after.x2) + "\n";
  }
  return s;
}

std::string predictions_csv(const Predictions& p) {
  std::string s = "id,dg_transfer,ug_threshold\n";
  for (const auto& r : p.subjects) s += r.id + "," + fmt(r.dg_transfer) + "," + fmt(r.ug_threshold) + "\n";
  return s;
}

std::string histogram_csv(const Predictions& p) {
  std::string s = "bin_lo,bin_hi,dg_count,ug_count\n";
  const size_t n = p.dg_hist.counts.size();
  const double width = (p.dg_hist.hi - p.dg_hist.lo) / static_cast<double>(n);
  for (size_t b = 0; b < n; ++b) {
    s += fmt(p.dg_hist.lo + width * static_cast<double>(b)) + "," +
         fmt(p.dg_hist.lo + width * static_cast<double>(b + 1)) + "," + std::to_string(p.dg_hist.counts[b]) + "," +
         std::to_string(p.ug_hist.counts[b]) + "\n";
  }
  return s;
}

std::string fit_summary_csv(const std::vector<MixtureFit>& fits,
                            const std::vector<std::vector<PredictedBehavior>>& predicted) {
  std::string s = "model,k,type,alpha,beta,kappa,lambda,share,dg_transfer,ug_threshold,lnl,en,icl,nec\n";
  for (size_t m = 0; m < fits.size(); ++m) {
    const auto& f = fits[m];
    const std::string nec = f.nec ? fmt(*f.nec, 4) : "";
    for (size_t t = 0; t < f.types.size(); ++t) {
      const auto& p = f.types[t];
      const bool has = m < predicted.size() && t < predicted[m].size();
      s += to_string(f.model) + "," + std::to_string(f.k) + "," + std::to_string(t + 1) + "," + fmt(p.alpha, 4) +
           "," + fmt(p.beta, 4) + "," + fmt(p.kappa, 4) + "," + fmt(p.lambda, 4) + "," + fmt(f.shares[t], 4) + "," +
           (has ? fmt(predicted[m][t].dg_transfer, 4) : "") + "," +
           (has ? fmt(predicted[m][t].ug_threshold, 4) : "") + "," + fmt(f.log_likelihood, 4) + "," +
           fmt(f.entropy, 4) + "," + fmt(f.icl, 4) + "," + nec + "\n";
    }
  }
  return s;
}

}  // namespace moralug
