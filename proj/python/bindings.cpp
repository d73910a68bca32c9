#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moralug/io.hpp"
#include "moralug/numerics.hpp"

namespace py = pybind11;
using namespace moralug;

namespace {

// results cross the boundary as the same JSON documents the CLI writes
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

RunConfig config_from(const std::string& text) {
  return text.empty() ? RunConfig{} : parse_config(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_moralug, m) {
  m.doc() = "Ultimatum and dictator game solver with universalization and inequity aversion";
  m.attr("SCHEMA_VERSION") = kSchemaVersion;
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "solve",
      [](double alpha, double kappa, const std::string& config) {
        const auto c = config_from(config);
        return to_py(to_json(solve(PreferenceParams{alpha, 0.0, kappa, 0.0}, c.ug)));
      },
      py::arg("alpha"), py::arg("kappa"), py::arg("config") = "",
      "Optimal UG strategy and the threshold objects for one (alpha, kappa). `config` is a JSON string.");

  m.def(
      "dg_transfer",
      [](double alpha, double beta, double kappa, double w) {
        return dg_transfer(PreferenceParams{alpha, beta, kappa, 0.0}, PayoffCurve::shifted_log(), Endowment(w));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("kappa"), py::arg("w") = Endowment::kEstimationPoints);

  m.def(
      "predict_behavior",
      [](double alpha, double beta, double kappa, double w) {
        const auto b = predict_behavior(PreferenceParams{alpha, beta, kappa, 0.0}, Endowment(w));
        return py::make_tuple(b.dg_transfer, b.ug_threshold);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("kappa"), py::arg("w") = Endowment::kEstimationPoints,
      "(DG transfer, UG rejection threshold) under the log payoff curve.");

  m.def(
      "nash_set",
      [](double kappa, double alpha, double step, const std::string& config) {
        const auto c = config_from(config);
        return to_py(to_json(nash_set(kappa, alpha, c.ug.curve, c.ug.w, step), kappa, alpha));
      },
      py::arg("kappa"), py::arg("alpha"), py::arg("step") = 0.0, py::arg("config") = "");

  m.def("icl", &icl, py::arg("log_likelihood"), py::arg("k"), py::arg("n"), py::arg("entropy"));
  m.def("nec", &nec, py::arg("entropy_k"), py::arg("lnl_k"), py::arg("lnl_1"));

  m.def(
      "estimate",
      [](const std::string& choices_csv, int k, uint64_t seed, const std::string& games) {
        const auto gs = games == "mini" ? mini_ug_games() : recovery_games();
        const ChoiceData data(parse_choices(choices_csv), gs);
        EmOptions o;
        o.k = k;
        o.seed = seed;
        const auto fit = em_fit(data, PayoffCurve::shifted_log(), o);
        std::vector<PredictedBehavior> pred;
        for (const auto& t : fit.types) pred.push_back(predict_behavior(t));
        return to_py(to_json(fit, pred));
      },
      py::arg("choices_csv"), py::arg("k") = 1, py::arg("seed") = 1, py::arg("games") = "recovery",
      "Fit a K-type mixture to choices given as CSV text with header subject_id,game_id,role,action.");

  m.def(
      "simulate_choices",
      [](const std::vector<std::array<double, 4>>& types, const std::vector<double>& shares, int subjects,
         uint64_t seed, const std::string& games) {
        std::vector<PreferenceParams> ps;
        for (const auto& t : types) ps.push_back(PreferenceParams{t[0], t[1], t[2], t[3]});
        const auto gs = games == "mini" ? mini_ug_games() : recovery_games();
        return choices_csv(simulate_choices(ps, shares, gs, PayoffCurve::shifted_log(), subjects, seed));
      },
      py::arg("types"), py::arg("shares"), py::arg("subjects"), py::arg("seed") = 1, py::arg("games") = "recovery",
      "Choices CSV drawn from (alpha, beta, kappa, lambda) types.");
}
