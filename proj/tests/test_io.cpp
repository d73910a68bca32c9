#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "moralug/io.hpp"

using namespace moralug;
using nlohmann::json;

TEST_CASE("estimates: kept, dropped and summaries") {
  const auto e = parse_estimates(
      "id,alpha,beta,kappa\n"
      "s1,0.1,0.2,0.3\n"
      "s2,-0.5,0.0,0.9\n"
      "s3,2.5,0.0,0.1\n"
      "\n"
      "s4,0.3,-0.1,1.2\n");
  CHECK(e.read == 4);
  CHECK(e.records.size() == 2);
  CHECK(e.dropped == 2);
  CHECK(e.dropped_ids == std::vector<std::string>{"s3", "s4"});
  CHECK(e.alpha.min == doctest::Approx(-0.5));
  CHECK(e.alpha.max == doctest::Approx(0.1));
  CHECK(e.kappa.mean == doctest::Approx(0.6));
  const auto j = to_json(e);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["kept"] == 2);
}

TEST_CASE("estimates: header with a byte-order mark and CRLF endings") {
  const auto e = parse_estimates("\xEF\xBB\xBFid,alpha,beta,kappa\r\na,0,0,0\r\n");
  CHECK(e.records.size() == 1);
}

TEST_CASE("estimates: malformed input names the line") {
  const auto msg = [](const std::string& text) {
    try {
      parse_estimates(text, "f.csv");
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg("id,alpha,beta\n").find("f.csv:1") != std::string::npos);
  CHECK(msg("id,alpha,beta,kappa\na,0,0\n").find("f.csv:2") != std::string::npos);
  CHECK(msg("id,alpha,beta,kappa\na,0,x,0\n").find("not a number") != std::string::npos);
  CHECK(msg("id,alpha,beta,kappa\na,0,0,0\na,1,1,1\n").find("duplicate subject id a") != std::string::npos);
  CHECK(msg("id,alpha,beta,kappa\n").find("no data rows") != std::string::npos);
  CHECK(msg("").find("empty file") != std::string::npos);
  CHECK(msg("id,alpha,beta,kappa\na,nan,0,0\n").find("not a number") != std::string::npos);
}

TEST_CASE("summaries use interpolated quartiles") {
  const auto d = summarize({4, 1, 3, 2});
  CHECK(d.min == 1);
  CHECK(d.max == 4);
  CHECK(d.q1 == doctest::Approx(1.75));
  CHECK(d.median == doctest::Approx(2.5));
  CHECK(d.q3 == doctest::Approx(3.25));
  CHECK(d.mean == doctest::Approx(2.5));
  CHECK(d.obs == 4);
  CHECK(summarize({7}).q3 == 7);
  CHECK_THROWS(summarize({}));
}

TEST_CASE("histogram bins") {
  const auto h = histogram({0.0, 0.5, 1.0, 9.9, 10.0, 15.0}, 0.0, 10.0, 10);
  CHECK(h.counts.size() == 10);
  CHECK(h.counts[0] == 2);
  CHECK(h.counts[1] == 1);
  CHECK(h.counts[9] == 3);  // top edge and overflow land in the last bin
  CHECK_THROWS(histogram({1.0}, 1.0, 1.0));
}

TEST_CASE("predictions over estimates") {
  const std::vector<EstimateRecord> est{{"a", 0.13, 0.22, 0.26}, {"b", -0.1, -0.5, 0.1}, {"c", 0.28, -0.3, 0.19}};
  const auto p = predict_all(est);
  CHECK(p.subjects.size() == 3);
  CHECK(p.subjects[0].dg_transfer == doctest::Approx(22.16).epsilon(1e-3));
  CHECK(p.subjects[1].dg_transfer == 0.0);
  CHECK(p.subjects[1].ug_threshold == 0.0);
  CHECK(p.dg.max == doctest::Approx(p.subjects[0].dg_transfer));
  const auto q = predict_all(est, Endowment::kEstimationPoints, PayoffCurve::shifted_log(), true);
  CHECK(q.kappa_suppressed);
  // with kappa gone the threshold comes from alpha alone
  CHECK(q.subjects[2].ug_threshold < p.subjects[2].ug_threshold);
  const auto j = to_json(p);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["dg_transfer"]["mean_share"].get<double>() == doctest::Approx(p.dg.mean / 58.8));
  CHECK(predictions_csv(p).rfind("id,dg_transfer,ug_threshold\n", 0) == 0);
  CHECK_THROWS_AS(predict_all({}), ValidationError);
}

TEST_CASE("region classification counts") {
  const std::vector<EstimateRecord> est{{"a", 0.1, 0, 0.2}, {"b", 1.5, 0, 0.8}, {"c", -0.5, 0, 0.1}};
  const auto n = classify_regions(est, UgSetting::baseline());
  CHECK(n[0] + n[1] + n[2] == 3);
  CHECK(n[1] >= 1);  // (1.5, 0.8) sits in the symmetric region
}

TEST_CASE("choices: round trip and errors") {
  const std::string text = "subject_id,game_id,role,action\ns1,ug60_40,P,1\ns1,ug60_40,R,0\n";
  const auto r = parse_choices(text);
  REQUIRE(r.size() == 2);
  CHECK(r[0].role == Role::P);
  CHECK(r[0].action == 1);
  CHECK(choices_csv(r) == text);
  CHECK_THROWS_AS(parse_choices("subject_id,game_id,role,action\ns1,g,X,0\n"), ValidationError);
  CHECK_THROWS_AS(parse_choices("subject_id,game_id,role,action\ns1,g,P,2\n"), ValidationError);
  CHECK_THROWS_AS(parse_choices("subject_id,game_id,role,action\n,g,P,0\n"), ValidationError);
}

TEST_CASE("config: defaults and overrides") {
  const auto d = parse_config(json::object());
  CHECK(d.ug.w.w == 10.0);
  CHECK(d.games.size() == 6);
  const auto c = parse_config(json::parse(R"({
    "schema_version": 1,
    "endowment": 20,
    "curve": {"kind": "crra", "rho": 0.3},
    "beliefs": {"thresholds": {"kind": "uniform"}, "offers": {"kind": "beta", "a": 2, "b": 3}},
    "grids": {"map_alpha": {"lo": 0, "hi": 1, "n": 5}, "nash_step": 0.1},
    "estimation": {"k": 2, "model": "logit", "restarts": 3},
    "seed": 42})"));
  CHECK(c.ug.w.w == 20.0);
  CHECK(c.ug.thresholds.upper() == 10.0);
  CHECK(c.map_alpha.values().size() == 5);
  CHECK(c.nash_step == 0.1);
  CHECK(c.em.k == 2);
  CHECK(c.em.model == ChoiceModel::Logit);
  CHECK(c.seed == 42);
  CHECK(c.em.seed == 42);
}

TEST_CASE("config: validation failures") {
  for (const char* bad : {R"({"endowment": -1})", R"({"bogus": 1})", R"({"curve": {"kind": "quadratic"}})",
                          R"({"curve": {"kind": "crra", "rho": 1.5}})", R"({"endowment": 20})",
                          R"({"grids": {"map_kappa": {"lo": 1, "hi": 0, "n": 4}}})",
                          R"({"estimation": {"k": 0}})", R"({"estimation": {"model": "probit"}})",
                          R"({"beliefs": {"offers": {"kind": "beta", "a": -1, "b": 2}}})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(json::parse(bad)), ValidationError);
  }
}

TEST_CASE("games: JSON round trip and checks") {
  const auto gs = recovery_games();
  const auto back = parse_games(games_to_json(gs));
  REQUIRE(back.size() == gs.size());
  for (size_t i = 0; i < gs.size(); ++i) {
    CHECK(back[i].id == gs[i].id);
    CHECK(back[i].cells[1][1].r == gs[i].cells[1][1].r);
  }
  CHECK_THROWS_AS(parse_games(json::parse(R"({"games": []})")), ValidationError);
  CHECK_THROWS_AS(parse_games(json::parse(R"({"games": [{"id": "x", "cells": [[[1,1],[1,1]],[[1,-1],[1,1]]]}]})")),
                  ValidationError);
  CHECK_THROWS_AS(parse_games(json::parse(R"({"games": [{"id": "x", "cells": [[[1,1],[1,1]]]}]})")),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_games(json::parse(R"({"games": [{"id": "x", "cells": [[[1,1],[1,1]],[[1,1],[1,1]]], "beliefs": {"r_first": 2}}]})")),
      ValidationError);
}

TEST_CASE("atomic writes leave no temp file behind") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "moralug_io_test";
  fs::remove_all(dir);
  const auto path = (dir / "sub" / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  CHECK_THROWS_AS(read_file((dir / "missing").string()), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("formatting and non-finite numbers") {
  CHECK(fmt(1.0 / 3.0, 3) == "0.333");
  CHECK(fmt(-1e-12, 4) == "0.0000");
  CHECK(fmt(INFINITY) == "inf");
  CHECK(number(-INFINITY) == "-inf");
  CHECK(number(NAN) == "nan");
  CHECK(number(2.5) == 2.5);
}

TEST_CASE("nash JSON carries every bound") {
  const auto b = nash_set(0.5, 0.3, PayoffCurve::shifted_log(), Endowment(10), 0.05);
  const auto j = to_json(b, 0.5, 0.3);
  for (const char* k : {"schema_version", "tau", "x2_lower", "x1_upper", "x1_cap", "rho", "segment", "asymmetric_stub"}) {
    CHECK(j.contains(k));
  }
}

TEST_CASE("solver JSON encodes infinities as strings") {
  auto s = UgSetting::baseline();
  s.thresholds = BeliefDistribution::uniform_on_half(5);
  s.offers = s.thresholds;
  s.curve = PayoffCurve::linear();
  const auto j = to_json(solve(PreferenceParams{0.2, 0, 0.3, 0}, s));
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["alpha_bar"] == "inf");
}
