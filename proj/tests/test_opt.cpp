#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rllink/errors.hpp"
#include "rllink/optimize.hpp"

using namespace rllink;

namespace {

LinkEnv iid_usage_env(double rate_min, double q, int b_max, double p10 = 0.0) {
  LinkEnv env;
  env.ch = Channel{p10};
  env.usage = UsageModel{1.0 - q, q};
  env.b_max = b_max;
  env.rate_min = rate_min;
  return env;
}

// Cheap settings for simulation-backed objectives in unit tests; acceptance
// runs the full-effort versions.
OptOptions quick_opts(uint64_t seed) {
  OptOptions o;
  o.starts = 4;
  o.sim_steps = 200000;
  o.sim_burn_in = 20000;
  o.sim_reps = 2;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("tie groups expand and project") {
  RllFamily fam;
  fam.spec = RllSpec{CodeType::type0, 0, 10};
  fam.ties = {{0}, {1}, {2}, {3, 4, 5, 6, 7, 8}, {9}};
  CHECK(fam.param_count() == 5);
  CHECK_NOTHROW(fam.check());
  EdgeProbs p = fam.expand({0.1, 0.2, 0.3, 0.4, 0.5});
  REQUIRE(p.size() == 10);
  CHECK(p.probs[0] == 0.1);
  CHECK(p.probs[3] == 0.4);
  CHECK(p.probs[8] == 0.4);
  CHECK(p.probs[9] == 0.5);
  std::vector<double> back = fam.project(p);
  std::vector<double> want{0.1, 0.2, 0.3, 0.4, 0.5};
  REQUIRE(back.size() == want.size());
  // Group means accumulate in floating point; equality only up to rounding.
  for (size_t i = 0; i < want.size(); ++i)
    CHECK(back[i] == doctest::Approx(want[i]).epsilon(1e-14));

  SUBCASE("partition violations rejected") {
    RllFamily bad = fam;
    bad.ties = {{0}, {1}};
    CHECK_THROWS_AS(bad.check(), ValidationError);
    bad.ties = {{0, 0}, {1, 2, 3, 4, 5, 6, 7, 8, 9}};
    CHECK_THROWS_AS(bad.check(), ValidationError);
    bad.ties = {{0, 12}, {1, 2, 3, 4, 5, 6, 7, 8, 9}};
    CHECK_THROWS_AS(bad.check(), ValidationError);
  }
  SUBCASE("no ties means every edge is free") {
    RllFamily free;
    free.spec = RllSpec{CodeType::type0, 1, 3};
    CHECK(free.param_count() == 2);
    CHECK(free.expand({0.3, 0.7}).probs == std::vector<double>{0.3, 0.7});
  }
}

TEST_CASE("iid optimization matches the closed form") {
  for (double q : {0.2, 0.5, 0.8}) {
    for (double rate_min : {0.1, 0.5, 0.95}) {
      MinimaxPoint want = minimax_closed_form(rate_min, q, 4);
      OptResult got = optimize_iid(iid_usage_env(rate_min, q, 4));
      REQUIRE(got.feasible);
      CHECK(std::abs(got.objective - want.value) < 1e-3);
      CHECK(got.triple.rate >= rate_min - 1e-9);
      CHECK(got.source == "analytic");
    }
  }
}

TEST_CASE("iid optimization reports reachable parameters") {
  OptResult res = optimize_iid(iid_usage_env(0.3, 0.5, 4));
  REQUIRE(res.feasible);
  REQUIRE(res.params.size() == 1);
  CHECK(res.params[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(res.objective == doctest::Approx(0.05).epsilon(1e-9));
  // Re-evaluating the reported parameters reproduces the reported triple.
  EnergyTriple again = evaluate_family(iid_usage_env(0.3, 0.5, 4), IidFamily{}, res.params, {});
  CHECK(std::max(again.p_of, again.p_uf) == doctest::Approx(res.objective).epsilon(1e-9));
}

TEST_CASE("iid infeasible targets") {
  OptResult res = optimize_iid(iid_usage_env(1.0, 0.5, 2, 0.2));
  CHECK_FALSE(res.feasible);
  CHECK(res.message.find("exceed") != std::string::npos);
  CHECK(std::isnan(res.objective));
}

TEST_CASE("channel loss hurts the iid optimum") {
  LinkEnv mild;
  mild.ch = Channel{0.4};
  mild.usage = UsageModel{0.0, 0.0};
  mild.b_max = 2;
  mild.rate_min = 0.01;
  LinkEnv harsh = mild;
  harsh.ch = Channel{0.8};
  OptResult a = optimize_iid(mild);
  OptResult b = optimize_iid(harsh);
  REQUIRE(a.feasible);
  REQUIRE(b.feasible);
  CHECK(b.objective > a.objective);
}

TEST_CASE("constrained optimization on analytic objectives") {
  SUBCASE("re-evaluation consistency") {
    LinkEnv env = iid_usage_env(0.4, 0.5, 2);
    RllFamily fam;
    fam.spec = RllSpec{CodeType::type0, 0, 2};
    OptResult res = optimize_constrained(env, fam, quick_opts(3));
    REQUIRE(res.feasible);
    CHECK(res.source == "analytic");
    std::string source;
    EnergyTriple again = evaluate_family(env, fam, res.params, quick_opts(3), &source);
    CHECK(std::max(again.p_of, again.p_uf) == doctest::Approx(res.objective).epsilon(1e-9));
    CHECK(again.rate == doctest::Approx(res.triple.rate).epsilon(1e-12));
    CHECK(source == "analytic");
    CHECK(res.triple.rate >= env.rate_min - 1e-9);
  }
  SUBCASE("beats the iid code under bursty demands") {
    // Lossless link, rare bursty demands: a (0,3) code can shape its energy
    // spacing; the iid code cannot.
    LinkEnv env = iid_usage_env(0.3, 0.3, 2);
    RllFamily fam;
    fam.spec = RllSpec{CodeType::type0, 0, 3};
    OptResult rll = optimize_constrained(env, fam, quick_opts(4));
    OptResult iid = optimize_iid(env);
    REQUIRE(rll.feasible);
    REQUIRE(iid.feasible);
    CHECK(rll.objective < iid.objective);
  }
  SUBCASE("capacity gate") {
    LinkEnv env = iid_usage_env(0.95, 0.5, 2);
    RllFamily fam;
    fam.spec = RllSpec{CodeType::type0, 0, 3};
    OptResult res = optimize_constrained(env, fam, quick_opts(5));
    CHECK_FALSE(res.feasible);
    CHECK(res.message.find("0.94677") != std::string::npos);
    CHECK(res.message.find("capacity") != std::string::npos);
  }
  SUBCASE("degenerate family") {
    LinkEnv env = iid_usage_env(0.0, 0.5, 2);
    RllFamily fam;
    fam.spec = RllSpec{CodeType::type0, 1, 1};
    OptResult res = optimize_constrained(env, fam, quick_opts(6));
    REQUIRE(res.feasible);  // rate 0 meets a rate-0 target
    CHECK(res.params.empty());
    env.rate_min = 0.1;
    CHECK_FALSE(optimize_constrained(env, fam, quick_opts(6)).feasible);
  }
}

TEST_CASE("constrained optimization with a simulated objective") {
  // Alternating demands break the i.i.d.-usage assumption, so candidate
  // points are scored by common-random-number simulation.
  LinkEnv env;
  env.ch = Channel{0.0};
  env.usage = UsageModel{0.0, 0.0};
  env.b_max = 2;
  env.rate_min = 0.0;
  RllFamily fam;
  fam.spec = RllSpec{CodeType::type0, 0, 1};
  OptResult res = optimize_constrained(env, fam, quick_opts(7));
  REQUIRE(res.feasible);
  CHECK(res.source == "empirical");
  // An almost-deterministic 0101 code tracks the alternating demand; the
  // optimizer must discover an objective near zero.
  CHECK(res.objective <= 1e-3);
  CHECK(res.params[0] > 0.9);
  // Exact reproducibility: the optimizer's own evaluation used a fixed
  // derived seed, so re-evaluating returns the identical estimate.
  std::string source;
  EnergyTriple again = evaluate_family(env, fam, res.params, quick_opts(7), &source);
  CHECK(source == "empirical");
  CHECK(std::max(again.p_of, again.p_uf) == res.objective);
}

TEST_CASE("multi-start stability across optimizer seeds") {
  LinkEnv env = iid_usage_env(0.4, 0.4, 2);
  RllFamily fam;
  fam.spec = RllSpec{CodeType::type0, 0, 3};
  OptResult a = optimize_constrained(env, fam, quick_opts(100));
  OptResult b = optimize_constrained(env, fam, quick_opts(200));
  REQUIRE(a.feasible);
  REQUIRE(b.feasible);
  CHECK(std::abs(a.objective - b.objective) <= 0.05 * std::max(a.objective, b.objective));
}

TEST_CASE("sweep presets are pinned") {
  CHECK(sweep_preset_names() == std::vector<std::string>{"fig12", "fig13", "fig14"});
  CHECK_THROWS_AS(sweep_preset("fig99"), ValidationError);

  SweepSpec s12 = sweep_preset("fig12");
  CHECK(s12.axis == SweepAxis::q0);
  CHECK(s12.values.size() == 9);
  CHECK(s12.values.front() == doctest::Approx(0.1));
  CHECK(s12.values.back() == doctest::Approx(0.9));
  REQUIRE(s12.families.size() == 4);
  CHECK(s12.families[0].label == "iid");
  CHECK(s12.families[3].label == "type0-d0-k10-tied");
  CHECK(std::get<RllFamily>(s12.families[3].family).param_count() == 5);
  CHECK(s12.base.rate_min == doctest::Approx(0.1));
  CHECK(s12.base.usage.q1 == 0.0);

  SweepSpec s13 = sweep_preset("fig13");
  CHECK(s13.axis == SweepAxis::rate);
  CHECK(s13.values.size() == 7);
  CHECK(s13.values.back() == doctest::Approx(0.65));
  CHECK(s13.families.size() == 4);
  CHECK(s13.base.usage.q0 == 0.0);

  SweepSpec s14 = sweep_preset("fig14");
  CHECK(s14.axis == SweepAxis::p10);
  CHECK(s14.values.size() == 10);
  CHECK(s14.families.size() == 2);
  CHECK(s14.base.rate_min == doctest::Approx(0.01));
}

TEST_CASE("sweep rows are ordered and deterministic") {
  SweepSpec spec;
  spec.name = "unit";
  spec.axis = SweepAxis::rate;
  spec.values = {0.1, 0.3, 0.5};
  spec.base = iid_usage_env(0.0, 0.5, 2);
  spec.families.push_back({"iid", IidFamily{}});
  RllFamily fam;
  fam.spec = RllSpec{CodeType::type0, 0, 2};
  spec.families.push_back({"rll", fam});

  OptOptions opts = quick_opts(11);
  auto rows = run_sweep(spec, opts, 1);
  REQUIRE(rows.size() == 6);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].family == "iid");
    CHECK(rows[i + 3].family == "rll");
    CHECK(rows[i].axis == "R");
    CHECK(rows[i].value == doctest::Approx(spec.values[i]));
    REQUIRE(rows[i].result.feasible);
  }
  // Objectives cannot improve as the rate floor rises.
  CHECK(rows[0].result.objective <= rows[1].result.objective + 1e-9);
  CHECK(rows[1].result.objective <= rows[2].result.objective + 1e-9);

  auto few = run_sweep(spec, opts, 3);
  auto many = run_sweep(spec, opts, 8);
  REQUIRE(few.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].result.objective == few[i].result.objective);
    CHECK(rows[i].result.objective == many[i].result.objective);
    CHECK(rows[i].result.params == few[i].result.params);
  }
}

TEST_CASE("sweep survives per-point failures") {
  SweepSpec spec;
  spec.name = "unit";
  spec.axis = SweepAxis::rate;
  spec.values = {0.2, 0.8};  // 0.8 exceeds the (0,1) capacity 0.6942
  spec.base = iid_usage_env(0.0, 0.5, 2);
  RllFamily fam;
  fam.spec = RllSpec{CodeType::type0, 0, 1};
  spec.families.push_back({"rll01", fam});
  auto rows = run_sweep(spec, quick_opts(1), 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].result.feasible);
  CHECK_FALSE(rows[1].result.feasible);
  CHECK_FALSE(rows[1].result.message.empty());
}
