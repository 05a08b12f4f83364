#include <gtest/gtest.h>

#include <json.hpp>

#include "rootclose/errors.hpp"
#include "rootclose/report.hpp"
#include "rootclose/suites.hpp"

using namespace rootclose;
using nlohmann::json;

namespace {

Config quiet() {
  Config cfg;
  cfg.timestamp = false;
  return cfg;
}

const Report& example() {
  static const Report r = run_example_suite(quiet());
  return r;
}

// First object carrying a witness, depth first.
json* find_witness(json& j) {
  if (j.is_object()) {
    if (j.contains("witness_terms") && !j["witness_terms"].empty()) return &j;
    for (auto& [k, v] : j.items()) {
      if (json* w = find_witness(v)) return w;
    }
  } else if (j.is_array()) {
    for (auto& v : j) {
      if (json* w = find_witness(v)) return w;
    }
  }
  return nullptr;
}

}  // namespace

TEST(ExampleSuite, AllChecksPass) {
  const Report& r = example();
  EXPECT_TRUE(r.all_pass()) << r.to_text();
  EXPECT_GE(r.checks.size(), 6U);
}

TEST(ExampleSuite, JsonIsStableWithoutTimestamp) {
  const Report again = run_example_suite(quiet());
  EXPECT_EQ(example().to_json(), again.to_json());
  EXPECT_FALSE(json::parse(again.to_json()).contains("timestamp"));
  Config stamped = quiet();
  stamped.timestamp = true;
  Report with = again;
  with.config = stamped;
  EXPECT_TRUE(json::parse(with.to_json()).contains("timestamp"));
}

TEST(ExampleSuite, Revalidates) {
  const RevalidationResult res = revalidate(example().to_json());
  EXPECT_TRUE(res.ok()) << (res.problems.empty() ? "" : res.problems.front());
  EXPECT_EQ(res.revalidated, res.records);
  EXPECT_EQ(res.records, example().checks.size());
}

TEST(ExampleSuite, TamperedWitnessIsCaught) {
  json j = json::parse(example().to_json());
  json* cert = find_witness(j);
  ASSERT_NE(cert, nullptr);
  auto& term = (*cert)["witness_terms"][0];
  term[3] = mpz_class(mpz_class(term[3].get<std::string>()) + 1).get_str();
  EXPECT_FALSE(revalidate(j.dump()).ok());
}

TEST(ExampleSuite, PlainModeCannotDivideEta) {
  Config cfg = quiet();
  cfg.plain_e5 = true;
  const Report r = run_example_suite(cfg);
  bool e5_failed = false;
  for (const auto& c : r.checks) {
    if (c.name.rfind("E5", 0) == 0) e5_failed = c.status == CheckStatus::Fail;
  }
  EXPECT_TRUE(e5_failed);
  EXPECT_FALSE(r.all_pass());
}

TEST(ExampleSuite, SmallPrimesAreRejected) {
  Config cfg = quiet();
  cfg.p = 2;
  EXPECT_THROW(run_example_suite(cfg), DomainError);
  cfg.p = 3;
  EXPECT_THROW(run_example_suite(cfg), DomainError);
  cfg.p = 7;
  cfg.degree = 7;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Eval, ClosureMembership) {
  EvalOptions opts;
  opts.check_closure = true;
  const Report r = run_eval("(p^(3/5) + x^(3/5) + y^(3/5)) / p^(1/5)", opts);
  EXPECT_TRUE(r.all_pass()) << r.to_text();
  EXPECT_TRUE(revalidate(r.to_json()).ok());
  const Report bad = run_eval("x / p", opts);
  EXPECT_FALSE(bad.all_pass());
}

TEST(Eval, FontaineElement) {
  EvalOptions opts;
  opts.check_closure = true;
  opts.expr.closure_mode = ClosureMode::ClosureCerts;
  const Report r = run_eval("P^3 + X^3 + Y^3", opts);
  EXPECT_TRUE(r.all_pass()) << r.to_text();
}

TEST(Properties, SeedDoesNotChangeOutcomes) {
  Config a = quiet(), b = quiet();
  b.seed = 99;
  const Report ra = run_property_suites(a);
  const Report rb = run_property_suites(b);
  ASSERT_EQ(ra.checks.size(), rb.checks.size());
  for (std::size_t i = 0; i < ra.checks.size(); ++i) {
    EXPECT_EQ(ra.checks[i].status, CheckStatus::Pass) << ra.checks[i].name << ": " << ra.checks[i].summary;
    EXPECT_EQ(ra.checks[i].status, rb.checks[i].status) << ra.checks[i].name;
  }
  EXPECT_TRUE(revalidate(ra.to_json()).ok());
}

TEST(Properties, TamperedCacheFailsTheGhostCheck) {
  PropertyOptions opts;
  opts.tamper_witt_cache = true;
  const Report r = run_property_suites(quiet(), opts);
  bool ghost_failed = false;
  for (const auto& c : r.checks) {
    if (c.name.find("ghost") != std::string::npos && c.status == CheckStatus::Fail) ghost_failed = true;
  }
  EXPECT_TRUE(ghost_failed);
  EXPECT_FALSE(r.all_pass());
}
