// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rootclose/errors.hpp"
#include "rootclose/report.hpp"
#include "rootclose/suites.hpp"
#include "rootclose/witt.hpp"

using namespace rootclose;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
  void require(const CheckRecord& rec) {
    require(rec.status == CheckStatus::Pass, rec.name + ": " + rec.summary);
  }
};

bool run(const char* id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.note = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.ok && secs > budget_s) {
    out.ok = false;
    out.note = "over the " + std::to_string(static_cast<int>(budget_s)) + "s budget";
  }
  std::printf("%s %s  %s (%.2fs)%s%s\n", id, out.ok ? "PASS" : "FAIL", title, secs, out.note.empty() ? "" : ": ",
              out.note.c_str());
  std::fflush(stdout);
  return out.ok;
}

const CheckRecord* find(const Report& r, const std::string& prefix) {
  for (const auto& c : r.checks) {
    if (c.name.rfind(prefix, 0) == 0) return &c;
  }
  return nullptr;
}

}  // namespace

int main() {
  bool all = true;

  all &= run("AC1", "binomial valuation lemma, exhaustive", 10, [](Outcome& o) {
    o.require(check_binomial_lemma(2, 5));
    o.require(check_binomial_lemma(3, 5));
    o.require(check_binomial_lemma(5, 4));
  });

  all &= run("AC2", "closure of sums within the exponent bound, p=2", 30, [](Outcome& o) {
    const CheckRecord rec = check_closure_bound(2, 100, 1);
    o.require(rec);
    const json d = json::parse(rec.details);
    o.require(d["pairs"].get<std::size_t>() >= 100, "fewer than 100 certified pairs");
    // n = k = 1 gives 2kp^n + n + 1 = 6; every sum should also land well under 5.
    for (const auto& [m, count] : d["m_histogram"].items()) o.require(std::stoul(m) <= 5, "sum needed m = " + m);
  });

  all &= run("AC3", "Witt polynomials against ghost components", 60, [](Outcome& o) {
    for (auto [p, n] : {std::pair{2U, std::size_t{3}}, {3U, 3}, {5U, 2}}) {
      o.require(check_witt_ghost(p, n, 200, 1));
      o.require(check_witt_additive_order(p, n));
    }
  });

  all &= run("AC4", "worked example p=5, d=3", 120, [](Outcome& o) {
    Config cfg;
    cfg.timestamp = false;
    const Report r = run_example_suite(cfg);
    for (const auto& c : r.checks) o.require(c);

    const CheckRecord* e2 = find(r, "E2");
    o.require(e2 && json::parse(e2->details)["r0"]["terms"].empty(), "bar_u(eta) is not exactly zero");

    const CheckRecord* e3 = find(r, "E3");
    if (e3) {
      const json d = json::parse(e3->details);
      o.require(d["index"] == 1, "E3 stopped at the wrong component");
      o.require(d["negative_certificate"]["divides"] == false, "E3 negative certificate disagrees");
    } else {
      o.require(false, "E3 missing");
    }

    for (std::uint32_t n = 1; n <= 2; ++n) {
      const CheckRecord* e4 = find(r, "E4 c_" + std::to_string(n));
      o.require(e4 && json::parse(e4->details)["m"] == n, "c_" + std::to_string(n) + " has the wrong exponent");
    }

    const CheckRecord* e5 = find(r, "E5");
    o.require(e5 && e5->status == CheckStatus::Pass, "E5 not decided at m_max = 5");

    const RevalidationResult rv = revalidate(r.to_json());
    o.require(rv.ok() && rv.revalidated == rv.records, rv.problems.empty() ? "revalidation incomplete" : rv.problems[0]);
  });

  all &= run("AC5", "(P - p) w roundtrips", 120, [](Outcome& o) {
    o.require(check_theorem_roundtrip(5, 3, 2, 4, 20, 1));
    o.require(check_theorem_roundtrip(2, 3, 3, 6, 20, 1));
    o.require(check_theorem_roundtrip(3, 2, 3, 6, 20, 1));
  });

  all &= run("AC6", "tau(eta) over R is not a multiple of P - p", 10, [](Outcome& o) {
    o.require(check_tau_eta_negative(5, 3, 3, 2));
    const TowerCtx family(5, 0, 3, TowerMode::Quotient);
    const WittCtx ctx(5, 2);
    const FontaineWitt x = teichmuller(ctx, example_eta(family, 3, ClosureMode::PlainR));
    const WittDivisionResult res = divide_by_P_minus_p(x, 1);
    o.require(res.status == WittDivisionResult::Status::NotDivisible, "division did not report not_divisible");
    o.require(res.step == 0 && res.failure && res.failure->index == 1, "failure not at the first step, component 1");
  });

  return all ? 0 : 1;
}
