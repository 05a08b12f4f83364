// rootclose: run the worked example, the property suites, evaluate
// expressions, or re-check a saved report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "rootclose/errors.hpp"
#include "rootclose/report.hpp"
#include "rootclose/suites.hpp"

using namespace rootclose;

namespace {

int emit(const Report& report) {
  std::cout << (report.config.format == OutputFormat::Json ? report.to_json() : report.to_text());
  return report.all_pass() ? 0 : 1;
}

void add_format(CLI::App* cmd, std::string& format, bool& no_timestamp) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmd->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp so output is byte-stable");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Root closure, Fontaine rings and Witt vectors: exact checks"};
  app.require_subcommand(1);

  Config cfg;
  std::string format = "json";
  bool no_timestamp = false;
  std::uint32_t mmax = 0;

  auto* example = app.add_subcommand("example", "Run the worked example (E1 to E6)");
  example->add_option("--p", cfg.p, "Prime (must exceed 3)")->capture_default_str();
  example->add_option("--degree", cfg.degree, "Degree d of the relation p^d + x^d + y^d = 0")->capture_default_str();
  example->add_option("--depth", cfg.depth, "Fontaine depth N")->capture_default_str();
  example->add_option("--witt-len", cfg.witt_length, "Witt length for E6")->capture_default_str();
  example->add_option("--mmax", mmax, "Largest certificate exponent searched (default depth + 2)");
  example->add_flag("--plain-e5", cfg.plain_e5, "Run E5 in R instead of C(R)");
  add_format(example, format, no_timestamp);

  auto* props = app.add_subcommand("props", "Run the property suites");
  props->add_option("--seed", cfg.seed, "Seed for sampled checks")->capture_default_str();
  add_format(props, format, no_timestamp);

  std::string expr;
  bool check_closure = false;
  std::string tower_mode = "quotient";
  std::string closure_mode = "plain";
  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Parse an expression and optionally decide closure membership");
  eval->add_option("expr", expr, "Expression, e.g. \"(p^(3/5)+x^(3/5)+y^(3/5))/p^(1/5)\"")->required();
  eval->add_flag("--check-closure", check_closure, "Decide membership in C(R)");
  eval->add_option("--mmax", eval_opts.m_max, "Largest certificate exponent searched")->capture_default_str();
  eval->add_option("--p", eval_opts.expr.p, "Prime")->capture_default_str();
  eval->add_option("--degree", eval_opts.expr.degree, "Degree d")->capture_default_str();
  eval->add_option("--mode", tower_mode, "Tower ring")->check(CLI::IsMember({"free", "quotient"}))->capture_default_str();
  eval->add_option("--depth", eval_opts.expr.fontaine_depth, "Depth for P, X, Y")->capture_default_str();
  eval->add_option("--closure-mode", closure_mode, "Component ring for P, X, Y")
      ->check(CLI::IsMember({"plain", "closure"}))
      ->capture_default_str();
  add_format(eval, format, no_timestamp);

  std::string report_path;
  auto* reval = app.add_subcommand("revalidate", "Re-check every pass record of a JSON report");
  reval->add_option("report", report_path, "Report file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
  cfg.timestamp = !no_timestamp;
  if (mmax > 0) cfg.m_max = mmax;

  try {
    if (*example) return emit(run_example_suite(cfg));
    if (*props) return emit(run_property_suites(cfg));
    if (*eval) {
      eval_opts.check_closure = check_closure;
      eval_opts.expr.tower_mode = tower_mode == "free" ? TowerMode::Free : TowerMode::Quotient;
      eval_opts.expr.closure_mode = closure_mode == "plain" ? ClosureMode::PlainR : ClosureMode::ClosureCerts;
      Report r = run_eval(expr, eval_opts);
      r.config.format = cfg.format;
      r.config.timestamp = cfg.timestamp;
      return emit(r);
    }
    if (*reval) {
      std::ifstream in(report_path);
      std::stringstream buf;
      buf << in.rdbuf();
      const RevalidationResult r = revalidate(buf.str());
      std::cout << r.revalidated << " of " << r.records << " records revalidated\n";
      for (const auto& p : r.problems) std::cout << "  problem: " << p << "\n";
      return r.ok() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
