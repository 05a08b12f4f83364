#include "rootclose/report.hpp"

#include <chrono>
#include <ctime>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"

namespace rootclose {

using json = nlohmann::json;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Undetermined: return "undetermined";
  }
  return "?";
}

CheckStatus from_truth(Truth t) {
  switch (t) {
    case Truth::True: return CheckStatus::Pass;
    case Truth::False: return CheckStatus::Fail;
    case Truth::Undetermined: return CheckStatus::Undetermined;
  }
  return CheckStatus::Fail;
}

void Config::validate() const {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
  if (degree == 0) throw DomainError("degree must be positive");
  if (std::gcd(degree, p) != 1) {
    throw DomainError("degree " + std::to_string(degree) + " must be coprime to p = " + std::to_string(p));
  }
  if (depth == 0) throw DomainError("depth must be positive");
  if (witt_length == 0) throw DomainError("Witt length must be positive");
  if (effective_m_max() == 0) throw DomainError("m_max must be positive");
}

void Config::validate_for_example() const {
  validate();
  if (p <= 3) throw DomainError("the example needs a prime p > 3, got " + std::to_string(p));
}

bool Report::all_pass() const {
  for (const auto& c : checks) {
    if (c.status != CheckStatus::Pass) return false;
  }
  return true;
}

namespace {

json config_json(const Config& c) {
  return {{"p", c.p},
          {"degree", c.degree},
          {"depth", c.depth},
          {"witt_length", c.witt_length},
          {"m_max", c.effective_m_max()},
          {"seed", c.seed},
          {"plain_e5", c.plain_e5}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"details", json::parse(c.details)}});
  }
  json root{{"config", config_json(config)}, {"suite", suite}, {"checks", std::move(checks_json)}};
  if (config.timestamp) root["timestamp"] = utc_now();
  return root.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << suite << ": p=" << config.p << " d=" << config.degree << " depth=" << config.depth
     << " witt_length=" << config.witt_length << " m_max=" << config.effective_m_max() << " seed=" << config.seed
     << "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    const char* tag = c.status == CheckStatus::Pass ? "PASS" : c.status == CheckStatus::Fail ? "FAIL" : "UNDET";
    os << "  " << tag << "  " << c.name;
    if (!c.summary.empty()) os << "  (" << c.summary << ")";
    os << "\n";
    if (c.status == CheckStatus::Pass) ++passed;
  }
  os << passed << "/" << checks.size() << " passed\n";
  return os.str();
}

}  // namespace rootclose
