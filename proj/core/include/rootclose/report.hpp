#pragma once

// Check records, run configuration and report rendering.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rootclose/fontaine.hpp"

namespace rootclose {

enum class CheckStatus { Pass, Fail, Undetermined };

const char* to_string(CheckStatus s);
CheckStatus from_truth(Truth t);

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string details;  // a JSON object, serialized
  std::string summary;  // one line for humans
};

enum class OutputFormat { Json, Text };

struct Config {
  std::uint32_t p = 5;
  std::uint32_t degree = 3;
  std::size_t depth = 3;
  std::size_t witt_length = 2;
  std::optional<std::uint32_t> m_max;  // defaults to depth + 2
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::Json;
  bool timestamp = true;
  bool plain_e5 = false;  // run E5 without closure certificates

  std::uint32_t effective_m_max() const {
    return m_max.value_or(static_cast<std::uint32_t>(depth + 2));
  }
  /// p prime, degree coprime to p, positive sizes. Throws DomainError.
  void validate() const;
  /// validate() plus p > 3.
  void validate_for_example() const;
};

struct Report {
  Config config;
  std::string suite;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
  /// Stable output: keys sorted, records in declaration order. The
  /// timestamp field is present only when config.timestamp is set.
  std::string to_json() const;
  std::string to_text() const;
};

struct RevalidationResult {
  std::size_t records = 0;
  std::size_t revalidated = 0;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

/// Re-checks every pass record of a JSON report from its embedded data:
/// certificates are recomputed from scratch, equalities and divisibility
/// claims re-evaluated, property checks replayed with their recorded
/// arguments.
RevalidationResult revalidate(const std::string& report_json);

}  // namespace rootclose
