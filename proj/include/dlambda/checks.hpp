#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dlambda/certifier.hpp"

// Registered identity checks, grouped in suites, and the comparison of every
// transcribed display against the engine.
namespace dlambda::checks {

enum class Status { Pass, Fail, MismatchReported };
std::string status_name(Status s);

struct CheckResult {
  std::string id;
  Status status = Status::Pass;
  /// Witness or residual for anything but a plain pass.
  std::string details;
  double seconds = 0;
};

struct Options {
  cert::ParamMode mode = cert::ParamMode::Symbolic;
  long grid = 4;
  unsigned nilpotency_limit = 12;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// cdv vectorfields d0 twists casimir cases conics.
const std::vector<std::string>& suite_names();
/// "all" selects every suite. Throws PreconditionError for unknown names.
std::vector<std::string> check_ids(std::string_view suite);
/// Results sorted by id whatever the completion order.
std::vector<CheckResult> run_suite(std::string_view suite, const Options& opts = {});
bool any_failed(const std::vector<CheckResult>& results);

struct ConcordanceEntry {
  std::string id;
  std::string what;
  std::string display;
  std::string engine;
  Status status = Status::Pass;
  /// engine - display, when they differ.
  std::string residual;
};

/// Display ids whose disagreement with the engine is a known misprint.
const std::vector<std::string>& known_mismatches();
ConcordanceEntry compare_display(std::string_view id, std::uint64_t seed = 1);
std::vector<ConcordanceEntry> concordance(std::uint64_t seed = 1);

/// Certificates for every lambda in [0, grid]^2.
std::vector<cert::Certificate> grid_certificates(long grid, cert::ParamMode mode);

}  // namespace dlambda::checks
