#pragma once

#include <string>
#include <vector>

#include "dlambda/checks.hpp"
#include "json.hpp"

// JSON rendering of check results, certificates and the concordance. Wall
// times are left out so that equal inputs give byte-identical output.
namespace dlambda::report {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const checks::CheckResult& r);
nlohmann::json to_json(const cert::Certificate& c);
nlohmann::json to_json(const checks::ConcordanceEntry& e);
nlohmann::json options_json(const checks::Options& o);

/// {schema_version, suite, options, summary, checks[], certificates[]}.
nlohmann::json verify_report(const std::string& suite, const checks::Options& o,
                             const std::vector<checks::CheckResult>& results,
                             const std::vector<cert::Certificate>& certificates);
nlohmann::json certify_report(const cert::Certificate& c);
nlohmann::json concordance_report(const std::vector<checks::ConcordanceEntry>& entries);

std::string param_mode_name(cert::ParamMode m);

}  // namespace dlambda::report
