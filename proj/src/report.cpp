#include "dlambda/report.hpp"

namespace dlambda::report {

using nlohmann::json;

namespace {

json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

}  // namespace

std::string param_mode_name(cert::ParamMode m) { return m == cert::ParamMode::Symbolic ? "symbolic" : "sampled"; }

json to_json(const checks::CheckResult& r) {
  return {{"id", r.id}, {"status", checks::status_name(r.status)}, {"details", r.details}};
}

json to_json(const cert::Certificate& c) {
  json support = json::array();
  for (const auto& p : c.support) support.push_back({{"m1", p.m1}, {"m2", p.m2}, {"nu1", p.nu1}, {"nu2", p.nu2}});
  json edges = json::array();
  for (const auto& e : c.edges)
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"case", cert::case_label(e.label)},
                     {"scalar_num", integer(e.scalar.get_num())},
                     {"scalar_den", integer(e.scalar.get_den())},
                     {"closed_form", cert::closed_form_text(e.label)}});
  json paths = json::array();
  for (const auto& p : c.paths) paths.push_back({{"from", p.from}, {"to", p.to}, {"edges", p.edges}});
  return {{"lambda", {c.l1, c.l2}},
          {"support", support},
          {"edges", edges},
          {"basepoint", c.basepoint ? json(*c.basepoint) : json(nullptr)},
          {"paths", paths},
          {"unreachable", c.unreachable},
          {"status", c.status()},
          {"param_mode", param_mode_name(c.mode)},
          {"module_dimension", cert::module_dimension(c.l1, c.l2)}};
}

json to_json(const checks::ConcordanceEntry& e) {
  return {{"id", e.id},         {"what", e.what},
          {"display", e.display}, {"engine", e.engine},
          {"status", checks::status_name(e.status)}, {"residual", e.residual}};
}

json options_json(const checks::Options& o) {
  return {{"param_mode", param_mode_name(o.mode)},
          {"grid", o.grid},
          {"nilpotency_limit", o.nilpotency_limit},
          {"seed", o.seed}};
}

json verify_report(const std::string& suite, const checks::Options& o, const std::vector<checks::CheckResult>& results,
                   const std::vector<cert::Certificate>& certificates) {
  json checks = json::array();
  long pass = 0, fail = 0, mismatch = 0;
  for (const auto& r : results) {
    checks.push_back(to_json(r));
    (r.status == checks::Status::Pass ? pass : r.status == checks::Status::Fail ? fail : mismatch)++;
  }
  json certs = json::array();
  for (const auto& c : certificates) certs.push_back(to_json(c));
  return {{"schema_version", kSchemaVersion},
          {"suite", suite},
          {"options", options_json(o)},
          {"summary", {{"pass", pass}, {"fail", fail}, {"mismatch_reported", mismatch}}},
          {"checks", checks},
          {"certificates", certs}};
}

json certify_report(const cert::Certificate& c) {
  return {{"schema_version", kSchemaVersion}, {"checks", json::array()}, {"certificates", {to_json(c)}}};
}

json concordance_report(const std::vector<checks::ConcordanceEntry>& entries) {
  json list = json::array();
  for (const auto& e : entries) list.push_back(to_json(e));
  return {{"schema_version", kSchemaVersion}, {"concordance", list}};
}

}  // namespace dlambda::report
