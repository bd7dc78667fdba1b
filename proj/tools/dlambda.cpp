#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "dlambda/conics.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/report.hpp"
#include "dlambda/text.hpp"

using namespace dlambda;

namespace {

ChartPtr chart_named(const std::string& name) {
  const auto& m = pgl3::Model::get();
  const auto& c = conics::ConicModel::get();
  const std::map<std::string, ChartPtr> charts = {
      {"matrix", m.matrix()},   {"cell", m.cell()},       {"cone", m.cone()},
      {"opposite", m.opposite()}, {"conic", c.conic()},   {"conic-entries", c.entries()},
      {"conic-cone", c.cone()},
  };
  auto it = charts.find(name);
  if (it == charts.end()) throw PreconditionError("unknown chart: " + name);
  return it->second;
}

std::optional<pgl3::Gen> gen_named(const std::string& s) {
  for (auto g : pgl3::kAllGens)
    if (pgl3::gen_name(g) == s) return g;
  return std::nullopt;
}

std::optional<pgl3::Weyl> weyl_named(const std::string& s) {
  for (auto w : {pgl3::Weyl::E, pgl3::Weyl::S1, pgl3::Weyl::S2, pgl3::Weyl::S1S2, pgl3::Weyl::S2S1, pgl3::Weyl::W0})
    if (pgl3::weyl_name(w) == s) return w;
  return std::nullopt;
}

// "@name" selects an operator built by the engine.
DiffOp builtin(const std::string& name) {
  using namespace pgl3;
  static const std::map<std::string, std::function<DiffOp()>> fixed = {
      {"d0.matrix", d0_matrix},
      {"d0.cell", d0_cell},
      {"d_lambda.matrix", d_lambda_matrix},
      {"d_lambda.opposite", d_lambda_opposite},
      {"casimir", casimir},
      {"casimir.matrix", casimir_matrix},
      {"euler", euler_matrix},
      {"conic.d0", conics::conic_d0},
      {"conic.d0.entries", conics::conic_d0_entries},
      {"conic.d0.cone", conics::conic_d0_cone},
      {"conic.d_lambda", conics::conic_d_lambda_cone},
  };
  if (auto it = fixed.find(name); it != fixed.end()) return it->second();
  auto dot = name.rfind('.');
  std::string head = dot == std::string::npos ? name : name.substr(0, dot);
  std::string tail = dot == std::string::npos ? "" : name.substr(dot + 1);
  if (head == "d_lambda")
    if (auto w = weyl_named(tail)) return d_lambda_twisted(*w);
  if (auto g = gen_named(tail)) {
    if (head == "field.left") return infinitesimal_vector_field({*g, Side::Left});
    if (head == "field.right") return infinitesimal_vector_field({*g, Side::Right});
    if (head == "field.cell") return vector_field_big_cell({*g, Side::Left});
    if (head == "phi.left") return phi_lambda({*g, Side::Left});
    if (head == "phi.right") return phi_lambda({*g, Side::Right});
    if (head == "conic.field") return conics::conic_vector_field_entries(*g);
  }
  throw PreconditionError("unknown builtin operator: @" + name);
}

DiffOp operator_arg(const std::string& text, const std::string& chart) {
  if (!text.empty() && text[0] == '@') return builtin(text.substr(1));
  return parse_diffop(text, chart_named(chart));
}

void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string upper(std::string s) {
  for (auto& c : s) c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of the twisted operators on the wonderful compactification of PGL3"};
  app.require_subcommand(1);

  std::string mode = "symbolic";
  checks::Options opts;
  app.add_option("--param-mode", mode, "Case scalars: symbolic or sampled")
      ->check(CLI::IsMember({"symbolic", "sampled"}));
  app.add_option("--grid", opts.grid, "Sampling range [0, N] for lambda and m")->check(CLI::Range(1L, 12L));
  app.add_option("--nilpotency-limit", opts.nilpotency_limit, "Largest ad power tried")->check(CLI::Range(1u, 64u));
  app.add_option("--seed", opts.seed, "Seed for random test polynomials");
  app.add_option("--jobs", opts.workers, "Worker threads (0: all cores)");

  auto* verify = app.add_subcommand("verify", "Run identity suites");
  std::string suite = "all";
  std::string json_path;
  std::vector<std::string> suites = {"all"};
  for (const auto& s : checks::suite_names()) suites.push_back(s);
  verify->add_option("suite", suite, "Suite name")->check(CLI::IsMember(suites));
  verify->add_option("--json", json_path, "Write the JSON report here ('-' for stdout)");

  auto* certify = app.add_subcommand("certify", "Build a generation certificate");
  std::vector<long> lambda;
  certify->add_option("--lambda", lambda, "L1 L2")->expected(2)->required();
  certify->add_option("--json", json_path, "Write the certificate JSON here ('-' for stdout)");

  auto* op = app.add_subcommand("op", "Print, apply or compose operators");
  op->require_subcommand(1);
  std::string chart = "cell", a_text, b_text, f_text;
  op->add_option("--chart", chart, "matrix, cell, cone, opposite, conic, conic-entries or conic-cone");
  auto* op_print = op->add_subcommand("print", "Normal form of an operator");
  op_print->add_option("operator", a_text, "Operator text or @builtin")->required();
  auto* op_apply_cmd = op->add_subcommand("apply", "Apply an operator to a function");
  op_apply_cmd->add_option("operator", a_text, "Operator text or @builtin")->required();
  op_apply_cmd->add_option("function", f_text, "Rational function")->required();
  auto* op_compose_cmd = op->add_subcommand("compose", "Composite A o B");
  op_compose_cmd->add_option("a", a_text, "Operator A")->required();
  op_compose_cmd->add_option("b", b_text, "Operator B")->required();

  auto* concord = app.add_subcommand("concordance", "Compare every transcribed formula with the engine");
  concord->add_option("--json", json_path, "Write the JSON report here ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opts.mode = mode == "sampled" ? cert::ParamMode::Sampled : cert::ParamMode::Symbolic;

  try {
    if (*verify) {
      auto results = checks::run_suite(suite, opts);
      long counts[3] = {0, 0, 0};
      for (const auto& r : results) {
        ++counts[static_cast<int>(r.status)];
        std::cout << std::left << std::setw(18) << upper(checks::status_name(r.status)) << std::setw(34) << r.id
                  << std::fixed << std::setprecision(3) << r.seconds << "s";
        if (!r.details.empty()) std::cout << "  " << r.details;
        std::cout << "\n";
      }
      std::vector<cert::Certificate> certs;
      if (suite == "all" || suite == "cases") certs = checks::grid_certificates(opts.grid, opts.mode);
      std::cout << results.size() << " checks: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2]
                << " mismatch-reported\n";
      write_json(report::verify_report(suite, opts, results, certs), json_path);
      return checks::any_failed(results) ? 1 : 0;
    }
    if (*certify) {
      cert::Certificate c = cert::certify(lambda[0], lambda[1], opts.mode);
      auto k = cert::check_certificate(c);
      if (json_path != "-") std::cout << cert::transcript(c);
      for (const auto& p : k.problems) std::cerr << "checker: " << p << "\n";
      write_json(report::certify_report(c), json_path);
      return k.ok && c.status() != "disconnected" ? 0 : 1;
    }
    if (*op) {
      DiffOp a = operator_arg(a_text, chart);
      if (*op_print) {
        std::cout << "[" << a.chart()->name << "] " << format_diffop(a) << "\n";
      } else if (*op_apply_cmd) {
        std::cout << format_ratfunc(op_apply(a, parse_ratfunc(f_text, a.vars()))) << "\n";
      } else {
        DiffOp b = b_text[0] == '@' ? builtin(b_text.substr(1)) : parse_diffop(b_text, a.chart());
        std::cout << "[" << a.chart()->name << "] " << format_diffop(op_compose(a, b)) << "\n";
      }
      return 0;
    }
    if (*concord) {
      auto entries = checks::concordance(opts.seed);
      bool failed = false;
      for (const auto& e : entries) {
        failed |= e.status == checks::Status::Fail;
        std::cout << std::left << std::setw(18) << upper(checks::status_name(e.status)) << std::setw(22) << e.id
                  << e.what << "\n";
        if (e.status != checks::Status::Pass) std::cout << std::setw(18) << "" << "engine - display = " << e.residual
                                                        << "\n";
      }
      write_json(report::concordance_report(entries), json_path);
      return failed ? 1 : 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DivisionByZero& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
