// weilforge: decide affine structures on Weil, regular-point, automorphism
// and jet bundles by exact rational linear algebra, from scripts or one-shot
// command-line specs.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "weilforge/weilforge.hpp"

namespace {

using namespace weilforge;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load_json(const std::string& path) {
  std::string text = read_file(path);
  Json doc = Json::parse(text, nullptr, false);
  require(!doc.is_discarded(), errc::io_error, "'" + path + "' is not valid JSON");
  return doc;
}

/// "@file.json" loads a serialized value; anything else is an expression in
/// the script language.
AlgebraPtr algebra_from_spec(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') return algebra_from_json(load_json(spec.substr(1)));
  ScriptValue v = evaluate_expression(parse_expression(spec));
  require(std::holds_alternative<AlgebraPtr>(v), errc::type_error,
          "--algebra must evaluate to an algebra, got " + std::string(value_kind_name(v)));
  return std::get<AlgebraPtr>(v);
}

/// Ideal specs may reference the algebra under the name A, e.g. "mpow(A, 2)".
Ideal ideal_from_spec(const std::string& spec, const AlgebraPtr& A) {
  if (!spec.empty() && spec[0] == '@') return ideal_from_json(load_json(spec.substr(1)), A);
  std::map<std::string, ScriptValue> env;
  env.emplace("A", A);
  ScriptValue v = evaluate_expression(parse_expression(spec), std::move(env));
  require(std::holds_alternative<Ideal>(v), errc::type_error,
          "--ideal must evaluate to an ideal, got " + std::string(value_kind_name(v)));
  return std::get<Ideal>(v);
}

int cmd_run(const std::string& path, bool json) {
  Program prog = parse_program(read_file(path));
  ExecResult result = execute(prog);
  if (json)
    std::cout << Json{{"statements", result.output}, {"exit_code", result.exit_code}}.dump(2) << "\n";
  else
    std::cout << result.text;
  return result.exit_code;
}

int cmd_check(const std::string& kind, const std::string& algebra_spec, const std::string& ideal_spec, bool json) {
  AlgebraPtr A = algebra_from_spec(algebra_spec);
  Ideal I = ideal_from_spec(ideal_spec, A);
  AffineReport report;
  if (kind == "weil")
    report = weil_affine(A, I);
  else if (kind == "regular")
    report = regular_affine(A, I);
  else if (kind == "aut")
    report = aut_affine(A, I);
  else if (kind == "jet")
    report = jet_affine(A, I);
  else
    fail(errc::io_error, "--kind must be one of weil|regular|aut|jet");
  if (json)
    std::cout << report_to_json(report).dump(2) << "\n";
  else
    std::cout << report_to_text(report);
  return report.holds ? 0 : 1;
}

int cmd_scan(int m_max, int l_max, const std::string& csv_path, bool json) {
  ScanResult scan = scan_truncated(m_max, l_max);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    require(out.good(), errc::io_error, "cannot open '" + csv_path + "' for writing");
    out << scan_to_csv(scan);
  }
  if (json)
    std::cout << scan_to_json(scan).dump(2) << "\n";
  else
    std::cout << scan_to_text(scan);
  return scan.disagreements == 0 ? 0 : 1;
}

int cmd_dims(const std::string& algebra_spec, int ambient, bool json) {
  AlgebraPtr A = algebra_from_spec(algebra_spec);
  TangentDims dims = tangent_dimensions(A, ambient);
  if (json) {
    std::cout << dims_to_json(A, ambient, dims).dump(2) << "\n";
  } else {
    std::cout << "dim T(M^A)   = n * dim A          = " << dims.point_tangent << "\n"
              << "dim Der(A,A)                      = " << dims.der_AA << "\n"
              << "dim T(J^A M) = n * dim A - Der(A) = " << dims.jet_tangent << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weilforge: affine structures on Weil and jet bundles over exact rationals"};
  app.require_subcommand(1);

  std::string script_path;
  bool run_json = false;
  CLI::App* run = app.add_subcommand("run", "execute a script");
  run->add_option("script", script_path, "script file")->required();
  run->add_flag("--json", run_json, "machine-readable output");

  std::string kind, algebra_spec, ideal_spec;
  bool check_json = false;
  CLI::App* check = app.add_subcommand("check", "evaluate one affine criterion");
  check->add_option("--kind", kind, "weil|regular|aut|jet")->required();
  check->add_option("--algebra", algebra_spec, "algebra expression or @file.json")->required();
  check->add_option("--ideal", ideal_spec, "ideal expression (the algebra is bound to A) or @file.json")->required();
  check->add_flag("--json", check_json, "machine-readable output");

  int m_max = 1, l_max = 4;
  std::string csv_path;
  bool scan_json = false;
  CLI::App* scan = app.add_subcommand("scan", "threshold scan over truncated algebras");
  scan->add_option("--m-max", m_max, "maximum width")->required();
  scan->add_option("--l-max", l_max, "maximum height")->required();
  scan->add_option("--csv", csv_path, "write rows as CSV to this file");
  scan->add_flag("--json", scan_json, "machine-readable output");

  std::string dims_algebra;
  int ambient = 1;
  bool dims_json = false;
  CLI::App* dims = app.add_subcommand("dims", "tangent-space dimension bookkeeping");
  dims->add_option("--algebra", dims_algebra, "algebra expression or @file.json")->required();
  dims->add_option("--ambient", ambient, "dimension n of the base space R^n")->required();
  dims->add_flag("--json", dims_json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(script_path, run_json);
    if (check->parsed()) return cmd_check(kind, algebra_spec, ideal_spec, check_json);
    if (scan->parsed()) return cmd_scan(m_max, l_max, csv_path, scan_json);
    if (dims->parsed()) return cmd_dims(dims_algebra, ambient, dims_json);
  } catch (const weilforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
