// Command-line driver: certify, verify, check-nonneg, degree, convert,
// qm-convert and gen over the JSON formats in tentpole/io.hpp.
//
// Exit status is 0 on success, 1 when the mathematics says no (negative
// input, failed verification, numerical breakdown) and 2 on malformed input.
// Failures print exactly one line "error: <Kind>: <message>" to stderr.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tentpole/tentpole.hpp"
#include "tentpole/io.hpp"

namespace {

using tentpole::io::json;
namespace io = tentpole::io;

struct Options {
  tentpole::Tolerances tol;
  bool json_output = false;
  std::string output;
};

int exit_code_for(tentpole::ErrorKind kind) {
  using K = tentpole::ErrorKind;
  switch (kind) {
    case K::malformed_input:
    case K::malformed_complex:
    case K::incompatible_vertex_values:
    case K::index_out_of_range:
    case K::edge_not_in_complex:
    case K::complex_mismatch:
    case K::precondition:
      return 2;
    default:
      return 1;
  }
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << "error: " << kind << ": " << one_line(message) << '\n';
  return code;
}

void emit(const Options& opt, const json& doc) {
  if (opt.output.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    io::write_json(opt.output, doc);
  }
}

// Reports go to stdout: JSON with --json, otherwise "key: value" lines.
void report(const Options& opt, const json& doc) {
  if (opt.json_output) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : doc.items()) {
    std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

int run_certify(const Options& opt, const std::string& fn) {
  const io::FunctionFile f = io::load_function(fn, opt.tol);
  const tentpole::Certificate cert = tentpole::certify(f.value, opt.tol);
  for (const std::string& w : cert.meta.warnings) std::cerr << "warning: " << w << '\n';
  emit(opt, io::certificate_to_json(f.complex.raw, cert));
  if (!opt.output.empty()) {
    report(opt, {{"residual", cert.meta.residual},
                 {"input_degree", io::degree_to_json(cert.meta.input_degree)},
                 {"certificate_degree", io::degree_to_json(cert.meta.certificate_degree)},
                 {"square_count", cert.meta.square_count},
                 {"output", opt.output}});
  }
  return 0;
}

enum class ExactMode { automatic, always, never };

int run_verify(const Options& opt, const std::string& fn, const std::string& cn,
               ExactMode mode) {
  const io::FunctionFile f = io::load_function(fn, opt.tol);
  const io::CertificateFile c = io::load_certificate(cn, f.complex);
  if (!(*c.complex.complex == f.value.complex())) {
    throw tentpole::Error(tentpole::ErrorKind::complex_mismatch,
                          "certificate and function use different complexes");
  }
  const bool can_exact = f.exact.has_value() && c.exact.has_value();
  if (mode == ExactMode::always && !can_exact) {
    throw io::malformed("--exact needs every number in both files to be exact");
  }
  tentpole::VerifyReport r;
  if (can_exact && mode != ExactMode::never) {
    // Both sides must share one complex object for the arithmetic.
    auto cert = *c.exact;
    cert.complex = f.exact->complex_ptr();
    r = tentpole::verify(*f.exact, cert, opt.tol);
  } else {
    auto cert = c.value;
    cert.complex = f.value.complex_ptr();
    r = tentpole::verify(f.value, cert, opt.tol);
  }
  report(opt, {{"verified", r.ok()},
               {"residual", r.residual},
               {"exact", r.exact},
               {"residual_ok", r.residual_ok},
               {"degree_ok", r.degree_ok},
               {"count_ok", r.count_ok},
               {"certificate_degree", io::degree_to_json(r.certificate_degree)},
               {"square_count", r.square_count},
               {"support_note", r.support_note}});
  if (!r.ok()) {
    std::string why = !r.residual_ok ? "residual above tolerance"
                      : !r.degree_ok ? "degree bound violated"
                                     : "square count bound violated";
    return fail("VerificationFailed", why, 1);
  }
  return 0;
}

int run_check(const Options& opt, const std::string& fn) {
  const io::FunctionFile f = io::load_function(fn, opt.tol);
  const tentpole::NonnegReport r = tentpole::is_nonneg(f.value, opt.tol);
  json doc = {{"verdict", tentpole::to_string(r.verdict)}, {"min_value", r.min_value}};
  if (r.witness) doc["witness"] = io::witness_to_json(*r.witness);
  report(opt, doc);
  if (r.verdict == tentpole::Verdict::negative) {
    return fail(tentpole::to_string(tentpole::ErrorKind::not_nonnegative),
                "negative at " + r.witness->describe(), 1);
  }
  if (r.verdict == tentpole::Verdict::marginal) {
    std::cerr << "warning: dips below zero within tolerance at " << r.witness->describe()
              << '\n';
  }
  return 0;
}

int run_degree(const Options& opt, const std::string& fn) {
  const io::FunctionFile f = io::load_function(fn, opt.tol);
  const int d = f.exact ? f.exact->degree() : f.value.degree();
  if (opt.json_output) {
    std::cout << json{{"degree", io::degree_to_json(d)}}.dump(2) << '\n';
  } else {
    std::cout << (d == tentpole::kNegInfDegree ? std::string("-inf") : std::to_string(d))
              << '\n';
  }
  return 0;
}

int run_convert(const Options& opt, const std::string& fn, const std::string& format) {
  const io::FunctionFile f = io::load_function(fn, opt.tol);
  const json& cx = f.complex.raw;
  if (format == "edge") {
    emit(opt, f.exact ? io::function_to_json(cx, *f.exact) : io::function_to_json(cx, f.value));
  } else {
    emit(opt, f.exact ? io::tent_function_to_json(cx, tentpole::to_tent(*f.exact, opt.tol))
                      : io::tent_function_to_json(cx, tentpole::to_tent(f.value, opt.tol)));
  }
  return 0;
}

int run_qm(const Options& opt, const std::string& cn) {
  const io::CertificateFile c = io::load_certificate(cn);
  json doc;
  double residual = 0.0;
  if (c.exact) {
    const auto qm = tentpole::qm_convert(*c.exact);
    const auto diff = tentpole::max_abs_difference(tentpole::expand(qm), tentpole::expand(*c.exact));
    residual = diff.convert_to<double>();
    doc = io::qm_to_json(c.complex.raw, qm);
  } else {
    const auto qm = tentpole::qm_convert(c.value);
    residual = tentpole::max_abs_difference(tentpole::expand(qm), tentpole::expand(c.value));
    doc = io::qm_to_json(c.complex.raw, qm);
  }
  doc["expansion_difference"] = residual;
  doc["exact"] = c.exact.has_value();
  emit(opt, doc);
  return 0;
}

int run_gen(const Options& opt, const std::string& cx, int degree, std::uint64_t seed) {
  const std::filesystem::path path = cx;
  const json raw = io::read_json(path);
  const auto complex = tentpole::share(io::complex_from_json(raw));
  emit(opt, io::function_to_json(raw, tentpole::random_nonneg(complex, degree, seed)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sums-of-squares certificates for piecewise polynomials on graphs"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json_output, "Print reports as JSON");

  struct TolFlag {
    const char* name;
    const char* env;
    double* slot;
  };
  const TolFlag tol_flags[] = {
      {"--tol-trim", "TENTPOLE_TOL_TRIM", &opt.tol.trim},
      {"--tol-roots", "TENTPOLE_TOL_ROOTS", &opt.tol.roots},
      {"--tol-pair", "TENTPOLE_TOL_PAIR", &opt.tol.pair},
      {"--tol-sos", "TENTPOLE_TOL_SOS", &opt.tol.sos},
      {"--tol-interp", "TENTPOLE_TOL_INTERP", &opt.tol.interp},
      {"--tol-bnd", "TENTPOLE_TOL_BND", &opt.tol.bnd},
      {"--tol-dom", "TENTPOLE_TOL_DOM", &opt.tol.dom},
      {"--tol-nonneg", "TENTPOLE_TOL_NONNEG", &opt.tol.nonneg},
      {"--tol-compat", "TENTPOLE_TOL_COMPAT", &opt.tol.compat},
      {"--tol-cert", "TENTPOLE_TOL_CERT", &opt.tol.cert},
  };
  for (const TolFlag& t : tol_flags) {
    app.add_option(t.name, *t.slot)
        ->envname(t.env)
        ->check(CLI::PositiveNumber)
        ->capture_default_str()
        ->group("Tolerances");
  }

  std::string fn;
  std::string cn;
  std::string format = "tent";
  std::string complex_path;
  int degree = 0;
  std::uint64_t seed = 0;
  bool force_exact = false;
  bool force_float = false;

  auto* certify = app.add_subcommand("certify", "Construct a certificate for F >= 0");
  certify->add_option("function", fn, "Function file")->required();
  certify->add_option("-o,--output", opt.output, "Certificate file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a certificate against a function");
  verify->add_option("function", fn, "Function file")->required();
  verify->add_option("certificate", cn, "Certificate file")->required();
  auto* exact_flag = verify->add_flag("--exact", force_exact, "Require the rational path");
  verify->add_flag("--float", force_float, "Use floating point even for exact files")
      ->excludes(exact_flag);

  auto* check = app.add_subcommand("check-nonneg", "Decide nonnegativity");
  check->add_option("function", fn, "Function file")->required();

  auto* deg = app.add_subcommand("degree", "Print the degree of a function");
  deg->add_option("function", fn, "Function file")->required();

  auto* convert = app.add_subcommand("convert", "Rewrite a function in tent or edge form");
  convert->add_option("function", fn, "Function file")->required();
  convert->add_option("--format", format, "Target form")
      ->check(CLI::IsMember({"tent", "edge"}))
      ->capture_default_str();
  convert->add_option("-o,--output", opt.output, "Output file (default stdout)");

  auto* qm = app.add_subcommand("qm-convert", "Rewrite a certificate in QM(T_1..T_m) form");
  qm->add_option("certificate", cn, "Certificate file")->required();
  qm->add_option("-o,--output", opt.output, "Output file (default stdout)");

  auto* gen = app.add_subcommand("gen", "Generate a random nonnegative function");
  gen->add_option("--complex", complex_path, "Complex file")->required();
  gen->add_option("--degree", degree, "Degree bound")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen->add_option("-o,--output", opt.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("MalformedInput", e.what(), 2);
  }

  try {
    if (*certify) return run_certify(opt, fn);
    if (*verify) {
      const ExactMode mode = force_exact   ? ExactMode::always
                             : force_float ? ExactMode::never
                                           : ExactMode::automatic;
      return run_verify(opt, fn, cn, mode);
    }
    if (*check) return run_check(opt, fn);
    if (*deg) return run_degree(opt, fn);
    if (*convert) return run_convert(opt, fn, format);
    if (*qm) return run_qm(opt, cn);
    if (*gen) return run_gen(opt, complex_path, degree, seed);
  } catch (const tentpole::Error& e) {
    return fail(tentpole::to_string(e.kind()), e.what(), exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    return fail("MalformedInput", e.what(), 2);
  }
  return 0;
}
