#pragma once

// JSON files for complexes, functions and certificates.
//
// Numbers may be JSON floats, JSON integers or strings holding an integer, a
// fraction "p/q" or a decimal. Integers and strings are exact; floats are not.
// A file whose numbers are all exact also loads over the rationals.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tentpole/certify.hpp"
#include "tentpole/complex1d.hpp"
#include "tentpole/config.hpp"
#include "tentpole/pwpoly.hpp"
#include "tentpole/rational.hpp"

namespace tentpole::io {

using json = nlohmann::json;

inline Error malformed(const std::string& what) {
  return Error(ErrorKind::malformed_input, what);
}

struct Number {
  double value = 0.0;
  std::optional<Rational> exact;
};

namespace detail {

inline bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) {
    return std::isdigit(ch) != 0;
  });
}

inline Rational parse_integer(std::string s, const std::string& original) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (!all_digits(s)) throw malformed("bad exact number \"" + original + "\"");
  const Rational r{boost::multiprecision::cpp_int(s)};
  return neg ? Rational(-r) : r;
}

inline Rational parse_exact(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_integer(text.substr(0, slash), text);
    const Rational den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw malformed("zero denominator in \"" + text + "\"");
    return num / den;
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    if (!frac.empty() && !all_digits(frac)) throw malformed("bad exact number \"" + text + "\"");
    const std::string head = text.substr(0, dot);
    const bool neg = !head.empty() && head[0] == '-';
    std::string whole = head;
    if (whole == "-" || whole == "+" || whole.empty()) whole += "0";
    Rational r = parse_integer(whole, text);
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational tail = frac.empty() ? Rational(0)
                                 : Rational(boost::multiprecision::cpp_int(frac)) / Rational(scale);
    return neg ? Rational(r - tail) : Rational(r + tail);
  }
  return parse_integer(text, text);
}

}  // namespace detail

inline Number parse_number(const json& j) {
  if (j.is_number_integer()) {
    Rational r = j.is_number_unsigned() ? Rational(j.get<std::uint64_t>())
                                        : Rational(j.get<std::int64_t>());
    return {r.convert_to<double>(), r};
  }
  if (j.is_number_float()) return {j.get<double>(), std::nullopt};
  if (j.is_string()) {
    const Rational r = detail::parse_exact(j.get<std::string>());
    return {r.convert_to<double>(), r};
  }
  throw malformed("expected a number, got " + j.dump());
}

// Integers as JSON integers, everything else as "p/q".
inline json number_to_json(const Rational& r) {
  if (denominator(r) == 1) {
    const auto& n = numerator(r);
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max()) {
      return n.convert_to<std::int64_t>();
    }
  }
  std::ostringstream os;
  os << r;
  return os.str();
}

inline json number_to_json(double x) { return x; }

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw malformed("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw malformed(path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::malformed_input, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Complexes

inline Edge parse_edge_key(const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos || !detail::all_digits(key.substr(0, dash)) ||
      !detail::all_digits(key.substr(dash + 1))) {
    throw malformed("bad edge key \"" + key + "\", expected \"i-j\"");
  }
  return {std::stoi(key.substr(0, dash)), std::stoi(key.substr(dash + 1))};
}

inline Complex1D complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j["m"].is_number_integer()) {
    throw malformed("complex needs an integer \"m\"");
  }
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw malformed("\"edges\" must be an array");
    for (const json& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw malformed("edge entries must be [i, j] integer pairs, got " + e.dump());
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  }
  return Complex1D(j["m"].get<int>(), std::move(edges));
}

inline json complex_to_json(const Complex1D& c) {
  json edges = json::array();
  for (const auto& [i, j] : c.edges()) edges.push_back({i, j});
  return {{"m", c.vertex_count()}, {"edges", edges}};
}

// The "complex" entry of a file: an inline object or a path relative to the
// file's directory. The JSON is kept so extra fields such as coordinates can
// be echoed.
struct ComplexSource {
  std::shared_ptr<const Complex1D> complex;
  json raw;
};

inline ComplexSource resolve_complex(const json& entry, const std::filesystem::path& base) {
  json raw = entry;
  if (entry.is_string()) {
    std::filesystem::path p = entry.get<std::string>();
    if (p.is_relative()) p = base / p;
    raw = read_json(p);
  }
  return {share(complex_from_json(raw)), raw};
}

// ---------------------------------------------------------------------------
// Function bodies

// An element as written in a file, before choosing a scalar type.
struct RawBody {
  bool tent_form = false;
  std::map<Edge, std::vector<Number>> edge_polys;
  std::map<int, Number> isolated_values;
  std::vector<std::pair<std::map<int, int>, Number>> tent_terms;

  bool exact() const {
    auto ok = [](const Number& n) { return n.exact.has_value(); };
    for (const auto& [e, cs] : edge_polys) {
      if (!std::all_of(cs.begin(), cs.end(), ok)) return false;
    }
    for (const auto& [v, n] : isolated_values) {
      if (!ok(n)) return false;
    }
    for (const auto& [mono, n] : tent_terms) {
      if (!ok(n)) return false;
    }
    return true;
  }
};

inline RawBody parse_body(const json& j) {
  if (!j.is_object()) throw malformed("function body must be an object");
  RawBody body;
  if (j.contains("tent")) {
    if (j.contains("edge_polys") || j.contains("isolated_values")) {
      throw malformed("a body holds either \"tent\" or \"edge_polys\", not both");
    }
    if (!j["tent"].is_array()) throw malformed("\"tent\" must be an array");
    body.tent_form = true;
    for (const json& term : j["tent"]) {
      if (!term.is_object() || !term.contains("c")) {
        throw malformed("tent terms need a coefficient \"c\"");
      }
      std::map<int, int> mono;
      if (term.contains("exp")) {
        if (!term["exp"].is_object()) throw malformed("\"exp\" must be an object");
        for (const auto& [k, p] : term["exp"].items()) {
          if (!detail::all_digits(k) || !p.is_number_integer() || p.get<int>() < 0) {
            throw malformed("bad tent exponent " + k + ": " + p.dump());
          }
          if (p.get<int>() > 0) mono[std::stoi(k)] += p.get<int>();
        }
      }
      body.tent_terms.emplace_back(std::move(mono), parse_number(term["c"]));
    }
    return body;
  }
  if (j.contains("edge_polys")) {
    if (!j["edge_polys"].is_object()) throw malformed("\"edge_polys\" must be an object");
    for (const auto& [k, cs] : j["edge_polys"].items()) {
      if (!cs.is_array()) throw malformed("coefficients of edge " + k + " must be an array");
      std::vector<Number> coeffs;
      for (const json& c : cs) coeffs.push_back(parse_number(c));
      body.edge_polys[parse_edge_key(k)] = std::move(coeffs);
    }
  }
  if (j.contains("isolated_values")) {
    if (!j["isolated_values"].is_object()) {
      throw malformed("\"isolated_values\" must be an object");
    }
    for (const auto& [k, v] : j["isolated_values"].items()) {
      if (!detail::all_digits(k)) throw malformed("bad isolated vertex key \"" + k + "\"");
      body.isolated_values[std::stoi(k)] = parse_number(v);
    }
  }
  return body;
}

template <class T>
T scalar_of(const Number& n) {
  if constexpr (scalar_traits<T>::exact) {
    return *n.exact;
  } else {
    return n.value;
  }
}

// Edges and isolated vertices absent from the body are zero. With
// `validate` the result must be continuous.
template <class T>
BasicPiecewisePoly<T> materialize(const std::shared_ptr<const Complex1D>& c, const RawBody& body,
                                  bool validate, const Tolerances& tol = default_tolerances()) {
  if (body.tent_form) {
    BasicTentPoly<T> g;
    for (const auto& [mono, n] : body.tent_terms) g.add(mono, scalar_of<T>(n));
    return from_tent<T>(c, g);
  }
  std::vector<BasicPoly<T>> edges(c->edges().size());
  for (const auto& [e, cs] : body.edge_polys) {
    const auto idx = c->edge_index(e);
    if (!idx || e.first > e.second) {
      throw malformed("edge " + edge_key(e) + " is not an edge i<j of the complex");
    }
    std::vector<T> coeffs;
    for (const Number& n : cs) coeffs.push_back(scalar_of<T>(n));
    edges[*idx] = BasicPoly<T>(std::move(coeffs));
  }
  std::vector<T> iso(c->isolated().size(), T(0));
  for (const auto& [v, n] : body.isolated_values) {
    const auto idx = c->isolated_index(v);
    if (!idx) throw malformed("vertex " + std::to_string(v) + " is not isolated");
    iso[*idx] = scalar_of<T>(n);
  }
  if (validate) return make<T>(c, std::move(edges), std::move(iso), tol);
  return BasicPiecewisePoly<T>(c, std::move(edges), std::move(iso));
}

template <class T>
json body_to_json(const BasicPiecewisePoly<T>& f) {
  const Complex1D& c = f.complex();
  json edges = json::object();
  for (std::size_t i = 0; i < c.edges().size(); ++i) {
    json cs = json::array();
    for (const T& x : f.edge_poly(i).coeffs()) cs.push_back(number_to_json(x));
    edges[edge_key(c.edges()[i])] = cs;
  }
  json out = {{"edge_polys", edges}};
  if (c.isolated_count() > 0) {
    json iso = json::object();
    for (std::size_t i = 0; i < c.isolated().size(); ++i) {
      iso[std::to_string(c.isolated()[i])] = number_to_json(f.isolated_values()[i]);
    }
    out["isolated_values"] = iso;
  }
  return out;
}

template <class T>
json tent_to_json(const BasicTentPoly<T>& g) {
  json terms = json::array();
  for (const auto& [mono, c] : g.terms) {
    json exp = json::object();
    for (const auto& [v, p] : mono) exp[std::to_string(v)] = p;
    terms.push_back({{"c", number_to_json(c)}, {"exp", exp}});
  }
  return {{"tent", terms}};
}

// ---------------------------------------------------------------------------
// Function files

struct FunctionFile {
  ComplexSource complex;
  RawBody body;
  PiecewisePoly value;
  std::optional<BasicPiecewisePoly<Rational>> exact;  // set when every number is exact
};

inline FunctionFile function_from_json(const json& j, const std::filesystem::path& base,
                                       const Tolerances& tol = default_tolerances()) {
  if (!j.is_object() || !j.contains("complex")) {
    throw malformed("function file needs a \"complex\" entry");
  }
  FunctionFile out;
  out.complex = resolve_complex(j["complex"], base);
  out.body = parse_body(j);
  out.value = materialize<double>(out.complex.complex, out.body, true, tol);
  if (out.body.exact()) {
    out.exact = materialize<Rational>(out.complex.complex, out.body, true, tol);
  }
  return out;
}

inline FunctionFile load_function(const std::filesystem::path& path,
                                  const Tolerances& tol = default_tolerances()) {
  return function_from_json(read_json(path), path.parent_path(), tol);
}

template <class T>
json function_to_json(const json& complex, const BasicPiecewisePoly<T>& f) {
  json out = body_to_json(f);
  out["complex"] = complex;
  return out;
}

template <class T>
json tent_function_to_json(const json& complex, const BasicTentPoly<T>& g) {
  json out = tent_to_json(g);
  out["complex"] = complex;
  return out;
}

// ---------------------------------------------------------------------------
// Certificate files

struct CertificateFile {
  ComplexSource complex;
  Certificate value;
  std::optional<BasicCertificate<Rational>> exact;
};

namespace detail {

template <class T>
BasicCertificate<T> build_certificate(const std::shared_ptr<const Complex1D>& c,
                                      const std::vector<RawBody>& s_roots,
                                      const std::map<Edge, std::vector<RawBody>>& terms) {
  BasicCertificate<T> cert;
  cert.complex = c;
  for (const RawBody& b : s_roots) cert.s_roots.push_back(materialize<T>(c, b, true));
  for (const auto& [e, bodies] : terms) {
    auto& slot = cert.edge_terms[e];
    for (const RawBody& b : bodies) slot.push_back(materialize<T>(c, b, true));
  }
  return cert;
}

}  // namespace detail

// The complex may be omitted when `fallback` supplies it.
inline CertificateFile certificate_from_json(const json& j, const std::filesystem::path& base,
                                             const std::optional<ComplexSource>& fallback = {}) {
  if (!j.is_object()) throw malformed("certificate must be an object");
  CertificateFile out;
  if (j.contains("complex")) {
    out.complex = resolve_complex(j["complex"], base);
  } else if (fallback) {
    out.complex = *fallback;
  } else {
    throw malformed("certificate file needs a \"complex\" entry");
  }
  const auto& c = out.complex.complex;
  std::vector<RawBody> s_roots;
  std::map<Edge, std::vector<RawBody>> terms;
  bool exact = true;
  if (j.contains("s_roots")) {
    if (!j["s_roots"].is_array()) throw malformed("\"s_roots\" must be an array");
    for (const json& b : j["s_roots"]) {
      s_roots.push_back(parse_body(b));
      exact = exact && s_roots.back().exact();
    }
  }
  if (j.contains("edge_terms")) {
    if (!j["edge_terms"].is_object()) throw malformed("\"edge_terms\" must be an object");
    for (const auto& [k, bodies] : j["edge_terms"].items()) {
      const Edge e = parse_edge_key(k);
      if (!c->edge_index(e) || e.first > e.second) {
        throw malformed("edge term " + k + " is not on an edge i<j of the complex");
      }
      if (!bodies.is_array()) throw malformed("edge term " + k + " must be an array");
      auto& slot = terms[e];
      for (const json& b : bodies) {
        slot.push_back(parse_body(b));
        exact = exact && slot.back().exact();
      }
    }
  }
  out.value = detail::build_certificate<double>(c, s_roots, terms);
  if (exact) out.exact = detail::build_certificate<Rational>(c, s_roots, terms);
  if (j.contains("meta") && j["meta"].is_object()) {
    const json& m = j["meta"];
    auto& meta = out.value.meta;
    if (m.contains("input_degree") && m["input_degree"].is_number_integer()) {
      meta.input_degree = m["input_degree"].get<int>();
    }
    if (m.contains("certificate_degree") && m["certificate_degree"].is_number_integer()) {
      meta.certificate_degree = m["certificate_degree"].get<int>();
    }
    if (m.contains("residual") && m["residual"].is_number()) {
      meta.residual = m["residual"].get<double>();
    }
    if (m.contains("square_count") && m["square_count"].is_number_integer()) {
      meta.square_count = m["square_count"].get<int>();
    }
    if (m.contains("warnings") && m["warnings"].is_array()) {
      for (const json& w : m["warnings"]) {
        if (w.is_string()) meta.warnings.push_back(w.get<std::string>());
      }
    }
  }
  return out;
}

inline CertificateFile load_certificate(const std::filesystem::path& path,
                                        const std::optional<ComplexSource>& fallback = {}) {
  return certificate_from_json(read_json(path), path.parent_path(), fallback);
}

inline json degree_to_json(int d) { return d == kNegInfDegree ? json(nullptr) : json(d); }

template <class T>
json certificate_to_json(const json& complex, const BasicCertificate<T>& cert) {
  json s = json::array();
  for (const auto& r : cert.s_roots) s.push_back(body_to_json(r));
  json terms = json::object();
  for (const auto& [e, roots] : cert.edge_terms) {
    json list = json::array();
    for (const auto& r : roots) list.push_back(body_to_json(r));
    terms[edge_key(e)] = list;
  }
  const CertificateMeta& m = cert.meta;
  json meta = {{"input_degree", degree_to_json(m.input_degree)},
               {"certificate_degree", degree_to_json(m.certificate_degree)},
               {"residual", m.residual},
               {"square_count", m.square_count},
               {"warnings", m.warnings}};
  return {{"complex", complex}, {"s_roots", s}, {"edge_terms", terms}, {"meta", meta}};
}

template <class T>
json qm_to_json(const json& complex, const BasicQmForm<T>& qm) {
  json terms = json::array();
  for (const auto& t : qm.terms) {
    json roots = json::array();
    for (const auto& r : t.roots) roots.push_back(body_to_json(r));
    terms.push_back({{"generator", t.generator == 0 ? std::string("1")
                                                    : "T" + std::to_string(t.generator)},
                     {"roots", roots}});
  }
  return {{"complex", complex}, {"terms", terms}};
}

inline json witness_to_json(const Witness& w) {
  json out = {{"param", w.param}, {"value", w.value}};
  if (w.edge) out["edge"] = edge_key(*w.edge);
  if (w.vertex) out["vertex"] = *w.vertex;
  return out;
}

}  // namespace tentpole::io
