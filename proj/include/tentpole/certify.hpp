#pragma once

// Positivity certificates F = S + sum_{(i,j) in E} S_ij T_i T_j on a
// 1-dimensional complex, where S and every S_ij are sums of squares in the
// algebra of continuous piecewise polynomials.
//
// Construction peels one edge at a time. The rest of the complex is
// certified recursively with exactly 2(e-1) square roots; their values at the
// shared vertices become boundary data for adapt_sos on the peeled edge, and
// matching square roots are glued across. Edge-term roots are carried over by
// linear extension since T_i T_j lives on edge (i,j) only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tentpole/complex1d.hpp"
#include "tentpole/config.hpp"
#include "tentpole/interval_sos.hpp"
#include "tentpole/poly.hpp"
#include "tentpole/pwpoly.hpp"

namespace tentpole {

struct CertificateMeta {
  int input_degree = kNegInfDegree;
  int certificate_degree = kNegInfDegree;
  double residual = 0.0;
  int square_count = 0;
  std::vector<std::string> warnings;
};

template <class T>
struct BasicCertificate {
  using element = BasicPiecewisePoly<T>;

  std::shared_ptr<const Complex1D> complex;
  std::vector<element> s_roots;                  // S = sum of squares of these
  std::map<Edge, std::vector<element>> edge_terms;  // S_ij = sum of squares
  CertificateMeta meta;
};

using Certificate = BasicCertificate<double>;

// Drops zero roots and empty edge terms.
template <class T>
BasicCertificate<T> pruned(BasicCertificate<T> cert) {
  auto drop_zero = [](std::vector<BasicPiecewisePoly<T>>& v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const auto& f) { return f.is_zero(); }),
            v.end());
  };
  drop_zero(cert.s_roots);
  for (auto it = cert.edge_terms.begin(); it != cert.edge_terms.end();) {
    drop_zero(it->second);
    it = it->second.empty() ? cert.edge_terms.erase(it) : std::next(it);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Nonnegativity

enum class Verdict { nonneg, negative, marginal };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::nonneg: return "nonneg";
    case Verdict::negative: return "negative";
    case Verdict::marginal: return "marginal";
  }
  return "unknown";
}

struct NonnegReport {
  Verdict verdict = Verdict::nonneg;
  double min_value = 0.0;
  std::optional<Witness> witness;  // set for marginal and negative
};

inline NonnegReport is_nonneg(const PiecewisePoly& f,
                              const Tolerances& tol = default_tolerances()) {
  const Complex1D& c = f.complex();
  Witness best;
  bool have = false;
  for (std::size_t i = 0; i < c.edges().size(); ++i) {
    const IntervalMin m = min_on_interval(f.edge_poly(i), tol);
    if (!have || m.value < best.value) {
      best = Witness{c.edges()[i], std::nullopt, m.argmin, m.value};
      have = true;
    }
  }
  for (std::size_t i = 0; i < c.isolated().size(); ++i) {
    const double v = f.isolated_values()[i];
    if (!have || v < best.value) {
      best = Witness{std::nullopt, c.isolated()[i], 0.0, v};
      have = true;
    }
  }
  NonnegReport report;
  if (!have || best.value >= 0.0) {
    report.min_value = have ? best.value : 0.0;
    return report;
  }
  report.min_value = best.value;
  report.witness = best;
  report.verdict = best.value >= -tol.nonneg * f.norm_inf() ? Verdict::marginal
                                                            : Verdict::negative;
  return report;
}

// ---------------------------------------------------------------------------
// Expansion and verification

template <class T>
BasicPiecewisePoly<T> edge_generator(const std::shared_ptr<const Complex1D>& c, const Edge& e) {
  return tent<T>(c, e.first) * tent<T>(c, e.second);
}

// S + sum S_ij T_i T_j
template <class T>
BasicPiecewisePoly<T> expand(const BasicCertificate<T>& cert) {
  auto acc = BasicPiecewisePoly<T>::zero(cert.complex);
  for (const auto& s : cert.s_roots) acc += s * s;
  for (const auto& [edge, roots] : cert.edge_terms) {
    if (!cert.complex->edge_index(edge)) {
      throw Error(ErrorKind::complex_mismatch, "edge term on " + edge_key(edge) +
                                                   " which is not an edge of the complex");
    }
    auto sq = BasicPiecewisePoly<T>::zero(cert.complex);
    for (const auto& r : roots) sq += r * r;
    acc += sq * edge_generator<T>(cert.complex, edge);
  }
  return acc;
}

// Largest coefficient difference between two elements over the same complex.
template <class T>
T max_abs_difference(const BasicPiecewisePoly<T>& a, const BasicPiecewisePoly<T>& b) {
  T err = T(0);
  auto upd = [&](const T& x) {
    const T ax = x < T(0) ? T(-x) : x;
    if (ax > err) err = ax;
  };
  for (std::size_t i = 0; i < a.edge_polys().size(); ++i) {
    const auto& p = a.edge_poly(i);
    const auto& q = b.edge_poly(i);
    for (std::size_t k = 0; k < std::max(p.size(), q.size()); ++k) upd(p[k] - q[k]);
  }
  for (std::size_t i = 0; i < a.isolated_values().size(); ++i) {
    upd(a.isolated_values()[i] - b.isolated_values()[i]);
  }
  return err;
}

struct DegreeCheck {
  int certificate_degree = kNegInfDegree;
  bool ok = true;
};

// The degree bound deg(F|C) + 6(e_C - 1) + 1 applied on every connected
// component C with at least one edge, to deg(s^2) for each root s.
template <class T>
DegreeCheck check_degrees(const BasicPiecewisePoly<T>& f, const BasicCertificate<T>& cert) {
  DegreeCheck out;
  auto sq_degree = [](int d) { return d == kNegInfDegree ? d : 2 * d; };
  for (const SubComplex& comp : components(*cert.complex)) {
    int cert_deg = kNegInfDegree;
    for (const auto& s : cert.s_roots) {
      cert_deg = std::max(cert_deg, sq_degree(restrict_to(s, comp).degree()));
    }
    for (const auto& [edge, roots] : cert.edge_terms) {
      if (!comp.local_vertex(edge.first)) continue;
      for (const auto& r : roots) {
        cert_deg = std::max(cert_deg, sq_degree(restrict_to(r, comp).degree()));
      }
    }
    out.certificate_degree = std::max(out.certificate_degree, cert_deg);
    const int e = comp.complex.edge_count();
    if (e == 0) continue;
    const int input_deg = std::max(0, restrict_to(f, comp).degree());
    if (cert_deg != kNegInfDegree && cert_deg > input_deg + 6 * (e - 1) + 1) out.ok = false;
  }
  return out;
}

struct VerifyReport {
  double residual = 0.0;
  bool residual_ok = false;
  bool degree_ok = false;
  bool count_ok = false;
  bool exact = false;
  int certificate_degree = kNegInfDegree;
  int square_count = 0;
  std::string support_note;

  bool ok() const { return residual_ok && degree_ok && count_ok; }
};

template <class T>
VerifyReport verify(const BasicPiecewisePoly<T>& f, const BasicCertificate<T>& cert,
                    const Tolerances& tol = default_tolerances()) {
  if (!(f.complex() == *cert.complex)) {
    throw Error(ErrorKind::complex_mismatch, "certificate and function use different complexes");
  }
  for (const auto& s : cert.s_roots) {
    if (!(s.complex() == f.complex())) {
      throw Error(ErrorKind::complex_mismatch, "square root over a different complex");
    }
  }
  VerifyReport report;
  report.exact = scalar_traits<T>::exact;
  const auto diff = max_abs_difference(expand(cert), f);
  if constexpr (scalar_traits<T>::exact) {
    report.residual = diff == T(0) ? 0.0 : detail::to_double(diff) / (1.0 + f.norm_inf());
  } else {
    report.residual = diff / (1.0 + f.norm_inf());
  }
  report.residual_ok = report.residual <= tol.cert;

  const Complex1D& c = f.complex();
  report.square_count = static_cast<int>(cert.s_roots.size());
  report.count_ok = report.square_count <= 2 * c.edge_count() + c.isolated_count();
  int off_support = 0;
  for (const auto& [edge, roots] : cert.edge_terms) {
    if (roots.size() > 2) report.count_ok = false;
    const auto idx = c.edge_index(edge);
    for (const auto& r : roots) {
      for (std::size_t i = 0; i < r.edge_polys().size(); ++i) {
        if (i != *idx && !r.edge_poly(i).is_zero()) {
          ++off_support;
          break;
        }
      }
    }
  }
  const DegreeCheck deg = check_degrees(f, cert);
  report.degree_ok = deg.ok;
  report.certificate_degree = deg.certificate_degree;
  report.support_note =
      off_support == 0
          ? "edge-term roots are supported on their own edges"
          : std::to_string(off_support) +
                " edge-term root(s) are nonzero off their edge; T_iT_j annihilates those parts";
  return report;
}

// ---------------------------------------------------------------------------
// Construction

namespace detail {

struct RawCertificate {
  std::vector<PiecewisePoly> roots;
  std::map<Edge, std::vector<PiecewisePoly>> terms;
};

inline PiecewisePoly on_single_edge(const std::shared_ptr<const Complex1D>& c, Poly p) {
  std::vector<Poly> e(c->edges().size());
  e[0] = std::move(p);
  return PiecewisePoly(c, std::move(e), {});
}

inline RawCertificate certify_any(const PiecewisePoly& f, const Tolerances& tol);

inline RawCertificate certify_connected(const PiecewisePoly& f, const Tolerances& tol) {
  const auto& cp = f.complex_ptr();
  const Complex1D& c = *cp;
  RawCertificate out;
  if (c.edge_count() == 1) {
    const KmsForm kms = kms_form(f.edge_poly(0), tol);
    out.roots = {on_single_edge(cp, kms.s0.u), on_single_edge(cp, kms.s0.v)};
    // T_1 T_2 = (1 - t^2) / 4 on the edge, so S_12 = 4 s1.
    out.terms[c.edges()[0]] = {on_single_edge(cp, 2.0 * kms.s1.u),
                               on_single_edge(cp, 2.0 * kms.s1.v)};
    return out;
  }

  const PeelResult pr = peel(c);
  const std::string where = "peeling edge " + edge_key(pr.edge);
  const int e = c.edge_count();
  const std::size_t k = static_cast<std::size_t>(2 * (e - 1));

  RawCertificate sub = certify_any(restrict_to(f, pr.delta2), tol);
  const auto& d2 = sub.roots.empty() ? share(pr.delta2.complex) : sub.roots.front().complex_ptr();
  sub.roots.resize(k, PiecewisePoly::zero(d2));

  std::vector<double> a(k, 0.0);
  std::vector<double> b(k, 0.0);
  for (std::size_t q = 0; q < k; ++q) {
    if (pr.left_shared) a[q] = sub.roots[q].vertex_value(*pr.delta2.local_vertex(pr.edge.first));
    if (pr.right_shared) b[q] = sub.roots[q].vertex_value(*pr.delta2.local_vertex(pr.edge.second));
  }
  const MatchEnds match = pr.left_shared && pr.right_shared ? MatchEnds::both
                          : pr.left_shared                  ? MatchEnds::left_only
                                                            : MatchEnds::right_only;

  AdaptResult ad;
  try {
    ad = adapt_sos(f.edge_poly(pr.edge), a, b, match, tol);
  } catch (const NotNonnegativeError& err) {
    Witness w = err.witness();
    w.edge = pr.edge;
    throw NotNonnegativeError(w, where);
  } catch (const Error& err) {
    throw Error(err.kind(), where + ": " + err.what());
  }

  const auto d1 = share(pr.delta1.complex);
  const auto zero2 = PiecewisePoly::zero(d2);
  for (std::size_t q = 0; q < k + 2; ++q) {
    const double want_l = q < k ? a[q] : 0.0;
    const double want_r = q < k ? b[q] : 0.0;
    Poly s = ad.squares[q];
    // Pin the shared endpoint values exactly so gluing is continuous.
    if (pr.left_shared) s = s + Poly{0.5, -0.5} * Poly{want_l - s(-1.0)};
    if (pr.right_shared) s = s + Poly{0.5, 0.5} * Poly{want_r - s(1.0)};
    s.trim(tol.trim);
    const PiecewisePoly piece = on_single_edge(d1, std::move(s));
    out.roots.push_back(glue<double>(cp, pr.delta1, piece, pr.delta2,
                                     q < k ? sub.roots[q] : zero2, tol));
  }

  out.terms[pr.edge] = {linear_extension<double>(cp, pr.edge, 2.0 * ad.remainder.u),
                        linear_extension<double>(cp, pr.edge, 2.0 * ad.remainder.v)};
  for (const auto& [local_edge, roots] : sub.terms) {
    const Edge pe = pr.delta2.parent_edge(local_edge);
    auto& slot = out.terms[pe];
    for (const auto& r : roots) {
      slot.push_back(linear_extension<double>(cp, pe, r.edge_poly(local_edge)));
    }
  }
  return out;
}

inline RawCertificate certify_any(const PiecewisePoly& f, const Tolerances& tol) {
  const auto& cp = f.complex_ptr();
  const auto comps = components(*cp);
  if (comps.size() == 1 && cp->edge_count() > 0) return certify_connected(f, tol);

  RawCertificate out;
  for (const SubComplex& comp : comps) {
    const PiecewisePoly local = restrict_to(f, comp);
    if (comp.complex.edge_count() == 0) {
      // On a point T_v = T_v^2, so F(v) T_v = (sqrt(F(v)) T_v)^2.
      const double x = std::max(local.isolated_values()[0], 0.0);
      const PiecewisePoly root(local.complex_ptr(), {}, {std::sqrt(x)});
      out.roots.push_back(embed<double>(cp, comp, root));
      continue;
    }
    RawCertificate sub = certify_connected(local, tol);
    for (const auto& r : sub.roots) out.roots.push_back(embed<double>(cp, comp, r));
    for (const auto& [edge, roots] : sub.terms) {
      auto& slot = out.terms[comp.parent_edge(edge)];
      for (const auto& r : roots) slot.push_back(embed<double>(cp, comp, r));
    }
  }
  return out;
}

}  // namespace detail

// Certificate for F >= 0 with S a sum of exactly 2e_C squares on each
// component C with edges (one per isolated vertex) and every S_ij a sum of
// two squares. Zero roots are kept so counts are structural; see pruned().
inline Certificate certify(const PiecewisePoly& f, const Tolerances& tol = default_tolerances()) {
  const NonnegReport report = is_nonneg(f, tol);
  if (report.verdict == Verdict::negative) {
    throw NotNonnegativeError(*report.witness, "certify");
  }
  detail::RawCertificate raw = detail::certify_any(f, tol);
  Certificate cert;
  cert.complex = f.complex_ptr();
  cert.s_roots = std::move(raw.roots);
  cert.edge_terms = std::move(raw.terms);
  if (report.verdict == Verdict::marginal) {
    cert.meta.warnings.push_back("input dips to " + format_g(report.min_value) +
                                 " within tolerance at " + report.witness->describe());
  }
  const VerifyReport v = verify(f, cert, tol);
  cert.meta.input_degree = f.degree();
  cert.meta.certificate_degree = v.certificate_degree;
  cert.meta.residual = v.residual;
  cert.meta.square_count = v.square_count;
  return cert;
}

// ---------------------------------------------------------------------------
// Conversion to the quadratic module generated by the tent functions, using
// S_ij T_i T_j = (S_ij T_j^2) T_i + (S_ij T_i^2) T_j.

template <class T>
struct QmTerm {
  int generator = 0;  // 0 stands for the constant 1, otherwise T_generator
  std::vector<BasicPiecewisePoly<T>> roots;
};

template <class T>
struct BasicQmForm {
  std::shared_ptr<const Complex1D> complex;
  std::vector<QmTerm<T>> terms;
};

template <class T>
BasicQmForm<T> qm_convert(const BasicCertificate<T>& cert) {
  BasicQmForm<T> out;
  out.complex = cert.complex;
  out.terms.push_back({0, cert.s_roots});
  const int m = cert.complex->vertex_count();
  std::vector<std::vector<BasicPiecewisePoly<T>>> by_vertex(static_cast<std::size_t>(m) + 1);
  for (const auto& [edge, roots] : cert.edge_terms) {
    const auto ti = tent<T>(cert.complex, edge.first);
    const auto tj = tent<T>(cert.complex, edge.second);
    for (const auto& r : roots) {
      by_vertex[static_cast<std::size_t>(edge.first)].push_back(r * tj);
      by_vertex[static_cast<std::size_t>(edge.second)].push_back(r * ti);
    }
  }
  for (int v = 1; v <= m; ++v) {
    auto& roots = by_vertex[static_cast<std::size_t>(v)];
    if (!roots.empty()) out.terms.push_back({v, std::move(roots)});
  }
  return out;
}

template <class T>
BasicPiecewisePoly<T> expand(const BasicQmForm<T>& qm) {
  auto acc = BasicPiecewisePoly<T>::zero(qm.complex);
  for (const auto& term : qm.terms) {
    auto sq = BasicPiecewisePoly<T>::zero(qm.complex);
    for (const auto& r : term.roots) sq += r * r;
    acc += term.generator == 0 ? sq : sq * tent<T>(qm.complex, term.generator);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Test instances

namespace detail {

// A random continuous element whose edge polynomials have degree <= h.
inline PiecewisePoly random_element(const std::shared_ptr<const Complex1D>& c, int h,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> vals(static_cast<std::size_t>(c->vertex_count()) + 1, 0.0);
  if (h == 0) {
    // Constant on each component.
    for (const SubComplex& comp : components(*c)) {
      const double x = unif(rng);
      for (int v : comp.to_parent) vals[static_cast<std::size_t>(v)] = x;
    }
  } else {
    for (int v = 1; v <= c->vertex_count(); ++v) vals[static_cast<std::size_t>(v)] = unif(rng);
  }
  std::vector<Poly> e;
  for (const auto& [i, j] : c->edges()) {
    const double fi = vals[static_cast<std::size_t>(i)];
    const double fj = vals[static_cast<std::size_t>(j)];
    Poly p = h == 0 ? Poly{fi} : Poly{0.5 * (fi + fj), 0.5 * (fj - fi)};
    if (h >= 2) {
      std::vector<double> bump(static_cast<std::size_t>(h - 1));
      for (double& x : bump) x = unif(rng);
      p = p + Poly{1.0, 0.0, -1.0} * Poly(bump);
    }
    e.push_back(p);
  }
  std::vector<double> iso;
  for (int v : c->isolated()) iso.push_back(vals[static_cast<std::size_t>(v)]);
  return PiecewisePoly(c, std::move(e), std::move(iso));
}

}  // namespace detail

// Deterministic nonnegative element of degree <= d: two squares of random
// elements plus a random two-square multiple of T_i T_j on every edge.
inline PiecewisePoly random_nonneg(const std::shared_ptr<const Complex1D>& c, int d,
                                   std::uint64_t seed) {
  if (d < 0) throw Error(ErrorKind::precondition, "random_nonneg: negative degree");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto f = PiecewisePoly::zero(c);
  for (int q = 0; q < 2; ++q) {
    const auto s = detail::random_element(c, d / 2, rng);
    f += s * s;
  }
  if (d >= 2) {
    const int h = (d - 2) / 2;
    for (std::size_t i = 0; i < c->edges().size(); ++i) {
      Poly sq;
      for (int q = 0; q < 2; ++q) {
        std::vector<double> coeffs(static_cast<std::size_t>(h) + 1);
        for (double& x : coeffs) x = unif(rng);
        const Poly p(coeffs);
        sq += p * p;
      }
      std::vector<Poly> e(c->edges().size());
      e[i] = sq * Poly{0.25, 0.0, -0.25};
      f += PiecewisePoly(c, std::move(e), {});
    }
  }
  return f;
}

}  // namespace tentpole
