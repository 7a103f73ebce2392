#pragma once

// Helpers shared by the unit and acceptance tests. The oracles here avoid the
// library's own arithmetic where that matters: evaluation is done in long
// double from raw coefficients and exact checks convert every double to the
// rational it denotes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tentpole/tentpole.hpp"

namespace testing_support {

using namespace tentpole;

inline long double eval_ld(const std::vector<double>& c, long double x) {
  long double acc = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

inline long double eval_ld(const Poly& p, long double x) { return eval_ld(p.coeffs(), x); }

inline std::vector<double> grid(int n = 1001) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(-1.0 + 2.0 * i / (n - 1));
  return xs;
}

inline Poly random_poly(std::mt19937_64& rng, int degree, double scale = 1.0) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (double& x : c) x = unif(rng);
  if (degree >= 0 && std::abs(c.back()) < 0.1) c.back() = c.back() < 0 ? -0.5 : 0.5;
  return Poly(c);
}

// p^2 + (1 - t^2) q^2 with deg p <= d/2 and deg q <= (d-2)/2.
inline Poly random_nonneg_poly(std::mt19937_64& rng, int d) {
  const Poly p = random_poly(rng, d / 2);
  Poly f = p * p;
  if (d >= 2) {
    const Poly q = random_poly(rng, (d - 2) / 2);
    f = f + Poly{1.0, 0.0, -1.0} * q * q;
  }
  return f;
}

// A connected complex on m vertices: a random spanning tree plus random
// extra edges up to `max_edges` in total.
inline Complex1D random_connected_complex(std::mt19937_64& rng, int m, int max_edges) {
  std::vector<Edge> edges;
  for (int v = 2; v <= m; ++v) {
    const int u = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(v - 1));
    edges.emplace_back(u, v);
  }
  for (int attempt = 0; attempt < 20 && static_cast<int>(edges.size()) < max_edges; ++attempt) {
    int i = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    int j = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (std::find(edges.begin(), edges.end(), Edge{i, j}) != edges.end()) continue;
    if (rng() % 2) edges.emplace_back(i, j);
  }
  return Complex1D(m, edges);
}

inline Rational exact(double x) { return Rational(x); }

inline RationalPoly to_rational(const Poly& p) {
  std::vector<Rational> c;
  for (double x : p.coeffs()) c.push_back(exact(x));
  return RationalPoly(c);
}

inline BasicPiecewisePoly<Rational> to_rational(const PiecewisePoly& f,
                                                std::shared_ptr<const Complex1D> c) {
  std::vector<RationalPoly> e;
  for (const Poly& p : f.edge_polys()) e.push_back(to_rational(p));
  std::vector<Rational> iso;
  for (double x : f.isolated_values()) iso.push_back(exact(x));
  return BasicPiecewisePoly<Rational>(std::move(c), std::move(e), std::move(iso));
}

// The certificate with every stored double read as the rational it denotes.
inline BasicCertificate<Rational> to_rational(const Certificate& cert) {
  BasicCertificate<Rational> out;
  out.complex = cert.complex;
  for (const auto& s : cert.s_roots) out.s_roots.push_back(to_rational(s, cert.complex));
  for (const auto& [e, roots] : cert.edge_terms) {
    for (const auto& r : roots) out.edge_terms[e].push_back(to_rational(r, cert.complex));
  }
  return out;
}

// Largest coefficient difference between F and the exact expansion of cert,
// relative to 1 + |F|.
inline double exact_residual(const PiecewisePoly& f, const Certificate& cert) {
  const auto fe = to_rational(f, cert.complex);
  const auto diff = max_abs_difference(expand(to_rational(cert)), fe);
  return diff.convert_to<double>() / (1.0 + f.norm_inf());
}

}  // namespace testing_support
