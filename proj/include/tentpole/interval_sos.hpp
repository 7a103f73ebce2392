#pragma once

// Sums-of-squares representations of polynomials that are nonnegative on
// [-1, 1]:
//
//   lukacs_decompose   f = p^2 + (1-t^2) q^2            (even degree)
//                      f = (1+t) p^2 + (1-t) q^2        (odd degree)
//   kms_form           f = s0 + s1 (1-t^2), s0 and s1 sums of two squares
//   boundary_matched_sqrt
//                      s with s(-1) = a, s(1) = b and s^2 <= f on [-1, 1]
//   adapt_sos          f = sum_i s_i^2 + r (1-t^2) with prescribed s_i(+-1)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "tentpole/config.hpp"
#include "tentpole/poly.hpp"

namespace tentpole {

// u^2 + v^2
struct TwoSquareForm {
  Poly u;
  Poly v;

  Poly value() const { return u * u + v * v; }
  double operator()(double x) const {
    const double a = u(x);
    const double b = v(x);
    return a * a + b * b;
  }
  int degree() const {
    return std::max(u.degree(), v.degree()) == kNegInfDegree
               ? kNegInfDegree
               : 2 * std::max(u.degree(), v.degree());
  }
};

enum class Parity { even, odd };

struct LukacsForm {
  Poly p;
  Poly q;
  Parity parity = Parity::even;

  Poly value() const {
    if (parity == Parity::even) return p * p + Poly{1.0, 0.0, -1.0} * q * q;
    return Poly{1.0, 1.0} * p * p + Poly{1.0, -1.0} * q * q;
  }
};

struct KmsForm {
  TwoSquareForm s0;
  TwoSquareForm s1;

  Poly value() const { return s0.value() + s1.value() * Poly{1.0, 0.0, -1.0}; }
};

// Which endpoints of [-1, 1] carry prescribed square-root values.
enum class MatchEnds { both, left_only, right_only };

struct AdaptResult {
  std::vector<Poly> squares;  // k + 2 entries
  TwoSquareForm remainder;

  Poly value() const {
    Poly acc;
    for (const Poly& s : squares) acc += s * s;
    return acc + remainder.value() * Poly{1.0, 0.0, -1.0};
  }
};

namespace detail {

inline const Poly& weight() {
  static const Poly w{1.0, 0.0, -1.0};
  return w;
}

inline double rel_residual(const Poly& f, const Poly& g) {
  double err = 0.0;
  for (std::size_t i = 0; i < std::max(f.size(), g.size()); ++i) {
    err = std::max(err, std::abs(f[i] - g[i]));
  }
  return f.is_zero() ? err : err / f.norm_inf();
}

// Product of two Lukacs forms. Both sign choices for the second Q are valid;
// the one giving the smaller Q is kept so the output is deterministic.
inline LukacsForm compose(const LukacsForm& a, const LukacsForm& b) {
  if (a.parity == Parity::odd && b.parity == Parity::even) return compose(b, a);
  static const Poly one_plus{1.0, 1.0};
  static const Poly one_minus{1.0, -1.0};
  auto build = [&](const Poly& q2) {
    LukacsForm out;
    if (a.parity == Parity::even && b.parity == Parity::even) {
      out.parity = Parity::even;
      out.p = a.p * b.p - weight() * a.q * q2;
      out.q = a.p * q2 + b.p * a.q;
    } else if (a.parity == Parity::odd && b.parity == Parity::odd) {
      out.parity = Parity::even;
      out.p = one_plus * a.p * b.p - one_minus * a.q * q2;
      out.q = a.p * q2 + a.q * b.p;
    } else {
      out.parity = Parity::odd;
      out.p = a.p * b.p - one_minus * a.q * q2;
      out.q = a.p * q2 + one_plus * a.q * b.p;
    }
    return out;
  };
  LukacsForm plus = build(b.q);
  LukacsForm minus = build(-b.q);
  return minus.q.norm_inf() < plus.q.norm_inf() ? minus : plus;
}

inline void require_nonneg(const Poly& f, double scale, const Tolerances& tol,
                           const char* where) {
  const IntervalMin m = min_on_interval(f, tol);
  if (m.value < -tol.nonneg * std::max(scale, f.norm_inf())) {
    Witness w;
    w.param = m.argmin;
    w.value = m.value;
    throw NotNonnegativeError(w, where);
  }
}

// Root-factor construction of the Lukacs form. Assumes f has already passed
// the nonnegativity screen.
inline LukacsForm lukacs_from_roots(const Poly& f, const Tolerances& tol) {
  if (f.is_zero()) return {};
  if (f.degree() == 0) {
    if (f[0] < 0) {
      throw NotNonnegativeError(Witness{{}, {}, 0.0, f[0]}, "lukacs_decompose");
    }
    return {Poly{std::sqrt(f[0])}, Poly{}, Parity::even};
  }

  const std::vector<std::complex<double>> zs = roots(f, tol);
  std::vector<LukacsForm> factors;
  std::vector<double> near;
  int flips = 0;

  // Interior zeros of a nonnegative f have even multiplicity, so real roots
  // in or just outside the interval are clustered and paired within each
  // cluster. A double root at an endpoint often comes back split across it.
  constexpr double cluster_gap = 1e-3;
  constexpr double endpoint_reach = 1e-3;

  // Real roots on or outside the interval need no snapping: the formulas
  // below are exact there and degrade gracefully to 1 - t and 1 + t.
  auto add_linear = [&](double r) {
    if (r >= 1.0) {
      ++flips;  // r - t = (r-1)/2 (1+t) + (r+1)/2 (1-t)
      factors.push_back({Poly{std::sqrt((r - 1.0) / 2.0)},
                         Poly{std::sqrt((r + 1.0) / 2.0)}, Parity::odd});
    } else {
      // t - r = (1-r)/2 (1+t) + (-1-r)/2 (1-t)
      factors.push_back({Poly{std::sqrt((1.0 - r) / 2.0)},
                         Poly{std::sqrt((-1.0 - r) / 2.0)}, Parity::odd});
    }
  };

  for (const auto& z : zs) {
    if (z.imag() == 0.0) {
      const double r = z.real();
      if (r > -1.0 - endpoint_reach && r < 1.0 + endpoint_reach) {
        near.push_back(r);
      } else {
        add_linear(r);
      }
    } else if (z.imag() > 0.0) {
      // (t-a)^2 + b^2 = (alpha t + beta)^2 + (1-t^2) gamma^2
      const double a = z.real();
      const double b2 = z.imag() * z.imag();
      const double c = a * a + b2 - 1.0;
      const double g2 = 0.5 * (c + std::sqrt(c * c + 4.0 * b2));
      const double alpha = std::sqrt(1.0 + g2);
      factors.push_back({Poly{-a / alpha, alpha}, Poly{std::sqrt(g2)}, Parity::even});
    }
  }

  // A cluster with no interior member is left to the linear formulas. An odd
  // cluster is accepted only at an endpoint, where its outermost member is a
  // simple zero at -1 or 1 (snapped if it drifted inside).
  std::sort(near.begin(), near.end());
  std::size_t begin = 0;
  while (begin < near.size()) {
    std::size_t end = begin + 1;
    while (end < near.size() && near[end] - near[end - 1] <= cluster_gap) ++end;
    const bool has_interior = std::any_of(near.begin() + static_cast<std::ptrdiff_t>(begin),
                                          near.begin() + static_cast<std::ptrdiff_t>(end),
                                          [](double r) { return r > -1.0 && r < 1.0; });
    if (!has_interior) {
      for (std::size_t i = begin; i < end; ++i) add_linear(near[i]);
      begin = end;
      continue;
    }
    std::size_t lo = begin;
    std::size_t hi = end;
    if ((end - begin) % 2 == 1) {
      const double dlo = near[begin] + 1.0;
      const double dhi = 1.0 - near[end - 1];
      if (std::min(dlo, dhi) > endpoint_reach) {
        const double r = near[begin + (end - begin) / 2];
        throw NotNonnegativeError(Witness{{}, {}, r, f(r)},
                                  "lukacs_decompose: unpaired interior root");
      }
      if (dlo <= dhi) {
        add_linear(std::min(near[lo], -1.0));
        ++lo;
      } else {
        --hi;
        add_linear(std::max(near[hi], 1.0));
      }
    }
    for (std::size_t i = lo; i + 1 < hi; i += 2) {
      const double mid = 0.5 * (near[i] + near[i + 1]);
      factors.push_back({Poly{-mid, 1.0}, Poly{}, Parity::even});
    }
    begin = end;
  }

  const double c = f.leading() * ((flips % 2) ? -1.0 : 1.0);
  if (c < 0) {
    const IntervalMin m = min_on_interval(f, tol);
    throw NotNonnegativeError(Witness{{}, {}, m.argmin, m.value},
                              "lukacs_decompose: negative leading sign");
  }
  LukacsForm acc{Poly{std::sqrt(c)}, Poly{}, Parity::even};
  for (const LukacsForm& factor : factors) acc = compose(acc, factor);
  acc.p.trim(tol.trim);
  acc.q.trim(tol.trim);
  return acc;
}

// As lukacs_from_roots, but with known zeros at t = -1 and/or t = 1 divided
// out exactly first. Used where a remainder vanishes at an endpoint in exact
// arithmetic but only approximately in floating point.
inline LukacsForm lukacs_with_endpoint_zeros(const Poly& f, bool zero_left,
                                             bool zero_right, double scale,
                                             const Tolerances& tol) {
  Poly h = f;
  std::vector<LukacsForm> endpoint_factors;
  if (zero_left && h.degree() >= 1) {
    h = divmod(h, Poly{1.0, 1.0}).first;
    endpoint_factors.push_back({Poly{1.0}, Poly{}, Parity::odd});
  }
  if (zero_right && h.degree() >= 1) {
    h = divmod(h, Poly{1.0, -1.0}).first;
    endpoint_factors.push_back({Poly{}, Poly{1.0}, Parity::odd});
  }
  require_nonneg(h, scale, tol, "lukacs_decompose");
  LukacsForm acc = lukacs_from_roots(h, tol);
  for (const LukacsForm& factor : endpoint_factors) acc = compose(acc, factor);
  return acc;
}

inline KmsForm kms_from_lukacs(const LukacsForm& lf) {
  KmsForm out;
  if (lf.parity == Parity::even) {
    out.s0.u = lf.p;
    out.s1.u = lf.q;
    return out;
  }
  // (1+t) p^2 + (1-t) q^2 with (1 +- t) = 1/2 (1 +- t)^2 + 1/2 (1 - t^2)
  const double h = std::sqrt(0.5);
  out.s0.u = h * (Poly{1.0, 1.0} * lf.p);
  out.s0.v = h * (Poly{1.0, -1.0} * lf.q);
  out.s1.u = h * lf.p;
  out.s1.v = h * lf.q;
  return out;
}

inline KmsForm kms_form_scaled(const Poly& f, bool zero_left, bool zero_right,
                               double scale, const Tolerances& tol) {
  if (f.is_zero()) return {};
  const LukacsForm lf = lukacs_with_endpoint_zeros(f, zero_left, zero_right, scale, tol);
  KmsForm out = kms_from_lukacs(lf);
  const double res = rel_residual(f, out.value());
  if (!(res <= tol.sos * std::max(1.0, scale / f.norm_inf()))) {
    throw Error(ErrorKind::numerical, "kms_form: reconstruction residual " +
                                          format_g(res) + " exceeds tolerance");
  }
  return out;
}

}  // namespace detail

// Markov-Lukacs representation of f >= 0 on [-1, 1], built from the root
// factorization of f: conjugate pairs, real roots outside the interval,
// paired interior roots and endpoint roots each become an elementary form and
// the elementary forms are multiplied together.
inline LukacsForm lukacs_decompose(const Poly& f,
                                   const Tolerances& tol = default_tolerances()) {
  if (f.is_zero()) return {};
  detail::require_nonneg(f, f.norm_inf(), tol, "lukacs_decompose");
  LukacsForm lf = detail::lukacs_from_roots(f, tol);
  const double res = detail::rel_residual(f, lf.value());
  if (!(res <= tol.sos)) {
    throw Error(ErrorKind::numerical, "lukacs_decompose: reconstruction residual " +
                                          format_g(res) + " exceeds tolerance");
  }
  return lf;
}

// f = s0 + s1 (1 - t^2) with deg s0 <= deg f + 1 and deg s1 <= deg f - 1.
inline KmsForm kms_form(const Poly& f, const Tolerances& tol = default_tolerances()) {
  if (f.is_zero()) return {};
  return detail::kms_form_scaled(f, false, false, f.norm_inf(), tol);
}

// A polynomial s with s(-1) = a, s(1) = b and s^2 <= f on [-1, 1].
//
// With s0 = u^2 + v^2 from kms_form, g = u + i v satisfies |g(x)|^2 = s0(x)
// on the real line. The linear factor l interpolates a / g(-1) and
// b / g(1) and has |l| <= 1 on the interval, so s = Re(g l) is dominated by
// |g| and s^2 <= s0 <= f.
inline Poly boundary_matched_sqrt(const Poly& f, double a, double b,
                                  const Tolerances& tol = default_tolerances()) {
  if (f.is_zero()) {
    if (a * a > tol.bnd || b * b > tol.bnd) {
      throw Error(ErrorKind::boundary_infeasible,
                  "boundary_matched_sqrt: nonzero boundary value for zero f");
    }
    return Poly{};
  }
  const double fl = f(-1.0);
  const double fr = f(1.0);
  const double bnd = tol.bnd * (1.0 + f.norm_inf());
  if (a * a > fl + bnd || b * b > fr + bnd) {
    throw Error(ErrorKind::boundary_infeasible,
                "boundary_matched_sqrt: a^2=" + std::to_string(a * a) +
                    " f(-1)=" + std::to_string(fl) + " b^2=" +
                    std::to_string(b * b) + " f(1)=" + std::to_string(fr));
  }
  const KmsForm kms = kms_form(f, tol);
  const CPoly g = to_complex(kms.s0.u) +
                  std::complex<double>(0.0, 1.0) * to_complex(kms.s0.v);
  const std::complex<double> gl = g(-1.0);
  const std::complex<double> gr = g(1.0);

  std::complex<double> left = 0.0;
  std::complex<double> right = 0.0;
  if (fl > bnd && std::abs(gl) > 0.0) left = std::conj(gl) * a / std::norm(gl);
  if (fr > bnd && std::abs(gr) > 0.0) right = std::conj(gr) * b / std::norm(gr);
  // l(t) = left (1-t)/2 + right (1+t)/2
  const CPoly ell({0.5 * (left + right), 0.5 * (right - left)});
  Poly s = real_part(g * ell);
  s.trim(tol.trim);
  return s;
}

// f = sum_{i=1}^{k+2} s_i^2 + r (1 - t^2) with s_i(-1) = a_i, s_i(1) = b_i
// for i <= k, obtained by k successive boundary-matched square roots taken off
// the running remainder and a final kms_form.
//
// With a single matched end the free end is matched proportionally,
// a_i = b_i sqrt(f(-1) / f(1)) (or the mirror), which satisfies the squared
// norm condition at both ends. When f vanishes at the matched end the whole
// free value goes on the first square.
inline AdaptResult adapt_sos(const Poly& f, std::vector<double> a,
                             std::vector<double> b, MatchEnds match,
                             const Tolerances& tol = default_tolerances()) {
  const std::size_t k = match == MatchEnds::left_only ? a.size() : b.size();
  if (match == MatchEnds::both && a.size() != b.size()) {
    throw Error(ErrorKind::precondition, "adapt_sos: boundary vectors differ in length");
  }
  AdaptResult out;
  out.squares.assign(k + 2, Poly{});
  if (f.is_zero()) return out;

  const double scale = f.norm_inf();
  const double fl = f(-1.0);
  const double fr = f(1.0);
  const double bnd = tol.bnd * (1.0 + scale);
  auto sum_sq = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
  };

  bool zero_left = fl <= bnd;
  bool zero_right = fr <= bnd;
  switch (match) {
    case MatchEnds::both:
      zero_left = zero_right = true;
      break;
    case MatchEnds::right_only:
      a.assign(k, 0.0);
      if (fr > bnd) {
        const double ratio = std::sqrt(std::max(fl, 0.0) / fr);
        for (std::size_t i = 0; i < k; ++i) a[i] = b[i] * ratio;
        zero_left = zero_right = true;
      } else if (k > 0) {
        a[0] = std::sqrt(std::max(fl, 0.0));
        zero_left = zero_right = true;
      }
      break;
    case MatchEnds::left_only:
      b.assign(k, 0.0);
      if (fl > bnd) {
        const double ratio = std::sqrt(std::max(fr, 0.0) / fl);
        for (std::size_t i = 0; i < k; ++i) b[i] = a[i] * ratio;
        zero_left = zero_right = true;
      } else if (k > 0) {
        b[0] = std::sqrt(std::max(fr, 0.0));
        zero_left = zero_right = true;
      }
      break;
  }
  if (std::abs(sum_sq(a) - fl) > bnd || std::abs(sum_sq(b) - fr) > bnd) {
    throw Error(ErrorKind::boundary_infeasible,
                "adapt_sos: squared boundary norms do not match f(-1), f(1)");
  }

  // Remainders this small relative to f are numerical noise; dropping them
  // costs far less than the reconstruction budget.
  const double negligible = 0.01 * tol.sos * scale;
  Poly rem = f;
  for (std::size_t i = 0; i < k; ++i) {
    if (rem.norm_inf() <= negligible) {
      rem = Poly{};
    }
    Poly s;
    if (!rem.is_zero()) {
      s = boundary_matched_sqrt(rem, a[i], b[i], tol);
    }
    out.squares[i] = s;
    rem = rem - s * s;
    if (!rem.is_zero()) {
      const IntervalMin m = min_on_interval(rem, tol);
      if (m.value < -tol.nonneg * scale) {
        throw Error(ErrorKind::remainder_negative,
                    "adapt_sos: remainder after step " + std::to_string(i + 1) +
                        " reaches " + format_g(m.value) + " at t=" +
                        format_g(m.argmin));
      }
    }
  }

  if (rem.norm_inf() > negligible) {
    const KmsForm kms = detail::kms_form_scaled(rem, zero_left, zero_right, scale, tol);
    out.squares[k] = kms.s0.u;
    out.squares[k + 1] = kms.s0.v;
    out.remainder = kms.s1;
  }

  const double res = detail::rel_residual(f, out.value());
  if (!(res <= tol.sos)) {
    throw Error(ErrorKind::numerical, "adapt_sos: reconstruction residual " +
                                          format_g(res) + " exceeds tolerance");
  }
  return out;
}

}  // namespace tentpole
