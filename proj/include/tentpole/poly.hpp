#pragma once

// Dense univariate polynomials in ascending coefficient order, plus the two
// numeric primitives everything else leans on: complex root extraction and
// exact minimization over [-1, 1].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "tentpole/config.hpp"

namespace tentpole {

// Degree reported by the zero polynomial. Compares below every real degree.
inline constexpr int kNegInfDegree = std::numeric_limits<int>::min();

template <class T>
struct scalar_traits {
  static constexpr bool exact = false;
  static double magnitude(const T& x) { return std::abs(x); }
};

template <class T>
struct scalar_traits<std::complex<T>> {
  static constexpr bool exact = false;
  static double magnitude(const std::complex<T>& x) {
    return static_cast<double>(std::abs(x));
  }
};

template <class T>
class BasicPoly {
 public:
  using scalar_type = T;

  BasicPoly() = default;
  BasicPoly(std::initializer_list<T> coeffs) : coeffs_(coeffs) { strip(); }
  explicit BasicPoly(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
    strip();
  }

  static BasicPoly constant(const T& c) { return BasicPoly({c}); }

  // c * t^n
  static BasicPoly monomial(int n, const T& c = T(1)) {
    std::vector<T> v(static_cast<std::size_t>(n) + 1, T(0));
    v.back() = c;
    return BasicPoly(std::move(v));
  }

  const std::vector<T>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  int degree() const {
    return coeffs_.empty() ? kNegInfDegree
                           : static_cast<int>(coeffs_.size()) - 1;
  }

  // Coefficient of t^i, zero beyond the stored range.
  T operator[](std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : T(0);
  }

  T leading() const { return coeffs_.empty() ? T(0) : coeffs_.back(); }

  double norm_inf() const {
    double m = 0.0;
    for (const T& c : coeffs_) m = std::max(m, scalar_traits<T>::magnitude(c));
    return m;
  }

  // Horner evaluation; the argument may live in a wider ring than T.
  template <class U>
  auto operator()(const U& x) const {
    using R = decltype(std::declval<T>() * std::declval<U>());
    R acc = R(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * x + R(*it);
    }
    return acc;
  }

  BasicPoly derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<T> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      d[i - 1] = coeffs_[i] * T(static_cast<long>(i));
    }
    return BasicPoly(std::move(d));
  }

  // p(-t)
  BasicPoly reflected() const {
    std::vector<T> v = coeffs_;
    for (std::size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
    return BasicPoly(std::move(v));
  }

  // Drop trailing coefficients with magnitude <= rel * |p|_inf.
  BasicPoly& trim(double rel) {
    if constexpr (scalar_traits<T>::exact) {
      strip();
    } else {
      const double cut = rel * norm_inf();
      while (!coeffs_.empty() &&
             scalar_traits<T>::magnitude(coeffs_.back()) <= cut) {
        coeffs_.pop_back();
      }
    }
    return *this;
  }

  BasicPoly operator-() const {
    std::vector<T> v = coeffs_;
    for (T& c : v) c = -c;
    return BasicPoly(std::move(v));
  }

  friend BasicPoly operator+(const BasicPoly& p, const BasicPoly& q) {
    return combine(p, q, T(1));
  }
  friend BasicPoly operator-(const BasicPoly& p, const BasicPoly& q) {
    return combine(p, q, T(-1));
  }

  friend BasicPoly operator*(const BasicPoly& p, const BasicPoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<T> v(p.size() + q.size() - 1, T(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        v[i + j] += p.coeffs_[i] * q.coeffs_[j];
      }
    }
    return BasicPoly(std::move(v));
  }

  friend BasicPoly operator*(const T& c, const BasicPoly& p) {
    std::vector<T> v = p.coeffs_;
    for (T& x : v) x *= c;
    return BasicPoly(std::move(v));
  }
  friend BasicPoly operator*(const BasicPoly& p, const T& c) { return c * p; }

  BasicPoly& operator+=(const BasicPoly& q) { return *this = *this + q; }
  BasicPoly& operator-=(const BasicPoly& q) { return *this = *this - q; }
  BasicPoly& operator*=(const BasicPoly& q) { return *this = *this * q; }

  friend bool operator==(const BasicPoly& p, const BasicPoly& q) {
    return p.coeffs_ == q.coeffs_;
  }

 private:
  static BasicPoly combine(const BasicPoly& p, const BasicPoly& q,
                           const T& sign) {
    std::vector<T> v(std::max(p.size(), q.size()), T(0));
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = p.coeffs_[i];
    for (std::size_t i = 0; i < q.size(); ++i) v[i] += sign * q.coeffs_[i];
    BasicPoly out(std::move(v));
    if constexpr (!scalar_traits<T>::exact) {
      // Cancellation in the top coefficients is judged against the
      // operands, not the (possibly tiny) result.
      const double cut =
          default_tolerances().trim * std::max(p.norm_inf(), q.norm_inf());
      while (!out.coeffs_.empty() &&
             scalar_traits<T>::magnitude(out.coeffs_.back()) <= cut) {
        out.coeffs_.pop_back();
      }
    }
    return out;
  }

  void strip() {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using Poly = BasicPoly<double>;
using CPoly = BasicPoly<std::complex<double>>;

inline Poly scale(const Poly& p, double c) { return c * p; }

template <class T>
BasicPoly<T> pow(const BasicPoly<T>& p, int n) {
  BasicPoly<T> out = BasicPoly<T>::constant(T(1));
  for (int i = 0; i < n; ++i) out *= p;
  return out;
}

// Quotient and remainder of p / d over a field.
template <class T>
std::pair<BasicPoly<T>, BasicPoly<T>> divmod(const BasicPoly<T>& p,
                                             const BasicPoly<T>& d) {
  if (d.is_zero()) throw Error(ErrorKind::precondition, "division by zero polynomial");
  if (p.degree() < d.degree()) return {BasicPoly<T>{}, p};
  std::vector<T> rem = p.coeffs();
  const std::size_t dn = d.size();
  std::vector<T> quot(rem.size() - dn + 1, T(0));
  const T lead = d.leading();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const T c = rem[k + dn - 1] / lead;
    quot[k] = c;
    for (std::size_t j = 0; j < dn; ++j) rem[k + j] -= c * d.coeffs()[j];
  }
  rem.resize(dn - 1);
  return {BasicPoly<T>(std::move(quot)), BasicPoly<T>(std::move(rem))};
}

inline CPoly to_complex(const Poly& p) {
  std::vector<std::complex<double>> v(p.coeffs().begin(), p.coeffs().end());
  return CPoly(std::move(v));
}

inline Poly real_part(const CPoly& p) {
  std::vector<double> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) v.push_back(c.real());
  return Poly(std::move(v));
}

inline Poly imag_part(const CPoly& p) {
  std::vector<double> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) v.push_back(c.imag());
  return Poly(std::move(v));
}

// lead * prod (t - z)
inline CPoly from_roots(const std::vector<std::complex<double>>& zs,
                        std::complex<double> lead = 1.0) {
  std::vector<std::complex<double>> v{lead};
  for (const auto& z : zs) {
    std::vector<std::complex<double>> next(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      next[i + 1] += v[i];
      next[i] -= z * v[i];
    }
    v = std::move(next);
  }
  return CPoly(std::move(v));
}

// Relative sup-norm distance between p and lead * prod (t - z).
inline double reconstruction_residual(const Poly& p,
                                      const std::vector<std::complex<double>>& zs) {
  const CPoly q = from_roots(zs, p.leading());
  double err = 0.0;
  for (std::size_t i = 0; i < std::max(p.size(), q.size()); ++i) {
    err = std::max(err, std::abs(std::complex<double>(p[i]) - q[i]));
  }
  return p.is_zero() ? err : err / p.norm_inf();
}

namespace detail {

// Parlett-Reinsch balancing restricted to powers of two.
inline void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double gamma = 0.95;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(a(i, j));
        col += std::abs(a(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      if (std::ldexp(col, exponent) + std::ldexp(row, -exponent) <
          gamma * (row + col)) {
        changed = true;
        a.row(i) *= std::ldexp(1.0, -exponent);
        a.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

inline void newton_polish(const Poly& p, std::complex<double>& z) {
  const Poly dp = p.derivative();
  std::complex<double> fz = p(z);
  for (int it = 0; it < 8 && std::abs(fz) > 0.0; ++it) {
    const std::complex<double> d = dp(z);
    if (std::abs(d) == 0.0) return;
    const std::complex<double> next = z - fz / d;
    const std::complex<double> fnext = p(next);
    if (!(std::abs(fnext) < std::abs(fz))) return;
    z = next;
    fz = fnext;
  }
}

inline bool is_real_root(const std::complex<double>& z, double pair) {
  return std::abs(z.imag()) <= pair * (1.0 + std::abs(z));
}

// Force exact conjugate symmetry: near-real roots go to the axis, the rest
// are matched greedily by distance.
inline void pair_conjugates(std::vector<std::complex<double>>& zs,
                            double pair) {
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (is_real_root(zs[i], pair)) {
      zs[i] = {zs[i].real(), 0.0};
    } else if (zs[i].imag() > 0) {
      upper.push_back(i);
    } else {
      lower.push_back(i);
    }
  }
  std::vector<bool> used(zs.size(), false);
  for (std::size_t i : upper) {
    std::size_t best = zs.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j : lower) {
      if (used[j]) continue;
      const double d = std::abs(zs[i] - std::conj(zs[j]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == zs.size()) {
      zs[i] = {zs[i].real(), 0.0};
      continue;
    }
    used[best] = true;
    const std::complex<double> avg = 0.5 * (zs[i] + std::conj(zs[best]));
    zs[i] = avg;
    zs[best] = std::conj(avg);
  }
  for (std::size_t j : lower) {
    if (!used[j]) zs[j] = {zs[j].real(), 0.0};
  }
}

// Eigenvalues of a k-fold root scatter on a circle of radius ~eps^(1/k); the
// cluster mean is far more accurate. A merge is kept only if it does not make
// the reconstruction worse.
inline void merge_clusters(const Poly& p, std::vector<std::complex<double>>& zs,
                           double pair) {
  const std::size_t n = zs.size();
  if (n < 2) return;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double radius = 1e-3 * (1.0 + std::abs(zs[i]));
      if (std::abs(zs[i] - zs[j]) <= radius) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[find(i)].push_back(i);

  const double floor_res = 1e-15 * static_cast<double>(n);
  double current = reconstruction_residual(p, zs);
  for (const auto& cluster : clusters) {
    if (cluster.size() < 2) continue;
    std::complex<double> mean = 0.0;
    for (std::size_t i : cluster) mean += zs[i];
    mean /= static_cast<double>(cluster.size());
    if (mean.imag() < 0 && !is_real_root(mean, pair)) continue;  // mirror handles it
    std::vector<std::complex<double>> candidate = zs;
    if (is_real_root(mean, pair)) {
      for (std::size_t i : cluster) candidate[i] = mean.real();
    } else {
      for (std::size_t i : cluster) {
        candidate[i] = mean;
        // Replace the mirror images as well.
        const std::complex<double> mirror = std::conj(zs[i]);
        for (std::size_t j = 0; j < n; ++j) {
          if (zs[j] == mirror && candidate[j] == zs[j]) {
            candidate[j] = std::conj(mean);
            break;
          }
        }
      }
    }
    const double res = reconstruction_residual(p, candidate);
    if (res <= 10.0 * std::max(current, floor_res)) {
      zs = std::move(candidate);
      current = res;
    }
  }
}

}  // namespace detail

// All complex roots of p, with multiplicity, via the eigenvalues of the
// balanced companion matrix followed by a Newton polish. The result is
// conjugate-symmetric and sorted by (real, imag).
inline std::vector<std::complex<double>> roots(
    const Poly& p, const Tolerances& tol = default_tolerances()) {
  if (p.degree() < 1) {
    throw Error(ErrorKind::precondition, "roots: polynomial must have degree >= 1");
  }
  std::vector<std::complex<double>> zs;
  // Exact zero roots are peeled off before building the companion matrix.
  std::size_t low = 0;
  while (p.coeffs()[low] == 0.0) {
    zs.emplace_back(0.0, 0.0);
    ++low;
  }
  const std::vector<double> reduced(p.coeffs().begin() + static_cast<std::ptrdiff_t>(low),
                                    p.coeffs().end());
  const Eigen::Index n = static_cast<Eigen::Index>(reduced.size()) - 1;
  if (n == 1) {
    zs.emplace_back(-reduced[0] / reduced[1], 0.0);
  } else if (n > 1) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      companion(i, n - 1) = -reduced[static_cast<std::size_t>(i)] / reduced.back();
    }
    detail::balance(companion);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw RootFindingError(std::numeric_limits<double>::infinity(),
                             "roots: eigenvalue iteration did not converge");
    }
    for (Eigen::Index i = 0; i < n; ++i) zs.push_back(solver.eigenvalues()(i));
  }
  // Newton can drag two members of a near-multiple pair onto the same side,
  // so the polished set is kept only if it reconstructs p at least as well.
  std::vector<std::complex<double>> polished = zs;
  for (auto& z : polished) {
    if (z != std::complex<double>(0.0, 0.0)) detail::newton_polish(p, z);
  }
  if (reconstruction_residual(p, polished) <= reconstruction_residual(p, zs)) {
    zs = std::move(polished);
  }
  detail::pair_conjugates(zs, tol.pair);
  detail::merge_clusters(p, zs, tol.pair);
  std::sort(zs.begin(), zs.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const double res = reconstruction_residual(p, zs);
  if (!(res <= tol.roots)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "roots: reconstruction residual %.3g exceeds tolerance (degree %d)",
                  res, p.degree());
    throw RootFindingError(res, buf);
  }
  return zs;
}

struct IntervalMin {
  double value;
  double argmin;
};

// Global minimum of p over [-1, 1]. Candidates are the endpoints and the real
// parts of every critical point inside the interval.
inline IntervalMin min_on_interval(const Poly& p,
                                   const Tolerances& tol = default_tolerances()) {
  std::vector<double> candidates{-1.0};
  const Poly dp = p.derivative();
  if (dp.degree() >= 1) {
    std::vector<double> inner;
    for (const auto& z : roots(dp, tol)) {
      if (z.real() > -1.0 && z.real() < 1.0) inner.push_back(z.real());
    }
    std::sort(inner.begin(), inner.end());
    candidates.insert(candidates.end(), inner.begin(), inner.end());
  }
  candidates.push_back(1.0);
  IntervalMin best{p(candidates.front()), candidates.front()};
  for (double x : candidates) {
    const double v = p(x);
    if (v < best.value) best = {v, x};
  }
  return best;
}

}  // namespace tentpole
