#pragma once

// Continuous piecewise polynomials on a 1-dimensional complex, stored as one
// polynomial per edge in a parameter t in [-1, 1] (t = -1 at the smaller
// vertex, t = 1 at the larger) plus one value per isolated vertex, and the
// sparse tent-variable presentation of the same algebra.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tentpole/complex1d.hpp"
#include "tentpole/config.hpp"
#include "tentpole/poly.hpp"

namespace tentpole {

struct AtVertex {
  int vertex;
};
struct OnEdge {
  Edge edge;
  double t;
};
using Location = std::variant<AtVertex, OnEdge>;

template <class T>
class BasicPiecewisePoly {
 public:
  using scalar_type = T;
  using poly_type = BasicPoly<T>;

  BasicPiecewisePoly() : complex_(std::make_shared<const Complex1D>()) {}

  // No compatibility check; callers guarantee continuity.
  BasicPiecewisePoly(std::shared_ptr<const Complex1D> complex,
                     std::vector<poly_type> edge_polys, std::vector<T> isolated)
      : complex_(std::move(complex)),
        edges_(std::move(edge_polys)),
        isolated_(std::move(isolated)) {
    edges_.resize(complex_->edges().size());
    isolated_.resize(complex_->isolated().size(), T(0));
  }

  static BasicPiecewisePoly zero(std::shared_ptr<const Complex1D> complex) {
    return BasicPiecewisePoly(std::move(complex), {}, {});
  }

  static BasicPiecewisePoly constant(std::shared_ptr<const Complex1D> complex,
                                     const T& c) {
    std::vector<poly_type> e(complex->edges().size(), poly_type::constant(c));
    std::vector<T> iso(complex->isolated().size(), c);
    return BasicPiecewisePoly(std::move(complex), std::move(e), std::move(iso));
  }

  const Complex1D& complex() const { return *complex_; }
  const std::shared_ptr<const Complex1D>& complex_ptr() const { return complex_; }
  const std::vector<poly_type>& edge_polys() const { return edges_; }
  const poly_type& edge_poly(std::size_t i) const { return edges_[i]; }
  const poly_type& edge_poly(const Edge& e) const {
    auto idx = complex_->edge_index(e);
    if (!idx) throw Error(ErrorKind::edge_not_in_complex, "edge " + edge_key(e) + " not in complex");
    return edges_[*idx];
  }
  const std::vector<T>& isolated_values() const { return isolated_; }

  // F(v), read from the first incident edge or the isolated slot.
  T vertex_value(int v) const {
    if (v < 1 || v > complex_->vertex_count()) {
      throw Error(ErrorKind::index_out_of_range, "vertex " + std::to_string(v));
    }
    if (auto iso = complex_->isolated_index(v)) return isolated_[*iso];
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = complex_->edges()[i];
      if (e.first == v) return edges_[i](T(-1));
      if (e.second == v) return edges_[i](T(1));
    }
    return T(0);
  }

  T eval_at(const Location& loc) const {
    if (const auto* at = std::get_if<AtVertex>(&loc)) return vertex_value(at->vertex);
    const auto& on = std::get<OnEdge>(loc);
    return edge_poly(on.edge)(T(on.t));
  }

  // Intrinsic degree: the largest edge degree; 0 when only isolated values
  // are nonzero; kNegInfDegree for the zero function.
  int degree() const {
    int d = kNegInfDegree;
    for (const auto& p : edges_) d = std::max(d, p.degree());
    for (const T& v : isolated_) {
      if (v != T(0)) d = std::max(d, 0);
    }
    return d;
  }

  bool is_zero() const { return degree() == kNegInfDegree; }

  double norm_inf() const {
    double m = 0.0;
    for (const auto& p : edges_) m = std::max(m, p.norm_inf());
    for (const T& v : isolated_) m = std::max(m, scalar_traits<T>::magnitude(v));
    return m;
  }

  BasicPiecewisePoly operator-() const { return T(-1) * *this; }

  friend BasicPiecewisePoly operator+(const BasicPiecewisePoly& a,
                                      const BasicPiecewisePoly& b) {
    return zip(a, b, [](const auto& x, const auto& y) { return x + y; });
  }
  friend BasicPiecewisePoly operator-(const BasicPiecewisePoly& a,
                                      const BasicPiecewisePoly& b) {
    return zip(a, b, [](const auto& x, const auto& y) { return x - y; });
  }
  friend BasicPiecewisePoly operator*(const BasicPiecewisePoly& a,
                                      const BasicPiecewisePoly& b) {
    return zip(a, b, [](const auto& x, const auto& y) { return x * y; });
  }
  friend BasicPiecewisePoly operator*(const T& c, const BasicPiecewisePoly& a) {
    std::vector<poly_type> e;
    e.reserve(a.edges_.size());
    for (const auto& p : a.edges_) e.push_back(c * p);
    std::vector<T> iso;
    iso.reserve(a.isolated_.size());
    for (const T& v : a.isolated_) iso.push_back(c * v);
    return BasicPiecewisePoly(a.complex_, std::move(e), std::move(iso));
  }
  BasicPiecewisePoly& operator+=(const BasicPiecewisePoly& b) { return *this = *this + b; }

  friend bool operator==(const BasicPiecewisePoly& a, const BasicPiecewisePoly& b) {
    return a.complex() == b.complex() && a.edges_ == b.edges_ &&
           a.isolated_ == b.isolated_;
  }

 private:
  template <class Op>
  static BasicPiecewisePoly zip(const BasicPiecewisePoly& a,
                                const BasicPiecewisePoly& b, Op op) {
    if (a.complex_ != b.complex_ && !(a.complex() == b.complex())) {
      throw Error(ErrorKind::complex_mismatch, "operands live on different complexes");
    }
    std::vector<poly_type> e;
    e.reserve(a.edges_.size());
    for (std::size_t i = 0; i < a.edges_.size(); ++i) e.push_back(op(a.edges_[i], b.edges_[i]));
    std::vector<T> iso;
    iso.reserve(a.isolated_.size());
    for (std::size_t i = 0; i < a.isolated_.size(); ++i) {
      iso.push_back(op(a.isolated_[i], b.isolated_[i]));
    }
    return BasicPiecewisePoly(a.complex_, std::move(e), std::move(iso));
  }

  std::shared_ptr<const Complex1D> complex_;
  std::vector<poly_type> edges_;
  std::vector<T> isolated_;
};

using PiecewisePoly = BasicPiecewisePoly<double>;

inline std::shared_ptr<const Complex1D> share(Complex1D c) {
  return std::make_shared<const Complex1D>(std::move(c));
}

namespace detail {

template <class T>
bool values_agree(const T& x, const T& y, double tol) {
  if constexpr (scalar_traits<T>::exact) {
    (void)tol;
    return x == y;
  } else {
    return scalar_traits<T>::magnitude(x - y) <= tol;
  }
}

template <class T>
double to_double(const T& x) {
  if constexpr (std::is_arithmetic_v<T>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

// Throws `kind` at the first vertex whose incident edge polynomials disagree.
template <class T>
void check_compatible(const BasicPiecewisePoly<T>& f, double compat, ErrorKind kind) {
  const Complex1D& c = f.complex();
  const int m = c.vertex_count();
  std::vector<std::vector<T>> values(static_cast<std::size_t>(m) + 1);
  for (std::size_t i = 0; i < c.edges().size(); ++i) {
    const Edge& e = c.edges()[i];
    values[static_cast<std::size_t>(e.first)].push_back(f.edge_poly(i)(T(-1)));
    values[static_cast<std::size_t>(e.second)].push_back(f.edge_poly(i)(T(1)));
  }
  double mag = 0.0;
  for (const auto& vs : values) {
    for (const T& v : vs) mag = std::max(mag, scalar_traits<T>::magnitude(v));
  }
  const double tol = compat * (1.0 + mag);
  for (int v = 1; v <= m; ++v) {
    const auto& vs = values[static_cast<std::size_t>(v)];
    for (std::size_t i = 1; i < vs.size(); ++i) {
      if (!values_agree(vs[0], vs[i], tol)) {
        throw VertexMismatchError(kind, v, to_double(vs[0]), to_double(vs[i]));
      }
    }
  }
}

}  // namespace detail

// Validated construction from one polynomial per edge (in complex.edges()
// order) and one value per isolated vertex.
template <class T>
BasicPiecewisePoly<T> make(std::shared_ptr<const Complex1D> complex,
                           std::vector<BasicPoly<T>> edge_polys,
                           std::vector<T> isolated_values,
                           const Tolerances& tol = default_tolerances()) {
  if (edge_polys.size() != complex->edges().size() ||
      isolated_values.size() != complex->isolated().size()) {
    throw Error(ErrorKind::precondition, "make: wrong number of edge polynomials or isolated values");
  }
  BasicPiecewisePoly<T> f(std::move(complex), std::move(edge_polys), std::move(isolated_values));
  detail::check_compatible(f, tol.compat, ErrorKind::incompatible_vertex_values);
  return f;
}

inline PiecewisePoly make(const Complex1D& complex, std::vector<Poly> edge_polys,
                          std::vector<double> isolated_values = {},
                          const Tolerances& tol = default_tolerances()) {
  if (isolated_values.empty()) isolated_values.assign(complex.isolated().size(), 0.0);
  return make<double>(share(complex), std::move(edge_polys), std::move(isolated_values), tol);
}

// Courant function T_k: 1 at v_k, 0 at every other vertex, linear on edges.
template <class T = double>
BasicPiecewisePoly<T> tent(std::shared_ptr<const Complex1D> complex, int k) {
  if (k < 1 || k > complex->vertex_count()) {
    throw Error(ErrorKind::index_out_of_range, "tent index " + std::to_string(k));
  }
  const T half = T(1) / T(2);
  std::vector<BasicPoly<T>> e(complex->edges().size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Edge& ed = complex->edges()[i];
    if (ed.second == k) e[i] = BasicPoly<T>({half, half});
    if (ed.first == k) e[i] = BasicPoly<T>({half, -half});
  }
  std::vector<T> iso(complex->isolated().size(), T(0));
  if (auto idx = complex->isolated_index(k)) iso[*idx] = T(1);
  return BasicPiecewisePoly<T>(std::move(complex), std::move(e), std::move(iso));
}

// Sparse polynomial in the tent variables T_1..T_m. A monomial maps vertex
// index to a positive power; the empty monomial is the constant term.
template <class T>
struct BasicTentPoly {
  using Monomial = std::map<int, int>;
  std::map<Monomial, T> terms;

  // Total degree of the largest stored monomial.
  int tent_degree() const {
    int d = kNegInfDegree;
    for (const auto& [mono, c] : terms) {
      if (c == T(0)) continue;
      int total = 0;
      for (const auto& [v, p] : mono) total += p;
      d = std::max(d, total);
    }
    return d;
  }

  void add(Monomial mono, const T& c) {
    for (auto it = mono.begin(); it != mono.end();) {
      it = it->second == 0 ? mono.erase(it) : std::next(it);
    }
    T& slot = terms[std::move(mono)];
    slot += c;
  }
};

using TentPoly = BasicTentPoly<double>;

// Evaluates G(T_1, ..., T_m) in the edge representation.
template <class T>
BasicPiecewisePoly<T> from_tent(std::shared_ptr<const Complex1D> complex,
                                const BasicTentPoly<T>& g) {
  const int m = complex->vertex_count();
  std::vector<BasicPiecewisePoly<T>> tents;
  tents.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) tents.push_back(tent<T>(complex, k));
  auto acc = BasicPiecewisePoly<T>::zero(complex);
  const auto one = BasicPiecewisePoly<T>::constant(complex, T(1));
  for (const auto& [mono, c] : g.terms) {
    if (c == T(0)) continue;
    BasicPiecewisePoly<T> term = c * one;
    for (const auto& [v, p] : mono) {
      if (v < 1 || v > m) {
        throw Error(ErrorKind::index_out_of_range, "tent variable T_" + std::to_string(v));
      }
      if (p < 0) throw Error(ErrorKind::precondition, "negative tent exponent");
      for (int i = 0; i < p; ++i) term = term * tents[static_cast<std::size_t>(v - 1)];
    }
    acc += term;
  }
  return acc;
}

// One tent-variable preimage of F:
//   G = sum_i F(v_i) T_i + sum_{(i,j) in E} 4 T_i T_j h_ij(T_j - T_i)
// where h_ij = (f_ij - linear interpolant) / (1 - t^2) and T_j - T_i = t on
// edge (i,j). When all vertex values agree the linear part is written as the
// constant c, using sum_i T_i = 1.
template <class T>
BasicTentPoly<T> to_tent(const BasicPiecewisePoly<T>& f,
                         const Tolerances& tol = default_tolerances()) {
  using P = BasicPoly<T>;
  using Monomial = typename BasicTentPoly<T>::Monomial;
  const Complex1D& c = f.complex();
  BasicTentPoly<T> g;
  const T half = T(1) / T(2);

  std::vector<T> vals;
  for (int v = 1; v <= c.vertex_count(); ++v) vals.push_back(f.vertex_value(v));
  const bool uniform =
      !vals.empty() && std::all_of(vals.begin(), vals.end(),
                                   [&](const T& x) { return x == vals.front(); });
  if (uniform) {
    if (vals.front() != T(0)) g.add({}, vals.front());
  } else {
    for (int v = 1; v <= c.vertex_count(); ++v) {
      if (vals[static_cast<std::size_t>(v - 1)] != T(0)) {
        g.add({{v, 1}}, vals[static_cast<std::size_t>(v - 1)]);
      }
    }
  }

  const P weight({T(1), T(0), T(-1)});
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto [i, j] = c.edges()[e];
    const T fi = vals[static_cast<std::size_t>(i - 1)];
    const T fj = vals[static_cast<std::size_t>(j - 1)];
    const P linear({(fi + fj) * half, (fj - fi) * half});
    const P deviation = f.edge_poly(e) - linear;
    if (deviation.is_zero()) continue;
    const P h = divmod(deviation, weight).first;
    // 4 T_i T_j (T_j - T_i)^n expands binomially.
    for (std::size_t n = 0; n < h.size(); ++n) {
      const T hn = h[n];
      if (hn == T(0)) continue;
      T binom = T(1);
      for (std::size_t r = 0; r <= n; ++r) {
        // C(n, r) T_j^r (-T_i)^(n-r)
        const T sign = ((n - r) % 2) ? T(-1) : T(1);
        Monomial mono{{i, 1 + static_cast<int>(n - r)}, {j, 1 + static_cast<int>(r)}};
        g.add(std::move(mono), T(4) * hn * binom * sign);
        binom = binom * T(static_cast<long>(n - r)) / T(static_cast<long>(r + 1));
      }
    }
  }
  if constexpr (!scalar_traits<T>::exact) {
    const double cut = tol.compat * (1.0 + f.norm_inf());
    for (auto it = g.terms.begin(); it != g.terms.end();) {
      it = std::abs(it->second) <= cut ? g.terms.erase(it) : std::next(it);
    }
  } else {
    (void)tol;
    for (auto it = g.terms.begin(); it != g.terms.end();) {
      it = it->second == T(0) ? g.terms.erase(it) : std::next(it);
    }
  }
  return g;
}

// An element equal to g on edge (k,l), of degree <= 1 on every other edge,
// decaying linearly from g(-1) at v_k and g(1) at v_l on neighbouring edges
// and zero elsewhere.
template <class T>
BasicPiecewisePoly<T> linear_extension(std::shared_ptr<const Complex1D> complex,
                                       const Edge& edge, const BasicPoly<T>& g) {
  const auto idx = complex->edge_index(edge);
  if (!idx) {
    throw Error(ErrorKind::edge_not_in_complex, "linear_extension: edge " + edge_key(edge));
  }
  const auto [k, l] = complex->edges()[*idx];
  const T half = T(1) / T(2);
  const T at_k = g(T(-1));
  const T at_l = g(T(1));
  std::vector<BasicPoly<T>> e(complex->edges().size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i == *idx) {
      e[i] = g;
      continue;
    }
    const auto [a, b] = complex->edges()[i];
    // Value x at the t = -1 end decays as x (1-t)/2; at t = 1 as x (1+t)/2.
    if (a == k || a == l) {
      const T x = a == k ? at_k : at_l;
      e[i] = BasicPoly<T>({x * half, -x * half});
    } else if (b == k || b == l) {
      const T x = b == k ? at_k : at_l;
      e[i] = BasicPoly<T>({x * half, x * half});
    }
  }
  return BasicPiecewisePoly<T>(std::move(complex), std::move(e), {});
}

// F restricted to a subcomplex.
template <class T>
BasicPiecewisePoly<T> restrict_to(const BasicPiecewisePoly<T>& f, const SubComplex& sub) {
  std::vector<BasicPoly<T>> e;
  for (const Edge& le : sub.complex.edges()) {
    const Edge pe = sub.parent_edge(le);
    if (pe.first < pe.second) {
      e.push_back(f.edge_poly(pe));
    } else {
      e.push_back(f.edge_poly({pe.second, pe.first}).reflected());
    }
  }
  std::vector<T> iso;
  for (int v : sub.complex.isolated()) iso.push_back(f.vertex_value(sub.parent_vertex(v)));
  return BasicPiecewisePoly<T>(share(sub.complex), std::move(e), std::move(iso));
}

template <class T>
struct Placed {
  const SubComplex* where;
  const BasicPiecewisePoly<T>* f;
};

// Assembles pieces living on subcomplexes into one element of the target.
// Target edges and isolated vertices not covered by any piece are zero.
// Pieces must agree at every vertex they share.
template <class T>
BasicPiecewisePoly<T> glue(std::shared_ptr<const Complex1D> target,
                           std::span<const Placed<T>> pieces,
                           const Tolerances& tol = default_tolerances()) {
  std::vector<BasicPoly<T>> e(target->edges().size());
  std::vector<T> iso(target->isolated().size(), T(0));
  for (const Placed<T>& piece : pieces) {
    const Complex1D& local = piece.where->complex;
    for (std::size_t i = 0; i < local.edges().size(); ++i) {
      const Edge pe = piece.where->parent_edge(local.edges()[i]);
      const bool flip = pe.first > pe.second;
      const auto idx = target->edge_index(pe);
      if (!idx) throw Error(ErrorKind::edge_not_in_complex, "glue: edge " + edge_key(pe));
      e[*idx] = flip ? piece.f->edge_poly(i).reflected() : piece.f->edge_poly(i);
    }
    for (std::size_t i = 0; i < local.isolated().size(); ++i) {
      const int pv = piece.where->parent_vertex(local.isolated()[i]);
      if (auto idx = target->isolated_index(pv)) iso[*idx] = piece.f->isolated_values()[i];
    }
  }
  BasicPiecewisePoly<T> out(std::move(target), std::move(e), std::move(iso));
  detail::check_compatible(out, tol.compat, ErrorKind::glue_mismatch);
  return out;
}

template <class T>
BasicPiecewisePoly<T> glue(std::shared_ptr<const Complex1D> target, const SubComplex& w1,
                           const BasicPiecewisePoly<T>& f1, const SubComplex& w2,
                           const BasicPiecewisePoly<T>& f2,
                           const Tolerances& tol = default_tolerances()) {
  const Placed<T> pieces[] = {{&w1, &f1}, {&w2, &f2}};
  return glue<T>(std::move(target), std::span<const Placed<T>>(pieces), tol);
}

// Extension by zero of an element living on a union of components.
template <class T>
BasicPiecewisePoly<T> embed(std::shared_ptr<const Complex1D> target, const SubComplex& where,
                            const BasicPiecewisePoly<T>& f) {
  const Placed<T> pieces[] = {{&where, &f}};
  return glue<T>(std::move(target), std::span<const Placed<T>>(pieces));
}

}  // namespace tentpole
