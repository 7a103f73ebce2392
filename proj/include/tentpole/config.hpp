#pragma once

#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace tentpole {

// Numerical tolerances shared by every stage of certificate construction.
// Relative tolerances are scaled by the sup-norm of the relevant
// coefficient vector at the point of use.
struct Tolerances {
  double trim = 1e-12;      // trailing-coefficient trimming, relative
  double roots = 1e-8;      // root reconstruction residual, relative
  double pair = 1e-7;       // |Im z| <= pair * (1 + |z|) counts as real
  double sos = 1e-8;        // decomposition reconstruction, relative
  double interp = 1e-8;     // boundary interpolation of matched square roots
  double bnd = 1e-8;        // boundary feasibility, times (1 + |f|)
  double dom = 1e-8;        // s^2 <= f + dom * |f| on [-1, 1]
  double nonneg = 1e-9;     // accepted negative dip, relative
  double compat = 1e-9;     // vertex compatibility, times (1 + max |F(v)|)
  double cert = 1e-6;       // certificate verification residual
};

// Short "%.3g" rendering for diagnostics.
inline std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

enum class ErrorKind {
  not_nonnegative,
  root_finding,
  boundary_infeasible,
  remainder_negative,
  malformed_complex,
  incompatible_vertex_values,
  complex_mismatch,
  glue_mismatch,
  index_out_of_range,
  edge_not_in_complex,
  precondition,
  numerical,
  malformed_input,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_nonnegative: return "NotNonnegative";
    case ErrorKind::root_finding: return "RootFindingFailure";
    case ErrorKind::boundary_infeasible: return "BoundaryInfeasible";
    case ErrorKind::remainder_negative: return "RemainderNegative";
    case ErrorKind::malformed_complex: return "MalformedComplex";
    case ErrorKind::incompatible_vertex_values: return "IncompatibleVertexValues";
    case ErrorKind::complex_mismatch: return "ComplexMismatch";
    case ErrorKind::glue_mismatch: return "GlueMismatch";
    case ErrorKind::index_out_of_range: return "IndexOutOfRange";
    case ErrorKind::edge_not_in_complex: return "EdgeNotInComplex";
    case ErrorKind::precondition: return "PreconditionViolation";
    case ErrorKind::numerical: return "NumericalFailure";
    case ErrorKind::malformed_input: return "MalformedInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// A point where a function was observed below zero. For an edge witness,
// `edge` holds the 1-based endpoints and `param` the parameter in [-1, 1];
// for a vertex witness `vertex` is set instead.
struct Witness {
  std::optional<std::pair<int, int>> edge;
  std::optional<int> vertex;
  double param = 0.0;
  double value = 0.0;

  std::string describe() const {
    if (edge) {
      return "edge " + std::to_string(edge->first) + "-" +
             std::to_string(edge->second) + " t=" + format_g(param) +
             " value=" + format_g(value);
    }
    if (vertex) {
      return "vertex " + std::to_string(*vertex) +
             " value=" + format_g(value);
    }
    return "t=" + format_g(param) + " value=" + format_g(value);
  }
};

class NotNonnegativeError : public Error {
 public:
  NotNonnegativeError(Witness witness, const std::string& context = {})
      : Error(ErrorKind::not_nonnegative,
              (context.empty() ? std::string() : context + ": ") +
                  "function is negative at " + witness.describe()),
        witness_(std::move(witness)) {}

  const Witness& witness() const { return witness_; }

 private:
  Witness witness_;
};

class RootFindingError : public Error {
 public:
  RootFindingError(double residual, const std::string& what)
      : Error(ErrorKind::root_finding, what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Two values that should agree at a vertex but do not. Used for both
// construction (IncompatibleVertexValues) and gluing (GlueMismatch).
class VertexMismatchError : public Error {
 public:
  VertexMismatchError(ErrorKind kind, int vertex, double first, double second)
      : Error(kind, std::string(to_string(kind)) + " at vertex " +
                        std::to_string(vertex) + ": " +
                        std::to_string(first) + " vs " +
                        std::to_string(second)),
        vertex_(vertex),
        first_(first),
        second_(second) {}

  int vertex() const { return vertex_; }
  double first() const { return first_; }
  double second() const { return second_; }

 private:
  int vertex_;
  double first_;
  double second_;
};

}  // namespace tentpole
