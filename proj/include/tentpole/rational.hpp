#pragma once

// Exact rational scalars for the verification fast path.

#include <boost/multiprecision/cpp_int.hpp>

#include "tentpole/poly.hpp"

namespace tentpole {

using Rational = boost::multiprecision::cpp_rational;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static double magnitude(const Rational& x) {
    return boost::multiprecision::abs(x).convert_to<double>();
  }
};

using RationalPoly = BasicPoly<Rational>;

}  // namespace tentpole
