#pragma once

// Arbitrary-precision real scalar usable inside Eigen dense types.
//
// Orbit points of a positive-drift walk in the disk or in the positive-definite
// cone sit at distance ~ alpha * n from the basepoint; at n = 1e4 that is far
// outside double range (1 - |z| ~ e^{-d}).  Models are templated on the scalar
// so the same code runs in double for unit-scale work and in BigReal for the
// far field.

#include <Eigen/Core>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <limits>

namespace ergolab {

using BigReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

// The default precision is process global in this boost version: set it once,
// before any worker threads start, and run BigReal work on one thread.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(BigReal::default_precision()) {
    BigReal::default_precision(digits10_for(bits));
  }
  ~PrecisionScope() { BigReal::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  static unsigned current_bits() {
    return static_cast<unsigned>(std::ceil(BigReal::default_precision() * 3.3219280948873622));
  }
  static unsigned digits10_for(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
  }

 private:
  unsigned saved_;
};

// Bits needed to resolve quantities spanning e^{log_range} plus a margin.
inline unsigned bits_for_log_range(double log_range, unsigned margin = 256) {
  if (!(log_range > 0.0)) log_range = 0.0;
  return static_cast<unsigned>(std::ceil(1.4426950408889634 * log_range)) + margin;
}

template <class S>
inline double to_double(const S& x) {
  return static_cast<double>(x);
}

// Smallest eigenvalue accepted before a logarithm: double clamps at 1e-300,
// BigReal only rejects nonpositive values (its exponent range is huge).
template <class S>
inline S log_floor() {
  return S(0);
}
template <>
inline double log_floor<double>() {
  return 1e-300;
}

// Natural log to double accuracy.  For BigReal this reads the binary exponent
// and mantissa directly, which is far cheaper than a full-precision log; the
// argument itself is still formed at full precision.
inline double fast_log(double x) { return std::log(x); }
inline BigReal fast_log(const BigReal& x) {
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, x.backend().data(), MPFR_RNDN);
  return BigReal(std::log(m) + static_cast<double>(e) * 0.69314718055994530942);
}

}  // namespace ergolab

namespace Eigen {
template <>
struct NumTraits<ergolab::BigReal> : GenericNumTraits<ergolab::BigReal> {
  using R = ergolab::BigReal;
  using Real = R;
  using NonInteger = R;
  using Literal = R;
  using Nested = R;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8,
    IsSigned = 1,
    RequireInitialization = 1
  };
  static Real epsilon() { return std::numeric_limits<R>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real highest() { return (std::numeric_limits<R>::max)(); }
  static Real lowest() { return (std::numeric_limits<R>::lowest)(); }
  static Real infinity() { return std::numeric_limits<R>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<R>::quiet_NaN(); }
  static int digits10() { return static_cast<int>(R::default_precision()); }
};
}  // namespace Eigen
