#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace convlab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 64);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Exact rational value (the float must be finite).
  Rational to_rational() const;
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t value_;
};

/// Closed interval [lower, upper] with outward-rounded MPFR endpoints.
///
/// Every operation rounds the lower bound toward -inf and the upper bound
/// toward +inf, so the result contains every value obtainable from points of
/// the operands. Infinite endpoints are permitted.
class Enclosure {
 public:
  /// [0, 0] at 64 bits.
  Enclosure();
  Enclosure(BigFloat lower, BigFloat upper);

  static Enclosure point(const Rational& q, int bits);
  static Enclosure point(const BigFloat& x);
  static Enclosure between(const Rational& lo, const Rational& hi, int bits);
  static Enclosure nonnegative_unbounded(int bits);

  int precision() const;
  const BigFloat& lower() const { return lower_; }
  const BigFloat& upper() const { return upper_; }

  bool is_point() const;
  bool contains(const Rational& q) const;
  bool contains(const Enclosure& other) const;
  bool contains_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  bool is_finite() const;
  bool intersects(const Enclosure& other) const;
  /// Strictly below every point of `other`.
  bool certainly_less(const Enclosure& other) const;

  BigFloat width() const;
  double width_double() const;
  double mid_double() const;
  BigFloat midpoint() const;

  Rational lower_rational() const { return lower_.to_rational(); }
  Rational upper_rational() const { return upper_.to_rational(); }

  std::string to_string(int digits = 20) const;

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  /// Throws InvalidArgument if the divisor contains zero.
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a);

  Enclosure& operator+=(const Enclosure& b) { return *this = *this + b; }
  Enclosure& operator*=(const Enclosure& b) { return *this = *this * b; }

  friend Enclosure abs(const Enclosure& a);
  friend Enclosure exp(const Enclosure& a);
  /// Requires a strictly positive argument.
  friend Enclosure log(const Enclosure& a);
  friend Enclosure log1p(const Enclosure& a);
  friend Enclosure sqrt(const Enclosure& a);
  friend Enclosure pow(const Enclosure& a, unsigned long k);
  friend Enclosure max(const Enclosure& a, const Enclosure& b);
  friend Enclosure min(const Enclosure& a, const Enclosure& b);
  friend Enclosure hull(const Enclosure& a, const Enclosure& b);
  /// Intersection; caller guarantees the operands intersect.
  friend Enclosure intersect(const Enclosure& a, const Enclosure& b);

 private:
  BigFloat lower_;
  BigFloat upper_;
};

Enclosure scale(const Enclosure& a, const Rational& q);
/// x -> x / (1 + x) for x >= 0 (monotone increasing).
Enclosure saturate(const Enclosure& a);

}  // namespace convlab
