#pragma once

// Piecewise exponential-sum functions on [0,1] or [0,+inf).
//
// A piece is an interval carrying x -> sum_i coef_i * e^{rate_i x}. Pieces
// have pairwise disjoint interiors but may share a closed endpoint, in which
// case the value there is the sum of both pieces (evaluate() sums every piece
// containing x). Off the pieces the function is 0.

#include <optional>
#include <string>
#include <vector>

#include "convlab/exactreal.hpp"

namespace convlab {

enum class Domain { UnitInterval, HalfLine };

std::string_view to_string(Domain d);

struct Interval {
  Point lo;
  Point hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(const Point& lo, const Point& hi);

  bool contains(const Point& x) const;
  bool is_point() const { return lo == hi; }
  bool is_empty() const;
  bool has_positive_length() const { return lo < hi; }
  /// Exact hi - lo; throws NonIntegrable for an unbounded interval.
  MonomialSum length() const;
  Enclosure length_enclosure(int bits) const;
  std::string to_string() const;

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed && a.hi_closed == b.hi_closed;
  }
};

/// Intersection of two intervals (possibly empty).
Interval intersect(const Interval& a, const Interval& b);
/// Sorted, pairwise disjoint intervals of positive length covering the same
/// set up to finitely many points.
std::vector<Interval> merge_intervals(std::vector<Interval> parts);

struct ExpTerm {
  MonomialSum coefficient;
  LinearForm rate;

  friend bool operator==(const ExpTerm& a, const ExpTerm& b) {
    return a.coefficient == b.coefficient && a.rate == b.rate;
  }
};

/// x -> sum coef_i e^{rate_i x}; terms sorted by rate with distinct rates and
/// nonzero coefficients.
class ExpSum {
 public:
  ExpSum() = default;
  ExpSum(const MonomialSum& constant);  // NOLINT(google-explicit-constructor)
  static ExpSum term(const MonomialSum& coefficient, const LinearForm& rate);
  static ExpSum from_terms(std::vector<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Empty, or a single term with zero rate.
  bool is_constant() const;
  MonomialSum constant_value() const;
  bool is_single_term() const { return terms_.size() == 1; }

  ExpSum& operator+=(const ExpSum& other);
  ExpSum& operator-=(const ExpSum& other);
  ExpSum& operator*=(const ExpSum& other);
  friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }
  friend ExpSum operator-(ExpSum a, const ExpSum& b) { return a -= b; }
  friend ExpSum operator*(ExpSum a, const ExpSum& b) { return a *= b; }
  ExpSum scaled(const MonomialSum& s) const;
  ExpSum pow(unsigned m) const;

  /// Exact value at a rational abscissa.
  MonomialSum at(const Rational& x) const;
  Enclosure at(const Enclosure& x, int bits) const;

  std::string to_string() const;

  friend bool operator==(const ExpSum& a, const ExpSum& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<ExpTerm> terms_;
};

struct ExpPiece {
  Interval interval;
  ExpSum expr;

  friend bool operator==(const ExpPiece& a, const ExpPiece& b) {
    return a.interval == b.interval && a.expr == b.expr;
  }
};

class PwExpFun {
 public:
  explicit PwExpFun(Domain domain = Domain::UnitInterval) : domain_(domain) {}
  /// Validates containment in the domain and disjoint interiors; drops empty
  /// intervals and zero expressions; sorts by left endpoint.
  PwExpFun(Domain domain, std::vector<ExpPiece> pieces);

  static PwExpFun zero(Domain domain) { return PwExpFun(domain); }
  static PwExpFun indicator(Domain domain, const Interval& support, const MonomialSum& value = 1);
  static PwExpFun single(Domain domain, const Interval& support, const ExpSum& expr);

  Domain domain() const { return domain_; }
  const std::vector<ExpPiece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }
  /// Every piece has constant value 1 on an interval of positive length.
  bool is_indicator() const;
  /// Pieces of positive length.
  std::vector<Interval> support() const;
  /// Closed hull of the domain.
  Interval domain_interval() const;

  std::string to_string() const;

  friend bool operator==(const PwExpFun& a, const PwExpFun& b) {
    return a.domain_ == b.domain_ && a.pieces_ == b.pieces_;
  }

 private:
  Domain domain_;
  std::vector<ExpPiece> pieces_;
};

/// Exact value at a rational point. Throws OutOfDomain.
MonomialSum evaluate_exact(const PwExpFun& f, const Rational& x);
/// Enclosure of f(x). Throws OutOfDomain.
Enclosure evaluate(const PwExpFun& f, const Point& x, int bits);

/// a*f + b*g on the common refinement. Throws DomainMismatch.
PwExpFun linear_combine(const MonomialSum& a, const PwExpFun& f, const MonomialSum& b, const PwExpFun& g);
PwExpFun multiply(const PwExpFun& f, const PwExpFun& g);
/// m-th pointwise power, m >= 1.
PwExpFun power(const PwExpFun& f, unsigned m);
PwExpFun scale(const PwExpFun& f, const MonomialSum& s);

/// Equal outside a null set.
bool equal_ae(const PwExpFun& f, const PwExpFun& g);

/// A certified quantity: enclosure always, exact symbolic value when known.
struct Certified {
  std::optional<MonomialSum> exact;
  Enclosure enclosure;

  bool is_exact() const { return exact.has_value(); }
  std::string to_string() const;
};

/// m{x : |f(x)| > eps}. eps must be certifiably positive.
Certified superlevel_measure(const PwExpFun& f, const MonomialSum& eps, int bits);

/// Rational intervals certainly contained in {|f| > eps}, plus the enclosure of
/// the full set's measure.
struct SuperlevelSet {
  std::vector<Interval> inner;
  Certified measure;
};
SuperlevelSet superlevel_set(const PwExpFun& f, const MonomialSum& eps, int bits);

/// Integral of |f|. Throws NonIntegrable.
Certified l1_norm(const PwExpFun& f, int bits);
/// Measure of the union of pieces of positive length.
Certified support_measure(const PwExpFun& f);
/// Lebesgue measure of a finite union of intervals.
Certified union_measure(const std::vector<Interval>& parts);
/// Essential supremum of |f| over a finite union of intervals. Throws EmptyRegion.
Certified ess_sup(const PwExpFun& f, const std::vector<Interval>& region, int bits);
Certified ess_sup(const PwExpFun& f, int bits);
/// Integral over [0,1] of |f-g| / (1 + |f-g|). Throws DomainMismatch.
Certified rho(const PwExpFun& f, const PwExpFun& g, int bits);
/// Integral of |f-g| (either domain).
Certified l1_distance(const PwExpFun& f, const PwExpFun& g, int bits);

namespace detail {

/// Integral of |g|/(1+|g|) over [a,b] by Taylor-model quadrature, whatever
/// the number of terms. Error target 2^{-bits/2}.
Enclosure saturated_integral_quadrature(const ExpSum& g, const Point& a, const Point& b, int bits);
/// Same integral through the closed form for a single term.
Enclosure saturated_integral_closed_form(const ExpTerm& t, const Point& a, const Point& b, int bits);

}  // namespace detail

}  // namespace convlab
