#pragma once

// Exact scalar kernel.
//
// Values are rational combinations of monomials q * prod(base^form), where a
// base is Euler's number or a positive integer (canonically a prime) and each
// exponent is a LinearForm over a declared symbol basis. The default basis is
// {1, sqrt 2, sqrt 3, sqrt 5, ...}, which is linearly independent over Q.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "convlab/enclosure.hpp"

namespace convlab {

/// Default ladder ceiling for comparisons and sign decisions.
inline constexpr int kDefaultBudgetBits = 1024;
inline constexpr int kLadderStartBits = 64;

// ------------------------------------------------------------- SymbolBasis

struct Symbol {
  std::string name;
  /// Certified value generator; must return nested enclosures as bits grows.
  std::function<Enclosure(int bits)> value;
};

class SymbolBasis {
 public:
  /// Symbol 0 must be the constant 1. `independent` declares the basis
  /// Q-linearly independent, which licenses structural nonzero certificates.
  SymbolBasis(std::vector<Symbol> symbols, bool independent);

  /// {1, sqrt(p_1), sqrt(p_2), ...} over the first 64 primes.
  static const SymbolBasis& standard();

  std::size_t size() const { return symbols_.size(); }
  bool independent() const { return independent_; }
  /// Throws UnknownSymbol.
  const Symbol& at(std::size_t index) const;
  Enclosure value(std::size_t index, int bits) const;
  const std::string& name(std::size_t index) const { return at(index).name; }

 private:
  std::vector<Symbol> symbols_;
  bool independent_;
};

/// Symbol index of sqrt(p_i) in the standard basis (i >= 1 gives sqrt 2, sqrt 3, ...).
inline std::size_t sqrt_prime_symbol(std::size_t i) { return i; }

// -------------------------------------------------------------- LinearForm

/// Finite rational combination sum q_i * s_i of basis symbols (s_0 = 1).
class LinearForm {
 public:
  LinearForm() = default;
  static LinearForm constant(const Rational& q);
  static LinearForm symbol(std::size_t index, const Rational& q = 1);

  const std::map<std::size_t, Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const;
  /// Coefficient of symbol 0.
  Rational constant_part() const;
  Rational coefficient(std::size_t index) const;
  /// Largest referenced symbol index + 1 (0 for the zero form).
  std::size_t span() const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(const Rational& q);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& q) { return a *= q; }
  friend LinearForm operator*(const Rational& q, LinearForm a) { return a *= q; }
  friend LinearForm operator-(LinearForm a) { return a *= Rational(-1); }

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator<(const LinearForm& a, const LinearForm& b) { return a.coeffs_ < b.coeffs_; }

  /// Throws UnknownSymbol.
  Enclosure value(int bits, const SymbolBasis& basis = SymbolBasis::standard()) const;
  /// Sign of the value, decided by the precision ladder (0 only for the zero form).
  std::optional<int> sign(int budget_bits = kDefaultBudgetBits,
                          const SymbolBasis& basis = SymbolBasis::standard()) const;
  std::string to_string(const SymbolBasis& basis = SymbolBasis::standard()) const;

 private:
  void set(std::size_t index, const Rational& q);
  std::map<std::size_t, Rational> coeffs_;
};

// ---------------------------------------------------------------- Monomial

/// Euler's number, or an integer > 1 (a prime after canonicalization, or an
/// unfactored cofactor above the trial-division limit).
struct Base {
  bool is_e = false;
  Integer value;

  static Base euler() { return Base{true, 0}; }
  static Base integer(const Integer& v) { return Base{false, v}; }

  friend bool operator==(const Base& a, const Base& b) {
    return a.is_e == b.is_e && (a.is_e || a.value == b.value);
  }
  friend bool operator<(const Base& a, const Base& b) {
    if (a.is_e != b.is_e) return a.is_e;
    return !a.is_e && a.value < b.value;
  }
};

/// coefficient * prod base^exponent, in canonical form: nonzero coefficient,
/// no factor with a zero exponent, and integer-base exponents with constant
/// part in [0, 1) (integral powers are folded into the coefficient).
class Monomial {
 public:
  using Factors = std::map<Base, LinearForm>;

  explicit Monomial(const Rational& coefficient = 1);
  Monomial(const Rational& coefficient, Factors factors);

  /// e^exponent.
  static Monomial exp(const LinearForm& exponent);
  /// base^exponent for a positive rational base.
  static Monomial power(const Rational& base, const LinearForm& exponent);

  const Rational& coefficient() const { return coeff_; }
  const Factors& factors() const { return factors_; }
  bool is_rational() const { return factors_.empty(); }

  Monomial pow(long k) const;
  Monomial scaled(const Rational& q) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.coeff_ == b.coeff_ && a.factors_ == b.factors_;
  }

  /// Enclosure of ln(prod base^exponent) (the coefficient is excluded).
  Enclosure log_factor(int bits, const SymbolBasis& basis = SymbolBasis::standard()) const;
  /// Enclosure of ln|value|.
  Enclosure log_abs(int bits, const SymbolBasis& basis = SymbolBasis::standard()) const;
  Enclosure value(int bits, const SymbolBasis& basis = SymbolBasis::standard()) const;
  std::string to_string(const SymbolBasis& basis = SymbolBasis::standard()) const;

 private:
  void canonicalize();
  Rational coeff_;
  Factors factors_;
};

/// Strict weak order on factor signatures (coefficient ignored).
bool signature_less(const Monomial& a, const Monomial& b);
bool same_signature(const Monomial& a, const Monomial& b);

// ------------------------------------------------------------ MonomialSum

/// Finite sum of monomials. Arithmetic results are always normalized; the
/// raw constructor keeps terms as given so `normalize` can be exercised.
class MonomialSum {
 public:
  MonomialSum() = default;
  MonomialSum(const Rational& q);  // NOLINT(google-explicit-constructor)
  MonomialSum(int q) : MonomialSum(Rational(q)) {}  // NOLINT(google-explicit-constructor)
  MonomialSum(const Monomial& m);  // NOLINT(google-explicit-constructor)
  static MonomialSum raw(std::vector<Monomial> terms);

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_normalized() const;
  bool is_rational() const;
  /// Value when `is_rational()`.
  Rational rational_value() const;
  bool is_monomial() const { return terms_.size() == 1; }

  MonomialSum& operator+=(const MonomialSum& other);
  MonomialSum& operator-=(const MonomialSum& other);
  MonomialSum& operator*=(const MonomialSum& other);
  friend MonomialSum operator+(MonomialSum a, const MonomialSum& b) { return a += b; }
  friend MonomialSum operator-(MonomialSum a, const MonomialSum& b) { return a -= b; }
  friend MonomialSum operator*(MonomialSum a, const MonomialSum& b) { return a *= b; }
  friend MonomialSum operator-(const MonomialSum& a);
  MonomialSum pow(unsigned k) const;

  /// Structural equality of the normalized forms.
  friend bool operator==(const MonomialSum& a, const MonomialSum& b);

  std::string to_string(const SymbolBasis& basis = SymbolBasis::standard()) const;

 private:
  friend MonomialSum normalize(const MonomialSum& ms);
  std::vector<Monomial> terms_;
};

/// Canonical form: terms sorted by signature, like terms merged, zeros dropped.
MonomialSum normalize(const MonomialSum& ms);

/// Throws UnknownSymbol when a form references a symbol outside the basis.
/// Requires bits >= 32.
Enclosure eval_enclosure(const MonomialSum& ms, int bits,
                         const SymbolBasis& basis = SymbolBasis::standard());

enum class NonzeroStatus { CertifiedNonzero, CertifiedZero, Indeterminate };

struct NonzeroCertificate {
  NonzeroStatus status = NonzeroStatus::Indeterminate;
  std::string reason;
  /// True when an enclosure excluding 0 was also found.
  bool numerically_confirmed = false;
  int bits_used = 0;
};

NonzeroCertificate certify_nonzero(const MonomialSum& ms, int budget_bits = kDefaultBudgetBits,
                                   const SymbolBasis& basis = SymbolBasis::standard());

enum class Ordering { Less, Equal, Greater, Indeterminate };

std::string_view to_string(Ordering o);

/// Equal only through structural identity; Less/Greater through disjoint
/// enclosures found on the ladder 64, 128, ... budget bits.
Ordering compare(const MonomialSum& a, const MonomialSum& b, int budget_bits = kDefaultBudgetBits,
                 const SymbolBasis& basis = SymbolBasis::standard());

/// Sign (-1, 0, +1) or nullopt when the ladder is exhausted.
std::optional<int> sign(const MonomialSum& ms, int budget_bits = kDefaultBudgetBits,
                        const SymbolBasis& basis = SymbolBasis::standard());

// ------------------------------------------------------------------- Point

/// Exactly representable abscissa: q * e^k (k integer), or +infinity.
class Point {
 public:
  Point() = default;
  Point(const Rational& q) : q_(q) {}  // NOLINT(google-explicit-constructor)
  Point(int q) : q_(q) {}              // NOLINT(google-explicit-constructor)
  Point(const Rational& q, long e_power) : q_(q), k_(q == 0 ? 0 : e_power) {}
  static Point infinity();

  bool is_infinite() const { return infinite_; }
  bool is_rational() const { return !infinite_ && k_ == 0; }
  const Rational& rational_part() const { return q_; }
  long e_power() const { return k_; }
  /// Rational value; requires is_rational().
  const Rational& rational() const;

  MonomialSum to_sum() const;
  Enclosure enclosure(int bits) const;
  std::string to_string() const;

  friend bool operator==(const Point& a, const Point& b);
  friend int compare(const Point& a, const Point& b);
  friend bool operator<(const Point& a, const Point& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Point& a, const Point& b) { return compare(a, b) <= 0; }

 private:
  Rational q_ = 0;
  long k_ = 0;
  bool infinite_ = false;
};

/// Rational string "p/q" or "p".
std::string to_string(const Rational& q);
/// Parses "p", "p/q", or a finite decimal like "0.125".
Rational parse_rational(const std::string& text);

}  // namespace convlab
