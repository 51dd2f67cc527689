#include "convlab/exactreal.hpp"

#include <algorithm>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

namespace {

constexpr unsigned long kTrialDivisionLimit = 1000000;

std::vector<unsigned long> first_primes(std::size_t count) {
  std::vector<unsigned long> primes;
  for (unsigned long candidate = 2; primes.size() < count; ++candidate) {
    bool prime = true;
    for (auto p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational integer_power(const Integer& base, const Integer& exponent) {
  Integer magnitude;
  mpz_pow_ui(magnitude.get_mpz_t(), base.get_mpz_t(), Integer(abs(exponent)).get_ui());
  if (exponent >= 0) return Rational(magnitude);
  return Rational(Integer(1), magnitude);
}

// Prime factorization by trial division; a leftover cofactor above the limit
// is returned as a single factor.
std::vector<std::pair<Integer, unsigned long>> factorize(Integer n) {
  std::vector<std::pair<Integer, unsigned long>> out;
  for (unsigned long p = 2; p <= kTrialDivisionLimit && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e > 0) out.emplace_back(Integer(p), e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

Enclosure exp_of(const Enclosure& x) { return exp(x); }

int compare_factors(const Monomial::Factors& a, const Monomial::Factors& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (ia->first < ib->first) return -1;
    if (ib->first < ia->first) return 1;
    if (ia->second < ib->second) return -1;
    if (ib->second < ia->second) return 1;
  }
  if (ia == a.end() && ib == b.end()) return 0;
  return ia == a.end() ? -1 : 1;
}

}  // namespace

// ------------------------------------------------------------- SymbolBasis

SymbolBasis::SymbolBasis(std::vector<Symbol> symbols, bool independent)
    : symbols_(std::move(symbols)), independent_(independent) {
  if (symbols_.empty() || symbols_.front().name != "1") {
    throw Error(ErrorCode::InvalidArgument, "symbol 0 of a basis must be the constant 1");
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    for (std::size_t j = i + 1; j < symbols_.size(); ++j) {
      if (symbols_[i].name == symbols_[j].name) {
        throw Error(ErrorCode::InvalidArgument, "duplicate symbol name " + symbols_[i].name);
      }
    }
  }
}

const SymbolBasis& SymbolBasis::standard() {
  static const SymbolBasis basis = [] {
    std::vector<Symbol> symbols;
    symbols.push_back({"1", [](int bits) { return Enclosure::point(Rational(1), bits); }});
    for (auto p : first_primes(64)) {
      symbols.push_back({"sqrt" + std::to_string(p), [p](int bits) {
                           return sqrt(Enclosure::point(Rational(p), bits));
                         }});
    }
    return SymbolBasis(std::move(symbols), true);
  }();
  return basis;
}

const Symbol& SymbolBasis::at(std::size_t index) const {
  if (index >= symbols_.size()) {
    throw Error(ErrorCode::UnknownSymbol, "symbol index " + std::to_string(index) + " outside basis of size " +
                                              std::to_string(symbols_.size()));
  }
  return symbols_[index];
}

Enclosure SymbolBasis::value(std::size_t index, int bits) const { return at(index).value(bits); }

// -------------------------------------------------------------- LinearForm

LinearForm LinearForm::constant(const Rational& q) {
  LinearForm f;
  f.set(0, q);
  return f;
}

LinearForm LinearForm::symbol(std::size_t index, const Rational& q) {
  LinearForm f;
  f.set(index, q);
  return f;
}

void LinearForm::set(std::size_t index, const Rational& q) {
  if (q == 0) {
    coeffs_.erase(index);
  } else {
    coeffs_[index] = q;
  }
}

bool LinearForm::is_constant() const {
  return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
}

Rational LinearForm::constant_part() const { return coefficient(0); }

Rational LinearForm::coefficient(std::size_t index) const {
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

std::size_t LinearForm::span() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first + 1; }

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  for (const auto& [i, q] : other.coeffs_) set(i, coefficient(i) + q);
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  for (const auto& [i, q] : other.coeffs_) set(i, coefficient(i) - q);
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& q) {
  if (q == 0) {
    coeffs_.clear();
  } else {
    for (auto& [i, c] : coeffs_) c *= q;
  }
  return *this;
}

Enclosure LinearForm::value(int bits, const SymbolBasis& basis) const {
  Enclosure total = Enclosure::point(Rational(0), bits);
  for (const auto& [i, q] : coeffs_) {
    if (i == 0) {
      total = total + Enclosure::point(q, bits);
    } else {
      total = total + scale(basis.value(i, bits), q);
    }
  }
  return total;
}

std::optional<int> LinearForm::sign(int budget_bits, const SymbolBasis& basis) const {
  if (coeffs_.empty()) return 0;
  if (is_constant()) return sgn(constant_part());
  for (int bits = kLadderStartBits; bits <= budget_bits; bits *= 2) {
    Enclosure v = value(bits, basis);
    if (v.is_positive()) return 1;
    if (v.is_negative()) return -1;
  }
  return std::nullopt;
}

std::string LinearForm::to_string(const SymbolBasis& basis) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, q] : coeffs_) {
    Rational mag = abs(q);
    if (first) {
      if (q < 0) os << "-";
    } else {
      os << (q < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << convlab::to_string(mag);
    } else {
      if (mag != 1) os << convlab::to_string(mag) << "*";
      os << (i < basis.size() ? basis.name(i) : "s" + std::to_string(i));
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(const Rational& coefficient) : coeff_(coefficient) { coeff_.canonicalize(); }

Monomial::Monomial(const Rational& coefficient, Factors factors)
    : coeff_(coefficient), factors_(std::move(factors)) {
  coeff_.canonicalize();
  canonicalize();
}

Monomial Monomial::exp(const LinearForm& exponent) {
  Factors f;
  if (!exponent.is_zero()) f.emplace(Base::euler(), exponent);
  return Monomial(1, std::move(f));
}

Monomial Monomial::power(const Rational& base, const LinearForm& exponent) {
  if (base <= 0) throw Error(ErrorCode::InvalidArgument, "monomial base must be positive");
  Factors f;
  if (!exponent.is_zero()) {
    for (const auto& [p, e] : factorize(base.get_num())) f[Base::integer(p)] += exponent * Rational(e);
    for (const auto& [p, e] : factorize(base.get_den())) f[Base::integer(p)] -= exponent * Rational(e);
  }
  return Monomial(1, std::move(f));
}

void Monomial::canonicalize() {
  if (coeff_ == 0) {
    factors_.clear();
    return;
  }
  for (auto it = factors_.begin(); it != factors_.end();) {
    auto& [base, form] = *it;
    if (!base.is_e) {
      if (base.value == 1) {
        it = factors_.erase(it);
        continue;
      }
      Integer whole = floor_of(form.constant_part());
      if (whole != 0) {
        coeff_ *= integer_power(base.value, whole);
        form -= LinearForm::constant(Rational(whole));
      }
    }
    if (form.is_zero()) {
      it = factors_.erase(it);
    } else {
      ++it;
    }
  }
}

Monomial Monomial::pow(long k) const {
  if (k == 0) return Monomial(1);
  Rational c = 1;
  Rational b = k > 0 ? coeff_ : Rational(1) / coeff_;
  for (long i = 0; i < (k > 0 ? k : -k); ++i) c *= b;
  Factors f = factors_;
  for (auto& [base, form] : f) form *= Rational(k);
  return Monomial(c, std::move(f));
}

Monomial Monomial::scaled(const Rational& q) const {
  Monomial m = *this;
  m.coeff_ *= q;
  if (m.coeff_ == 0) m.factors_.clear();
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial::Factors f = a.factors_;
  for (const auto& [base, form] : b.factors_) f[base] += form;
  return Monomial(a.coeff_ * b.coeff_, std::move(f));
}

Enclosure Monomial::log_factor(int bits, const SymbolBasis& basis) const {
  Enclosure total = Enclosure::point(Rational(0), bits);
  for (const auto& [base, form] : factors_) {
    Enclosure v = form.value(bits, basis);
    if (!base.is_e) v = v * log(Enclosure::point(Rational(base.value), bits));
    total = total + v;
  }
  return total;
}

Enclosure Monomial::log_abs(int bits, const SymbolBasis& basis) const {
  if (coeff_ == 0) throw Error(ErrorCode::InvalidArgument, "log of the zero monomial");
  return log(Enclosure::point(abs(coeff_), bits)) + log_factor(bits, basis);
}

Enclosure Monomial::value(int bits, const SymbolBasis& basis) const {
  Enclosure c = Enclosure::point(coeff_, bits);
  if (factors_.empty() || coeff_ == 0) return c;
  return c * exp_of(log_factor(bits, basis));
}

std::string Monomial::to_string(const SymbolBasis& basis) const {
  std::ostringstream os;
  os << convlab::to_string(coeff_);
  for (const auto& [base, form] : factors_) {
    os << "*" << (base.is_e ? std::string("e") : base.value.get_str()) << "^(" << form.to_string(basis) << ")";
  }
  return os.str();
}

bool signature_less(const Monomial& a, const Monomial& b) {
  return compare_factors(a.factors(), b.factors()) < 0;
}

bool same_signature(const Monomial& a, const Monomial& b) { return a.factors() == b.factors(); }

// ------------------------------------------------------------ MonomialSum

MonomialSum::MonomialSum(const Rational& q) {
  if (q != 0) terms_.emplace_back(q);
}

MonomialSum::MonomialSum(const Monomial& m) {
  if (m.coefficient() != 0) terms_.push_back(m);
}

MonomialSum MonomialSum::raw(std::vector<Monomial> terms) {
  MonomialSum s;
  s.terms_ = std::move(terms);
  return s;
}

MonomialSum normalize(const MonomialSum& ms) {
  std::vector<Monomial> terms = ms.terms_;
  std::stable_sort(terms.begin(), terms.end(), signature_less);
  std::vector<Monomial> merged;
  for (auto& t : terms) {
    if (!merged.empty() && same_signature(merged.back(), t)) {
      merged.back() = Monomial(merged.back().coefficient() + t.coefficient(), merged.back().factors());
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Monomial& m) { return m.coefficient() == 0; });
  return MonomialSum::raw(std::move(merged));
}

bool MonomialSum::is_normalized() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coefficient() == 0) return false;
    if (i > 0 && !signature_less(terms_[i - 1], terms_[i])) return false;
  }
  return true;
}

bool MonomialSum::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().is_rational());
}

Rational MonomialSum::rational_value() const {
  if (!is_rational()) throw Error(ErrorCode::InvalidArgument, "monomial sum is not rational");
  return terms_.empty() ? Rational(0) : terms_.front().coefficient();
}

MonomialSum& MonomialSum::operator+=(const MonomialSum& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  *this = normalize(*this);
  return *this;
}

MonomialSum& MonomialSum::operator-=(const MonomialSum& other) {
  for (const auto& t : other.terms_) terms_.push_back(t.scaled(-1));
  *this = normalize(*this);
  return *this;
}

MonomialSum& MonomialSum::operator*=(const MonomialSum& other) {
  std::vector<Monomial> product;
  product.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) product.push_back(a * b);
  }
  *this = normalize(raw(std::move(product)));
  return *this;
}

MonomialSum operator-(const MonomialSum& a) {
  MonomialSum r = a;
  for (auto& t : r.terms_) t = t.scaled(-1);
  return r;
}

MonomialSum MonomialSum::pow(unsigned k) const {
  MonomialSum result(1);
  MonomialSum base = *this;
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base *= base;
  }
  return result;
}

bool operator==(const MonomialSum& a, const MonomialSum& b) {
  MonomialSum na = a.is_normalized() ? a : normalize(a);
  MonomialSum nb = b.is_normalized() ? b : normalize(b);
  return na.terms_ == nb.terms_;
}

std::string MonomialSum::to_string(const SymbolBasis& basis) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += " + ";
    out += terms_[i].to_string(basis);
  }
  return out;
}

Enclosure eval_enclosure(const MonomialSum& ms, int bits, const SymbolBasis& basis) {
  if (bits < 32) throw Error(ErrorCode::InvalidArgument, "precision below 32 bits");
  if (ms.is_rational()) return Enclosure::point(ms.rational_value(), bits);
  const int work = bits + 16;
  Enclosure total = Enclosure::point(Rational(0), work);
  for (const auto& t : ms.terms()) total = total + t.value(work, basis);
  return total;
}

namespace {

// All integer-base exponents constant and every base prime: values are
// algebraic multiples of exp(algebraic), so distinct exponents are independent
// by Lindemann-Weierstrass and the radical parts by Besicovitch.
bool covered_by_classical_independence(const MonomialSum& ms) {
  for (const auto& t : ms.terms()) {
    for (const auto& [base, form] : t.factors()) {
      if (base.is_e) continue;
      if (!form.is_constant()) return false;
      if (mpz_probab_prime_p(base.value.get_mpz_t(), 30) == 0) return false;
    }
  }
  return true;
}

}  // namespace

NonzeroCertificate certify_nonzero(const MonomialSum& input, int budget_bits, const SymbolBasis& basis) {
  MonomialSum ms = input.is_normalized() ? input : normalize(input);
  NonzeroCertificate cert;
  if (ms.is_zero()) {
    cert.status = NonzeroStatus::CertifiedZero;
    cert.reason = "empty normalized sum";
    return cert;
  }
  for (int bits = kLadderStartBits; bits <= budget_bits; bits *= 2) {
    cert.bits_used = bits;
    Enclosure v = eval_enclosure(ms, bits, basis);
    if (!v.contains_zero()) {
      cert.numerically_confirmed = true;
      break;
    }
  }
  if (ms.is_monomial()) {
    cert.status = NonzeroStatus::CertifiedNonzero;
    cert.reason = "single nonzero monomial";
  } else if (basis.independent()) {
    cert.status = NonzeroStatus::CertifiedNonzero;
    cert.reason = covered_by_classical_independence(ms)
                      ? "pairwise distinct exponent signatures (Lindemann-Weierstrass)"
                      : "pairwise distinct exponent signatures (Q-independence convention)";
  } else if (cert.numerically_confirmed) {
    cert.status = NonzeroStatus::CertifiedNonzero;
    cert.reason = "enclosure excludes 0";
  } else {
    cert.status = NonzeroStatus::Indeterminate;
    cert.reason = "basis not declared independent and enclosure straddles 0";
  }
  if (cert.numerically_confirmed && cert.status == NonzeroStatus::CertifiedNonzero &&
      cert.reason != "enclosure excludes 0") {
    cert.reason += "; enclosure excludes 0 at " + std::to_string(cert.bits_used) + " bits";
  }
  return cert;
}

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
    case Ordering::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::optional<int> sign(const MonomialSum& ms, int budget_bits, const SymbolBasis& basis) {
  if (ms.is_rational()) return sgn(ms.rational_value());
  if (ms.is_monomial()) return sgn(ms.terms().front().coefficient());
  for (int bits = kLadderStartBits; bits <= budget_bits; bits *= 2) {
    Enclosure v = eval_enclosure(ms, bits, basis);
    if (v.is_positive()) return 1;
    if (v.is_negative()) return -1;
  }
  return std::nullopt;
}

Ordering compare(const MonomialSum& a, const MonomialSum& b, int budget_bits, const SymbolBasis& basis) {
  if (a.is_rational() && b.is_rational()) {
    int c = cmp(a.rational_value(), b.rational_value());
    return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
  }
  MonomialSum d = a - b;
  if (d.is_zero()) return Ordering::Equal;
  auto s = sign(d, budget_bits, basis);
  if (!s) return Ordering::Indeterminate;
  return *s < 0 ? Ordering::Less : Ordering::Greater;
}

// ------------------------------------------------------------------- Point

Point Point::infinity() {
  Point p;
  p.infinite_ = true;
  return p;
}

const Rational& Point::rational() const {
  if (!is_rational()) throw Error(ErrorCode::InvalidArgument, "point " + to_string() + " is not rational");
  return q_;
}

MonomialSum Point::to_sum() const {
  if (infinite_) throw Error(ErrorCode::InvalidArgument, "infinite point has no finite value");
  if (k_ == 0) return MonomialSum(q_);
  return MonomialSum(Monomial(q_) * Monomial::exp(LinearForm::constant(Rational(k_))));
}

Enclosure Point::enclosure(int bits) const {
  if (infinite_) {
    BigFloat inf(bits);
    mpfr_set_inf(inf.get(), 1);
    return Enclosure(inf, inf);
  }
  return eval_enclosure(to_sum(), bits);
}

std::string Point::to_string() const {
  if (infinite_) return "inf";
  if (k_ == 0) return convlab::to_string(q_);
  return convlab::to_string(q_) + "*e^" + std::to_string(k_);
}

bool operator==(const Point& a, const Point& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.q_ == b.q_ && a.k_ == b.k_;
}

int compare(const Point& a, const Point& b) {
  if (a.infinite_ || b.infinite_) return static_cast<int>(a.infinite_) - static_cast<int>(b.infinite_);
  if (a.k_ == b.k_) return cmp(a.q_, b.q_);
  int sa = sgn(a.q_), sb = sgn(b.q_);
  if (sa != sb) return sa < sb ? -1 : 1;
  // Same nonzero sign and distinct powers of e: the values differ because e
  // is transcendental, so the ladder terminates.
  for (int bits = kLadderStartBits;; bits *= 2) {
    Enclosure ea = a.enclosure(bits), eb = b.enclosure(bits);
    if (ea.certainly_less(eb)) return -1;
    if (eb.certainly_less(ea)) return 1;
    if (bits > (1 << 22)) throw Error(ErrorCode::BudgetExhausted, "point comparison did not separate");
  }
}

// --------------------------------------------------------------- rationals

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (t.empty()) throw Error(ErrorCode::InvalidArgument, "empty rational literal");
  try {
    auto dot = t.find('.');
    if (dot != std::string::npos) {
      bool negative = t[0] == '-';
      std::string whole = t.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
      std::string frac = t.substr(dot + 1);
      if (whole.empty()) whole = "0";
      Integer num(whole + frac, 10);
      Integer den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Rational r(num, den);
      r.canonicalize();
      return negative ? Rational(-r) : r;
    }
    Rational r(t, 10);
    if (r.get_den() == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in " + text);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidArgument, "malformed rational literal '" + text + "'");
  }
}

}  // namespace convlab
