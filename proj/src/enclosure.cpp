#include "convlab/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AuditFailure: return "AuditFailure";
  }
  return "Error";
}

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(mpfr_prec_t bits) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

Rational BigFloat::to_rational() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), value_);
  return q;
}

std::string BigFloat::to_string(int digits) const {
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_nan_p(value_)) return "nan";
  std::unique_ptr<char[]> buf(new char[digits + 64]);
  mpfr_snprintf(buf.get(), digits + 64, "%.*Rg", digits, value_);
  return std::string(buf.get());
}

// --------------------------------------------------------------- Enclosure

namespace {

mpfr_prec_t joint_precision(const Enclosure& a, const Enclosure& b) {
  return std::max(a.precision(), b.precision());
}

// NaN only arises from 0 * inf, whose interval-arithmetic value is 0.
void clean_nan(BigFloat& x) {
  if (mpfr_nan_p(x.get())) mpfr_set_zero(x.get(), 1);
}

}  // namespace

Enclosure::Enclosure() : lower_(64), upper_(64) {}

Enclosure::Enclosure(BigFloat lower, BigFloat upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (mpfr_nan_p(lower_.get()) || mpfr_nan_p(upper_.get()) ||
      mpfr_greater_p(lower_.get(), upper_.get())) {
    throw Error(ErrorCode::InvalidArgument, "enclosure with lower > upper");
  }
}

Enclosure Enclosure::point(const Rational& q, int bits) {
  BigFloat lo(bits), hi(bits);
  mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::point(const BigFloat& x) { return Enclosure(x, x); }

Enclosure Enclosure::between(const Rational& lo_q, const Rational& hi_q, int bits) {
  BigFloat lo(bits), hi(bits);
  mpfr_set_q(lo.get(), lo_q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), hi_q.get_mpq_t(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure Enclosure::nonnegative_unbounded(int bits) {
  BigFloat lo(bits), hi(bits);
  mpfr_set_inf(hi.get(), 1);
  return Enclosure(std::move(lo), std::move(hi));
}

int Enclosure::precision() const {
  return static_cast<int>(std::max(lower_.precision(), upper_.precision()));
}

bool Enclosure::is_point() const { return mpfr_equal_p(lower_.get(), upper_.get()); }

bool Enclosure::contains(const Rational& q) const {
  return mpfr_cmp_q(lower_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(upper_.get(), q.get_mpq_t()) >= 0;
}

bool Enclosure::contains(const Enclosure& other) const {
  return mpfr_lessequal_p(lower_.get(), other.lower_.get()) &&
         mpfr_greaterequal_p(upper_.get(), other.upper_.get());
}

bool Enclosure::contains_zero() const {
  return mpfr_sgn(lower_.get()) <= 0 && mpfr_sgn(upper_.get()) >= 0;
}

bool Enclosure::is_positive() const { return mpfr_sgn(lower_.get()) > 0; }
bool Enclosure::is_negative() const { return mpfr_sgn(upper_.get()) < 0; }

bool Enclosure::is_finite() const {
  return mpfr_number_p(lower_.get()) && mpfr_number_p(upper_.get());
}

bool Enclosure::intersects(const Enclosure& other) const {
  return mpfr_lessequal_p(lower_.get(), other.upper_.get()) &&
         mpfr_lessequal_p(other.lower_.get(), upper_.get());
}

bool Enclosure::certainly_less(const Enclosure& other) const {
  return mpfr_less_p(upper_.get(), other.lower_.get());
}

BigFloat Enclosure::width() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), upper_.get(), lower_.get(), MPFR_RNDU);
  return w;
}

double Enclosure::width_double() const {
  BigFloat w = width();
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

double Enclosure::mid_double() const { return midpoint().to_double(); }

BigFloat Enclosure::midpoint() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lower_.get(), upper_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

std::string Enclosure::to_string(int digits) const {
  return "[" + lower_.to_string(digits) + ", " + upper_.to_string(digits) + "]";
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_add(lo.get(), a.lower_.get(), b.lower_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.upper_.get(), b.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_sub(lo.get(), a.lower_.get(), b.upper_.get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.upper_.get(), b.lower_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator-(const Enclosure& a) {
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_neg(lo.get(), a.upper_.get(), MPFR_RNDD);
  mpfr_neg(hi.get(), a.lower_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  mpfr_srcptr as[2] = {a.lower_.get(), a.upper_.get()};
  mpfr_srcptr bs[2] = {b.lower_.get(), b.upper_.get()};
  BigFloat lo(p), hi(p), t(p);
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      clean_nan(t);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      clean_nan(t);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.contains_zero()) throw Error(ErrorCode::InvalidArgument, "division by an enclosure containing 0");
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_ui_div(lo.get(), 1, b.upper_.get(), MPFR_RNDD);
  mpfr_ui_div(hi.get(), 1, b.lower_.get(), MPFR_RNDU);
  return a * Enclosure(std::move(lo), std::move(hi));
}

Enclosure abs(const Enclosure& a) {
  if (a.is_positive() || mpfr_sgn(a.lower_.get()) == 0) return a;
  if (a.is_negative() || mpfr_sgn(a.upper_.get()) == 0) return -a;
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_neg(hi.get(), a.lower_.get(), MPFR_RNDU);
  if (mpfr_less_p(hi.get(), a.upper_.get())) mpfr_set(hi.get(), a.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure exp(const Enclosure& a) {
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_exp(lo.get(), a.lower_.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), a.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure log(const Enclosure& a) {
  if (!a.is_positive()) throw Error(ErrorCode::InvalidArgument, "log of an enclosure not bounded away from 0");
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_log(lo.get(), a.lower_.get(), MPFR_RNDD);
  mpfr_log(hi.get(), a.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure log1p(const Enclosure& a) {
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_log1p(lo.get(), a.lower_.get(), MPFR_RNDD);
  mpfr_log1p(hi.get(), a.upper_.get(), MPFR_RNDU);
  if (mpfr_nan_p(lo.get())) throw Error(ErrorCode::InvalidArgument, "log1p of an enclosure reaching -1");
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure sqrt(const Enclosure& a) {
  if (mpfr_sgn(a.lower_.get()) < 0) throw Error(ErrorCode::InvalidArgument, "sqrt of a negative enclosure");
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_sqrt(lo.get(), a.lower_.get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), a.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure pow(const Enclosure& a, unsigned long k) {
  if (k == 0) return Enclosure::point(Rational(1), a.precision());
  Enclosure base = (k % 2 == 0) ? abs(a) : a;
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_pow_ui(lo.get(), base.lower_.get(), k, MPFR_RNDD);
  mpfr_pow_ui(hi.get(), base.upper_.get(), k, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure max(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_max(lo.get(), a.lower_.get(), b.lower_.get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper_.get(), b.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure min(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_min(lo.get(), a.lower_.get(), b.lower_.get(), MPFR_RNDD);
  mpfr_min(hi.get(), a.upper_.get(), b.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_min(lo.get(), a.lower_.get(), b.lower_.get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper_.get(), b.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  auto p = joint_precision(a, b);
  BigFloat lo(p), hi(p);
  mpfr_max(lo.get(), a.lower_.get(), b.lower_.get(), MPFR_RNDD);
  mpfr_min(hi.get(), a.upper_.get(), b.upper_.get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure scale(const Enclosure& a, const Rational& q) {
  return a * Enclosure::point(q, a.precision());
}

Enclosure saturate(const Enclosure& a) {
  // x/(1+x) = 1 - 1/(1+x); evaluate each endpoint with the matching rounding.
  auto p = a.precision();
  BigFloat lo(p), hi(p), den(p);
  auto endpoint = [&](BigFloat& out, mpfr_srcptr x, mpfr_rnd_t dir) {
    if (mpfr_inf_p(x)) {
      mpfr_set_ui(out.get(), 1, dir);
      return;
    }
    mpfr_rnd_t opposite = dir == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD;
    mpfr_add_ui(den.get(), x, 1, opposite);
    mpfr_div(out.get(), x, den.get(), dir);
  };
  if (mpfr_sgn(a.lower().get()) < 0) {
    throw Error(ErrorCode::InvalidArgument, "saturate of a possibly negative enclosure");
  }
  endpoint(lo, a.lower().get(), MPFR_RNDD);
  endpoint(hi, a.upper().get(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

}  // namespace convlab
