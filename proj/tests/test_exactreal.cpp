#include <random>

#include "convlab/error.hpp"
#include "convlab/exactreal.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "support.hpp"

using namespace convlab;

namespace {

MonomialSum e_to(const LinearForm& f) { return Monomial::exp(f); }
LinearForm c(std::size_t i, const Rational& q = 1) { return LinearForm::symbol(i, q); }

MonomialSum random_sum(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms_d(1, 4), coef_d(-4, 4), sym_d(0, 3), rate_d(-3, 3), base_d(0, 2);
  std::vector<Monomial> terms;
  const int count = terms_d(rng);
  for (int t = 0; t < count; ++t) {
    int a = coef_d(rng);
    if (a == 0) a = 1;
    LinearForm f;
    for (int s = 0; s < 2; ++s) f += c(sym_d(rng), Rational(rate_d(rng), 2));
    Monomial m = base_d(rng) == 0 ? Monomial::power(3, f) : Monomial::exp(f);
    terms.push_back(m.scaled(Rational(a)));
  }
  return MonomialSum::raw(terms);
}

}  // namespace

TEST_CASE("symbol basis holds 1 and square roots of primes") {
  const auto& basis = SymbolBasis::standard();
  CHECK(basis.size() == 65);
  CHECK(basis.independent());
  const unsigned primes[] = {2, 3, 5, 7, 11, 13};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(agrees(basis.value(i + 1, 256), oracle::sqrt_int(primes[i], 300)));
  }
  CHECK(basis.value(0, 64).contains(Rational(1)));
  CHECK_THROWS_AS(basis.at(65), Error);
}

TEST_CASE("normalize merges, cancels and keeps distinct signatures") {
  const MonomialSum a = Monomial::exp(c(1)).scaled(2), b = Monomial::exp(c(1)).scaled(3);
  CHECK(a + b == MonomialSum(Monomial::exp(c(1)).scaled(5)));
  CHECK((MonomialSum(Monomial::exp(c(1))) - MonomialSum(Monomial::exp(c(1)))).is_zero());
  const MonomialSum two = MonomialSum(Monomial::exp(c(1))) + MonomialSum(Monomial::exp(c(2)));
  CHECK(two.terms().size() == 2);
  CHECK(two.is_normalized());
}

TEST_CASE("integer powers fold into the coefficient") {
  CHECK(MonomialSum(Monomial::power(4, LinearForm::constant(Rational(1, 2)))) == MonomialSum(2));
  CHECK(MonomialSum(Monomial::power(2, LinearForm::constant(-3))) == MonomialSum(Rational(1, 8)));
  CHECK_FALSE(MonomialSum(Monomial::exp(LinearForm::constant(1))).is_rational());
}

TEST_CASE("certify_nonzero examples") {
  CHECK(certify_nonzero(MonomialSum()).status == NonzeroStatus::CertifiedZero);
  const MonomialSum diff = MonomialSum(Monomial::power(2, c(1, -1))) - MonomialSum(Monomial::power(2, c(2, -1)));
  CHECK(certify_nonzero(diff).status == NonzeroStatus::CertifiedNonzero);

  // e^{-sqrt2} - 2 e^{-sqrt3} + 3 e^{-sqrt2-sqrt3}
  const MonomialSum s = e_to(c(1, -1)) - MonomialSum(Monomial::exp(c(2, -1)).scaled(2)) +
                        MonomialSum(Monomial::exp(c(1, -1) + c(2, -1)).scaled(3));
  auto cert = certify_nonzero(s);
  CHECK(cert.status == NonzeroStatus::CertifiedNonzero);
  const Enclosure v = eval_enclosure(s, 256);
  CHECK_FALSE(v.contains_zero());
  const auto r2 = oracle::sqrt_int(2, 300), r3 = oracle::sqrt_int(3, 300);
  const auto ref = oracle::add(oracle::sub(oracle::exp(oracle::neg(r2), 280), oracle::scale(oracle::exp(oracle::neg(r3), 280), 2)),
                               oracle::scale(oracle::exp(oracle::neg(oracle::add(r2, r3)), 280), 3));
  CHECK(agrees(v, ref));
  CHECK(agrees(v, oracle::decimal("0.018311839595095906362595318451880603")));
}

TEST_CASE("eval_enclosure against frozen references") {
  const Enclosure third = eval_enclosure(MonomialSum(Rational(1, 3)), 64);
  CHECK(third.contains(Rational(1, 3)));
  CHECK(third.width_double() < std::ldexp(1.0, -60));

  const Enclosure e3 = eval_enclosure(e_to(LinearForm::constant(3)), 128);
  CHECK(agrees(e3, oracle::decimal("20.085536923187667740928529654581717")));
  CHECK(agrees(e3, oracle::exp_point(3, 200)));

  const Enclosure em = eval_enclosure(e_to(c(1, -1)), 128);
  CHECK(agrees(em, oracle::decimal("0.24311673443421421080486232049994606")));
  CHECK(em.width_double() < 1e-30);
}

TEST_CASE("oracle reproduces frozen constants") {
  CHECK(oracle::exp_point(3, 160).meets(oracle::decimal("20.085536923187667740928529654581717896987")));
  CHECK(oracle::ln(10, 160).meets(oracle::decimal("2.3025850929940456840179914546843642076011")));
  CHECK(oracle::sqrt_int(2, 160).meets(oracle::decimal("1.4142135623730950488016887242096980785696")));
  CHECK(oracle::exp_point(-1, 160).width() < oracle::Q(oracle::Z(1), oracle::two_pow(150)));
}

TEST_CASE("compare examples") {
  CHECK(compare(MonomialSum(Rational(1, 2)), MonomialSum(Rational(1, 3))) == Ordering::Greater);
  CHECK(compare(MonomialSum(Monomial::exp(c(1)) * Monomial::exp(c(2))), e_to(c(1) + c(2))) == Ordering::Equal);
  CHECK(compare(e_to(LinearForm::constant(3)), MonomialSum(20)) == Ordering::Greater);
  CHECK(sign(MonomialSum(-3)) == std::optional<int>(-1));
  CHECK(sign(MonomialSum()) == std::optional<int>(0));
}

TEST_CASE("Point ordering mixes rationals and rational multiples of e^k") {
  CHECK(Point(Rational(27, 10)) < Point(Rational(1), 1));
  CHECK(Point(Rational(1), 1) < Point(Rational(28, 10)));
  CHECK(Point(100) < Point::infinity());
  CHECK(Point(Rational(0), 5) == Point(0));
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("normalize is idempotent and preserves value") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const MonomialSum raw = random_sum(rng);
    const MonomialSum once = normalize(raw), twice = normalize(once);
    CHECK(once == twice);
    for (int bits : {64, 200}) CHECK(eval_enclosure(raw, bits).intersects(eval_enclosure(once, bits)));
  }
}

TEST_CASE("certify_nonzero never reports zero for a sum bounded away from 0") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    const MonomialSum s = normalize(random_sum(rng));
    const auto cert = certify_nonzero(s);
    if (!eval_enclosure(s, 512).contains_zero()) CHECK(cert.status != NonzeroStatus::CertifiedZero);
    if (s.is_zero()) CHECK(cert.status == NonzeroStatus::CertifiedZero);
  }
}

TEST_CASE("compare is antisymmetric and consistent with enclosures") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 1000; ++t) {
    const MonomialSum a = normalize(random_sum(rng)), b = normalize(random_sum(rng));
    const Ordering ab = compare(a, b, 256), ba = compare(b, a, 256);
    switch (ab) {
      case Ordering::Less: CHECK(ba == Ordering::Greater); break;
      case Ordering::Greater: CHECK(ba == Ordering::Less); break;
      case Ordering::Equal: CHECK(ba == Ordering::Equal); break;
      case Ordering::Indeterminate: CHECK(ba == Ordering::Indeterminate); break;
    }
    const Enclosure ea = eval_enclosure(a, 256), eb = eval_enclosure(b, 256);
    if (ab == Ordering::Less) CHECK_FALSE(eb.certainly_less(ea));
    if (ab == Ordering::Greater) CHECK_FALSE(ea.certainly_less(eb));
    if (ab == Ordering::Equal) CHECK(ea.intersects(eb));
    if (ea.certainly_less(eb)) CHECK(ab == Ordering::Less);
  }
}

TEST_CASE("integer combinations of the basis are bounded away from 0") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> z_d(-20, 20), len_d(1, 8);
  const auto& basis = SymbolBasis::standard();
  for (int t = 0; t < 500; ++t) {
    Enclosure sum = Enclosure::point(Rational(0), 256);
    bool any = false;
    const int len = len_d(rng);
    for (int i = 0; i < len; ++i) {
      const int z = z_d(rng);
      any = any || z != 0;
      sum = sum + scale(basis.value(static_cast<std::size_t>(i), 256), Rational(z));
    }
    if (any) CHECK_FALSE(sum.contains_zero());
  }
}

TEST_CASE("log_abs of e^n n^-c matches n - c ln n") {
  const Monomial norm = Monomial::exp(LinearForm::constant(10)) * Monomial::power(10, c(1, -1));
  const Enclosure lg = norm.log_abs(256);
  CHECK(agrees(lg, oracle::decimal("6.74365293296970631077353538900571")));
  const auto ref = oracle::sub(oracle::Range{10, 10}, oracle::mul_pos(oracle::sqrt_int(2, 300), oracle::ln(10, 300)));
  CHECK(agrees(lg, ref));
}
