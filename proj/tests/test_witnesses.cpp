#include <set>

#include "convlab/error.hpp"
#include "convlab/witnesses.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "support.hpp"

using namespace convlab;

namespace {

constexpr Domain kUnit = Domain::UnitInterval;
constexpr Domain kHalf = Domain::HalfLine;

Interval iv(const Rational& a, const Rational& b) { return Interval::closed(a, b); }
PwExpFun chi(const Rational& a, const Rational& b) { return PwExpFun::indicator(kUnit, iv(a, b)); }
bool exact_is(const Certified& c, const MonomialSum& v) { return c.exact && *c.exact == v; }

}  // namespace

TEST_CASE("typewriter examples") {
  CHECK(typewriter(1) == chi(0, 1));
  CHECK(typewriter(3) == chi(Rational(1, 2), 1));
  CHECK(typewriter(6) == chi(Rational(1, 2), Rational(3, 4)));
  CHECK(dyadic_split(6).generation == 2);
  CHECK(dyadic_split(6).offset == 2);
  CHECK_THROWS_AS(typewriter(0), Error);
}

TEST_CASE("dyadic decomposition is unique and reconstructs n") {
  for (long n = 1; n <= (1L << 16); ++n) {
    const DyadicPosition p = dyadic_split(n);
    const Integer base = Integer(1) << p.generation;
    REQUIRE(p.offset >= 0);
    REQUIRE(p.offset < base);
    REQUIRE(base + p.offset == n);
  }
}

TEST_CASE("each typewriter generation tiles [0,1]") {
  for (unsigned long g = 0; g <= 12; ++g) {
    const long first = 1L << g;
    std::vector<Interval> windows;
    Rational total = 0;
    for (long j = 0; j < first; ++j) {
      const Interval w = typewriter_window(first + j);
      windows.push_back(w);
      total += w.length().rational_value();
    }
    CHECK(total == 1);
    CHECK(windows.front().lo == Point(0));
    CHECK(windows.back().hi == Point(1));
    bool tiled = true;
    for (std::size_t i = 0; i + 1 < windows.size(); ++i) tiled = tiled && windows[i].hi == windows[i + 1].lo;
    CHECK(tiled);
  }
}

TEST_CASE("interleave_index examples and owners") {
  CHECK(interleave_index(1, 1) == 1);
  CHECK(interleave_index(1, 2) == 3);
  CHECK(interleave_index(2, 1) == 2);
  CHECK(interleave_index(3, 2) == 12);
  CHECK(generation_owner(12) == 3);
  CHECK(generation_owner(7) == 1);
  CHECK(generation_owner(0) == 0);
}

TEST_CASE("typewriter_split examples") {
  CHECK(typewriter_split(1, 2) == chi(0, Rational(1, 2)));
  CHECK(typewriter_split(1, 4).is_zero());
  CHECK(typewriter_split(2, 4) == chi(0, Rational(1, 4)));
  CHECK(typewriter_split(1, 1).is_zero());
  CHECK(typewriter_split_live(3, Integer(1) << 4));
}

TEST_CASE("shrink examples") {
  CHECK(shrink_interval(1) == chi(Rational(1, 2), 1));
  CHECK(shrink_interval(3) == chi(Rational(1, 4), Rational(1, 3)));
  CHECK(shrink_set(4).length() == MonomialSum(Rational(1, 20)));
  CHECK(shrink_split(1, 1) == chi(Rational(1, 2), 1));
  CHECK(shrink_split(2, 1) == chi(Rational(1, 3), Rational(1, 2)));
  CHECK(shrink_split(1, 2) == chi(Rational(1, 4), Rational(1, 3)));
}

TEST_CASE("measure_gen examples") {
  CHECK(measure_gen(1, 1) == PwExpFun::single(kUnit, iv(0, 1), ExpSum::term(1, LinearForm::symbol(1, -1))));
  CHECK(exact_is(support_measure(measure_gen(2, 4)), Rational(1, 4)));
  CHECK(evaluate_exact(measure_gen(1, 1), 0) == MonomialSum(1));
}

TEST_CASE("nup_gen examples") {
  for (int n = 1; n <= 30; ++n) {
    const PwExpFun f = nup_gen(1, n);
    CHECK(evaluate_exact(f, Rational(1, n + 1)) == MonomialSum(1));
    CHECK(evaluate_exact(f, Rational(1, n)) == MonomialSum(Monomial::exp(LinearForm::symbol(1, -1))));
    CHECK(exact_is(ess_sup(f, 128), 1));
  }
  // Inside the window the value is e^{-c w} with w = n[(n+1)x - 1].
  const Enclosure mid = evaluate(nup_gen(1, 3), Point(Rational(7, 24)), 200);
  CHECK(agrees(mid, oracle::exp(oracle::scale(oracle::sqrt_int(2, 260), oracle::Q(-1, 2)), 240)));
}

TEST_CASE("l1_gen examples") {
  CHECK(exact_is(ess_sup(l1_gen(1, 1), 128), 1));
  const Certified norm = l1_norm(l1_gen(1, 10), 256);
  REQUIRE(norm.exact);
  REQUIRE(norm.exact->is_monomial());
  const Enclosure lg = norm.exact->terms().front().log_abs(256);
  CHECK(agrees(lg, oracle::decimal("6.7436529329697063107735353890057")));
  CHECK(l1_gen(1, 3).domain() == kHalf);
  CHECK(l1_gen(1, 3).pieces().front().interval.hi == Point(Rational(1), 3));
}

TEST_CASE("flat_bump examples") {
  CHECK(flat_bump(1) == PwExpFun::indicator(kHalf, iv(0, 1)));
  CHECK(exact_is(ess_sup(flat_bump(7), 64), Rational(1, 7)));
  for (int n = 1; n <= 100; ++n) CHECK(exact_is(l1_norm(flat_bump(n), 64), 1));
}

TEST_CASE("block_interval examples") {
  CHECK(block_interval(1, 1) == iv(0, 1));
  CHECK(block_interval(2, 2) == iv(2, 4));
  CHECK(block_interval(3, 2) == iv(5, 7));
  CHECK_THROWS_AS(block_interval(2, 3), Error);
}

TEST_CASE("traveling_bump examples") {
  CHECK(traveling_bump(1, 1) == PwExpFun::indicator(kHalf, iv(0, 1)));
  CHECK(traveling_bump(1, 2) == PwExpFun::indicator(kHalf, iv(2, 4), Rational(1, 2)));
  for (long k = 1; k <= 10; ++k) {
    for (long n = 1; n <= 10; ++n) CHECK(exact_is(l1_norm(traveling_bump(k, n), 64), 1));
  }
}

TEST_CASE("supports of distinct split members have disjoint interiors") {
  std::vector<Interval> shrink, bumps;
  for (long k = 1; k <= 12; ++k) {
    for (long n = 1; n <= 12; ++n) {
      shrink.push_back(shrink_set(interleave_index(k, n)));
      bumps.push_back(traveling_bump(k, n).pieces().front().interval);
    }
  }
  for (const auto* set : {&shrink, &bumps}) {
    for (std::size_t a = 0; a < set->size(); ++a) {
      for (std::size_t b = a + 1; b < set->size(); ++b) CHECK_FALSE(intersect((*set)[a], (*set)[b]).has_positive_length());
    }
  }
}

TEST_CASE("family specs parse and print") {
  CHECK(parse_family("typewriter").id == FamilyId::Typewriter);
  const FamilySpec nup = parse_family("nup-gen:c=1");
  CHECK(nup.id == FamilyId::NupGen);
  CHECK(nup.c == 1);
  CHECK(nup.to_string() == "nup-gen:c=1");
  const FamilySpec bump = parse_family("traveling-bump:k=3");
  CHECK(bump.k == 3);
  CHECK(bump.to_string() == "traveling-bump:k=3");
  CHECK(parse_family(bump.to_string()).k == 3);
  CHECK_THROWS_AS(parse_family("nonsense"), Error);
  CHECK_THROWS_AS(parse_family("typewriter:k=2"), Error);
  CHECK_THROWS_AS(parse_family("nup-gen:c=0"), Error);
  CHECK(catalog().size() == family_ids().size());
  std::set<std::string> names;
  for (auto id : family_ids()) names.insert(std::string(family_name(id)));
  CHECK(names.size() == 9);
  CHECK(family_member(bump, 2) == traveling_bump(3, 2));
}
