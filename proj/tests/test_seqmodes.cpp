#include "convlab/error.hpp"
#include "convlab/seqmodes.hpp"
#include "convlab/witnesses.hpp"
#include "doctest.h"

using namespace convlab;

namespace {

constexpr Domain kUnit = Domain::UnitInterval;
constexpr Domain kHalf = Domain::HalfLine;
constexpr int kBits = 128;

Interval iv(const Rational& a, const Rational& b) { return Interval::closed(a, b); }

FunSeq family(FamilyId id, long k = 1) {
  FamilySpec s;
  s.id = id;
  s.k = k;
  return make_family(s);
}

FunSeq constant_indicator() {
  return FunSeq("chi[0,1]", kUnit, [](const Index&) { return PwExpFun::indicator(kUnit, iv(0, 1)); });
}

FunSeq flat_decay() {
  return FunSeq("(1/n)chi[0,1]", kUnit,
                [](const Index& n) { return PwExpFun::indicator(kUnit, iv(0, 1), Rational(Integer(1), n)); });
}

StructuredSetSeq shrinking_sets() { return family(FamilyId::Shrink).metadata().support.value(); }

StructuredSetSeq whole_interval() {
  StructuredSetSeq e;
  e.sets = [](const Index&) { return std::vector<Interval>{iv(0, 1)}; };
  e.tail.kind = TailDescriptor::Kind::Custom;
  e.tail.limsup = {iv(0, 1)};
  e.tail.covered = {iv(0, 1)};
  return e;
}

AlphaSeq alpha_const() { return {[](const Index&) { return MonomialSum(1); }, std::nullopt, "1"}; }
AlphaSeq alpha_inv() {
  return {[](const Index& n) { return MonomialSum(Rational(Integer(1), n)); }, std::nullopt, "1/n"};
}

Rational pow2_neg(int e) { return Rational(Integer(1), Integer(1) << e); }

}  // namespace

TEST_CASE("d_metric examples") {
  const FunSeq tw = family(FamilyId::Typewriter);
  for (int n = 1; n <= 20; ++n) {
    const DMetric d = d_metric(tw, tw, n, kBits);
    CHECK(d.enclosure.lower_rational() == 0);
    CHECK(d.enclosure.upper_rational() == pow2_neg(n));
  }
  const DMetric d = d_metric(tw, FunSeq::zero(kUnit), 2, kBits);
  REQUIRE(d.partial_sum);
  CHECK(*d.partial_sum == Rational(13, 60));
  CHECK(d.enclosure.contains(Rational(13, 60)));
  CHECK(d.enclosure.contains(Rational(13, 60) + Rational(1, 4)));
  CHECK(d.enclosure.width_double() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(d_metric(tw, FunSeq::zero(kHalf), 2, kBits), Error);
}

TEST_CASE("d_metric tail contributes exactly 2^-N") {
  const FunSeq a = family(FamilyId::Typewriter), b = family(FamilyId::Shrink);
  for (int n = 1; n <= 20; ++n) {
    const DMetric d = d_metric(a, b, n, kBits);
    REQUIRE(d.partial_sum);
    CHECK(d.tail_bound == pow2_neg(n));
    const Rational excess = d.enclosure.upper_rational() - *d.partial_sum - pow2_neg(n);
    CHECK(excess >= 0);
    CHECK(excess < pow2_neg(100));
    CHECK(d.enclosure.lower_rational() <= *d.partial_sum);
  }
}

TEST_CASE("check_in_measure examples") {
  const auto eps = std::vector<Rational>{Rational(1, 8), Rational(1, 2)};
  CHECK(check_in_measure(family(FamilyId::Typewriter), eps, 256, kBits).status == VerdictStatus::CertifiedConverges);
  const ConvergenceVerdict c = check_in_measure(constant_indicator(), eps, 256, kBits);
  CHECK(c.status == VerdictStatus::CounterexampleAt);
  CHECK(c.index >= 129);
  CHECK(c.index <= 256);
  CHECK(check_in_measure(family(FamilyId::NupGen), eps, 256, kBits).status == VerdictStatus::CertifiedConverges);
  CHECK_THROWS_AS(check_in_measure(constant_indicator(), {Rational(0)}, 16, kBits), Error);
}

TEST_CASE("check_pointwise examples") {
  auto tw = check_pointwise(family(FamilyId::Typewriter), {Rational(1, 3)}, 256, kBits);
  CHECK(tw.points.at(0).verdict.status == VerdictStatus::CertifiedDiverges);
  CHECK(tw.overall.status == VerdictStatus::CertifiedDiverges);
  auto sh = check_pointwise(family(FamilyId::Shrink), {Rational(1, 7), Rational(1, 2), Rational(1), Rational(0)}, 256, kBits);
  for (const auto& p : sh.points) CHECK(p.verdict.status == VerdictStatus::CertifiedConverges);
  auto flat = check_pointwise(flat_decay(), {Rational(1, 2)}, 64, kBits);
  CHECK(flat.points.at(0).verdict.status == VerdictStatus::NoCounterexampleUpTo);
  CHECK(flat.points.at(0).verdict.index == 64);
  auto stuck = check_pointwise(constant_indicator(), {Rational(1, 2)}, 64, kBits);
  CHECK_FALSE(stuck.points.at(0).verdict.consistent_with_convergence());
}

TEST_CASE("limsup_membership examples") {
  const StructuredSetSeq tw = family(FamilyId::Typewriter).metadata().support.value();
  for (int k = 0; k <= 16; ++k) CHECK(limsup_membership(tw, Rational(k, 16)) == Membership::InLimsup);
  CHECK(limsup_membership(shrinking_sets(), Rational(1, 2)) == Membership::NotInLimsup);
  CHECK(limsup_membership(whole_interval(), 0) == Membership::InLimsup);
  CHECK(limsup_membership(whole_interval(), 2) == Membership::NotInLimsup);
  CHECK(limsup_is_empty(shrinking_sets()) == std::optional<bool>(true));
  CHECK(limsup_is_null(tw) == std::optional<bool>(false));
}

TEST_CASE("check_indicator_dichotomy examples") {
  CHECK(check_indicator_dichotomy(alpha_const(), shrinking_sets(), Mode::Pointwise, 512).status ==
        VerdictStatus::CertifiedConverges);
  CHECK(check_indicator_dichotomy(alpha_const(), shrinking_sets(), Mode::Uniform, 512).status ==
        VerdictStatus::CertifiedDiverges);
  CHECK(check_indicator_dichotomy(alpha_inv(), whole_interval(), Mode::Uniform, 512).status ==
        VerdictStatus::CertifiedConverges);
  CHECK(check_indicator_dichotomy(alpha_const(), whole_interval(), Mode::AlmostEverywhere, 512).status ==
        VerdictStatus::CertifiedDiverges);
  CHECK(alpha_behavior(alpha_inv(), 512) == AlphaBehavior::ToZero);
  AlphaSeq wobble{[](const Index& n) { return MonomialSum(mpz_odd_p(n.get_mpz_t()) ? -1 : 1); }, std::nullopt, "(-1)^n"};
  CHECK(alpha_behavior(wobble, 512) == AlphaBehavior::BoundedBelow);
  AlphaSeq slow{[](const Index& n) { return MonomialSum(n < 400 ? Rational(1) : Rational(1, 3)); }, std::nullopt, "y"};
  CHECK_THROWS_AS(alpha_behavior(slow, 512), Error);
}

TEST_CASE("horizon evidence agrees with the closed form on the examples") {
  const auto grid = uniform_grid(65);
  CHECK(grid.size() == 65);
  CHECK(grid[32] == Rational(1, 2));
  CHECK(horizon_dichotomy(alpha_const(), shrinking_sets(), Mode::Pointwise, 512, grid));
  CHECK_FALSE(horizon_dichotomy(alpha_const(), shrinking_sets(), Mode::Uniform, 512, grid));
  CHECK(horizon_dichotomy(alpha_inv(), whole_interval(), Mode::Uniform, 512, grid));
  CHECK_FALSE(horizon_dichotomy(alpha_const(), whole_interval(), Mode::Pointwise, 512, grid));
}

TEST_CASE("check_uniform examples") {
  CHECK(check_uniform(family(FamilyId::NupGen), 256, kBits).status == VerdictStatus::CertifiedDiverges);
  CHECK(check_uniform(family(FamilyId::L1Gen), 256, kBits).status == VerdictStatus::CertifiedConverges);
  CHECK(check_uniform(family(FamilyId::TravelingBump, 3), 256, kBits).status == VerdictStatus::CertifiedConverges);
  CHECK(check_uniform(flat_decay(), 64, kBits).status == VerdictStatus::NoCounterexampleUpTo);
}

TEST_CASE("check_almost_uniform examples") {
  const ConvergenceVerdict nup = check_almost_uniform(family(FamilyId::NupGen), Rational(1, 10), 256, kBits);
  REQUIRE(nup.status == VerdictStatus::CertifiedConverges);
  REQUIRE(nup.exceptional_set.size() == 1);
  CHECK(nup.exceptional_set[0] == iv(0, Rational(1, 20)));
  CHECK(nup.index == 20);
  for (int n = 21; n <= 200; ++n) {
    const Certified s = ess_sup(family_member(FamilySpec{FamilyId::NupGen}, n), {iv(Rational(1, 20), 1)}, kBits);
    CHECK(s.exact->is_zero());
  }
  CHECK(check_almost_uniform(family(FamilyId::Typewriter), Rational(1, 10), 256, kBits).status ==
        VerdictStatus::CounterexampleAt);
  const ConvergenceVerdict zero = check_almost_uniform(FunSeq::zero(kUnit), Rational(1, 10), 64, kBits);
  CHECK(zero.status == VerdictStatus::CertifiedConverges);
  CHECK(zero.exceptional_set.empty());
}

TEST_CASE("check_l1 examples") {
  CHECK(check_l1(family(FamilyId::FlatBump), 256, kBits).status == VerdictStatus::CertifiedDiverges);
  CHECK(check_l1(family(FamilyId::L1Gen), 256, kBits).status == VerdictStatus::CertifiedDiverges);
  SeqMetadata meta;
  meta.l1_norm = ClosedForm{[](const Index& n) { return MonomialSum(Rational(Integer(1), n)); }, Relation::Equals,
                            Trend::ToZero, MonomialSum(), "1/n"};
  const FunSeq narrow("(1/n^2)chi[0,n]", kHalf,
                      [](const Index& n) {
                        return PwExpFun::indicator(kHalf, Interval::closed(0, Rational(n)), Rational(Integer(1), n * n));
                      },
                      meta);
  CHECK(check_l1(narrow, 256, kBits).status == VerdictStatus::CertifiedConverges);
}

TEST_CASE("metadata audit rejects a wrong closed form") {
  SeqMetadata meta;
  meta.support_measure = ClosedForm{[](const Index& n) { return MonomialSum(Rational(Integer(1), n + 1)); },
                                    Relation::Equals, Trend::ToZero, MonomialSum(), "wrong"};
  CHECK_THROWS_AS(FunSeq("bad", kUnit, [](const Index& n) { return typewriter(n); }, meta), Error);
  CHECK_THROWS_AS(family(FamilyId::Typewriter).at(0), Error);
}

TEST_CASE("truncate examples") {
  const FunSeq t = truncate(family(FamilyId::Typewriter), 3);
  CHECK(t.at(3) == typewriter(3));
  CHECK(t.at(4).is_zero());
  const FunSeq z = truncate(FunSeq::zero(kUnit), 7);
  for (int n = 1; n <= 20; ++n) CHECK(z.at(n).is_zero());
}

TEST_CASE("catalog metadata matches direct computation up to n = 64") {
  for (const auto& spec : catalog()) {
    CAPTURE(spec.to_string());
    const FunSeq f = make_family(spec);
    const auto& m = f.metadata();
    for (int n = 1; n <= 64; ++n) {
      const PwExpFun fn = f.at(n);
      const auto consistent = [&](const std::optional<ClosedForm>& cf, const Certified& actual) {
        if (!cf) return true;
        const MonomialSum formula = cf->formula(n);
        const Enclosure fe = eval_enclosure(formula, kBits);
        switch (cf->relation) {
          case Relation::Equals:
            return actual.exact ? *actual.exact == formula : actual.enclosure.intersects(fe);
          case Relation::AtMost: return !fe.certainly_less(actual.enclosure);
          case Relation::AtLeast: return !actual.enclosure.certainly_less(fe);
        }
        return false;
      };
      CHECK(consistent(m.support_measure, support_measure(fn)));
      CHECK(consistent(m.sup_norm, ess_sup(fn, kBits)));
      if (m.l1_norm && n <= 40) CHECK(consistent(m.l1_norm, l1_norm(fn, kBits)));
    }
  }
}

TEST_CASE("mode hierarchy on the catalog") {
  const auto xs = uniform_grid(17);
  for (const auto& spec : catalog()) {
    CAPTURE(spec.to_string());
    const FunSeq f = make_family(spec);
    if (check_uniform(f, 256, kBits).status != VerdictStatus::CertifiedConverges) continue;
    if (f.domain() == kUnit) CHECK(check_almost_uniform(f, Rational(1, 10), 256, kBits).consistent_with_convergence());
    CHECK(check_in_measure(f, {Rational(1, 8)}, 256, kBits).consistent_with_convergence());
    if (f.domain() == kUnit) CHECK(check_pointwise(f, xs, 256, kBits).overall.consistent_with_convergence());
  }
}

TEST_CASE("truncation is dense in the product metric") {
  const Rational delta = pow2_neg(10);
  for (const auto& spec : catalog()) {
    CAPTURE(spec.to_string());
    const FunSeq f = make_family(spec);
    CHECK(d_metric(f, truncate(f, 10), 24, kBits).enclosure.upper_rational() < delta);
  }
}
