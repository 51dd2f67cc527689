// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "convlab/harness.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace convlab;

namespace {

// Pinned scales and tolerances.
constexpr long kMeasureLawLast = 1L << 16;
constexpr int kPointwiseHorizon = 1 << 14;
constexpr int kGridPoints = 257;
constexpr long kMinVisits = 10;
constexpr int kPolys = 200;
constexpr int kCollapseLastN = 64;
constexpr int kSupPolys = 50;
constexpr double kSupWidth = 1e-12;
constexpr int kBits = 256;
constexpr long kRankTarget = 20;
constexpr long kInterleaveSide = 64;
constexpr int kDichotomyInstances = 500;
constexpr int kDichotomyHorizon = 1 << 12;
constexpr int kLogNormLast = 10000;
constexpr int kLogNormCheckpoint = 110;
constexpr int kSupCrossing = 133;
constexpr int kBumpSide = 100;
constexpr long kTilingRows = 50;
constexpr int kMetricTriples = 100;
constexpr int kTailTerms = 20;
constexpr int kTruncateKeep = 10;
constexpr int kTruncateTerms = 24;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Rational pow2_neg(unsigned long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, e);
  return Rational(Integer(1), p);
}

FunSeq family(FamilyId id, long k = 1, std::size_t c = 1) {
  FamilySpec s;
  s.id = id;
  s.k = k;
  s.c = c;
  return make_family(s);
}

std::vector<std::pair<MultiIndexPoly, std::vector<std::size_t>>> seeded_polys(int count) {
  std::mt19937_64 rng(kSeed);
  std::vector<std::pair<MultiIndexPoly, std::vector<std::size_t>>> out;
  for (int i = 0; i < count; ++i) {
    MultiIndexPoly p = random_polynomial(rng);
    out.emplace_back(p, random_symbols(rng, p.variables()));
  }
  return out;
}

// Window of T_n computed from the binary length of n alone.
std::pair<Rational, Rational> window_oracle(long n) {
  const unsigned long g = mpz_sizeinbase(Integer(n).get_mpz_t(), 2) - 1;
  const long j = n - (1L << g);
  return {Rational(j) * pow2_neg(g), Rational(j + 1) * pow2_neg(g)};
}

Outcome measure_law() {
  long bad = 0;
  for (long n = 1; n <= kMeasureLawLast; ++n) {
    const auto [lo, hi] = window_oracle(n);
    const Certified m = support_measure(typewriter(n));
    if (!(m.exact && *m.exact == MonomialSum(Rational(hi - lo)))) ++bad;
  }
  const auto v = check_in_measure(family(FamilyId::Typewriter), {Rational(1, 8), Rational(1, 64)}, 4096, kBits);
  std::ostringstream os;
  os << bad << " mismatches for n <= " << kMeasureLawLast << "; " << v.to_string();
  return {bad == 0 && v.status == VerdictStatus::CertifiedConverges, os.str()};
}

Outcome pointwise_divergence() {
  const FunSeq tw = family(FamilyId::Typewriter);
  const auto xs = uniform_grid(kGridPoints);
  const auto report = check_pointwise(tw, xs, kPointwiseHorizon, kBits);
  long certified = 0;
  for (const auto& p : report.points) certified += p.verdict.status == VerdictStatus::CertifiedDiverges;
  std::vector<long> ones(xs.size()), zeros(xs.size());
  long disagreements = 0;
  for (long n = 1; n <= kPointwiseHorizon; ++n) {
    const PwExpFun f = typewriter(n);
    const auto [lo, hi] = window_oracle(n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const MonomialSum v = evaluate_exact(f, xs[i]);
      const bool inside = lo <= xs[i] && xs[i] <= hi;
      if (!(v == MonomialSum(inside ? 1 : 0))) ++disagreements;
      (inside ? ones : zeros)[i]++;
    }
  }
  const long min_ones = *std::min_element(ones.begin(), ones.end());
  const long min_zeros = *std::min_element(zeros.begin(), zeros.end());
  std::ostringstream os;
  os << certified << "/" << xs.size() << " points CertifiedDiverges; min visits to 1: " << min_ones
     << ", to 0: " << min_zeros << "; " << disagreements << " value disagreements";
  return {certified == static_cast<long>(xs.size()) && report.overall.status == VerdictStatus::CertifiedDiverges &&
              min_ones >= kMinVisits && min_zeros >= kMinVisits && disagreements == 0,
          os.str()};
}

Outcome algebra_collapse() {
  long mismatches = 0, certified = 0, zero = 0, other = 0;
  for (const auto& [p, c] : seeded_polys(kPolys)) {
    if (p.variables() > 3 || p.degree() > 4) ++mismatches;
    for (int n = 1; n <= kCollapseLastN; ++n) {
      const CollapsedForm form = apply_polynomial(p, FamilyId::MeasureGen, c, n);
      if (!(form.function() == expand_polynomial(p, FamilyId::MeasureGen, c, n))) ++mismatches;
    }
    for (int n : {1, kCollapseLastN}) {
      const auto cert = certify_collapsed_nonzero(apply_polynomial(p, FamilyId::MeasureGen, c, n));
      certified += cert.status == NonzeroStatus::CertifiedNonzero;
      zero += cert.status == NonzeroStatus::CertifiedZero;
      other += cert.status == NonzeroStatus::Indeterminate;
    }
  }
  std::ostringstream os;
  os << mismatches << " collapse mismatches over " << kPolys << " x " << kCollapseLastN << "; " << certified
     << " certified nonzero, " << zero << " CertifiedZero, " << other << " indeterminate";
  return {mismatches == 0 && certified == 2 * kPolys && zero == 0, os.str()};
}

Outcome sup_invariance() {
  double worst = 0;
  long bad = 0;
  for (const auto& [p, c] : seeded_polys(kSupPolys)) {
    const ExponentSumFn f = phi(c, p);
    const Enclosure target =
        ess_sup(PwExpFun::single(Domain::UnitInterval, Interval::closed(0, 1), f.as_expsum()), kBits).enclosure;
    for (int n : {1, 2, 5, 10, 100}) {
      const PwExpFun g = apply_polynomial(p, FamilyId::NupGen, c, n).function();
      const Interval window = Interval::closed(Rational(1, n + 1), Rational(1, n));
      const Enclosure s = ess_sup(g, {window}, kBits).enclosure;
      const double w = hull(s, target).width_double();
      worst = std::max(worst, w);
      if (!s.intersects(target) || !(w < kSupWidth)) ++bad;
    }
  }
  std::ostringstream os;
  os << bad << " failures over " << kSupPolys << " x 5; widest combined enclosure " << worst;
  return {bad == 0, os.str()};
}

Outcome independence() {
  std::ostringstream os;
  bool ok = true;
  for (FamilyId id : {FamilyId::TypewriterSplit, FamilyId::ShrinkSplit, FamilyId::TravelingBump}) {
    std::vector<FunSeq> members;
    for (long k = 1; k <= kRankTarget; ++k) members.push_back(family(id, k));
    const auto r = independence_rank([&](long k) { return members.at(k - 1); }, kRankTarget, 4);
    // Each witness coordinate must isolate its own member.
    long isolated = 0;
    for (const auto& w : r.witnesses) {
      bool own = false, others = true;
      for (long k = 1; k <= kRankTarget; ++k) {
        const bool nonzero = !evaluate_exact(members[k - 1].at(w.n), w.x).is_zero();
        if (k == w.k) own = nonzero;
        else others = others && !nonzero;
      }
      isolated += own && others;
    }
    ok = ok && r.rank == kRankTarget && isolated == kRankTarget;
    os << family_name(id) << " rank " << r.rank << " (" << isolated << " isolating witnesses); ";
  }
  return {ok, os.str()};
}

Outcome interleaving() {
  std::map<Integer, int> hits;
  bool monotone = true, formula = true;
  for (long k = 1; k <= kInterleaveSide; ++k) {
    for (long n = 1; n <= kInterleaveSide; ++n) {
      const Index i = interleave_index(k, n);
      if (i != (Integer(1) << (k - 1)) * (2 * n - 1)) formula = false;
      hits[i]++;
      monotone = monotone && i < interleave_index(k, n + 1) && i < interleave_index(k + 1, n);
    }
  }
  bool injective = true;
  for (const auto& [i, c] : hits) injective = injective && c == 1;
  bool onto = true;
  for (long v = 1; v <= kInterleaveSide; ++v) onto = onto && hits.count(v) == 1;
  std::ostringstream os;
  os << "injective " << injective << ", covers 1.." << kInterleaveSide << " " << onto << ", strictly monotone "
     << monotone << ", matches 2^(k-1)(2n-1) " << formula;
  return {injective && onto && monotone && formula, os.str()};
}

Outcome dichotomy() {
  ScenarioParams p = default_params("prop-3.1");
  p.horizon = kDichotomyHorizon;
  p.samples = kGridPoints;
  p.seed = kSeed;
  const ScenarioReport r = run_scenario(p);
  bool ok = r.checks.size() == 3;
  std::ostringstream os;
  for (const auto& c : r.checks) {
    ok = ok && c.status == CheckStatus::Pass && c.payload.value("agree", -1) == kDichotomyInstances;
    os << c.name << ": " << c.detail << "; ";
  }
  return {ok, os.str()};
}

Outcome l1_divergence() {
  const std::size_t sqrt2 = 1;
  long bad = 0;
  Enclosure prev, at_checkpoint;
  for (int n = 2; n <= kLogNormLast; ++n) {
    const Certified l = l1_norm(l1_gen(sqrt2, n), kBits);
    if (!l.exact || !l.exact->is_monomial()) return {false, "L1 norm not a single monomial at n = " + std::to_string(n)};
    const Enclosure lg = l.exact->terms().front().log_abs(kBits);
    if (n > 2 && !prev.certainly_less(lg)) ++bad;
    if (n == kLogNormCheckpoint) at_checkpoint = lg;
    prev = lg;
  }
  // Oracle: n - sqrt2 ln n from GMP series.
  const auto log_ref = oracle::sub(oracle::Range{kLogNormCheckpoint, kLogNormCheckpoint},
                                   oracle::mul_pos(oracle::sqrt_int(2, 300), oracle::ln(kLogNormCheckpoint, 300)));
  const bool over = Enclosure::point(Rational(100), kBits).certainly_less(at_checkpoint) && log_ref.lo > 100;

  long sup_bad = 0;
  Enclosure sprev, before, at;
  for (int n = 1; n <= kLogNormLast; ++n) {
    const Enclosure s = ess_sup(l1_gen(sqrt2, n), kBits).enclosure;
    if (n > 1 && !s.certainly_less(sprev)) ++sup_bad;
    if (n == kSupCrossing - 1) before = s;
    if (n == kSupCrossing) at = s;
    sprev = s;
  }
  const Enclosure milli = Enclosure::point(Rational(1, 1000), kBits);
  auto pow_ref = [](int n) {
    return oracle::exp(oracle::neg(oracle::mul_pos(oracle::sqrt_int(2, 300), oracle::ln(n, 300))), 280);
  };
  const auto ref_before = pow_ref(kSupCrossing - 1), ref_at = pow_ref(kSupCrossing);
  const bool crossing = milli.certainly_less(before) && at.certainly_less(milli) && ref_before.lo > oracle::Q(1, 1000) &&
                        ref_at.hi < oracle::Q(1, 1000) && agrees(before, ref_before) && agrees(at, ref_at) &&
                        agrees(at_checkpoint, log_ref);
  std::ostringstream os;
  os << bad << " non-increases of log-norm for 2 <= n <= " << kLogNormLast << "; log-norm(" << kLogNormCheckpoint
     << ") = " << at_checkpoint.to_string(12) << "; " << sup_bad << " non-decreases of n^-sqrt2; n^-sqrt2 at "
     << kSupCrossing - 1 << " = " << before.to_string(8) << ", at " << kSupCrossing << " = " << at.to_string(8);
  return {bad == 0 && over && sup_bad == 0 && crossing, os.str()};
}

Outcome bump_exactness() {
  long bad = 0;
  for (long k = 1; k <= kBumpSide; ++k) {
    for (long n = 1; n <= kBumpSide; ++n) {
      const PwExpFun g = traveling_bump(k, n);
      const Certified l = l1_norm(g, kBits), s = ess_sup(g, kBits);
      if (!(l.exact && *l.exact == MonomialSum(1))) ++bad;
      if (!(s.exact && *s.exact == MonomialSum(Rational(1, n)))) ++bad;
    }
  }
  // Independent tiling: row N occupies [T(N-1), T(N)] with T(N) = sum_{r<=N} r(r+1)/2, block M has length M.
  long tiling_bad = 0;
  Integer row_start = 0;
  Integer cursor = 0;
  for (long row = 1; row <= kTilingRows; ++row) {
    for (long m = 1; m <= row; ++m) {
      const Interval b = block_interval(row, m);
      if (!(b.lo == Point(Rational(cursor)) && b.hi == Point(Rational(cursor + m)))) ++tiling_bad;
      cursor += m;
    }
    row_start += Integer(row) * (row + 1) / 2;
    if (cursor != row_start) ++tiling_bad;
  }
  std::ostringstream os;
  os << bad << " norm mismatches for k, n <= " << kBumpSide << "; " << tiling_bad
     << " tiling defects up to row " << kTilingRows << " (total length " << cursor.get_str() << ")";
  return {bad == 0 && tiling_bad == 0, os.str()};
}

Outcome metric_suite() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> cuts_d(1, 4), pos_d(1, 15), val_d(-6, 6);
  auto step = [&] {
    std::set<int> cuts{0, 16};
    const int k = cuts_d(rng);
    for (int i = 0; i < k; ++i) cuts.insert(pos_d(rng));
    const std::vector<int> c(cuts.begin(), cuts.end());
    std::vector<ExpPiece> pieces;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      Interval iv = Interval::closed(Rational(c[i], 16), Rational(c[i + 1], 16));
      if (i + 2 < c.size()) iv.hi_closed = false;
      pieces.push_back({iv, ExpSum(MonomialSum(Rational(val_d(rng), 2)))});
    }
    return PwExpFun(Domain::UnitInterval, pieces);
  };
  long axiom_bad = 0;
  auto r = [&](const PwExpFun& a, const PwExpFun& b) {
    const Certified v = rho(a, b, 128);
    if (!v.exact || !v.exact->is_rational()) {
      ++axiom_bad;
      return Rational(0);
    }
    return v.exact->rational_value();
  };
  for (int t = 0; t < kMetricTriples; ++t) {
    const PwExpFun f = step(), g = t % 10 == 0 ? f : step(), h = step();
    const Rational fg = r(f, g);
    if (r(f, f) != 0 || fg != r(g, f) || fg > r(f, h) + r(h, g) || (fg == 0) != equal_ae(f, g)) ++axiom_bad;
  }
  long tail_bad = 0;
  const FunSeq tw = family(FamilyId::Typewriter), sh = family(FamilyId::Shrink);
  for (int n = 1; n <= kTailTerms; ++n) {
    const DMetric self = d_metric(tw, tw, n, 128), cross = d_metric(tw, sh, n, 128);
    if (self.enclosure.upper_rational() != pow2_neg(n)) ++tail_bad;
    if (!cross.partial_sum) {
      ++tail_bad;
      continue;
    }
    const Rational excess = cross.enclosure.upper_rational() - *cross.partial_sum;
    if (excess < pow2_neg(n) || excess > pow2_neg(n) + pow2_neg(100)) ++tail_bad;
  }
  long dense_bad = 0;
  std::ostringstream os;
  for (const auto& spec : catalog()) {
    const FunSeq f = make_family(spec);
    const DMetric d = d_metric(f, truncate(f, kTruncateKeep), kTruncateTerms, 128);
    if (!(d.enclosure.upper_rational() < pow2_neg(kTruncateKeep))) {
      ++dense_bad;
      os << spec.to_string() << " too far; ";
    }
  }
  os << axiom_bad << " metric axiom violations over " << kMetricTriples << " triples; " << tail_bad
     << " tail-bound defects for N <= " << kTailTerms << "; " << dense_bad << " catalog families with D >= 2^-"
     << kTruncateKeep;
  return {axiom_bad == 0 && tail_bad == 0 && dense_bad == 0, os.str()};
}

Outcome nup_conditions() {
  const auto xs = uniform_grid(kGridPoints);
  std::vector<FunSeq> seqs;
  seqs.push_back(algebra_element(MultiIndexPoly(2, {{{1, 0}, 2}, {{0, 1}, -3}}), FamilyId::NupGen, {1, 2}));
  for (const auto& [p, c] : seeded_polys(4)) seqs.push_back(algebra_element(p, FamilyId::NupGen, c));
  long a_ok = 0, b_ok = 0, c_ok = 0, b_total = 0;
  std::ostringstream os;
  for (const auto& f : seqs) {
    const auto pw = check_pointwise(f, xs, 4096, kBits);
    const auto null = limsup_is_null(*f.metadata().support);
    a_ok += pw.overall.status == VerdictStatus::CertifiedConverges && null && *null;
    for (const Rational& eps : {Rational(1, 10), Rational(1, 100)}) {
      ++b_total;
      const auto v = check_almost_uniform(f, eps, 4096, kBits);
      if (v.status != VerdictStatus::CertifiedConverges || v.exceptional_set.empty()) continue;
      const Certified m = union_measure(v.exceptional_set);
      const bool small = m.exact && m.exact->is_rational() && m.exact->rational_value() < eps;
      Interval off = Interval::closed(v.exceptional_set.back().hi, 1);
      off.lo_closed = false;
      bool vanishes = true;
      for (Index n = v.index; n <= v.index + 64; ++n) {
        const Certified s = ess_sup(f.at(n), {off}, kBits);
        vanishes = vanishes && s.exact && s.exact->is_zero();
      }
      b_ok += small && vanishes;
    }
    c_ok += check_uniform(f, 4096, kBits).status == VerdictStatus::CertifiedDiverges;
  }
  os << seqs.size() << " nup-gen combinations: (A) " << a_ok << " certified pointwise a.e., (B) " << b_ok << "/"
     << b_total << " exceptional sets verified, (C) " << c_ok << " certified not uniformly a.e.";
  const long total = static_cast<long>(seqs.size());
  return {a_ok == total && b_ok == b_total && c_ok == total, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"typewriter measure law", measure_law},
      {"typewriter pointwise divergence", pointwise_divergence},
      {"algebra collapse", algebra_collapse},
      {"nup sup invariance", sup_invariance},
      {"independence ranks", independence},
      {"interleaving bijection", interleaving},
      {"indicator dichotomy oracle", dichotomy},
      {"l1 divergence", l1_divergence},
      {"traveling bump exactness", bump_exactness},
      {"metric suite", metric_suite},
      {"nup conditions", nup_conditions},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %zu (%s) [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
