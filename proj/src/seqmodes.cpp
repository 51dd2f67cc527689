#include "convlab/seqmodes.hpp"

#include <algorithm>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equals: return "equals";
    case Relation::AtMost: return "at-most";
    case Relation::AtLeast: return "at-least";
  }
  return "?";
}

std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::ToZero: return "to-zero";
    case Trend::ToInfinity: return "to-infinity";
    case Trend::BoundedBelow: return "bounded-below";
    case Trend::RecurrentlyAbove: return "recurrently-above";
  }
  return "?";
}

std::string_view to_string(TailDescriptor::Kind k) {
  switch (k) {
    case TailDescriptor::Kind::ShrinksToNull: return "shrinks-to-null";
    case TailDescriptor::Kind::SweepsAll: return "sweeps-all";
    case TailDescriptor::Kind::EventuallyAvoids: return "eventually-avoids";
    case TailDescriptor::Kind::Custom: return "custom";
  }
  return "?";
}

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::InLimsup: return "InLimsup";
    case Membership::NotInLimsup: return "NotInLimsup";
    case Membership::Unknown: return "Unknown";
  }
  return "?";
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::CertifiedConverges: return "CertifiedConverges";
    case VerdictStatus::CertifiedDiverges: return "CertifiedDiverges";
    case VerdictStatus::NoCounterexampleUpTo: return "NoCounterexampleUpTo";
    case VerdictStatus::CounterexampleAt: return "CounterexampleAt";
  }
  return "?";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Pointwise: return "pointwise";
    case Mode::AlmostEverywhere: return "almost-everywhere";
    case Mode::Uniform: return "uniform";
  }
  return "?";
}

bool ClosedForm::certifies_zero_limit() const {
  return trend == Trend::ToZero && relation != Relation::AtLeast;
}

bool ClosedForm::certifies_positive_floor() const {
  return (trend == Trend::BoundedBelow || trend == Trend::RecurrentlyAbove) && relation != Relation::AtMost;
}

bool ClosedForm::certifies_blowup() const { return trend == Trend::ToInfinity && relation != Relation::AtMost; }

std::string ConvergenceVerdict::to_string() const {
  std::ostringstream os;
  os << convlab::to_string(status);
  if (status == VerdictStatus::NoCounterexampleUpTo || status == VerdictStatus::CounterexampleAt) {
    os << "(" << index.get_str() << ")";
  }
  if (!certificate.empty()) os << ": " << certificate;
  return os.str();
}

// ------------------------------------------------------------------ limsup

namespace {

bool covers(const std::vector<Interval>& parts, const Point& x) {
  return std::any_of(parts.begin(), parts.end(), [&](const Interval& i) { return i.contains(x); });
}

// Membership queries against many intervals: sorted by left end with a
// running maximum of right ends, scanned backward from the last candidate.
class IntervalIndex {
 public:
  explicit IntervalIndex(std::vector<Interval> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
      if (a.lo == b.lo) return a.hi < b.hi;
      return a.lo < b.lo;
    });
    parts_.erase(std::unique(parts_.begin(), parts_.end()), parts_.end());
    for (const auto& p : parts_) reach_.push_back(reach_.empty() || reach_.back() < p.hi ? p.hi : reach_.back());
  }

  bool covers(const Point& x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x, [](const Point& v, const Interval& i) { return v < i.lo; });
    for (auto i = static_cast<std::size_t>(it - parts_.begin()); i-- > 0;) {
      if (reach_[i] < x) return false;
      if (parts_[i].contains(x)) return true;
    }
    return false;
  }

 private:
  std::vector<Interval> parts_;
  std::vector<Point> reach_;
};

Interval domain_of(Domain d) { return PwExpFun(d).domain_interval(); }

// The union equals the domain up to finitely many points.
bool covers_domain_ae(const std::vector<Interval>& parts, Domain d) {
  const Interval dom = domain_of(d);
  std::vector<Interval> clipped;
  for (const auto& p : parts) clipped.push_back(intersect(p, dom));
  auto merged = merge_intervals(std::move(clipped));
  return merged.size() == 1 && merged.front().lo == dom.lo && merged.front().hi == dom.hi;
}

bool covers_domain(const std::vector<Interval>& parts, Domain d) {
  if (!covers_domain_ae(parts, d)) return false;
  // Every point, including shared endpoints, must be covered.
  const Interval dom = domain_of(d);
  std::vector<Point> ends{dom.lo};
  if (!dom.hi.is_infinite()) ends.push_back(dom.hi);
  for (const auto& p : parts) {
    ends.push_back(p.lo);
    if (!p.hi.is_infinite()) ends.push_back(p.hi);
  }
  for (const auto& x : ends) {
    if (dom.contains(x) && !covers(parts, x)) return false;
  }
  return true;
}

}  // namespace

Membership limsup_membership(const StructuredSetSeq& e, const Rational& x) {
  if (!domain_of(e.domain).contains(x)) return Membership::NotInLimsup;
  const auto& t = e.tail;
  switch (t.kind) {
    case TailDescriptor::Kind::SweepsAll:
      return Membership::InLimsup;
    case TailDescriptor::Kind::ShrinksToNull:
      if (x > 0) return Membership::NotInLimsup;
      return t.origin_in_limsup ? Membership::InLimsup : Membership::NotInLimsup;
    case TailDescriptor::Kind::EventuallyAvoids:
      return covers(t.region, x) ? Membership::NotInLimsup : Membership::InLimsup;
    case TailDescriptor::Kind::Custom:
      if (!covers(t.covered, x)) return Membership::Unknown;
      return covers(t.limsup, x) ? Membership::InLimsup : Membership::NotInLimsup;
  }
  return Membership::Unknown;
}

std::optional<bool> limsup_is_empty(const StructuredSetSeq& e) {
  const auto& t = e.tail;
  switch (t.kind) {
    case TailDescriptor::Kind::SweepsAll: return false;
    case TailDescriptor::Kind::ShrinksToNull: return !t.origin_in_limsup;
    case TailDescriptor::Kind::EventuallyAvoids: return covers_domain(t.region, e.domain);
    case TailDescriptor::Kind::Custom:
      if (!covers_domain(t.covered, e.domain)) return std::nullopt;
      return std::all_of(t.limsup.begin(), t.limsup.end(), [](const Interval& i) { return i.is_empty(); });
  }
  return std::nullopt;
}

std::optional<bool> limsup_is_null(const StructuredSetSeq& e) {
  const auto& t = e.tail;
  switch (t.kind) {
    case TailDescriptor::Kind::SweepsAll: return false;
    case TailDescriptor::Kind::ShrinksToNull: return true;
    case TailDescriptor::Kind::EventuallyAvoids: return covers_domain_ae(t.region, e.domain);
    case TailDescriptor::Kind::Custom:
      if (!covers_domain_ae(t.covered, e.domain)) return std::nullopt;
      return merge_intervals(t.limsup).empty();
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ FunSeq

namespace {

bool consistent(const Certified& computed, const MonomialSum& formula, Relation rel, int bits) {
  if (computed.exact) {
    if (rel == Relation::Equals && *computed.exact == formula) return true;
    Ordering o = compare(*computed.exact, formula, std::max(bits, kDefaultBudgetBits));
    switch (rel) {
      case Relation::Equals: return o == Ordering::Indeterminate;
      case Relation::AtMost: return o != Ordering::Greater;
      case Relation::AtLeast: return o != Ordering::Less;
    }
  }
  Enclosure f = eval_enclosure(formula, bits);
  switch (rel) {
    case Relation::Equals: return computed.enclosure.intersects(f);
    case Relation::AtMost: return !f.certainly_less(computed.enclosure);
    case Relation::AtLeast: return !computed.enclosure.certainly_less(f);
  }
  return false;
}

void audit_form(const std::string& seq, const char* what, const ClosedForm& form, const Index& n,
                const Certified& computed) {
  MonomialSum expected = form.formula(n);
  if (!consistent(computed, expected, form.relation, kAuditBits)) {
    throw Error(ErrorCode::AuditFailure, seq + ": " + what + " at n=" + n.get_str() + " computed " +
                                             computed.to_string() + ", closed form " +
                                             std::string(to_string(form.relation)) + " " + expected.to_string());
  }
  if (form.trend == Trend::BoundedBelow && compare(expected, form.bound) == Ordering::Less) {
    throw Error(ErrorCode::AuditFailure, seq + ": " + what + " closed form falls below its floor at n=" + n.get_str());
  }
}

std::vector<Rational> audit_points(const PwExpFun& f, const std::vector<Interval>& sets) {
  std::vector<Rational> xs;
  if (f.domain() == Domain::UnitInterval) {
    for (int k = 0; k <= 16; ++k) xs.emplace_back(k, 16);
  }
  auto add = [&](const Point& p) {
    if (p.is_rational()) xs.push_back(p.rational());
  };
  for (const auto& s : sets) {
    add(s.lo);
    add(s.hi);
    if (s.lo.is_rational() && s.hi.is_rational()) xs.push_back((s.lo.rational() + s.hi.rational()) / 2);
  }
  for (const auto& p : f.pieces()) {
    add(p.interval.lo);
    add(p.interval.hi);
  }
  return xs;
}

}  // namespace

FunSeq::FunSeq(std::string name, Domain domain, Generator generator, SeqMetadata metadata, int audit_horizon)
    : name_(std::move(name)), domain_(domain), generator_(std::move(generator)), metadata_(std::move(metadata)) {
  audit(audit_horizon);
}

PwExpFun FunSeq::at(const Index& n) const {
  if (n < 1) throw Error(ErrorCode::IndexOutOfRange, name_ + ": index " + n.get_str() + " below 1");
  PwExpFun f = generator_(n);
  if (f.domain() != domain_) throw Error(ErrorCode::DomainMismatch, name_ + ": generator changed domain");
  return f;
}

FunSeq FunSeq::zero(Domain domain) {
  ClosedForm zero_form{[](const Index&) { return MonomialSum(); }, Relation::Equals, Trend::ToZero, {}, "identically 0"};
  SeqMetadata meta;
  meta.support_measure = meta.sup_norm = meta.l1_norm = zero_form;
  StructuredSetSeq sets;
  sets.domain = domain;
  sets.sets = [](const Index&) { return std::vector<Interval>{}; };
  sets.tail.kind = TailDescriptor::Kind::EventuallyAvoids;
  sets.tail.region = {domain_of(domain)};
  sets.tail.certificate = "every E_n is empty";
  meta.support = sets;
  return FunSeq("zero", domain, [domain](const Index&) { return PwExpFun(domain); }, meta);
}

void FunSeq::audit(int horizon) const {
  const auto& m = metadata_;
  for (int i = 1; i <= horizon; ++i) {
    const Index n(i);
    PwExpFun f = at(n);
    if (m.support_measure) audit_form(name_, "support measure", *m.support_measure, n, convlab::support_measure(f));
    if (m.sup_norm) audit_form(name_, "sup norm", *m.sup_norm, n, ess_sup(f, kAuditBits));
    if (m.l1_norm) audit_form(name_, "L1 norm", *m.l1_norm, n, convlab::l1_norm(f, kAuditBits));
    if (m.support) {
      const auto sets = m.support->at(n);
      for (const auto& p : f.pieces()) {
        bool inside = std::any_of(sets.begin(), sets.end(), [&](const Interval& s) {
          return s.lo <= p.interval.lo && p.interval.hi <= s.hi;
        });
        if (!inside) {
          throw Error(ErrorCode::AuditFailure, name_ + ": piece " + p.interval.to_string() + " of f_" + n.get_str() +
                                                   " leaves E_n");
        }
      }
      if (m.profile) {
        for (const auto& x : audit_points(f, sets)) {
          if (!f.domain_interval().contains(x)) continue;
          MonomialSum expected = covers(sets, x) ? m.profile(x) : MonomialSum();
          if (!(evaluate_exact(f, x) == expected)) {
            throw Error(ErrorCode::AuditFailure, name_ + ": f_" + n.get_str() + "(" + to_string(x) +
                                                     ") disagrees with the profile");
          }
        }
      }
      const auto& tail = m.support->tail;
      if (tail.kind == TailDescriptor::Kind::ShrinksToNull) {
        const Point r = tail.right_bound(n);
        for (const auto& s : sets) {
          if (r < s.hi) throw Error(ErrorCode::AuditFailure, name_ + ": E_" + n.get_str() + " exceeds its right bound");
        }
        if (r < tail.right_bound(n + 1)) {
          throw Error(ErrorCode::AuditFailure, name_ + ": right bound increases at n=" + n.get_str());
        }
      }
      if (tail.kind == TailDescriptor::Kind::SweepsAll && i <= 4) {
        for (int k = 0; k <= 8; ++k) {
          Rational x(k, 8);
          Index idx = tail.cover_index(x, n);
          if (idx < n || !covers(m.support->at(idx), x)) {
            throw Error(ErrorCode::AuditFailure, name_ + ": cover index for " + to_string(x) + " is wrong");
          }
        }
      }
    }
    if (m.live_index && i <= 3) {
      Index live = m.live_index(n);
      if (at(live).is_zero()) {
        throw Error(ErrorCode::AuditFailure, name_ + ": live index " + live.get_str() + " gives the zero function");
      }
      if (m.sup_norm && m.sup_norm->trend == Trend::RecurrentlyAbove &&
          compare(m.sup_norm->formula(live), m.sup_norm->bound) == Ordering::Less) {
        throw Error(ErrorCode::AuditFailure, name_ + ": sup below its floor at live index " + live.get_str());
      }
    }
  }
}

// --------------------------------------------------------------- D metric

namespace {

Rational pow2_neg(int n) {
  Rational r(1);
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(n));
  return r;
}

// Finite-horizon evidence: the tail (N/2, N] still reaches half of the
// overall maximum, which is positive.
struct Evidence {
  bool counterexample = false;
  int index = 0;
  Rational tail_value;
  Rational overall_max;
};

Evidence horizon_evidence(const std::vector<Enclosure>& values) {
  Evidence ev;
  const int n_max = static_cast<int>(values.size());
  Rational overall = 0, tail = 0;
  int tail_index = 0;
  for (int n = 1; n <= n_max; ++n) {
    const Enclosure& v = values[n - 1];
    overall = std::max(overall, v.upper_rational());
    if (2 * n > n_max) {
      Rational lo = v.lower_rational();
      if (lo >= tail) {
        tail = lo;
        tail_index = n;
      }
    }
  }
  ev.overall_max = overall;
  ev.tail_value = tail;
  ev.index = tail_index;
  ev.counterexample = tail > 0 && 2 * tail >= overall;
  return ev;
}

ConvergenceVerdict from_evidence(const Evidence& ev, int horizon, const std::string& quantity) {
  ConvergenceVerdict v;
  std::ostringstream os;
  if (ev.counterexample) {
    v.status = VerdictStatus::CounterexampleAt;
    v.index = ev.index;
    os << quantity << " at n=" << ev.index << " is >= " << to_string(ev.tail_value)
       << ", at least half of its maximum " << to_string(ev.overall_max) << " over n <= " << horizon;
  } else {
    v.status = VerdictStatus::NoCounterexampleUpTo;
    v.index = horizon;
    os << quantity << " on (" << horizon / 2 << ", " << horizon << "] stays below half of its maximum "
       << to_string(ev.overall_max);
  }
  v.certificate = os.str();
  return v;
}

ConvergenceVerdict certified(VerdictStatus status, std::string certificate) {
  ConvergenceVerdict v;
  v.status = status;
  v.certificate = std::move(certificate);
  return v;
}

}  // namespace

DMetric d_metric(const FunSeq& f, const FunSeq& g, int n_terms, int bits) {
  if (f.domain() != g.domain()) throw Error(ErrorCode::DomainMismatch, f.name() + " vs " + g.name());
  if (n_terms < 1) throw Error(ErrorCode::InvalidArgument, "d_metric needs at least one term");
  DMetric out;
  out.tail_bound = pow2_neg(n_terms);
  std::optional<Rational> partial = Rational(0);
  Enclosure total = Enclosure::point(Rational(0), bits);
  for (int i = 1; i <= n_terms; ++i) {
    const Index n(i);
    Certified t = f.domain() == Domain::UnitInterval ? rho(f.at(n), g.at(n), bits)
                                                     : l1_distance(f.at(n), g.at(n), bits);
    const Rational weight = pow2_neg(i);
    if (partial && t.exact && t.exact->is_rational()) {
      Rational q = t.exact->rational_value();
      Rational term = weight * q / (1 + q);
      *partial += term;
      total = total + Enclosure::point(term, bits);
    } else {
      partial.reset();
      total = total + scale(saturate(max(t.enclosure, Enclosure::point(Rational(0), bits))), weight);
    }
  }
  out.partial_sum = partial;
  out.enclosure = hull(total, total + Enclosure::point(out.tail_bound, bits));
  return out;
}

// ---------------------------------------------------------------- checkers

ConvergenceVerdict check_in_measure(const FunSeq& f, const std::vector<Rational>& eps_grid, int horizon, int bits) {
  for (const auto& eps : eps_grid) {
    if (eps <= 0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  }
  const auto& m = f.metadata();
  if (m.support_measure && m.support_measure->certifies_zero_limit()) {
    return certified(VerdictStatus::CertifiedConverges,
                     "m{f_n != 0} " + std::string(to_string(m.support_measure->relation)) + " " +
                         m.support_measure->certificate + " -> 0");
  }
  if (m.sup_norm && m.sup_norm->certifies_zero_limit()) {
    return certified(VerdictStatus::CertifiedConverges,
                     "ess sup |f_n| " + std::string(to_string(m.sup_norm->relation)) + " " + m.sup_norm->certificate +
                         " -> 0, so every superlevel set is eventually null");
  }
  ConvergenceVerdict last;
  for (const auto& eps : eps_grid) {
    std::vector<Enclosure> values;
    for (int n = 1; n <= horizon; ++n) values.push_back(superlevel_measure(f.at(n), eps, bits).enclosure);
    ConvergenceVerdict v = from_evidence(horizon_evidence(values), horizon, "m{|f_n| > " + to_string(eps) + "}");
    if (v.status == VerdictStatus::CounterexampleAt) return v;
    last = v;
  }
  if (eps_grid.empty()) {
    last.index = horizon;
    last.certificate = "empty eps grid";
  }
  return last;
}

PointwiseReport check_pointwise(const FunSeq& f, const std::vector<Rational>& xs, int horizon, int bits) {
  const auto& m = f.metadata();
  const Interval dom = PwExpFun(f.domain()).domain_interval();
  PointwiseReport report;
  for (const auto& x : xs) {
    if (!dom.contains(x)) throw Error(ErrorCode::OutOfDomain, to_string(x) + " outside the domain");
    ConvergenceVerdict v;
    if (m.sup_norm && m.sup_norm->certifies_zero_limit()) {
      v = certified(VerdictStatus::CertifiedConverges, "|f_n(x)| <= ess sup |f_n| -> 0 (" + m.sup_norm->certificate + ")");
    } else if (m.support) {
      Membership mem = limsup_membership(*m.support, x);
      if (mem == Membership::NotInLimsup) {
        v = certified(VerdictStatus::CertifiedConverges, "x lies in finitely many E_n (" +
                                                             std::string(to_string(m.support->tail.kind)) +
                                                             "), so f_n(x) = 0 eventually");
      } else if (mem == Membership::InLimsup && m.profile) {
        MonomialSum p = m.profile(x);
        if (certify_nonzero(p, kDefaultBudgetBits).status == NonzeroStatus::CertifiedNonzero) {
          std::string cert = "x lies in infinitely many E_n where f_n(x) = " + p.to_string() + " != 0";
          if (m.support->tail.cover_index) {
            const Index n = m.support->tail.cover_index(x, Index(horizon));
            cert += mpz_sizeinbase(n.get_mpz_t(), 2) <= 64 ? "; e.g. n = " + n.get_str()
                                                           : "; e.g. an index of " + std::to_string(mpz_sizeinbase(n.get_mpz_t(), 2)) + " bits";
          }
          v = certified(VerdictStatus::CertifiedDiverges, cert);
        }
      }
    }
    if (!v.is_certified()) {
      std::vector<Enclosure> values;
      for (int n = 1; n <= horizon; ++n) values.push_back(abs(eval_enclosure(evaluate_exact(f.at(n), x), std::min(bits, 128))));
      v = from_evidence(horizon_evidence(values), horizon, "|f_n(" + to_string(x) + ")|");
    }
    report.points.push_back({x, v});
  }
  ConvergenceVerdict overall;
  overall.status = VerdictStatus::CertifiedConverges;
  overall.certificate = "every sampled point converges";
  bool all_certified = true;
  for (const auto& pv : report.points) {
    const auto& v = pv.verdict;
    if (v.status == VerdictStatus::CertifiedDiverges) {
      overall = v;
      overall.certificate = "x = " + to_string(pv.x) + ": " + v.certificate;
      break;
    }
    if (v.status == VerdictStatus::CounterexampleAt && overall.status != VerdictStatus::CounterexampleAt) {
      overall = v;
      overall.certificate = "x = " + to_string(pv.x) + ": " + v.certificate;
    }
    if (!v.is_certified()) all_certified = false;
  }
  if (overall.status == VerdictStatus::CertifiedConverges && !all_certified) {
    overall.status = VerdictStatus::NoCounterexampleUpTo;
    overall.index = horizon;
    overall.certificate = "no sampled point shows a counterexample";
  }
  report.overall = overall;
  return report;
}

ConvergenceVerdict check_uniform(const FunSeq& f, int horizon, int bits) {
  const auto& m = f.metadata();
  if (m.sup_norm) {
    const auto& s = *m.sup_norm;
    if (s.certifies_zero_limit()) {
      return certified(VerdictStatus::CertifiedConverges, "ess sup |f_n| " + std::string(to_string(s.relation)) + " " +
                                                              s.certificate + " -> 0");
    }
    if (s.certifies_positive_floor()) {
      return certified(VerdictStatus::CertifiedDiverges,
                       "ess sup |f_n| " + std::string(to_string(s.relation)) + " " + s.certificate + " >= " +
                           s.bound.to_string() + (s.trend == Trend::RecurrentlyAbove ? " infinitely often" : " for all n"));
    }
  }
  std::vector<Enclosure> values;
  for (int n = 1; n <= horizon; ++n) values.push_back(ess_sup(f.at(n), bits).enclosure);
  return from_evidence(horizon_evidence(values), horizon, "ess sup |f_n|");
}

ConvergenceVerdict check_almost_uniform(const FunSeq& f, const Rational& eps, int horizon, int bits) {
  if (eps <= 0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (f.domain() != Domain::UnitInterval) {
    throw Error(ErrorCode::DomainMismatch, "almost-uniform check runs on the unit interval");
  }
  const auto& m = f.metadata();
  if (m.sup_norm && m.sup_norm->certifies_zero_limit()) {
    ConvergenceVerdict v = certified(VerdictStatus::CertifiedConverges,
                                     "E = empty set; ess sup |f_n| " + m.sup_norm->certificate + " -> 0");
    return v;
  }
  if (m.support && m.support->tail.kind == TailDescriptor::Kind::ShrinksToNull) {
    const auto& tail = m.support->tail;
    const Rational delta = eps / 2;
    Index hi = 1;
    for (int i = 0; Point(delta) < tail.right_bound(hi); ++i) {
      if (i > 4096) throw Error(ErrorCode::BudgetExhausted, "right bound does not fall below " + to_string(delta));
      hi *= 2;
    }
    Index lo = hi / 2;  // right_bound(lo) > delta unless hi == 1
    if (hi == 1) lo = 0;
    while (hi - lo > 1) {
      Index mid = (lo + hi) / 2;
      if (tail.right_bound(mid) <= Point(delta)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    ConvergenceVerdict v;
    v.status = VerdictStatus::CertifiedConverges;
    v.index = hi;
    v.exceptional_set = {Interval::closed(0, delta)};
    v.certificate = "E = [0, " + to_string(delta) + "], m(E) = " + to_string(delta) + " < " + to_string(eps) +
                    "; f_n = 0 on (" + to_string(delta) + ", 1] for n >= " + hi.get_str() + " (" + tail.certificate + ")";
    return v;
  }
  // Last complete dyadic block [2^k, 2^{k+1}) inside the horizon.
  int k = 0;
  while ((2L << (k + 1)) - 1 <= horizon) ++k;
  const int first = 1 << k, last = (2 << k) - 1;
  if (last > horizon) {
    ConvergenceVerdict v;
    v.index = horizon;
    v.certificate = "horizon too short for a dyadic block";
    return v;
  }
  Rational floor_value;
  bool have_floor = false;
  std::vector<PwExpFun> block;
  for (int n = first; n <= last; ++n) {
    block.push_back(f.at(n));
    Rational s = ess_sup(block.back(), bits).enclosure.lower_rational();
    floor_value = have_floor ? std::min(floor_value, s) : s;
    have_floor = true;
  }
  // Half the block's smallest sup, rounded down to a short dyadic.
  Rational a = floor_value * (1 << 15);
  a = Rational(Integer(a.get_num() / a.get_den()), Integer(1 << 16));
  a.canonicalize();
  if (a > 0) {
    std::vector<Interval> inner;
    for (const auto& g : block) {
      auto s = superlevel_set(g, a, bits);
      inner.insert(inner.end(), s.inner.begin(), s.inner.end());
    }
    Certified u = union_measure(inner);
    if (u.enclosure.lower_rational() >= eps) {
      ConvergenceVerdict v;
      v.status = VerdictStatus::CounterexampleAt;
      v.index = first;
      v.certificate = "for n in [" + std::to_string(first) + ", " + std::to_string(last) +
                      "] the sets {|f_n| > " + to_string(a) + "} cover measure " + u.to_string() + " >= " +
                      to_string(eps) + ", so every E with m(E) < " + to_string(eps) +
                      " leaves ess sup |f_n| >= " + to_string(a) + " off E for some n in the block";
      return v;
    }
  }
  ConvergenceVerdict v;
  v.index = horizon;
  v.certificate = "block [" + std::to_string(first) + ", " + std::to_string(last) +
                  "] exposes no exceptional-set obstruction at eps = " + to_string(eps);
  return v;
}

ConvergenceVerdict check_l1(const FunSeq& f, int horizon, int bits) {
  const auto& m = f.metadata();
  if (m.l1_norm) {
    const auto& s = *m.l1_norm;
    const std::string rel(to_string(s.relation));
    if (s.certifies_zero_limit()) {
      return certified(VerdictStatus::CertifiedConverges, "||f_n||_1 " + rel + " " + s.certificate + " -> 0");
    }
    if (s.certifies_blowup()) {
      return certified(VerdictStatus::CertifiedDiverges, "||f_n||_1 " + rel + " " + s.certificate + " -> +inf");
    }
    if (s.certifies_positive_floor()) {
      return certified(VerdictStatus::CertifiedDiverges,
                       "||f_n||_1 " + rel + " " + s.certificate + " >= " + s.bound.to_string());
    }
  }
  std::vector<Enclosure> values;
  for (int n = 1; n <= horizon; ++n) values.push_back(l1_norm(f.at(n), bits).enclosure);
  return from_evidence(horizon_evidence(values), horizon, "||f_n||_1");
}

FunSeq truncate(const FunSeq& f, int n_keep) {
  if (n_keep < 0) throw Error(ErrorCode::InvalidArgument, "truncation length must be nonnegative");
  const Domain d = f.domain();
  const Index keep(n_keep);
  SeqMetadata meta;
  const SeqMetadata& src = f.metadata();
  auto cut = [&](const std::optional<ClosedForm>& form) -> std::optional<ClosedForm> {
    if (!form) return std::nullopt;
    ClosedForm c = *form;
    auto inner = form->formula;
    c.formula = [inner, keep](const Index& n) { return n <= keep ? inner(n) : MonomialSum(); };
    c.trend = Trend::ToZero;
    c.bound = MonomialSum();
    c.certificate = form->certificate + " for n <= " + keep.get_str() + ", 0 afterwards";
    return c;
  };
  meta.support_measure = cut(src.support_measure);
  meta.sup_norm = cut(src.sup_norm);
  meta.l1_norm = cut(src.l1_norm);
  meta.profile = src.profile;
  StructuredSetSeq sets;
  sets.domain = d;
  if (src.support) {
    auto inner = src.support->sets;
    sets.sets = [inner, keep](const Index& n) { return n <= keep ? inner(n) : std::vector<Interval>{}; };
  } else {
    sets.sets = [d, keep, f](const Index& n) {
      return n <= keep ? f.at(n).support() : std::vector<Interval>{};
    };
  }
  sets.tail.kind = TailDescriptor::Kind::EventuallyAvoids;
  sets.tail.region = {domain_of(d)};
  sets.tail.certificate = "E_n is empty for n > " + keep.get_str();
  meta.support = sets;
  return FunSeq(f.name() + "|" + keep.get_str(), d,
                [f, keep, d](const Index& n) { return n <= keep ? f.at(n) : PwExpFun(d); }, meta);
}

// ------------------------------------------------------------- dichotomy

namespace {

Enclosure magnitude(const MonomialSum& v) { return abs(eval_enclosure(v, 64)); }

}  // namespace

AlphaBehavior alpha_behavior(const AlphaSeq& alpha, int horizon) {
  if (alpha.declared) return *alpha.declared;
  if (horizon < 2) throw Error(ErrorCode::HypothesisViolated, "horizon too short to classify alpha");
  Rational head_max = 0, tail_max = 0, tail_min = -1;
  for (int n = 1; n <= horizon; ++n) {
    MonomialSum v = alpha.value(Index(n));
    if (v.is_zero()) throw Error(ErrorCode::HypothesisViolated, "alpha_" + std::to_string(n) + " = 0");
    Rational lo, hi;
    if (v.is_rational()) {
      lo = hi = abs(v.rational_value());
    } else {
      Enclosure e = magnitude(v);
      lo = e.lower_rational();
      hi = e.upper_rational();
    }
    if (2 * n <= horizon) {
      head_max = std::max(head_max, hi);
    } else {
      tail_max = std::max(tail_max, hi);
      tail_min = tail_min < 0 ? lo : std::min(tail_min, lo);
    }
  }
  if (4 * tail_max <= head_max) return AlphaBehavior::ToZero;
  if (2 * tail_min >= head_max) return AlphaBehavior::BoundedBelow;
  throw Error(ErrorCode::HypothesisViolated, "alpha " + alpha.label + " neither decays nor stays bounded below");
}

ConvergenceVerdict check_indicator_dichotomy(const AlphaSeq& alpha, const StructuredSetSeq& e, Mode mode,
                                             int horizon) {
  for (int n = 1; n <= horizon; ++n) {
    auto sets = e.at(Index(n));
    if (std::all_of(sets.begin(), sets.end(), [](const Interval& i) { return i.is_empty(); })) {
      throw Error(ErrorCode::HypothesisViolated, "E_" + std::to_string(n) + " is empty");
    }
  }
  const AlphaBehavior behavior = alpha_behavior(alpha, horizon);
  if (behavior == AlphaBehavior::ToZero) {
    return certified(VerdictStatus::CertifiedConverges, "|f_n| <= |alpha_n| -> 0");
  }
  switch (mode) {
    case Mode::Uniform:
      return certified(VerdictStatus::CertifiedDiverges, "sup |f_n| = |alpha_n| stays bounded below on nonempty E_n");
    case Mode::Pointwise: {
      auto empty = limsup_is_empty(e);
      if (!empty) throw Error(ErrorCode::HypothesisViolated, "descriptor does not decide whether limsup E_n is empty");
      if (*empty) return certified(VerdictStatus::CertifiedConverges, "limsup E_n is empty (" + e.tail.certificate + ")");
      return certified(VerdictStatus::CertifiedDiverges,
                       "limsup E_n is nonempty and alpha_n stays bounded below (" + e.tail.certificate + ")");
    }
    case Mode::AlmostEverywhere: {
      auto null = limsup_is_null(e);
      if (!null) throw Error(ErrorCode::HypothesisViolated, "descriptor does not decide m(limsup E_n)");
      if (*null) return certified(VerdictStatus::CertifiedConverges, "m(limsup E_n) = 0 (" + e.tail.certificate + ")");
      return certified(VerdictStatus::CertifiedDiverges,
                       "m(limsup E_n) > 0 and alpha_n stays bounded below (" + e.tail.certificate + ")");
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode");
}

bool horizon_dichotomy(const AlphaSeq& alpha, const StructuredSetSeq& e, Mode mode, int horizon,
                       const std::vector<Rational>& grid, const HorizonThresholds& thresholds) {
  const MonomialSum tau(thresholds.tau);
  auto above_tau = [&](const MonomialSum& v) {
    if (v.is_rational()) return abs(v.rational_value()) > thresholds.tau;
    Enclosure m = magnitude(v);
    if (m.lower_rational() > thresholds.tau) return true;
    if (m.upper_rational() <= thresholds.tau) return false;
    auto s = sign(v);
    return s && compare(*s < 0 ? -v : v, tau) == Ordering::Greater;
  };
  std::vector<Interval> active;
  for (int n = horizon / 2 + 1; n <= horizon; ++n) {
    MonomialSum v = alpha.value(Index(n));
    if (!above_tau(v)) continue;
    if (mode == Mode::Uniform) return false;
    auto sets = e.at(Index(n));
    active.insert(active.end(), sets.begin(), sets.end());
  }
  if (mode == Mode::Uniform) return true;
  if (mode == Mode::AlmostEverywhere) {
    Certified u = union_measure(active);
    return u.enclosure.upper_rational() <= thresholds.delta;
  }
  const IntervalIndex index(std::move(active));
  return std::none_of(grid.begin(), grid.end(), [&](const Rational& x) { return index.covers(x); });
}

std::vector<Rational> uniform_grid(int count) {
  std::vector<Rational> xs;
  if (count == 1) return {Rational(0)};
  for (int k = 0; k < count; ++k) xs.emplace_back(k, count - 1);
  for (auto& x : xs) x.canonicalize();
  return xs;
}

}  // namespace convlab
