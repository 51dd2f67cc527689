#pragma once

// Sequences n -> PwExpFun, the product metric on sequences, and convergence
// checkers. Convergence always means convergence to the zero function.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "convlab/pwfun.hpp"

namespace convlab {

using Index = Integer;

inline constexpr int kAuditHorizon = 32;
inline constexpr int kAuditBits = 128;

// ---------------------------------------------------------------- metadata

/// How the closed form relates to the true quantity q(n).
enum class Relation { Equals, AtMost, AtLeast };

/// Asymptotics of the closed form itself.
enum class Trend {
  ToZero,            ///< formula(n) -> 0
  ToInfinity,        ///< formula(n) -> +inf
  BoundedBelow,      ///< formula(n) >= bound > 0 for every n
  RecurrentlyAbove,  ///< formula(n) >= bound > 0 along live_index(m), m >= 1
};

std::string_view to_string(Relation r);
std::string_view to_string(Trend t);

struct ClosedForm {
  std::function<MonomialSum(const Index&)> formula;
  Relation relation = Relation::Equals;
  Trend trend = Trend::ToZero;
  MonomialSum bound;
  std::string certificate;

  /// True quantity tends to 0.
  bool certifies_zero_limit() const;
  /// True quantity stays away from 0 (always, or along a subsequence).
  bool certifies_positive_floor() const;
  /// True quantity tends to +inf.
  bool certifies_blowup() const;
};

struct TailDescriptor {
  enum class Kind { ShrinksToNull, SweepsAll, EventuallyAvoids, Custom };
  Kind kind = Kind::Custom;
  /// ShrinksToNull: E_m is inside [0, right_bound(n)] for every m >= n;
  /// non-increasing with limit 0.
  std::function<Point(const Index&)> right_bound;
  /// ShrinksToNull: whether 0 lies in infinitely many E_n.
  bool origin_in_limsup = false;
  /// SweepsAll: an index n >= m with x in E_n.
  std::function<Index(const Rational& x, const Index& m)> cover_index;
  /// EventuallyAvoids: points here lie in finitely many E_n; limsup is the
  /// complement. Custom: limsup restricted to `covered` equals `limsup`.
  std::vector<Interval> region;
  std::vector<Interval> limsup;
  std::vector<Interval> covered;
  std::string certificate;
};

std::string_view to_string(TailDescriptor::Kind k);

struct StructuredSetSeq {
  Domain domain = Domain::UnitInterval;
  std::function<std::vector<Interval>(const Index&)> sets;
  TailDescriptor tail;

  std::vector<Interval> at(const Index& n) const { return sets(n); }
};

enum class Membership { InLimsup, NotInLimsup, Unknown };
std::string_view to_string(Membership m);

Membership limsup_membership(const StructuredSetSeq& e, const Rational& x);
/// Whether limsup E_n is empty / null, when the descriptor decides it.
std::optional<bool> limsup_is_empty(const StructuredSetSeq& e);
std::optional<bool> limsup_is_null(const StructuredSetSeq& e);

struct SeqMetadata {
  std::optional<ClosedForm> support_measure;
  std::optional<ClosedForm> sup_norm;
  std::optional<ClosedForm> l1_norm;
  /// f_n vanishes off E_n.
  std::optional<StructuredSetSeq> support;
  /// When set, f_n(x) = profile(x) on E_n.
  std::function<MonomialSum(const Rational&)> profile;
  /// m-th index (m >= 1) at which f_n is not the zero function.
  std::function<Index(const Index&)> live_index;
};

// ----------------------------------------------------------------- FunSeq

class FunSeq {
 public:
  using Generator = std::function<PwExpFun(const Index&)>;

  /// Audits metadata against direct computation for n <= audit_horizon;
  /// throws AuditFailure on disagreement.
  FunSeq(std::string name, Domain domain, Generator generator, SeqMetadata metadata = {},
         int audit_horizon = kAuditHorizon);

  /// Throws IndexOutOfRange for n < 1.
  PwExpFun at(const Index& n) const;
  const std::string& name() const { return name_; }
  Domain domain() const { return domain_; }
  const SeqMetadata& metadata() const { return metadata_; }

  static FunSeq zero(Domain domain);

 private:
  void audit(int horizon) const;
  std::string name_;
  Domain domain_;
  Generator generator_;
  SeqMetadata metadata_;
};

// ----------------------------------------------------------------- verdicts

enum class VerdictStatus { CertifiedConverges, CertifiedDiverges, NoCounterexampleUpTo, CounterexampleAt };
std::string_view to_string(VerdictStatus s);

struct ConvergenceVerdict {
  VerdictStatus status = VerdictStatus::NoCounterexampleUpTo;
  /// Horizon N, the witness index, or the index from which an exceptional
  /// set works.
  Index index = 0;
  std::string certificate;
  /// Almost-uniform exceptional set, when one was exhibited.
  std::vector<Interval> exceptional_set;

  bool is_certified() const {
    return status == VerdictStatus::CertifiedConverges || status == VerdictStatus::CertifiedDiverges;
  }
  /// CertifiedConverges or NoCounterexampleUpTo.
  bool consistent_with_convergence() const {
    return status == VerdictStatus::CertifiedConverges || status == VerdictStatus::NoCounterexampleUpTo;
  }
  std::string to_string() const;
};

struct PointVerdict {
  Rational x;
  ConvergenceVerdict verdict;
};

struct PointwiseReport {
  std::vector<PointVerdict> points;
  ConvergenceVerdict overall;
};

// ----------------------------------------------------------------- checkers

struct DMetric {
  Enclosure enclosure;
  /// sum_{n<=N} 2^{-n} t_n/(1+t_n) when every term is rational.
  std::optional<Rational> partial_sum;
  Rational tail_bound;
};

/// sum_n 2^{-n} t_n/(1+t_n), t_n = rho(f_n, g_n) on [0,1] and ||f_n - g_n||_1
/// on the half-line; the upper bound includes the tail 2^{-N}.
DMetric d_metric(const FunSeq& f, const FunSeq& g, int n_terms, int bits);

ConvergenceVerdict check_in_measure(const FunSeq& f, const std::vector<Rational>& eps_grid, int horizon, int bits);
PointwiseReport check_pointwise(const FunSeq& f, const std::vector<Rational>& xs, int horizon, int bits);
ConvergenceVerdict check_uniform(const FunSeq& f, int horizon, int bits);
ConvergenceVerdict check_almost_uniform(const FunSeq& f, const Rational& eps, int horizon, int bits);
ConvergenceVerdict check_l1(const FunSeq& f, int horizon, int bits);

/// Equal to f for n <= n_keep and zero afterwards.
FunSeq truncate(const FunSeq& f, int n_keep);

// ------------------------------------------------- indicator dichotomy

enum class Mode { Pointwise, AlmostEverywhere, Uniform };
std::string_view to_string(Mode m);

enum class AlphaBehavior { ToZero, BoundedBelow };

struct AlphaSeq {
  std::function<MonomialSum(const Index&)> value;
  std::optional<AlphaBehavior> declared;
  std::string label;
};

/// Behaviour of alpha: the declared one, or detected on the horizon (tail
/// maximum below a quarter of the head maximum, or tail minimum above half
/// of it). Throws HypothesisViolated when neither holds.
AlphaBehavior alpha_behavior(const AlphaSeq& alpha, int horizon);

/// Verdict for f_n = alpha_n * chi_{E_n} from the tail descriptor and the
/// behaviour of alpha.
ConvergenceVerdict check_indicator_dichotomy(const AlphaSeq& alpha, const StructuredSetSeq& e, Mode mode,
                                             int horizon);

/// Direct finite-horizon evidence for the same question: over the tail
/// (N/2, N] with threshold tau and null tolerance delta.
struct HorizonThresholds {
  Rational tau{1, 64};
  Rational delta{1, 256};
};
bool horizon_dichotomy(const AlphaSeq& alpha, const StructuredSetSeq& e, Mode mode, int horizon,
                       const std::vector<Rational>& grid, const HorizonThresholds& thresholds = {});

/// k/(count-1), k = 0..count-1.
std::vector<Rational> uniform_grid(int count);

}  // namespace convlab
