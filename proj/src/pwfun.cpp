#include "convlab/pwfun.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

std::string_view to_string(Domain d) { return d == Domain::UnitInterval ? "unit-interval" : "half-line"; }

// ---------------------------------------------------------------- Interval

Interval Interval::closed(const Point& lo, const Point& hi) {
  return Interval{lo, hi, true, !hi.is_infinite()};
}

bool Interval::contains(const Point& x) const {
  if (x.is_infinite()) return false;
  int cl = compare(lo, x);
  if (cl > 0 || (cl == 0 && !lo_closed)) return false;
  int ch = compare(x, hi);
  return ch < 0 || (ch == 0 && hi_closed);
}

bool Interval::is_empty() const {
  int c = compare(lo, hi);
  return c > 0 || (c == 0 && !(lo_closed && hi_closed));
}

MonomialSum Interval::length() const {
  if (hi.is_infinite()) throw Error(ErrorCode::NonIntegrable, "unbounded interval " + to_string());
  return hi.to_sum() - lo.to_sum();
}

Enclosure Interval::length_enclosure(int bits) const { return hi.enclosure(bits) - lo.enclosure(bits); }

std::string Interval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + lo.to_string() + ", " + hi.to_string() + (hi_closed ? "]" : ")");
}

Interval intersect(const Interval& a, const Interval& b) {
  Interval r;
  int cl = compare(a.lo, b.lo);
  if (cl == 0) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  } else {
    const Interval& src = cl > 0 ? a : b;
    r.lo = src.lo;
    r.lo_closed = src.lo_closed;
  }
  int ch = compare(a.hi, b.hi);
  if (ch == 0) {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed && b.hi_closed;
  } else {
    const Interval& src = ch < 0 ? a : b;
    r.hi = src.hi;
    r.hi_closed = src.hi_closed;
  }
  return r;
}

std::vector<Interval> merge_intervals(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& i) { return i.is_empty() || i.is_point(); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (auto& p : parts) {
    if (!out.empty() && p.lo <= out.back().hi) {
      int c = compare(p.hi, out.back().hi);
      if (c > 0) {
        out.back().hi = p.hi;
        out.back().hi_closed = p.hi_closed;
      } else if (c == 0) {
        out.back().hi_closed = out.back().hi_closed || p.hi_closed;
      }
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

// ------------------------------------------------------------------ ExpSum

ExpSum::ExpSum(const MonomialSum& constant) {
  if (!constant.is_zero()) terms_.push_back({constant, LinearForm()});
}

ExpSum ExpSum::term(const MonomialSum& coefficient, const LinearForm& rate) {
  ExpSum s;
  if (!coefficient.is_zero()) s.terms_.push_back({coefficient, rate});
  return s;
}

ExpSum ExpSum::from_terms(std::vector<ExpTerm> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const ExpTerm& a, const ExpTerm& b) { return a.rate < b.rate; });
  ExpSum s;
  for (auto& t : terms) {
    if (!s.terms_.empty() && s.terms_.back().rate == t.rate) {
      s.terms_.back().coefficient += t.coefficient;
    } else {
      s.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(s.terms_, [](const ExpTerm& t) { return t.coefficient.is_zero(); });
  return s;
}

bool ExpSum::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().rate.is_zero());
}

MonomialSum ExpSum::constant_value() const {
  if (!is_constant()) throw Error(ErrorCode::InvalidArgument, "expression is not constant: " + to_string());
  return terms_.empty() ? MonomialSum() : terms_.front().coefficient;
}

ExpSum& ExpSum::operator+=(const ExpSum& other) {
  std::vector<ExpTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return *this = from_terms(std::move(all));
}

ExpSum& ExpSum::operator-=(const ExpSum& other) { return *this += other.scaled(-1); }

ExpSum& ExpSum::operator*=(const ExpSum& other) {
  std::vector<ExpTerm> all;
  all.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) all.push_back({a.coefficient * b.coefficient, a.rate + b.rate});
  }
  return *this = from_terms(std::move(all));
}

ExpSum ExpSum::scaled(const MonomialSum& s) const {
  if (s.is_zero()) return {};
  std::vector<ExpTerm> all = terms_;
  for (auto& t : all) t.coefficient *= s;
  return from_terms(std::move(all));
}

ExpSum ExpSum::pow(unsigned m) const {
  ExpSum result(MonomialSum(1));
  ExpSum base = *this;
  while (m > 0) {
    if (m & 1U) result *= base;
    m >>= 1U;
    if (m > 0) base *= base;
  }
  return result;
}

MonomialSum ExpSum::at(const Rational& x) const {
  MonomialSum total;
  for (const auto& t : terms_) total += t.coefficient * MonomialSum(Monomial::exp(t.rate * x));
  return total;
}

Enclosure ExpSum::at(const Enclosure& x, int bits) const {
  Enclosure total = Enclosure::point(Rational(0), bits);
  for (const auto& t : terms_) {
    Enclosure c = eval_enclosure(t.coefficient, bits);
    total = total + (t.rate.is_zero() ? c : c * exp(t.rate.value(bits) * x));
  }
  return total;
}

std::string ExpSum::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += " + ";
    const auto& t = terms_[i];
    out += "(" + t.coefficient.to_string() + ")";
    if (!t.rate.is_zero()) out += "*e^((" + t.rate.to_string() + ")*x)";
  }
  return out;
}

// ---------------------------------------------------------------- PwExpFun

PwExpFun::PwExpFun(Domain domain, std::vector<ExpPiece> pieces) : domain_(domain) {
  const Interval dom = domain_interval();
  for (auto& p : pieces) {
    if (p.interval.hi.is_infinite()) p.interval.hi_closed = false;
    if (p.interval.is_empty() || p.expr.is_zero()) continue;
    if (p.interval.lo < dom.lo || dom.hi < p.interval.hi) {
      throw Error(ErrorCode::OutOfDomain, "piece " + p.interval.to_string() + " outside " +
                                              std::string(convlab::to_string(domain)));
    }
    pieces_.push_back(std::move(p));
  }
  std::stable_sort(pieces_.begin(), pieces_.end(), [](const ExpPiece& a, const ExpPiece& b) {
    int c = compare(a.interval.lo, b.interval.lo);
    return c != 0 ? c < 0 : a.interval.hi < b.interval.hi;
  });
  const Interval* prev = nullptr;
  for (const auto& p : pieces_) {
    if (p.interval.is_point()) continue;
    if (prev && p.interval.lo < prev->hi) {
      throw Error(ErrorCode::InvalidArgument,
                  "pieces " + prev->to_string() + " and " + p.interval.to_string() + " overlap");
    }
    prev = &p.interval;
  }
}

PwExpFun PwExpFun::indicator(Domain domain, const Interval& support, const MonomialSum& value) {
  return PwExpFun(domain, {ExpPiece{support, ExpSum(value)}});
}

PwExpFun PwExpFun::single(Domain domain, const Interval& support, const ExpSum& expr) {
  return PwExpFun(domain, {ExpPiece{support, expr}});
}

bool PwExpFun::is_indicator() const {
  const ExpSum one(MonomialSum(1));
  return std::all_of(pieces_.begin(), pieces_.end(), [&](const ExpPiece& p) {
    return p.interval.has_positive_length() && p.expr == one;
  });
}

std::vector<Interval> PwExpFun::support() const {
  std::vector<Interval> out;
  for (const auto& p : pieces_) {
    if (!p.interval.is_point()) out.push_back(p.interval);
  }
  return out;
}

Interval PwExpFun::domain_interval() const {
  return domain_ == Domain::UnitInterval ? Interval::closed(0, 1) : Interval::closed(0, Point::infinity());
}

std::string PwExpFun::to_string() const {
  if (pieces_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i > 0) os << " + ";
    os << "[" << pieces_[i].expr.to_string() << "] on " << pieces_[i].interval.to_string();
  }
  return os.str();
}

// -------------------------------------------------------------- evaluation

namespace {

void require_in_domain(const PwExpFun& f, const Point& x) {
  if (!f.domain_interval().contains(x)) {
    throw Error(ErrorCode::OutOfDomain, x.to_string() + " outside " + std::string(to_string(f.domain())));
  }
}

ExpSum value_at(const PwExpFun& f, const Point& x) {
  ExpSum total;
  for (const auto& p : f.pieces()) {
    if (p.interval.contains(x)) total += p.expr;
  }
  return total;
}

ExpSum value_on_cell(const PwExpFun& f, const Point& a, const Point& b) {
  ExpSum total;
  for (const auto& p : f.pieces()) {
    if (p.interval.is_point()) continue;
    if (p.interval.lo <= a && b <= p.interval.hi) total += p.expr;
  }
  return total;
}

using Combiner = std::function<ExpSum(const std::vector<ExpSum>&)>;

enum class Join { Open, CloseLeft, CloseRight, CloseBoth, Merge, PointPiece };

// Common refinement of several functions: the combined value is computed on
// every open cell between consecutive breakpoints and at every breakpoint,
// then each breakpoint is attached to a neighbouring cell when the values
// agree, or kept as a point piece when they do not.
PwExpFun overlay(Domain domain, const std::vector<const PwExpFun*>& fs, const Combiner& combine) {
  std::vector<Point> breaks;
  for (const auto* f : fs) {
    for (const auto& p : f->pieces()) {
      breaks.push_back(p.interval.lo);
      breaks.push_back(p.interval.hi);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.empty()) return PwExpFun(domain);

  const std::size_t nb = breaks.size();
  std::vector<ExpSum> cells(nb > 0 ? nb - 1 : 0);
  std::vector<ExpSum> args(fs.size());
  for (std::size_t j = 0; j + 1 < nb; ++j) {
    for (std::size_t i = 0; i < fs.size(); ++i) args[i] = value_on_cell(*fs[i], breaks[j], breaks[j + 1]);
    cells[j] = combine(args);
  }
  std::vector<ExpSum> points(nb);
  std::vector<Join> joins(nb, Join::Open);
  for (std::size_t j = 0; j < nb; ++j) {
    if (breaks[j].is_infinite()) continue;
    for (std::size_t i = 0; i < fs.size(); ++i) args[i] = value_at(*fs[i], breaks[j]);
    points[j] = combine(args);
    const ExpSum& v = points[j];
    if (v.is_zero()) continue;
    const ExpSum* left = j > 0 && !cells[j - 1].is_zero() ? &cells[j - 1] : nullptr;
    const ExpSum* right = j + 1 < nb && !cells[j].is_zero() ? &cells[j] : nullptr;
    if (left && right && *left == *right && v == *left) {
      joins[j] = Join::Merge;
    } else if (left && v == *left) {
      joins[j] = Join::CloseLeft;
    } else if (right && v == *right) {
      joins[j] = Join::CloseRight;
    } else if (left && right && v == *left + *right) {
      joins[j] = Join::CloseBoth;
    } else {
      joins[j] = Join::PointPiece;
    }
  }

  std::vector<ExpPiece> out;
  std::optional<ExpPiece> current;
  for (std::size_t j = 0; j < nb; ++j) {
    const Join join = joins[j];
    if (current && join != Join::Merge) {
      current->interval.hi_closed = join == Join::CloseLeft || join == Join::CloseBoth;
      out.push_back(std::move(*current));
      current.reset();
    }
    if (join == Join::PointPiece) out.push_back({Interval::closed(breaks[j], breaks[j]), points[j]});
    if (j + 1 < nb && !cells[j].is_zero()) {
      if (current) {
        current->interval.hi = breaks[j + 1];
      } else {
        bool closed = join == Join::CloseRight || join == Join::CloseBoth;
        current = ExpPiece{Interval{breaks[j], breaks[j + 1], closed, false}, cells[j]};
      }
    }
  }
  if (current) out.push_back(std::move(*current));
  return PwExpFun(domain, std::move(out));
}

void require_same_domain(const PwExpFun& f, const PwExpFun& g) {
  if (f.domain() != g.domain()) {
    throw Error(ErrorCode::DomainMismatch, std::string(to_string(f.domain())) + " vs " +
                                               std::string(to_string(g.domain())));
  }
}

}  // namespace

MonomialSum evaluate_exact(const PwExpFun& f, const Rational& x) {
  require_in_domain(f, x);
  return value_at(f, x).at(x);
}

Enclosure evaluate(const PwExpFun& f, const Point& x, int bits) {
  require_in_domain(f, x);
  if (x.is_rational()) return eval_enclosure(evaluate_exact(f, x.rational()), bits);
  return value_at(f, x).at(x.enclosure(bits + 16), bits + 16);
}

PwExpFun linear_combine(const MonomialSum& a, const PwExpFun& f, const MonomialSum& b, const PwExpFun& g) {
  require_same_domain(f, g);
  return overlay(f.domain(), {&f, &g}, [&](const std::vector<ExpSum>& v) {
    return v[0].scaled(a) + v[1].scaled(b);
  });
}

PwExpFun multiply(const PwExpFun& f, const PwExpFun& g) {
  require_same_domain(f, g);
  return overlay(f.domain(), {&f, &g}, [](const std::vector<ExpSum>& v) { return v[0] * v[1]; });
}

PwExpFun power(const PwExpFun& f, unsigned m) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "power exponent must be at least 1");
  return overlay(f.domain(), {&f}, [m](const std::vector<ExpSum>& v) { return v[0].pow(m); });
}

PwExpFun scale(const PwExpFun& f, const MonomialSum& s) {
  std::vector<ExpPiece> pieces;
  if (!s.is_zero()) {
    for (const auto& p : f.pieces()) pieces.push_back({p.interval, p.expr.scaled(s)});
  }
  return PwExpFun(f.domain(), std::move(pieces));
}

bool equal_ae(const PwExpFun& f, const PwExpFun& g) {
  PwExpFun d = linear_combine(1, f, -1, g);
  return std::all_of(d.pieces().begin(), d.pieces().end(),
                     [](const ExpPiece& p) { return p.interval.is_point(); });
}

std::string Certified::to_string() const {
  if (exact) return exact->to_string() + " " + enclosure.to_string();
  return enclosure.to_string();
}

Certified support_measure(const PwExpFun& f) {
  MonomialSum total;
  bool finite = true;
  for (const auto& p : f.pieces()) {
    if (p.interval.is_point()) continue;
    if (p.interval.hi.is_infinite()) {
      finite = false;
      break;
    }
    total += p.interval.length();
  }
  if (!finite) return {std::nullopt, Enclosure::nonnegative_unbounded(64)};
  return {total, eval_enclosure(total, 64)};
}

Certified union_measure(const std::vector<Interval>& parts) {
  MonomialSum total;
  for (const auto& p : merge_intervals(parts)) {
    if (p.hi.is_infinite()) return {std::nullopt, Enclosure::nonnegative_unbounded(64)};
    total += p.length();
  }
  return {total, eval_enclosure(total, 64)};
}

}  // namespace convlab
