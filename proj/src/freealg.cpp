#include "convlab/freealg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

// ------------------------------------------------------------ polynomials

MultiIndexPoly::MultiIndexPoly(std::size_t variables, std::map<MultiIndex, Rational> terms)
    : variables_(variables) {
  if (variables == 0) throw Error(ErrorCode::InvalidArgument, "polynomial needs at least one variable");
  for (auto& [j, a] : terms) {
    if (j.size() != variables) throw Error(ErrorCode::InvalidArgument, "multi-index of wrong length");
    if (a == 0) continue;
    if (std::all_of(j.begin(), j.end(), [](unsigned e) { return e == 0; })) {
      throw Error(ErrorCode::InvalidArgument, "constant term not allowed");
    }
    terms_.emplace(j, a);
  }
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial has no nonzero term");
}

unsigned MultiIndexPoly::degree() const {
  unsigned d = 0;
  for (const auto& [j, a] : terms_) {
    unsigned s = 0;
    for (unsigned e : j) s += e;
    d = std::max(d, s);
  }
  return d;
}

std::string MultiIndexPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [j, a] : terms_) {
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << "-";
    first = false;
    os << convlab::to_string(Rational(abs(a)));
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i] == 0) continue;
      os << "*u" << i + 1;
      if (j[i] > 1) os << "^" << j[i];
    }
  }
  return os.str();
}

namespace {

LinearForm dot(const std::vector<std::size_t>& c, const MultiIndex& j) {
  LinearForm f;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (j[i] != 0) f += LinearForm::symbol(c[i], Rational(j[i]));
  }
  return f;
}

void check_symbols(const std::vector<std::size_t>& c, const MultiIndexPoly& p) {
  if (c.size() != p.variables()) throw Error(ErrorCode::InvalidArgument, "need one symbol per variable");
  std::set<std::size_t> seen(c.begin(), c.end());
  if (seen.size() != c.size()) throw Error(ErrorCode::InvalidArgument, "symbols must be distinct");
  for (std::size_t s : c) {
    if (s >= SymbolBasis::standard().size()) throw Error(ErrorCode::UnknownSymbol, "symbol " + std::to_string(s));
  }
}

void check_family(FamilyId family) {
  if (family != FamilyId::MeasureGen && family != FamilyId::NupGen && family != FamilyId::L1Gen) {
    throw Error(ErrorCode::UnsupportedFamily, std::string(family_name(family)) + " is not a generator family");
  }
}

MonomialSum magnitude(const MonomialSum& v) {
  auto s = sign(v);
  if (!s) throw Error(ErrorCode::BudgetExhausted, "sign of " + v.to_string() + " undecided");
  return *s < 0 ? -v : v;
}

Rational rational_inv(const Index& n) { return Rational(Integer(1), n); }

}  // namespace

ExponentSumFn phi(const std::vector<std::size_t>& c, const MultiIndexPoly& p) {
  check_symbols(c, p);
  ExponentSumFn out;
  for (const auto& [j, a] : p.terms()) out.terms.push_back({MonomialSum(a), -dot(c, j)});
  std::sort(out.terms.begin(), out.terms.end(), [](const ExpTerm& x, const ExpTerm& y) { return x.rate < y.rate; });
  out.max_real_zeros = out.terms.size() - 1;
  return out;
}

PwExpFun CollapsedForm::function() const {
  if (family == FamilyId::L1Gen) {
    return scalar.is_zero() ? PwExpFun(Domain::HalfLine) : scale(indicator, scalar);
  }
  const Interval support = indicator.pieces().front().interval;
  if (family == FamilyId::MeasureGen) return PwExpFun::single(Domain::UnitInterval, support, phi.as_expsum());
  // phi(w) with w = n(n+1)x - n: each term alpha e^{-r w} becomes
  // (alpha e^{r n}) e^{-r n(n+1) x}.
  const Rational nq(n);
  ExpSum expr;
  for (const auto& t : phi.terms) {
    const LinearForm r = -t.rate;
    expr += ExpSum::term(t.coefficient * MonomialSum(Monomial::exp(r * nq)), -(r * Rational(nq * (nq + 1))));
  }
  return PwExpFun::single(Domain::UnitInterval, support, expr);
}

CollapsedForm apply_polynomial(const MultiIndexPoly& p, FamilyId family, const std::vector<std::size_t>& c,
                               const Index& n) {
  check_family(family);
  check_symbols(c, p);
  if (n < 1) throw Error(ErrorCode::IndexOutOfRange, "index below 1");
  CollapsedForm out;
  out.family = family;
  out.n = n;
  out.phi = phi(c, p);
  switch (family) {
    case FamilyId::MeasureGen:
      out.indicator = typewriter(n);
      break;
    case FamilyId::NupGen:
      out.indicator = shrink_interval(n);
      break;
    default: {
      out.indicator = PwExpFun::indicator(Domain::HalfLine, Interval::closed(0, Point(Rational(1), n.get_si())));
      for (const auto& [j, a] : p.terms()) {
        out.scalar += MonomialSum(Monomial::power(Rational(n), -dot(c, j))) * MonomialSum(a);
      }
      break;
    }
  }
  return out;
}

PwExpFun expand_polynomial(const MultiIndexPoly& p, FamilyId family, const std::vector<std::size_t>& c,
                           const Index& n) {
  check_family(family);
  check_symbols(c, p);
  std::vector<PwExpFun> gens;
  for (std::size_t s : c) {
    FamilySpec spec;
    spec.id = family;
    spec.c = s;
    gens.push_back(family_member(spec, n));
  }
  PwExpFun acc(gens.front().domain());
  for (const auto& [j, a] : p.terms()) {
    std::optional<PwExpFun> prod;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i] == 0) continue;
      PwExpFun factor = power(gens[i], j[i]);
      prod = prod ? multiply(*prod, factor) : factor;
    }
    acc = linear_combine(1, acc, MonomialSum(a), *prod);
  }
  return acc;
}

NonzeroCertificate certify_collapsed_nonzero(const CollapsedForm& form) {
  if (form.family == FamilyId::L1Gen) {
    if (form.scalar.is_zero()) {
      NonzeroCertificate z;
      z.status = NonzeroStatus::CertifiedZero;
      z.reason = "coefficient sum cancels at n = 1";
      return z;
    }
    return certify_nonzero(form.scalar);
  }
  // Interior point with w = 1/2 (nup-gen) or the window midpoint.
  const Interval s = form.indicator.pieces().front().interval;
  const Rational mid = (s.lo.rational() + s.hi.rational()) / 2;
  return certify_nonzero(evaluate_exact(form.function(), mid));
}

// ---------------------------------------------------------- algebra elements

FunSeq algebra_element(const MultiIndexPoly& p, FamilyId family, const std::vector<std::size_t>& c) {
  check_family(family);
  check_symbols(c, p);
  auto gen = [p, family, c](const Index& n) { return apply_polynomial(p, family, c, n).function(); };
  const ExponentSumFn f = phi(c, p);
  const ExpSum expr = f.as_expsum();
  Rational abs_sum = 0;
  for (const auto& [j, a] : p.terms()) abs_sum += abs(a);
  std::string label = std::string(family_name(family)) + "[" + p.to_string() + "; c=";
  for (std::size_t i = 0; i < c.size(); ++i) label += (i ? "," : "") + std::to_string(c[i]);
  label += "]";
  SeqMetadata m;
  auto identity = [](const Index& i) { return i; };
  switch (family) {
    case FamilyId::MeasureGen: {
      auto measure = [](const Index& n) { return MonomialSum(typewriter_window(n).length()); };
      m.support_measure = ClosedForm{measure, Relation::Equals, Trend::ToZero, {}, "2^-floor(log2 n)"};
      m.l1_norm = ClosedForm{[abs_sum, measure](const Index& n) { return MonomialSum(abs_sum) * measure(n); },
                             Relation::AtMost, Trend::ToZero, {}, "sum |alpha_j| 2^-floor(log2 n)"};
      const MonomialSum floor_value = magnitude(expr.at(Rational(1, 2)));
      m.sup_norm = ClosedForm{[floor_value](const Index& n) {
                                return typewriter_window(n).contains(Rational(1, 2)) ? floor_value : MonomialSum();
                              },
                              Relation::AtLeast, Trend::RecurrentlyAbove, floor_value,
                              "|phi(1/2)| whenever the window contains 1/2"};
      StructuredSetSeq sets;
      sets.sets = [](const Index& n) { return std::vector<Interval>{typewriter_window(n)}; };
      sets.tail = make_family(FamilySpec{FamilyId::Typewriter, 1, 1}).metadata().support->tail;
      m.support = sets;
      m.profile = [expr](const Rational& x) { return expr.at(x); };
      m.live_index = [](const Index& i) {
        Index top = 1;
        mpz_mul_2exp(top.get_mpz_t(), top.get_mpz_t(), i.get_ui());
        return Index(top + top / 2);
      };
      break;
    }
    case FamilyId::NupGen: {
      auto measure = [](const Index& n) { return MonomialSum(Rational(Integer(1), n * (n + 1))); };
      m.support_measure = ClosedForm{measure, Relation::Equals, Trend::ToZero, {}, "1/(n(n+1))"};
      m.l1_norm = ClosedForm{[abs_sum, measure](const Index& n) { return MonomialSum(abs_sum) * measure(n); },
                             Relation::AtMost, Trend::ToZero, {}, "sum |alpha_j| / (n(n+1))"};
      const MonomialSum floor_value = magnitude(expr.at(Rational(1, 2)));
      m.sup_norm = ClosedForm{[floor_value](const Index&) { return floor_value; }, Relation::AtLeast,
                              Trend::BoundedBelow, floor_value, "sup_w |phi(w)| >= |phi(1/2)|, independent of n"};
      StructuredSetSeq sets;
      sets.sets = [](const Index& n) { return std::vector<Interval>{shrink_set(n)}; };
      sets.tail.kind = TailDescriptor::Kind::ShrinksToNull;
      sets.tail.right_bound = [](const Index& n) { return Point(rational_inv(n)); };
      sets.tail.certificate = "E_m inside [0,1/n] for m >= n";
      m.support = sets;
      m.live_index = identity;
      break;
    }
    default: {
      auto coefficient = [p, c](const Index& n) {
        MonomialSum s;
        for (const auto& [j, a] : p.terms()) s += MonomialSum(Monomial::power(Rational(n), -dot(c, j))) * MonomialSum(a);
        return s;
      };
      auto reach = [](const Index& n) { return MonomialSum(Monomial::exp(LinearForm::constant(Rational(n)))); };
      m.sup_norm = ClosedForm{[coefficient](const Index& n) { return magnitude(coefficient(n)); }, Relation::Equals,
                              Trend::ToZero, {}, "|sum alpha_j n^-(c.j)|"};
      m.support_measure = ClosedForm{[coefficient, reach](const Index& n) {
                                       return coefficient(n).is_zero() ? MonomialSum() : reach(n);
                                     },
                                     Relation::Equals, Trend::ToInfinity, {}, "e^n"};
      m.l1_norm = ClosedForm{[coefficient, reach](const Index& n) { return magnitude(coefficient(n)) * reach(n); },
                             Relation::Equals, Trend::ToInfinity, {}, "e^n |sum alpha_j n^-(c.j)|"};
      StructuredSetSeq sets;
      sets.domain = Domain::HalfLine;
      sets.sets = [](const Index& n) {
        return std::vector<Interval>{Interval::closed(0, Point(Rational(1), static_cast<long>(n.get_ui())))};
      };
      sets.tail.kind = TailDescriptor::Kind::EventuallyAvoids;
      sets.tail.certificate = "[0,e^n] exhausts the half-line";
      m.support = sets;
      m.live_index = [](const Index& i) { return Index(i + 1); };
      break;
    }
  }
  const Domain d = family == FamilyId::L1Gen ? Domain::HalfLine : Domain::UnitInterval;
  return FunSeq(label, d, gen, m);
}

// ---------------------------------------------------------- linear combos

namespace {

MonomialSum larger(const MonomialSum& a, const MonomialSum& b) {
  Ordering o = compare(a, b);
  if (o == Ordering::Indeterminate) {
    return eval_enclosure(a, 128).mid_double() >= eval_enclosure(b, 128).mid_double() ? a : b;
  }
  return o == Ordering::Less ? b : a;
}

struct Part {
  MonomialSum weight;  // |lambda|
  const ClosedForm* form;
  const FunSeq* seq;
};

std::optional<ClosedForm> combine(const std::vector<Part>& parts, bool disjoint, bool use_max, const char* what) {
  for (const auto& p : parts) {
    if (!p.form) return std::nullopt;
  }
  bool exact = disjoint && std::all_of(parts.begin(), parts.end(),
                                       [](const Part& p) { return p.form->relation == Relation::Equals; });
  bool all_zero = std::all_of(parts.begin(), parts.end(), [](const Part& p) { return p.form->certifies_zero_limit(); });
  ClosedForm out;
  std::vector<std::pair<MonomialSum, std::function<MonomialSum(const Index&)>>> terms;
  for (const auto& p : parts) terms.emplace_back(p.weight, p.form->formula);
  out.formula = [terms, use_max](const Index& n) {
    MonomialSum acc;
    bool first = true;
    for (const auto& [w, f] : terms) {
      MonomialSum v = w * f(n);
      acc = first ? v : (use_max ? larger(acc, v) : acc + v);
      first = false;
    }
    return acc;
  };
  out.certificate = std::string(use_max && exact ? "max" : "sum") + " of |lambda_i| * (" + what + " of each part)";
  if (exact) {
    out.relation = Relation::Equals;
    if (all_zero) {
      out.trend = Trend::ToZero;
      return out;
    }
    // The lead part bounds the combination from below.
    const Part& lead = parts.front();
    const ClosedForm& lf = *lead.form;
    if (lf.trend == Trend::ToInfinity && lf.relation != Relation::AtMost) {
      out.trend = Trend::ToInfinity;
      return out;
    }
    if (lf.certifies_positive_floor()) {
      out.trend = lf.trend;
      out.bound = lead.weight * lf.bound;
      return out;
    }
    return std::nullopt;
  }
  bool upper = std::all_of(parts.begin(), parts.end(), [](const Part& p) { return p.form->relation != Relation::AtLeast; });
  if (!upper || !all_zero) return std::nullopt;
  out.relation = Relation::AtMost;
  out.trend = Trend::ToZero;
  if (use_max) {
    // Without disjointness the sup is bounded by the weighted sum.
    out.formula = [terms](const Index& n) {
      MonomialSum acc;
      for (const auto& [w, f] : terms) acc += w * f(n);
      return acc;
    };
  }
  return out;
}

}  // namespace

FunSeq linear_combo(const std::vector<MonomialSum>& lambdas, const std::vector<FunSeq>& seqs, bool disjoint_supports) {
  if (lambdas.size() != seqs.size()) throw Error(ErrorCode::InvalidArgument, "one scalar per sequence");
  if (seqs.empty()) throw Error(ErrorCode::InvalidArgument, "empty combination");
  const Domain d = seqs.front().domain();
  for (const auto& s : seqs) {
    if (s.domain() != d) throw Error(ErrorCode::DomainMismatch, s.name() + " lives on another domain");
  }
  std::vector<MonomialSum> ls;
  std::vector<FunSeq> parts;
  std::ostringstream name;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (lambdas[i].is_zero()) continue;
    if (!ls.empty()) name << " + ";
    name << "(" << lambdas[i].to_string() << ")*" << seqs[i].name();
    ls.push_back(lambdas[i]);
    parts.push_back(seqs[i]);
  }
  if (parts.empty()) return FunSeq::zero(d);

  auto gen = [ls, parts, d](const Index& n) {
    PwExpFun acc(d);
    for (std::size_t i = 0; i < parts.size(); ++i) acc = linear_combine(1, acc, ls[i], parts[i].at(n));
    return acc;
  };

  std::vector<MonomialSum> weights;
  for (const auto& l : ls) weights.push_back(magnitude(l));
  auto collect = [&](auto member) {
    std::vector<Part> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& opt = parts[i].metadata().*member;
      out.push_back({weights[i], opt ? &*opt : nullptr, &parts[i]});
    }
    return out;
  };
  SeqMetadata m;
  m.sup_norm = combine(collect(&SeqMetadata::sup_norm), disjoint_supports, true, "sup norm");
  m.l1_norm = combine(collect(&SeqMetadata::l1_norm), disjoint_supports, false, "L1 norm");
  auto measures = collect(&SeqMetadata::support_measure);
  for (auto& p : measures) p.weight = 1;
  m.support_measure = combine(measures, disjoint_supports, false, "support measure");
  if (disjoint_supports) m.live_index = parts.front().metadata().live_index;
  if (parts.size() == 1 && parts.front().metadata().profile) {
    auto inner = parts.front().metadata().profile;
    const MonomialSum l = ls.front();
    m.profile = [inner, l](const Rational& x) { return l * inner(x); };
  }

  // Support descriptor: the union of the parts' sets, when the tails agree in kind.
  bool have_all = std::all_of(parts.begin(), parts.end(), [](const FunSeq& s) { return s.metadata().support.has_value(); });
  if (have_all) {
    std::vector<StructuredSetSeq> sets;
    for (const auto& s : parts) sets.push_back(*s.metadata().support);
    const auto kind = sets.front().tail.kind;
    bool same = std::all_of(sets.begin(), sets.end(), [kind](const StructuredSetSeq& s) { return s.tail.kind == kind; });
    if (same && kind != TailDescriptor::Kind::Custom && kind != TailDescriptor::Kind::EventuallyAvoids) {
      StructuredSetSeq u;
      u.domain = d;
      u.sets = [sets](const Index& n) {
        std::vector<Interval> all;
        for (const auto& s : sets) {
          auto v = s.at(n);
          all.insert(all.end(), v.begin(), v.end());
        }
        return all;
      };
      u.tail = sets.front().tail;
      if (kind == TailDescriptor::Kind::ShrinksToNull) {
        u.tail.right_bound = [sets](const Index& n) {
          Point r = sets.front().tail.right_bound(n);
          for (const auto& s : sets) {
            Point q = s.tail.right_bound(n);
            if (r < q) r = q;
          }
          return r;
        };
        u.tail.origin_in_limsup = std::any_of(sets.begin(), sets.end(),
                                              [](const StructuredSetSeq& s) { return s.tail.origin_in_limsup; });
        u.tail.certificate = "every part shrinks to the origin";
      } else {
        u.tail.certificate = "the first part already sweeps the domain";
      }
      m.support = u;
    } else if (same && kind == TailDescriptor::Kind::EventuallyAvoids) {
      StructuredSetSeq u;
      u.domain = d;
      u.sets = [sets](const Index& n) {
        std::vector<Interval> all;
        for (const auto& s : sets) {
          auto v = s.at(n);
          all.insert(all.end(), v.begin(), v.end());
        }
        return all;
      };
      // A point avoided eventually by every part is avoided by the union.
      std::vector<Interval> region = sets.front().tail.region;
      for (std::size_t i = 1; i < sets.size(); ++i) {
        std::vector<Interval> next;
        for (const auto& a : region) {
          for (const auto& b : sets[i].tail.region) {
            Interval c = intersect(a, b);
            if (!c.is_empty()) next.push_back(c);
          }
        }
        region = std::move(next);
      }
      u.tail.kind = TailDescriptor::Kind::EventuallyAvoids;
      u.tail.region = region;
      u.tail.certificate = "intersection of the parts' avoided regions";
      m.support = u;
    }
  }
  return FunSeq(name.str(), d, gen, m);
}

// ------------------------------------------------------------ independence

namespace {

std::vector<Rational> interior_points(const PwExpFun& f) {
  std::vector<Rational> xs;
  for (const auto& iv : f.support()) {
    if (iv.lo.is_rational() && iv.hi.is_rational()) xs.push_back((iv.lo.rational() + iv.hi.rational()) / 2);
  }
  return xs;
}

long rational_rank(std::vector<std::vector<Rational>> rows, std::size_t cols) {
  long rank = 0;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      Rational f = rows[i][col] / rows[r][col];
      for (std::size_t j = col; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace

RankResult independence_rank(const std::function<FunSeq(long)>& family, long k_max, long coord_budget) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");
  if (coord_budget < 1) throw Error(ErrorCode::InvalidArgument, "coordinate budget must be >= 1");
  std::vector<FunSeq> members;
  for (long k = 1; k <= k_max; ++k) members.push_back(family(k));

  RankResult result;
  bool separated = true;
  for (long k = 1; k <= k_max && separated; ++k) {
    const FunSeq& own = members[k - 1];
    bool found = false;
    for (long m = 1; m <= coord_budget && !found; ++m) {
      const Index n = own.metadata().live_index ? own.metadata().live_index(Index(m)) : Index(m);
      const PwExpFun f = own.at(n);
      for (const auto& x : interior_points(f)) {
        if (certify_nonzero(evaluate_exact(f, x)).status != NonzeroStatus::CertifiedNonzero) continue;
        bool alone = true;
        for (long other = 1; other <= k_max && alone; ++other) {
          if (other != k && !evaluate_exact(members[other - 1].at(n), x).is_zero()) alone = false;
        }
        if (alone) {
          result.witnesses.push_back({k, n, x});
          found = true;
          break;
        }
      }
    }
    separated = found;
  }
  if (separated) {
    result.rank = k_max;
    std::ostringstream os;
    os << "each member is the only nonzero one at its witness (k, n_k, x_k); the evaluation matrix there is "
          "diagonal with nonzero entries";
    result.certificate = os.str();
    return result;
  }

  // Exact rank of the evaluation matrix on rational samples.
  result.witnesses.clear();
  result.used_matrix_rank = true;
  std::vector<std::vector<Rational>> rows;
  const long coords = std::min<long>(coord_budget, 64);
  for (long i = 1; i <= coords; ++i) {
    std::set<Rational> xs;
    for (const auto& s : members) {
      for (const auto& x : interior_points(s.at(i))) xs.insert(x);
    }
    for (const auto& x : xs) {
      std::vector<Rational> row;
      bool rational = true;
      for (const auto& s : members) {
        MonomialSum v = evaluate_exact(s.at(i), x);
        if (!v.is_rational()) {
          rational = false;
          break;
        }
        row.push_back(v.rational_value());
      }
      if (rational) rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw Error(ErrorCode::BudgetExhausted, "no separating coordinates within the budget");
  result.rank = rational_rank(rows, static_cast<std::size_t>(k_max));
  result.certificate = "exact rank of a " + std::to_string(rows.size()) + "x" + std::to_string(k_max) +
                       " rational evaluation matrix";
  return result;
}

// ------------------------------------------------------------------ random

MultiIndexPoly random_polynomial(std::mt19937_64& rng, std::size_t max_vars, unsigned max_degree,
                                 std::size_t max_terms) {
  std::uniform_int_distribution<std::size_t> vars_d(1, max_vars);
  std::uniform_int_distribution<std::size_t> terms_d(1, max_terms);
  std::uniform_int_distribution<unsigned> deg_d(1, max_degree);
  std::uniform_int_distribution<int> coef_d(1, 10);
  const std::size_t vars = vars_d(rng);
  const std::size_t count = terms_d(rng);
  std::map<MultiIndex, Rational> terms;
  std::uniform_int_distribution<std::size_t> slot_d(0, vars - 1);
  for (std::size_t t = 0; t < count; ++t) {
    MultiIndex j(vars, 0);
    const unsigned deg = deg_d(rng);
    for (unsigned e = 0; e < deg; ++e) ++j[slot_d(rng)];
    int a = coef_d(rng);
    a = a <= 5 ? a - 6 : a - 5;  // {-5..-1} or {1..5}
    terms.emplace(j, Rational(a));
  }
  return MultiIndexPoly(vars, terms);
}

std::vector<std::size_t> random_symbols(std::mt19937_64& rng, std::size_t count) {
  std::vector<std::size_t> pool;
  for (std::size_t s = 1; s <= 8; ++s) pool.push_back(s);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(count);
  return pool;
}

}  // namespace convlab
