#include "convlab/witnesses.hpp"

#include <algorithm>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

namespace {

Rational pow2(unsigned long e, bool negative) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, e);
  return negative ? Rational(Integer(1), p) : Rational(p);
}

void require_index(const Index& n) {
  if (n < 1) throw Error(ErrorCode::IndexOutOfRange, "index " + n.get_str() + " below 1");
}

void require_k(long k) {
  if (k < 1) throw Error(ErrorCode::IndexOutOfRange, "family index k=" + std::to_string(k) + " below 1");
}

void require_symbol(std::size_t c) {
  if (c >= SymbolBasis::standard().size()) {
    throw Error(ErrorCode::UnknownSymbol, "symbol " + std::to_string(c) + " outside the basis");
  }
}

unsigned long to_ulong(const Index& n, const char* what) {
  if (!n.fits_ulong_p()) throw Error(ErrorCode::IndexOutOfRange, std::string(what) + " too large");
  return n.get_ui();
}

Rational inv(const Index& n) { return Rational(Integer(1), n); }

}  // namespace

DyadicPosition dyadic_split(const Index& n) {
  require_index(n);
  DyadicPosition p;
  p.generation = mpz_sizeinbase(n.get_mpz_t(), 2) - 1;
  Integer top;
  mpz_ui_pow_ui(top.get_mpz_t(), 2, p.generation);
  p.offset = n - top;
  return p;
}

Index interleave_index(long k, const Index& n) {
  require_k(k);
  require_index(n);
  Index out = 2 * n - 1;
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<mp_bitcnt_t>(k - 1));
  return out;
}

long generation_owner(unsigned long generation) {
  if (generation == 0) return 0;
  long k = 1;
  while (generation % 2 == 0) {
    generation /= 2;
    ++k;
  }
  return k;
}

Interval typewriter_window(const Index& n) {
  DyadicPosition p = dyadic_split(n);
  const Rational w = pow2(p.generation, true);
  return Interval::closed(Rational(Rational(p.offset) * w), Rational(Rational(p.offset + 1) * w));
}

PwExpFun typewriter(const Index& n) { return PwExpFun::indicator(Domain::UnitInterval, typewriter_window(n)); }

bool typewriter_split_live(long k, const Index& n) {
  require_k(k);
  return generation_owner(dyadic_split(n).generation) == k;
}

PwExpFun typewriter_split(long k, const Index& n) {
  return typewriter_split_live(k, n) ? typewriter(n) : PwExpFun(Domain::UnitInterval);
}

Interval shrink_set(const Index& n) {
  require_index(n);
  return Interval::closed(inv(n + 1), inv(n));
}

PwExpFun shrink_interval(const Index& n) { return PwExpFun::indicator(Domain::UnitInterval, shrink_set(n)); }

PwExpFun shrink_split(long k, const Index& n) { return shrink_interval(interleave_index(k, n)); }

PwExpFun measure_gen(std::size_t c, const Index& n) {
  require_symbol(c);
  return PwExpFun::single(Domain::UnitInterval, typewriter_window(n), ExpSum::term(1, LinearForm::symbol(c, -1)));
}

PwExpFun nup_gen(std::size_t c, const Index& n) {
  require_symbol(c);
  require_index(n);
  const Rational nq(n);
  MonomialSum coefficient = Monomial::exp(LinearForm::symbol(c, nq));
  ExpSum expr = ExpSum::term(coefficient, LinearForm::symbol(c, -nq * (nq + 1)));
  return PwExpFun::single(Domain::UnitInterval, shrink_set(n), expr);
}

PwExpFun l1_gen(std::size_t c, const Index& n) {
  require_symbol(c);
  require_index(n);
  long e_power = static_cast<long>(to_ulong(n, "l1-gen index"));
  MonomialSum height = Monomial::power(Rational(n), LinearForm::symbol(c, -1));
  return PwExpFun::indicator(Domain::HalfLine, Interval::closed(0, Point(Rational(1), e_power)), height);
}

PwExpFun flat_bump(const Index& n) {
  require_index(n);
  return PwExpFun::indicator(Domain::HalfLine, Interval::closed(0, Rational(n)), inv(n));
}

Interval block_interval(long row, long m) {
  if (row < 1 || m < 1 || m > row) {
    throw Error(ErrorCode::IndexOutOfRange, "block " + std::to_string(m) + " of row " + std::to_string(row));
  }
  const Integer n(row);
  const Integer base = (n - 1) * n * (n + 1) / 6;
  const Integer mm(m);
  return Interval::closed(Rational(base + mm * (mm - 1) / 2), Rational(base + mm * (mm + 1) / 2));
}

PwExpFun traveling_bump(long k, const Index& n) {
  require_k(k);
  require_index(n);
  const long m = static_cast<long>(to_ulong(n, "traveling-bump index"));
  return PwExpFun::indicator(Domain::HalfLine, block_interval(k + m - 1, m), inv(n));
}

// ------------------------------------------------------------------ registry

std::string_view family_name(FamilyId id) {
  switch (id) {
    case FamilyId::Typewriter: return "typewriter";
    case FamilyId::TypewriterSplit: return "typewriter-split";
    case FamilyId::Shrink: return "shrink";
    case FamilyId::ShrinkSplit: return "shrink-split";
    case FamilyId::MeasureGen: return "measure-gen";
    case FamilyId::NupGen: return "nup-gen";
    case FamilyId::L1Gen: return "l1-gen";
    case FamilyId::FlatBump: return "flat-bump";
    case FamilyId::TravelingBump: return "traveling-bump";
  }
  return "?";
}

std::vector<FamilyId> family_ids() {
  return {FamilyId::Typewriter, FamilyId::TypewriterSplit, FamilyId::Shrink,
          FamilyId::ShrinkSplit, FamilyId::MeasureGen,      FamilyId::NupGen,
          FamilyId::L1Gen,       FamilyId::FlatBump,        FamilyId::TravelingBump};
}

bool FamilySpec::uses_k() const {
  return id == FamilyId::TypewriterSplit || id == FamilyId::ShrinkSplit || id == FamilyId::TravelingBump;
}

bool FamilySpec::uses_c() const {
  return id == FamilyId::MeasureGen || id == FamilyId::NupGen || id == FamilyId::L1Gen;
}

Domain FamilySpec::domain() const {
  return (id == FamilyId::L1Gen || id == FamilyId::FlatBump || id == FamilyId::TravelingBump) ? Domain::HalfLine
                                                                                              : Domain::UnitInterval;
}

void FamilySpec::validate() const {
  if (uses_k() && k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (uses_c() && c == 0) throw Error(ErrorCode::InvalidArgument, "c must name an irrational symbol, not 1");
  if (uses_c() && c >= SymbolBasis::standard().size()) {
    throw Error(ErrorCode::InvalidArgument, "c must name a basis symbol below " +
                                                std::to_string(SymbolBasis::standard().size()));
  }
}

std::string FamilySpec::to_string() const {
  std::string s(family_name(id));
  if (uses_k()) s += ":k=" + std::to_string(k);
  if (uses_c()) s += ":c=" + std::to_string(c);
  return s;
}

FamilySpec parse_family(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  FamilySpec spec;
  bool found = false;
  for (FamilyId id : family_ids()) {
    if (family_name(id) == name) {
      spec.id = id;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::UnknownFamily, "'" + name + "'");
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::replace(rest.begin(), rest.end(), ':', ',');
    std::istringstream in(rest);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected key=value in '" + item + "'");
      const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      long parsed = 0;
      try {
        std::size_t used = 0;
        parsed = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "'" + value + "' is not an integer");
      }
      if (key == "k" && spec.uses_k()) {
        spec.k = parsed;
      } else if (key == "c" && spec.uses_c()) {
        if (parsed < 0) throw Error(ErrorCode::InvalidArgument, "c must be >= 0");
        spec.c = static_cast<std::size_t>(parsed);
      } else {
        throw Error(ErrorCode::InvalidArgument, "family " + name + " takes no parameter '" + key + "'");
      }
    }
  }
  spec.validate();
  return spec;
}

std::vector<FamilySpec> catalog() {
  std::vector<FamilySpec> out;
  for (FamilyId id : family_ids()) {
    FamilySpec s;
    s.id = id;
    out.push_back(s);
  }
  return out;
}

PwExpFun family_member(const FamilySpec& spec, const Index& n) {
  spec.validate();
  switch (spec.id) {
    case FamilyId::Typewriter: return typewriter(n);
    case FamilyId::TypewriterSplit: return typewriter_split(spec.k, n);
    case FamilyId::Shrink: return shrink_interval(n);
    case FamilyId::ShrinkSplit: return shrink_split(spec.k, n);
    case FamilyId::MeasureGen: return measure_gen(spec.c, n);
    case FamilyId::NupGen: return nup_gen(spec.c, n);
    case FamilyId::L1Gen: return l1_gen(spec.c, n);
    case FamilyId::FlatBump: return flat_bump(n);
    case FamilyId::TravelingBump: return traveling_bump(spec.k, n);
  }
  throw Error(ErrorCode::UnknownFamily, "unhandled family id");
}

// ------------------------------------------------------------------ metadata

namespace {

using Formula = std::function<MonomialSum(const Index&)>;

ClosedForm form(Formula f, Relation rel, Trend trend, std::string certificate, MonomialSum bound = {}) {
  return ClosedForm{std::move(f), rel, trend, std::move(bound), std::move(certificate)};
}

Rational window_length(const Index& n) { return pow2(dyadic_split(n).generation, true); }

// x -> index n >= m whose typewriter window contains x, in the first
// generation g > log2(m) accepted by `accept`.
Index sweep_index(const Rational& x, const Index& m, const std::function<bool(unsigned long)>& accept) {
  unsigned long g = dyadic_split(m).generation + 1;
  while (!accept(g)) ++g;
  const Rational scaled = x * pow2(g, false);
  Integer j = scaled.get_num() / scaled.get_den();
  Integer top;
  mpz_ui_pow_ui(top.get_mpz_t(), 2, g);
  if (j >= top) j = top - 1;
  return top + j;
}

StructuredSetSeq unit_sets(std::function<std::vector<Interval>(const Index&)> sets, TailDescriptor tail) {
  StructuredSetSeq s;
  s.domain = Domain::UnitInterval;
  s.sets = std::move(sets);
  s.tail = std::move(tail);
  return s;
}

StructuredSetSeq half_line_sets(std::function<std::vector<Interval>(const Index&)> sets, TailDescriptor tail) {
  StructuredSetSeq s = unit_sets(std::move(sets), std::move(tail));
  s.domain = Domain::HalfLine;
  return s;
}

TailDescriptor sweeps(std::function<bool(unsigned long)> accept, std::string certificate) {
  TailDescriptor t;
  t.kind = TailDescriptor::Kind::SweepsAll;
  t.cover_index = [accept](const Rational& x, const Index& m) { return sweep_index(x, m, accept); };
  t.certificate = std::move(certificate);
  return t;
}

TailDescriptor shrinks(std::function<Point(const Index&)> right_bound, std::string certificate) {
  TailDescriptor t;
  t.kind = TailDescriptor::Kind::ShrinksToNull;
  t.right_bound = std::move(right_bound);
  t.origin_in_limsup = false;
  t.certificate = std::move(certificate);
  return t;
}

TailDescriptor avoids(std::vector<Interval> region, std::string certificate) {
  TailDescriptor t;
  t.kind = TailDescriptor::Kind::EventuallyAvoids;
  t.region = std::move(region);
  t.certificate = std::move(certificate);
  return t;
}

MonomialSum one(const Index&) { return 1; }

}  // namespace

FunSeq make_family(const FamilySpec& spec) {
  spec.validate();
  const std::string name = spec.to_string();
  const long k = spec.k;
  const std::size_t c = spec.c;
  SeqMetadata m;
  auto identity = [](const Index& i) { return i; };
  switch (spec.id) {
    case FamilyId::Typewriter: {
      auto measure = [](const Index& n) { return MonomialSum(window_length(n)); };
      m.support_measure = form(measure, Relation::Equals, Trend::ToZero, "2^-floor(log2 n)");
      m.sup_norm = form(one, Relation::Equals, Trend::BoundedBelow, "1", 1);
      m.l1_norm = form(measure, Relation::Equals, Trend::ToZero, "2^-floor(log2 n)");
      m.support = unit_sets([](const Index& n) { return std::vector<Interval>{typewriter_window(n)}; },
                            sweeps([](unsigned long) { return true; }, "each generation tiles [0,1]"));
      m.profile = [](const Rational&) { return MonomialSum(1); };
      m.live_index = identity;
      return FunSeq(name, Domain::UnitInterval, typewriter, m);
    }
    case FamilyId::TypewriterSplit: {
      auto measure = [k](const Index& n) {
        return typewriter_split_live(k, n) ? MonomialSum(window_length(n)) : MonomialSum();
      };
      m.support_measure = form(measure, Relation::Equals, Trend::ToZero, "2^-floor(log2 n) on live generations, else 0");
      m.sup_norm = form([k](const Index& n) { return typewriter_split_live(k, n) ? MonomialSum(1) : MonomialSum(); },
                        Relation::Equals, Trend::RecurrentlyAbove, "1 on live generations, else 0", 1);
      m.l1_norm = form(measure, Relation::Equals, Trend::ToZero, "2^-floor(log2 n) on live generations, else 0");
      auto live_gen = [k](unsigned long g) { return generation_owner(g) == k; };
      m.support = unit_sets(
          [k](const Index& n) {
            return typewriter_split_live(k, n) ? std::vector<Interval>{typewriter_window(n)} : std::vector<Interval>{};
          },
          sweeps(live_gen, "every live generation tiles [0,1]"));
      m.profile = [](const Rational&) { return MonomialSum(1); };
      m.live_index = [k](const Index& i) {
        Index g = interleave_index(k, i);
        Index n = 1;
        mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), to_ulong(g, "generation"));
        return n;
      };
      return FunSeq(name, Domain::UnitInterval, [k](const Index& n) { return typewriter_split(k, n); }, m);
    }
    case FamilyId::Shrink: {
      auto measure = [](const Index& n) { return MonomialSum(Rational(Integer(1), n * (n + 1))); };
      m.support_measure = form(measure, Relation::Equals, Trend::ToZero, "1/(n(n+1))");
      m.sup_norm = form(one, Relation::Equals, Trend::BoundedBelow, "1", 1);
      m.l1_norm = form(measure, Relation::Equals, Trend::ToZero, "1/(n(n+1))");
      m.support = unit_sets([](const Index& n) { return std::vector<Interval>{shrink_set(n)}; },
                            shrinks([](const Index& n) { return Point(inv(n)); }, "E_m inside [0,1/n] for m >= n"));
      m.profile = [](const Rational&) { return MonomialSum(1); };
      m.live_index = identity;
      return FunSeq(name, Domain::UnitInterval, shrink_interval, m);
    }
    case FamilyId::ShrinkSplit: {
      auto measure = [k](const Index& n) {
        Index i = interleave_index(k, n);
        return MonomialSum(Rational(Integer(1), i * (i + 1)));
      };
      m.support_measure = form(measure, Relation::Equals, Trend::ToZero, "1/(i(i+1)), i = i(k,n)");
      m.sup_norm = form(one, Relation::Equals, Trend::BoundedBelow, "1", 1);
      m.l1_norm = form(measure, Relation::Equals, Trend::ToZero, "1/(i(i+1)), i = i(k,n)");
      m.support = unit_sets([k](const Index& n) { return std::vector<Interval>{shrink_set(interleave_index(k, n))}; },
                            shrinks([k](const Index& n) { return Point(inv(interleave_index(k, n))); },
                                    "E_{i(k,m)} inside [0,1/i(k,n)] for m >= n"));
      m.profile = [](const Rational&) { return MonomialSum(1); };
      m.live_index = identity;
      return FunSeq(name, Domain::UnitInterval, [k](const Index& n) { return shrink_split(k, n); }, m);
    }
    case FamilyId::MeasureGen: {
      auto measure = [](const Index& n) { return MonomialSum(window_length(n)); };
      m.support_measure = form(measure, Relation::Equals, Trend::ToZero, "2^-floor(log2 n)");
      m.sup_norm = form(
          [c](const Index& n) {
            return MonomialSum(Monomial::exp(LinearForm::symbol(c, -typewriter_window(n).lo.rational())));
          },
          Relation::Equals, Trend::BoundedBelow, "e^{-c a_n} at the left window end",
          MonomialSum(Monomial::exp(LinearForm::symbol(c, -1))));
      m.l1_norm = form(measure, Relation::AtMost, Trend::ToZero, "2^-floor(log2 n)");
      m.support = unit_sets([](const Index& n) { return std::vector<Interval>{typewriter_window(n)}; },
                            sweeps([](unsigned long) { return true; }, "each generation tiles [0,1]"));
      const ExpSum profile = ExpSum::term(1, LinearForm::symbol(c, -1));
      m.profile = [profile](const Rational& x) { return profile.at(x); };
      m.live_index = identity;
      return FunSeq(name, Domain::UnitInterval, [c](const Index& n) { return measure_gen(c, n); }, m);
    }
    case FamilyId::NupGen: {
      auto measure = [](const Index& n) { return MonomialSum(Rational(Integer(1), n * (n + 1))); };
      m.support_measure = form(measure, Relation::Equals, Trend::ToZero, "1/(n(n+1))");
      m.sup_norm = form(one, Relation::Equals, Trend::BoundedBelow, "1 at x = 1/(n+1)", 1);
      m.l1_norm = form(measure, Relation::AtMost, Trend::ToZero, "1/(n(n+1))");
      m.support = unit_sets([](const Index& n) { return std::vector<Interval>{shrink_set(n)}; },
                            shrinks([](const Index& n) { return Point(inv(n)); }, "E_m inside [0,1/n] for m >= n"));
      m.live_index = identity;
      return FunSeq(name, Domain::UnitInterval, [c](const Index& n) { return nup_gen(c, n); }, m);
    }
    case FamilyId::L1Gen: {
      auto height = [c](const Index& n) { return MonomialSum(Monomial::power(Rational(n), LinearForm::symbol(c, -1))); };
      auto reach = [](const Index& n) {
        return MonomialSum(Monomial::exp(LinearForm::constant(Rational(n))));
      };
      m.support_measure = form(reach, Relation::Equals, Trend::ToInfinity, "e^n");
      m.sup_norm = form(height, Relation::Equals, Trend::ToZero, "n^-c");
      m.l1_norm = form([height, reach](const Index& n) { return reach(n) * height(n); }, Relation::Equals,
                       Trend::ToInfinity, "e^n n^-c");
      m.support = half_line_sets(
          [](const Index& n) {
            return std::vector<Interval>{Interval::closed(0, Point(Rational(1), static_cast<long>(n.get_ui())))};
          },
          avoids({}, "[0,e^n] exhausts the half-line"));
      m.live_index = identity;
      return FunSeq(name, Domain::HalfLine, [c](const Index& n) { return l1_gen(c, n); }, m);
    }
    case FamilyId::FlatBump: {
      m.support_measure = form([](const Index& n) { return MonomialSum(Rational(n)); }, Relation::Equals,
                               Trend::ToInfinity, "n");
      m.sup_norm = form([](const Index& n) { return MonomialSum(inv(n)); }, Relation::Equals, Trend::ToZero, "1/n");
      m.l1_norm = form(one, Relation::Equals, Trend::BoundedBelow, "1", 1);
      m.support = half_line_sets([](const Index& n) { return std::vector<Interval>{Interval::closed(0, Rational(n))}; },
                                 avoids({}, "[0,n] exhausts the half-line"));
      m.live_index = identity;
      return FunSeq(name, Domain::HalfLine, flat_bump, m);
    }
    case FamilyId::TravelingBump: {
      m.support_measure = form([](const Index& n) { return MonomialSum(Rational(n)); }, Relation::Equals,
                               Trend::ToInfinity, "n");
      m.sup_norm = form([](const Index& n) { return MonomialSum(inv(n)); }, Relation::Equals, Trend::ToZero, "1/n");
      m.l1_norm = form(one, Relation::Equals, Trend::BoundedBelow, "1", 1);
      m.support = half_line_sets(
          [k](const Index& n) {
            return std::vector<Interval>{block_interval(k + static_cast<long>(n.get_ui()) - 1, static_cast<long>(n.get_ui()))};
          },
          avoids({Interval::closed(0, Point::infinity())}, "blocks move off to +inf"));
      m.live_index = identity;
      return FunSeq(name, Domain::HalfLine, [k](const Index& n) { return traveling_bump(k, n); }, m);
    }
  }
  throw Error(ErrorCode::UnknownFamily, "unhandled family id");
}

}  // namespace convlab
