#include <algorithm>
#include <vector>

#include "convlab/error.hpp"
#include "convlab/pwfun.hpp"

namespace convlab {

namespace {

int budget_for(int bits) { return std::max(bits, kDefaultBudgetBits); }
int work_bits(int bits) { return bits + 32; }

Enclosure zero_enc(int bits) { return Enclosure::point(Rational(0), bits); }
Enclosure infinite_enc(int bits) { return Point::infinity().enclosure(bits); }

Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

bool width_at_most(const Enclosure& e, const Rational& bound) {
  BigFloat w = e.width();
  return mpfr_cmp_q(w.get(), bound.get_mpq_t()) <= 0;
}

Rational upper_magnitude(const Enclosure& e) {
  Rational lo = e.lower_rational(), hi = e.upper_rational();
  return std::max(abs(lo), abs(hi));
}

// Numeric image of an ExpSum with coefficient and rate enclosures evaluated once.
struct NumSum {
  struct Term {
    Enclosure coef;
    Enclosure rate;
    bool constant;
  };
  std::vector<Term> terms;
  int bits;

  NumSum(const ExpSum& g, int b) : bits(b) {
    for (const auto& t : g.terms()) {
      terms.push_back({eval_enclosure(t.coefficient, bits), t.rate.value(bits), t.rate.is_zero()});
    }
  }

  Enclosure at(const Enclosure& x) const {
    Enclosure total = zero_enc(bits);
    for (const auto& t : terms) total = total + (t.constant ? t.coef : t.coef * exp(t.rate * x));
    return total;
  }

  Enclosure slope(const Enclosure& x) const {
    Enclosure total = zero_enc(bits);
    for (const auto& t : terms) {
      if (!t.constant) total = total + t.coef * t.rate * exp(t.rate * x);
    }
    return total;
  }

  Enclosure antiderivative(const Enclosure& x) const {
    Enclosure total = zero_enc(bits);
    for (const auto& t : terms) total = total + (t.constant ? t.coef * x : t.coef / t.rate * exp(t.rate * x));
    return total;
  }

  // sum |c_i| e^{r_i x}, a pointwise bound on |g|.
  Enclosure abs_bound(const Enclosure& x) const {
    Enclosure total = zero_enc(bits);
    for (const auto& t : terms) total = total + abs(t.coef) * exp(t.rate * x);
    return total;
  }

  // sum |c_i| / |r_i| e^{r_i x}: bounds the tail integral of |g| for negative rates.
  Enclosure tail_bound(const Enclosure& x) const {
    Enclosure total = zero_enc(bits);
    for (const auto& t : terms) total = total + abs(t.coef) / abs(t.rate) * exp(t.rate * x);
    return total;
  }

  Enclosure point_value(const Rational& x) const { return at(Enclosure::point(x, bits)); }

  // Range of g over [a,b]: naive extension intersected with the mean-value form.
  Enclosure range(const Rational& a, const Rational& b) const {
    Enclosure X = Enclosure::between(a, b, bits);
    if (a == b) return at(X);
    Rational m = (a + b) / 2;
    Enclosure naive = at(X);
    Enclosure mvf = point_value(m) + slope(X) * (X - Enclosure::point(m, bits));
    return intersect(naive, mvf);
  }
};

std::vector<int> rate_signs(const ExpSum& g, int bits) {
  std::vector<int> out;
  for (const auto& t : g.terms()) {
    auto s = t.rate.sign(budget_for(bits));
    if (!s) throw Error(ErrorCode::BudgetExhausted, "sign of rate " + t.rate.to_string() + " undecided");
    out.push_back(*s);
  }
  return out;
}

bool all_rates_negative(const ExpSum& g, int bits) {
  auto s = rate_signs(g, bits);
  return std::all_of(s.begin(), s.end(), [](int v) { return v < 0; });
}

// Rational sub-span [lo, hi] of [a, b] plus enclosures of the omitted slivers.
struct Span {
  Rational lo;
  Rational hi;
  std::vector<Enclosure> slivers;
};

Span inner_span(const Point& a, const Point& b, int bits) {
  Span s;
  if (a.is_rational()) {
    s.lo = a.rational();
  } else {
    Enclosure e = a.enclosure(bits);
    s.lo = e.upper_rational();
    s.slivers.push_back(hull(e, Enclosure::point(s.lo, bits)));
  }
  if (b.is_rational()) {
    s.hi = b.rational();
  } else {
    Enclosure e = b.enclosure(bits);
    s.hi = e.lower_rational();
    s.slivers.push_back(hull(e, Enclosure::point(s.hi, bits)));
  }
  if (s.hi < s.lo) s.hi = s.lo;
  return s;
}

Enclosure sliver_width(const Enclosure& x) {
  return Enclosure::point(x.upper_rational() - x.lower_rational(), x.precision());
}

// Rational X >= start with tail(X) <= bound, found by doubling.
template <typename Tail>
std::optional<Rational> find_cutoff(const Rational& start, const Tail& tail, const Rational& bound, int bits) {
  Rational x = std::max(Rational(start + 1), Rational(1));
  for (int i = 0; i < 64; ++i) {
    Enclosure t = tail(Enclosure::point(x, bits));
    if (mpfr_cmp_q(t.upper().get(), bound.get_mpq_t()) <= 0) return x;
    x *= 2;
  }
  return std::nullopt;
}

int cell_depth_limit(int bits) { return std::clamp(bits / 4, 24, 96); }

// ---------------------------------------------------------- superlevel set

struct PieceResult {
  std::optional<MonomialSum> exact;
  Enclosure enclosure;
  std::vector<Interval> inner;
};

std::optional<Rational> proportional(const LinearForm& target, const LinearForm& rate) {
  if (target.is_zero()) return Rational(0);
  const auto& [idx, q] = *rate.coefficients().begin();
  Rational t = target.coefficient(idx) / q;
  if (rate * t == target) return t;
  return std::nullopt;
}

// ln of a positive monomial when it is e^{form}.
std::optional<LinearForm> log_of_monomial(const Monomial& m) {
  if (m.coefficient() != 1) return std::nullopt;
  if (m.factors().empty()) return LinearForm();
  if (m.factors().size() == 1 && m.factors().begin()->first.is_e) return m.factors().begin()->second;
  return std::nullopt;
}

PieceResult measure_of(const Interval& region, int bits) {
  PieceResult r{MonomialSum(), zero_enc(bits), {}};
  if (region.is_empty() || region.is_point()) return r;
  r.inner.push_back(region);
  if (region.hi.is_infinite()) {
    r.exact.reset();
    r.enclosure = infinite_enc(bits);
  } else {
    r.exact = region.length();
    r.enclosure = eval_enclosure(*r.exact, bits);
  }
  return r;
}

PieceResult superlevel_generic(const ExpSum& g, const Interval& iv, const Enclosure& eps, int bits) {
  const int wb = work_bits(bits);
  NumSum num(g, wb);
  PieceResult r{std::nullopt, zero_enc(wb), {}};
  Point hi = iv.hi;
  if (hi.is_infinite()) {
    if (!all_rates_negative(g, bits)) {
      r.enclosure = hull(zero_enc(wb), infinite_enc(wb));
      return r;
    }
    Rational start = iv.lo.is_rational() ? iv.lo.rational() : iv.lo.enclosure(wb).upper_rational();
    auto cut = find_cutoff(start, [&](const Enclosure& x) { return num.abs_bound(x); }, eps.lower_rational(), wb);
    if (!cut) {
      r.enclosure = hull(zero_enc(wb), infinite_enc(wb));
      return r;
    }
    hi = Point(*cut);
  }
  Span span = inner_span(iv.lo, hi, wb);
  Enclosure undecided = zero_enc(wb);
  for (const auto& s : span.slivers) undecided = undecided + sliver_width(s);
  Enclosure inside = zero_enc(wb);
  const Rational eps_lo = eps.lower_rational(), eps_hi = eps.upper_rational();
  const int max_depth = cell_depth_limit(bits);
  struct Cell {
    Rational a, b;
    int depth;
  };
  std::vector<Cell> stack{{span.lo, span.hi, 0}};
  std::vector<std::pair<Rational, Rational>> in_cells;
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    if (c.a >= c.b) continue;
    Enclosure mag = abs(num.range(c.a, c.b));
    if (mag.lower_rational() > eps_hi) {
      in_cells.emplace_back(c.a, c.b);
    } else if (mag.upper_rational() <= eps_lo) {
      continue;
    } else if (c.depth >= max_depth) {
      undecided = undecided + Enclosure::point(c.b - c.a, wb);
    } else {
      Rational m = (c.a + c.b) / 2;
      stack.push_back({m, c.b, c.depth + 1});
      stack.push_back({c.a, m, c.depth + 1});
    }
  }
  std::sort(in_cells.begin(), in_cells.end());
  for (const auto& [a, b] : in_cells) {
    inside = inside + Enclosure::point(b - a, wb);
    if (!r.inner.empty() && r.inner.back().hi == Point(a)) {
      r.inner.back().hi = b;
    } else {
      r.inner.push_back(Interval{a, b, false, false});
    }
  }
  r.enclosure = inside + hull(zero_enc(wb), undecided);
  return r;
}

PieceResult superlevel_piece(const ExpPiece& piece, const MonomialSum& eps, const Enclosure& eps_enc, int bits) {
  const Interval& iv = piece.interval;
  const ExpSum& g = piece.expr;
  const int budget = budget_for(bits);
  if (iv.is_point()) return {MonomialSum(), zero_enc(bits), {}};
  if (g.is_constant()) {
    MonomialSum v = g.constant_value();
    auto s = sign(v, budget);
    Ordering ord = Ordering::Indeterminate;
    if (s) ord = compare(*s < 0 ? -v : v, eps, budget);
    if (ord == Ordering::Greater) return measure_of(iv, bits);
    if (ord != Ordering::Indeterminate) return {MonomialSum(), zero_enc(bits), {}};
    return {std::nullopt, hull(zero_enc(bits), iv.length_enclosure(bits)), {}};
  }
  if (g.is_single_term()) {
    const ExpTerm& t = g.terms().front();
    auto rs = t.rate.sign(budget);
    if (!rs) throw Error(ErrorCode::BudgetExhausted, "sign of rate " + t.rate.to_string() + " undecided");
    auto cs = sign(t.coefficient, budget);
    if (cs && t.coefficient.is_monomial() && eps.is_monomial()) {
      Monomial abs_c = t.coefficient.terms().front().scaled(*cs < 0 ? -1 : 1);
      Monomial ratio = eps.terms().front() * abs_c.pow(-1);
      if (auto level = log_of_monomial(ratio)) {
        if (auto cross = proportional(*level, t.rate)) {
          Interval half = *rs < 0 ? Interval{iv.lo, Point(*cross), true, false}
                                  : Interval{Point(*cross), iv.hi, false, iv.hi_closed};
          return measure_of(intersect(iv, half), bits);
        }
      }
    }
    const int wb = work_bits(bits);
    Enclosure abs_c = abs(eval_enclosure(t.coefficient, wb));
    if (!abs_c.contains_zero()) {
      Enclosure cross = log(eval_enclosure(eps, wb) / abs_c) / t.rate.value(wb);
      Enclosure a = iv.lo.enclosure(wb), b = iv.hi.enclosure(wb);
      PieceResult r{std::nullopt, zero_enc(wb), {}};
      if (*rs < 0) {
        r.enclosure = max(min(b, cross) - a, zero_enc(wb));
        Interval in = intersect(iv, Interval{iv.lo, Point(cross.lower_rational()), true, false});
        if (!in.is_empty() && !in.is_point()) r.inner.push_back(in);
      } else {
        r.enclosure = max(b - max(a, cross), zero_enc(wb));
        Interval in = intersect(iv, Interval{Point(cross.upper_rational()), iv.hi, false, iv.hi_closed});
        if (!in.is_empty() && !in.is_point()) r.inner.push_back(in);
      }
      return r;
    }
  }
  return superlevel_generic(g, iv, eps_enc, bits);
}

// ------------------------------------------------------------------ L1 norm

Enclosure abs_integral_cells(const NumSum& num, const Rational& a, const Rational& b, int bits) {
  const int wb = num.bits;
  const int max_depth = cell_depth_limit(bits);
  Enclosure total = zero_enc(wb);
  struct Cell {
    Rational a, b;
    int depth;
  };
  std::vector<Cell> stack{{a, b, 0}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    if (c.a >= c.b) continue;
    Enclosure range = num.range(c.a, c.b);
    Enclosure w = Enclosure::point(c.b - c.a, wb);
    if (!range.contains_zero()) {
      Enclosure exact_part = num.antiderivative(Enclosure::point(c.b, wb)) - num.antiderivative(Enclosure::point(c.a, wb));
      if (range.is_negative()) exact_part = -exact_part;
      Enclosure crude = w * abs(range);
      total = total + (exact_part.intersects(crude) ? intersect(exact_part, crude) : exact_part);
    } else if (c.depth >= max_depth) {
      total = total + hull(zero_enc(wb), w * abs(range));
    } else {
      Rational m = (c.a + c.b) / 2;
      stack.push_back({m, c.b, c.depth + 1});
      stack.push_back({c.a, m, c.depth + 1});
    }
  }
  return total;
}

struct NormResult {
  std::optional<MonomialSum> exact;
  Enclosure enclosure;
};

NormResult l1_piece(const ExpPiece& piece, int bits) {
  const Interval& iv = piece.interval;
  const ExpSum& g = piece.expr;
  const int budget = budget_for(bits);
  const int wb = work_bits(bits);
  if (iv.is_point()) return {MonomialSum(), zero_enc(bits)};
  if (g.is_constant()) {
    if (iv.hi.is_infinite()) {
      throw Error(ErrorCode::NonIntegrable, "nonzero constant on unbounded " + iv.to_string());
    }
    MonomialSum v = g.constant_value();
    if (auto s = sign(v, budget)) {
      MonomialSum r = (*s < 0 ? -v : v) * iv.length();
      return {r, eval_enclosure(r, bits)};
    }
    return {std::nullopt, abs(eval_enclosure(v, wb)) * iv.length_enclosure(wb)};
  }
  auto signs = rate_signs(g, bits);
  if (iv.hi.is_infinite() && std::any_of(signs.begin(), signs.end(), [](int s) { return s >= 0; })) {
    throw Error(ErrorCode::NonIntegrable, "non-decaying exponential on unbounded " + iv.to_string());
  }
  if (g.is_single_term()) {
    const ExpTerm& t = g.terms().front();
    auto cs = sign(t.coefficient, budget);
    const bool rational_ends = iv.lo.is_rational() && (iv.hi.is_infinite() || iv.hi.is_rational());
    if (cs && t.rate.is_constant() && rational_ends) {
      // |c|/r (e^{r hi} - e^{r lo})
      Rational r = t.rate.constant_part();
      MonomialSum abs_c = *cs < 0 ? -t.coefficient : t.coefficient;
      MonomialSum upper = iv.hi.is_infinite() ? MonomialSum()
                                              : MonomialSum(Monomial::exp(LinearForm::constant(r * iv.hi.rational())));
      MonomialSum lower(Monomial::exp(LinearForm::constant(r * iv.lo.rational())));
      MonomialSum result = abs_c * MonomialSum(Rational(1) / r) * (upper - lower);
      return {result, eval_enclosure(result, bits)};
    }
    Enclosure abs_c = abs(eval_enclosure(t.coefficient, wb));
    Enclosure r = t.rate.value(wb);
    Enclosure upper = iv.hi.is_infinite() ? zero_enc(wb) : exp(r * iv.hi.enclosure(wb));
    return {std::nullopt, abs_c / r * (upper - exp(r * iv.lo.enclosure(wb)))};
  }
  NumSum num(g, wb);
  Enclosure tail = zero_enc(wb);
  Point hi = iv.hi;
  if (hi.is_infinite()) {
    const Rational tol = pow2(-bits / 2);
    Rational start = iv.lo.is_rational() ? iv.lo.rational() : iv.lo.enclosure(wb).upper_rational();
    auto cut = find_cutoff(start, [&](const Enclosure& x) { return num.tail_bound(x); }, tol, wb);
    if (!cut) throw Error(ErrorCode::BudgetExhausted, "no tail cutoff found for " + g.to_string());
    tail = hull(zero_enc(wb), num.tail_bound(Enclosure::point(*cut, wb)));
    hi = Point(*cut);
  }
  Span span = inner_span(iv.lo, hi, wb);
  Enclosure total = abs_integral_cells(num, span.lo, span.hi, bits) + tail;
  for (const auto& s : span.slivers) total = total + hull(zero_enc(wb), sliver_width(s) * num.abs_bound(s));
  return {std::nullopt, total};
}

// ------------------------------------------------------------------ ess sup

Certified sup_single_term(const ExpTerm& t, const Interval& closure, int bits) {
  const int budget = budget_for(bits);
  const int wb = work_bits(bits);
  auto rs = t.rate.sign(budget);
  if (!rs) throw Error(ErrorCode::BudgetExhausted, "sign of rate " + t.rate.to_string() + " undecided");
  const Point& at = *rs < 0 ? closure.lo : closure.hi;
  if (at.is_infinite()) return {std::nullopt, infinite_enc(bits)};
  auto cs = sign(t.coefficient, budget);
  if (cs && at.is_rational()) {
    MonomialSum v = (*cs < 0 ? -t.coefficient : t.coefficient) * MonomialSum(Monomial::exp(t.rate * at.rational()));
    return {v, eval_enclosure(v, bits)};
  }
  return {std::nullopt, abs(eval_enclosure(t.coefficient, wb)) * exp(t.rate.value(wb) * at.enclosure(wb))};
}

// Branch and bound for max |g| over the rational interval [a, b].
Enclosure sup_cells(const NumSum& num, const Rational& a, const Rational& b, int bits) {
  const int wb = num.bits;
  const int max_depth = std::clamp(bits / 4, 32, 96);
  Rational best = std::max(abs(num.point_value(a)).lower_rational(), abs(num.point_value(b)).lower_rational());
  Rational ceiling = best;
  struct Cell {
    Rational a, b;
    int depth;
  };
  std::vector<Cell> cells{{a, b, 0}};
  while (!cells.empty()) {
    std::vector<Cell> next;
    for (const auto& c : cells) {
      if (c.a >= c.b) continue;
      Rational upper = abs(num.range(c.a, c.b)).upper_rational();
      if (upper <= best) continue;
      if (c.depth >= max_depth) {
        ceiling = std::max(ceiling, upper);
        continue;
      }
      Rational m = (c.a + c.b) / 2;
      best = std::max(best, abs(num.point_value(m)).lower_rational());
      next.push_back({c.a, m, c.depth + 1});
      next.push_back({m, c.b, c.depth + 1});
    }
    cells = std::move(next);
  }
  ceiling = std::max(ceiling, best);
  return Enclosure::between(best, ceiling, wb);
}

Certified sup_multi_term(const ExpSum& g, const Interval& closure, int bits) {
  const int wb = work_bits(bits);
  NumSum num(g, wb);
  Point hi = closure.hi;
  Enclosure tail = zero_enc(wb);
  if (hi.is_infinite()) {
    if (!all_rates_negative(g, bits)) return {std::nullopt, infinite_enc(bits)};
    Rational start = closure.lo.is_rational() ? closure.lo.rational() : closure.lo.enclosure(wb).upper_rational();
    Rational floor_value = abs(num.at(closure.lo.enclosure(wb))).lower_rational();
    Rational target = floor_value > 0 ? floor_value : pow2(-bits / 2);
    auto cut = find_cutoff(start, [&](const Enclosure& x) { return num.abs_bound(x); }, target, wb);
    if (!cut) throw Error(ErrorCode::BudgetExhausted, "no cutoff found for " + g.to_string());
    tail = hull(zero_enc(wb), num.abs_bound(Enclosure::point(*cut, wb)));
    hi = Point(*cut);
  }
  Span span = inner_span(closure.lo, hi, wb);
  Enclosure best = max(sup_cells(num, span.lo, span.hi, bits), tail);
  for (const auto& s : span.slivers) best = max(best, hull(zero_enc(wb), abs(num.at(s))));
  return {std::nullopt, best};
}

Certified sup_on(const ExpSum& g, const Interval& closure, int bits) {
  if (g.is_constant()) {
    MonomialSum v = g.constant_value();
    if (auto s = sign(v, budget_for(bits))) {
      MonomialSum a = *s < 0 ? -v : v;
      return {a, eval_enclosure(a, bits)};
    }
    return {std::nullopt, abs(eval_enclosure(v, bits))};
  }
  if (g.is_single_term()) return sup_single_term(g.terms().front(), closure, bits);
  return sup_multi_term(g, closure, bits);
}

// ----------------------------------------------------------------- Taylor

// Taylor coefficients (up to `order`) of u/(1+u), u = sigma*g, about the base
// point x0 (a point or a whole cell). `u0_range`, when given, replaces the
// order-0 coefficient of u by a sharper enclosure of its range.
std::vector<Enclosure> saturated_series(const NumSum& num, int sigma, const Enclosure& x0, int order,
                                        const std::optional<Enclosure>& u0_range) {
  const int wb = num.bits;
  std::vector<Enclosure> u(order + 1, zero_enc(wb));
  for (const auto& t : num.terms) {
    if (t.constant) {
      u[0] = u[0] + t.coef;
      continue;
    }
    Enclosure e = t.coef * exp(t.rate * x0);
    for (int k = 0; k <= order; ++k) {
      u[k] = u[k] + e;
      e = e * t.rate / Enclosure::point(Rational(k + 1), wb);
    }
  }
  if (sigma < 0) {
    for (auto& v : u) v = -v;
  }
  if (u0_range) u[0] = u[0].intersects(*u0_range) ? intersect(u[0], *u0_range) : *u0_range;
  u[0] = max(u[0], zero_enc(wb));
  Enclosure b0 = Enclosure::point(Rational(1), wb) + u[0];
  std::vector<Enclosure> h(order + 1, zero_enc(wb));
  h[0] = u[0] / b0;
  for (int k = 1; k <= order; ++k) {
    Enclosure acc = u[k];
    for (int j = 0; j < k; ++j) acc = acc - h[j] * u[k - j];
    h[k] = acc / b0;
  }
  return h;
}

Enclosure taylor_cell(const NumSum& num, int sigma, const Rational& a, const Rational& b, const Enclosure& range,
                      int order) {
  const int wb = num.bits;
  const Rational half = (b - a) / 2;
  const Rational mid = (a + b) / 2;
  Enclosure signed_range = sigma < 0 ? -range : range;
  auto at_mid = saturated_series(num, sigma, Enclosure::point(mid, wb), order, std::nullopt);
  auto over_cell = saturated_series(num, sigma, Enclosure::between(a, b, wb), order + 1, signed_range);
  Enclosure total = zero_enc(wb);
  Rational hp = half;  // half^{k+1}
  for (int k = 0; k <= order; ++k) {
    if (k % 2 == 0) total = total + at_mid[k] * Enclosure::point(2 * hp / (k + 1), wb);
    hp *= half;
  }
  // hp == half^{order+2}
  Rational bound = upper_magnitude(over_cell[order + 1]) * 2 * hp / (order + 2);
  return total + Enclosure::between(-bound, bound, wb);
}

Enclosure saturated_cells(const NumSum& num, const Rational& a, const Rational& b, int bits) {
  const int wb = num.bits;
  const Rational tol = pow2(-bits / 2);
  const Rational length = b - a;
  const int order = std::clamp(bits / 8, 12, 40);
  const int sign_depth = bits / 2 + 8;
  const int taylor_depth = 60;
  Enclosure total = zero_enc(wb);
  struct Cell {
    Rational a, b;
    int depth;
  };
  std::vector<Cell> stack{{a, b, 0}};
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    if (c.a >= c.b) continue;
    const Rational w = c.b - c.a;
    Enclosure range = num.range(c.a, c.b);
    Enclosure crude = Enclosure::point(w, wb) * saturate(abs(range));
    bool accept = false;
    Enclosure contribution = crude;
    if (!range.contains_zero()) {
      Enclosure t = taylor_cell(num, range.is_negative() ? -1 : 1, c.a, c.b, range, order);
      contribution = t.intersects(crude) ? intersect(t, crude) : t;
      accept = width_at_most(contribution, tol * w / length) || c.depth >= taylor_depth;
    } else {
      contribution = hull(zero_enc(wb), crude);
      accept = c.depth >= sign_depth;
    }
    if (accept) {
      total = total + contribution;
    } else {
      Rational m = (c.a + c.b) / 2;
      stack.push_back({m, c.b, c.depth + 1});
      stack.push_back({c.a, m, c.depth + 1});
    }
  }
  return total;
}

NormResult rho_piece(const ExpPiece& piece, int bits) {
  const Interval& iv = piece.interval;
  const ExpSum& g = piece.expr;
  if (iv.is_point()) return {MonomialSum(), zero_enc(bits)};
  if (g.is_constant()) {
    MonomialSum v = g.constant_value();
    if (v.is_rational()) {
      Rational a = abs(v.rational_value());
      MonomialSum r = MonomialSum(Rational(a / (1 + a))) * iv.length();
      return {r, eval_enclosure(r, bits)};
    }
    const int wb = work_bits(bits);
    return {std::nullopt, saturate(abs(eval_enclosure(v, wb))) * iv.length_enclosure(wb)};
  }
  if (g.is_single_term()) {
    return {std::nullopt, detail::saturated_integral_closed_form(g.terms().front(), iv.lo, iv.hi, bits)};
  }
  return {std::nullopt, detail::saturated_integral_quadrature(g, iv.lo, iv.hi, bits)};
}

Certified finish(std::optional<MonomialSum> exact, const Enclosure& enclosure, int bits) {
  if (exact) return {exact, eval_enclosure(*exact, bits)};
  return {std::nullopt, enclosure};
}

}  // namespace

namespace detail {

Enclosure saturated_integral_quadrature(const ExpSum& g, const Point& a, const Point& b, int bits) {
  const int wb = work_bits(bits);
  NumSum num(g, wb);
  Span span = inner_span(a, b, wb);
  Enclosure total = saturated_cells(num, span.lo, span.hi, bits);
  for (const auto& s : span.slivers) {
    total = total + hull(zero_enc(wb), sliver_width(s) * saturate(abs(num.at(s))));
  }
  return total;
}

Enclosure saturated_integral_closed_form(const ExpTerm& t, const Point& a, const Point& b, int bits) {
  // d/dx (1/r) ln(1 + |c| e^{r x}) = |c| e^{r x} / (1 + |c| e^{r x})
  const int wb = work_bits(bits);
  Enclosure abs_c = abs(eval_enclosure(t.coefficient, wb));
  Enclosure r = t.rate.value(wb);
  auto primitive = [&](const Point& x) { return log1p(abs_c * exp(r * x.enclosure(wb))); };
  return (primitive(b) - primitive(a)) / r;
}

}  // namespace detail

SuperlevelSet superlevel_set(const PwExpFun& f, const MonomialSum& eps, int bits) {
  auto es = sign(eps, budget_for(bits));
  if (!es || *es <= 0) throw Error(ErrorCode::InvalidArgument, "threshold must be positive: " + eps.to_string());
  Enclosure eps_enc = eval_enclosure(eps, work_bits(bits));
  std::optional<MonomialSum> exact = MonomialSum();
  Enclosure total = zero_enc(work_bits(bits));
  SuperlevelSet out;
  for (const auto& p : f.pieces()) {
    PieceResult r = superlevel_piece(p, eps, eps_enc, bits);
    if (exact && r.exact) {
      *exact += *r.exact;
    } else {
      exact.reset();
    }
    total = total + r.enclosure;
    out.inner.insert(out.inner.end(), r.inner.begin(), r.inner.end());
  }
  out.measure = finish(exact, total, bits);
  return out;
}

Certified superlevel_measure(const PwExpFun& f, const MonomialSum& eps, int bits) {
  return superlevel_set(f, eps, bits).measure;
}

Certified l1_norm(const PwExpFun& f, int bits) {
  std::optional<MonomialSum> exact = MonomialSum();
  Enclosure total = zero_enc(work_bits(bits));
  for (const auto& p : f.pieces()) {
    NormResult r = l1_piece(p, bits);
    if (exact && r.exact) {
      *exact += *r.exact;
    } else {
      exact.reset();
    }
    total = total + r.enclosure;
  }
  return finish(exact, total, bits);
}

Certified l1_distance(const PwExpFun& f, const PwExpFun& g, int bits) {
  return l1_norm(linear_combine(1, f, -1, g), bits);
}

Certified ess_sup(const PwExpFun& f, const std::vector<Interval>& region, int bits) {
  const Interval dom = f.domain_interval();
  std::vector<Interval> parts;
  for (const auto& r : region) {
    Interval c = intersect(r, dom);
    if (!c.is_empty() && c.has_positive_length()) parts.push_back(c);
  }
  if (parts.empty()) throw Error(ErrorCode::EmptyRegion, "region has no positive-measure part in the domain");
  const int budget = budget_for(bits);
  std::optional<MonomialSum> exact = MonomialSum();
  Enclosure best = zero_enc(bits);
  for (const auto& p : f.pieces()) {
    if (p.interval.is_point()) continue;
    for (const auto& part : parts) {
      Interval j = intersect(p.interval, part);
      if (j.is_empty() || !j.has_positive_length()) continue;
      Interval closure{j.lo, j.hi, true, !j.hi.is_infinite()};
      Certified s = sup_on(p.expr, closure, bits);
      if (exact && s.exact) {
        Ordering o = compare(*s.exact, *exact, budget);
        if (o == Ordering::Greater) {
          exact = s.exact;
        } else if (o == Ordering::Indeterminate) {
          exact.reset();
        }
      } else {
        exact.reset();
      }
      best = max(best, s.enclosure);
    }
  }
  return finish(exact, best, bits);
}

Certified ess_sup(const PwExpFun& f, int bits) { return ess_sup(f, {f.domain_interval()}, bits); }

Certified rho(const PwExpFun& f, const PwExpFun& g, int bits) {
  if (f.domain() != Domain::UnitInterval || g.domain() != Domain::UnitInterval) {
    throw Error(ErrorCode::DomainMismatch, "rho is defined on the unit interval only");
  }
  PwExpFun d = linear_combine(1, f, -1, g);
  std::optional<MonomialSum> exact = MonomialSum();
  Enclosure total = zero_enc(work_bits(bits));
  for (const auto& p : d.pieces()) {
    NormResult r = rho_piece(p, bits);
    if (exact && r.exact) {
      *exact += *r.exact;
    } else {
      exact.reset();
    }
    total = total + r.enclosure;
  }
  return finish(exact, total, bits);
}

}  // namespace convlab
