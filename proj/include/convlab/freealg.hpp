#pragma once

// Polynomials without constant term applied to generator families, their
// collapsed phi * indicator form, linear combinations of sequences and
// finite-section independence ranks.

#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "convlab/witnesses.hpp"

namespace convlab {

using MultiIndex = std::vector<unsigned>;

/// sum_j alpha_j u^j over nonzero multi-indices with nonzero rational alpha_j.
class MultiIndexPoly {
 public:
  /// Drops zero coefficients; throws InvalidArgument when nothing remains, a
  /// multi-index has the wrong length, or the constant term is present.
  MultiIndexPoly(std::size_t variables, std::map<MultiIndex, Rational> terms);

  std::size_t variables() const { return variables_; }
  const std::map<MultiIndex, Rational>& terms() const { return terms_; }
  unsigned degree() const;
  std::string to_string() const;

 private:
  std::size_t variables_;
  std::map<MultiIndex, Rational> terms_;
};

/// w -> sum_j alpha_j e^{-(c.j) w}.
struct ExponentSumFn {
  std::vector<ExpTerm> terms;
  /// A nonzero exponential sum with m distinct rates has at most m - 1 real zeros.
  std::size_t max_real_zeros = 0;

  ExpSum as_expsum() const { return ExpSum::from_terms(terms); }
};

/// Throws InvalidArgument unless c holds P.variables() distinct basis symbols.
ExponentSumFn phi(const std::vector<std::size_t>& c, const MultiIndexPoly& p);

/// P(F(c_1,n), ..., F(c_N,n)) kept as (phi or scalar) times an indicator.
struct CollapsedForm {
  FamilyId family = FamilyId::MeasureGen;
  Index n;
  /// measure-gen: phi in x; nup-gen: phi in w = n[(n+1)x - 1].
  ExponentSumFn phi;
  /// l1-gen: sum_j alpha_j n^{-c.j}.
  MonomialSum scalar;
  PwExpFun indicator;

  /// The collapsed pair as a function of x.
  PwExpFun function() const;
};

/// Throws UnsupportedFamily outside measure-gen, nup-gen, l1-gen.
CollapsedForm apply_polynomial(const MultiIndexPoly& p, FamilyId family, const std::vector<std::size_t>& c,
                               const Index& n);
/// Same element through pwfun products, powers and sums.
PwExpFun expand_polynomial(const MultiIndexPoly& p, FamilyId family, const std::vector<std::size_t>& c,
                           const Index& n);
/// Nonvanishing of the collapsed element, decided at a rational interior
/// point of its support.
NonzeroCertificate certify_collapsed_nonzero(const CollapsedForm& form);

/// n -> P(F(c_1,n), ..., F(c_N,n)) with audited metadata.
FunSeq algebra_element(const MultiIndexPoly& p, FamilyId family, const std::vector<std::size_t>& c);

/// Coordinate-wise sum lambda_i * seq_i. With disjoint_supports the sup norm,
/// support measure and L1 norm metadata combine exactly, else as bounds.
FunSeq linear_combo(const std::vector<MonomialSum>& lambdas, const std::vector<FunSeq>& seqs,
                    bool disjoint_supports = false);

struct RankWitness {
  long k = 0;
  Index n;
  Rational x;
};

struct RankResult {
  long rank = 0;
  std::vector<RankWitness> witnesses;
  bool used_matrix_rank = false;
  std::string certificate;
};

/// Rank of {family(1), ..., family(k_max)}: full when each member owns a
/// coordinate (n_k, x_k) where every other member vanishes; otherwise the
/// exact rank of the evaluation matrix on rational sample points.
RankResult independence_rank(const std::function<FunSeq(long)>& family, long k_max, long coord_budget);

/// Coefficients uniform on {-5..5} \ {0}, at most `max_terms` multi-indices
/// of total degree 1..max_degree in 1..max_vars variables.
MultiIndexPoly random_polynomial(std::mt19937_64& rng, std::size_t max_vars = 3, unsigned max_degree = 4,
                                 std::size_t max_terms = 6);
/// `count` distinct symbols drawn from the square roots of the first primes.
std::vector<std::size_t> random_symbols(std::mt19937_64& rng, std::size_t count);

}  // namespace convlab
