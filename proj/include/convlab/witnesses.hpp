#pragma once

// Named families of sequences n -> PwExpFun with audited closed-form
// metadata, addressable through FamilySpec strings such as "nup-gen:c=1".

#include <cstddef>
#include <string>
#include <vector>

#include "convlab/seqmodes.hpp"

namespace convlab {

/// n = 2^generation + offset with 0 <= offset < 2^generation.
struct DyadicPosition {
  unsigned long generation = 0;
  Integer offset;
};
DyadicPosition dyadic_split(const Index& n);

/// i(k, n) = 2^{k-1} (2n - 1): a bijection from pairs onto the positive
/// integers, increasing in each argument.
Index interleave_index(long k, const Index& n);
/// The k with generation = i(k, m) for some m, or 0 for generation 0.
long generation_owner(unsigned long generation);

Interval typewriter_window(const Index& n);
PwExpFun typewriter(const Index& n);
/// typewriter(n) when floor(log2 n) is a generation owned by k, else 0.
PwExpFun typewriter_split(long k, const Index& n);
bool typewriter_split_live(long k, const Index& n);

/// [1/(n+1), 1/n].
Interval shrink_set(const Index& n);
PwExpFun shrink_interval(const Index& n);
PwExpFun shrink_split(long k, const Index& n);

/// e^{-c x} on the typewriter window.
PwExpFun measure_gen(std::size_t c, const Index& n);
/// e^{-c n[(n+1)x - 1]} on [1/(n+1), 1/n]; e^{cn} sits in the coefficient.
PwExpFun nup_gen(std::size_t c, const Index& n);
/// n^{-c} on [0, e^n] (half-line).
PwExpFun l1_gen(std::size_t c, const Index& n);
/// (1/n) on [0, n] (half-line).
PwExpFun flat_bump(const Index& n);
/// Block M of row N: integer endpoints, length M; rows tile [0, +inf).
Interval block_interval(long row, long m);
/// (1/n) on block n of row k + n - 1 (half-line).
PwExpFun traveling_bump(long k, const Index& n);

enum class FamilyId {
  Typewriter,
  TypewriterSplit,
  Shrink,
  ShrinkSplit,
  MeasureGen,
  NupGen,
  L1Gen,
  FlatBump,
  TravelingBump,
};

struct FamilySpec {
  FamilyId id = FamilyId::Typewriter;
  long k = 1;
  std::size_t c = 1;

  /// Throws InvalidArgument on bad parameters.
  void validate() const;
  bool uses_k() const;
  bool uses_c() const;
  Domain domain() const;
  std::string to_string() const;
};

std::string_view family_name(FamilyId id);
/// "name" or "name:key=value,...". Throws UnknownFamily or InvalidArgument.
FamilySpec parse_family(const std::string& text);
/// Every family id.
std::vector<FamilyId> family_ids();
/// One default instance of every family.
std::vector<FamilySpec> catalog();

PwExpFun family_member(const FamilySpec& spec, const Index& n);
/// The family as an audited FunSeq.
FunSeq make_family(const FamilySpec& spec);

}  // namespace convlab
