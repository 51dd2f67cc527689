#pragma once

#include "convlab/enclosure.hpp"
#include "oracle.hpp"

inline bool agrees(const convlab::Enclosure& e, const oracle::Range& r) {
  return e.lower_rational() <= r.hi && r.lo <= e.upper_rational();
}
