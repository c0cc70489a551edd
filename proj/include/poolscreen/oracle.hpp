#pragma once

#include <cstdint>

#include "poolscreen/types.hpp"

namespace poolscreen {

struct EnumerationResult {
  long double expected_total_tests = 0.0L;
  std::uint64_t state_count = 0;  // design-space size times infection-space size
};

// Ground-truth E[T] for tiny fixed-k instances by exhausting the design and
// infection spaces:
//   ftp: C(n,b)^m designs,  fti: C(m,d)^n designs,  rp: 2^(n*m) incidence
// patterns weighted by a^c (1-a)^(nm-c); infections are the C(n,k) k-subsets.
// Designs are visited in lexicographic subset-rank order (the result does
// not depend on it). Throws budget_error when the state count would exceed
// `budget`; requires a fixed-k instance and integral params.
EnumerationResult enumerate_expected_tests(const ProblemInstance& inst, Scheme scheme,
                                           const DesignParams& params,
                                           std::uint64_t budget = 10'000'000);

}  // namespace poolscreen
