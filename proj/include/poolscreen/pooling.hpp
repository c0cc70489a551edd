#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "poolscreen/rng.hpp"
#include "poolscreen/types.hpp"

namespace poolscreen {

// Realized first-stage incidence between individuals and pools, stored
// individual-major (the decode pass iterates individuals). Each row is a
// duplicate-free ascending list of pool indices; rows may be empty (an
// individual in zero pools is legal and is always a second-stage suspect).
struct PoolingDesign {
  std::uint32_t individuals = 0;
  std::uint32_t pools = 0;
  std::vector<std::uint32_t> offsets;   // individuals + 1 entries
  std::vector<std::uint32_t> pool_ids;  // rows concatenated

  std::span<const std::uint32_t> membership(std::uint32_t individual) const {
    return {pool_ids.data() + offsets[individual],
            pool_ids.data() + offsets[individual + 1]};
  }
  std::size_t total_incidence() const { return pool_ids.size(); }
};

// Builds a design from explicit membership rows (tests, fixtures).
PoolingDesign make_design(std::uint32_t pools,
                          const std::vector<std::vector<std::uint32_t>>& rows);

// Throws std::invalid_argument if the structure is malformed (offsets not
// monotone, rows unsorted/duplicated, pool ids out of range).
void check_design(const PoolingDesign& design);

// Samples one design:
//   ftp: each pool independently draws a uniform b-subset of individuals,
//   fti: each individual independently draws a uniform d-subset of pools,
//   rp:  each (individual, pool) pair is included with probability a.
// Requires integral m (and b/d); deterministic given the rng state.
PoolingDesign sample_design(Scheme scheme, std::uint32_t n, const DesignParams& params,
                            Rng& rng);

struct DesignStats {
  std::vector<std::size_t> individual_degree_histogram;  // index = degree
  std::vector<std::size_t> pool_degree_histogram;
  std::size_t total_incidence = 0;
};

DesignStats design_stats(const PoolingDesign& design);

// Text dump, one line per individual: "index: pool,pool,..." (bare "index:"
// for an empty row).
void write_design(std::ostream& os, const PoolingDesign& design);

// Parses the write_design format; the pool count is not recorded in the
// dump, so the caller supplies it.
PoolingDesign read_design(std::istream& is, std::uint32_t pools);

}  // namespace poolscreen
