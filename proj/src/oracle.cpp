#include "poolscreen/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace poolscreen {

namespace {

// Exact binomial coefficient as long double (inputs are tiny here).
long double choose_ld(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0.0L;
  r = std::min(r, n - r);
  long double v = 1.0L;
  for (std::uint64_t i = 0; i < r; ++i) v = v * static_cast<long double>(n - i) / (i + 1);
  return v;
}

// Ascending index combination -> bitmask, with lexicographic iteration.
struct CombinationSet {
  std::uint32_t universe;
  std::uint32_t size;
  std::vector<std::uint32_t> indices;

  CombinationSet(std::uint32_t universe_, std::uint32_t size_)
      : universe(universe_), size(size_) {
    reset();
  }
  void reset() {
    indices.resize(size);
    for (std::uint32_t i = 0; i < size; ++i) indices[i] = i;
  }
  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (std::uint32_t i : indices) m |= 1ULL << i;
    return m;
  }
  bool next() {
    for (std::int32_t i = static_cast<std::int32_t>(size) - 1; i >= 0; --i) {
      if (indices[i] < universe - size + static_cast<std::uint32_t>(i)) {
        ++indices[i];
        for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < size; ++j)
          indices[j] = indices[j - 1] + 1;
        return true;
      }
    }
    return false;
  }
};

std::vector<std::uint64_t> all_subset_masks(std::uint32_t universe, std::uint32_t size) {
  std::vector<std::uint64_t> masks;
  CombinationSet comb(universe, size);
  do masks.push_back(comb.mask());
  while (comb.next());
  return masks;
}

std::uint64_t checked_states(long double designs, long double infections,
                             std::uint64_t budget) {
  const long double states = designs * infections;
  if (!(states <= static_cast<long double>(budget)))
    throw budget_error("enumeration budget exceeded");
  return static_cast<std::uint64_t>(states + 0.5L);
}

// Sum of T = m + |S| over all (design, infection) pairs, with pools given as
// masks over individuals. Suspects are everyone outside the union of
// negative pools; infected individuals never sit in a negative pool.
std::uint64_t tally_ftp(const std::vector<std::uint64_t>& pools,
                        const std::vector<std::uint64_t>& infections, std::uint32_t n,
                        std::uint32_t m) {
  std::uint64_t sum = 0;
  for (std::uint64_t inf : infections) {
    std::uint64_t cleared = 0;
    for (std::uint64_t pool : pools)
      if ((pool & inf) == 0) cleared |= pool;
    sum += m + n - static_cast<std::uint32_t>(std::popcount(cleared));
  }
  return sum;
}

EnumerationResult enumerate_ftp(std::uint32_t n, std::uint32_t k, std::uint32_t m,
                                std::uint32_t b, std::uint64_t budget) {
  if (n > 63) throw std::invalid_argument("ftp enumeration supports n <= 63");
  const std::uint64_t states =
      checked_states(std::pow(choose_ld(n, b), static_cast<long double>(m)), choose_ld(n, k),
                     budget);
  const auto infections = all_subset_masks(n, k);

  std::uint64_t sum = 0;
  if (m == 1) {
    // Single pool: stream combinations instead of building a design table.
    CombinationSet pool(n, b);
    std::vector<std::uint64_t> one(1);
    do {
      one[0] = pool.mask();
      sum += tally_ftp(one, infections, n, m);
    } while (pool.next());
  } else {
    const auto pool_masks = all_subset_masks(n, b);
    std::vector<std::size_t> digit(m, 0);
    std::vector<std::uint64_t> pools(m, pool_masks[0]);
    for (;;) {
      sum += tally_ftp(pools, infections, n, m);
      std::uint32_t pos = m;
      while (pos > 0) {
        --pos;
        if (++digit[pos] < pool_masks.size()) {
          pools[pos] = pool_masks[digit[pos]];
          break;
        }
        digit[pos] = 0;
        pools[pos] = pool_masks[0];
        if (pos == 0) return {static_cast<long double>(sum) / states, states};
      }
    }
  }
  return {static_cast<long double>(sum) / states, states};
}

EnumerationResult enumerate_fti(std::uint32_t n, std::uint32_t k, std::uint32_t m,
                                std::uint32_t d, std::uint64_t budget) {
  if (m > 63) throw std::invalid_argument("fti enumeration supports m <= 63");
  const std::uint64_t states =
      checked_states(std::pow(choose_ld(m, d), static_cast<long double>(n)), choose_ld(n, k),
                     budget);
  const auto choice_masks = all_subset_masks(m, d);
  const auto infections = all_subset_masks(n, k);

  std::vector<std::size_t> digit(n, 0);
  std::vector<std::uint64_t> rows(n, choice_masks[0]);
  std::uint64_t sum = 0;
  for (;;) {
    for (std::uint64_t inf : infections) {
      std::uint64_t positive = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        if (inf >> i & 1) positive |= rows[i];
      std::uint32_t suspects = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        if ((rows[i] & ~positive) == 0) ++suspects;
      sum += m + suspects;
    }
    std::uint32_t pos = n;
    bool carried_out = true;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < choice_masks.size()) {
        rows[pos] = choice_masks[digit[pos]];
        carried_out = false;
        break;
      }
      digit[pos] = 0;
      rows[pos] = choice_masks[0];
    }
    if (carried_out && pos == 0) break;
  }
  return {static_cast<long double>(sum) / states, states};
}

EnumerationResult enumerate_rp(std::uint32_t n, std::uint32_t k, std::uint32_t m, double a,
                               std::uint64_t budget) {
  const std::uint32_t cells = n * m;
  const std::uint64_t states = checked_states(
      std::pow(2.0L, static_cast<long double>(cells)), choose_ld(n, k), budget);
  if (cells > 62) throw std::invalid_argument("rp enumeration supports n*m <= 62");
  const auto infections = all_subset_masks(n, k);

  // Pattern weight depends only on the incidence popcount.
  std::vector<long double> weight(cells + 1);
  for (std::uint32_t c = 0; c <= cells; ++c)
    weight[c] = std::pow(static_cast<long double>(a), c) *
                std::pow(1.0L - static_cast<long double>(a), cells - c);

  const std::uint64_t patterns = 1ULL << cells;
  const std::uint64_t row_mask = (1ULL << m) - 1;
  long double acc = 0.0L, weight_sum = 0.0L;
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    const long double w = weight[std::popcount(bits)];
    weight_sum += w;
    std::uint64_t tests = 0;
    for (std::uint64_t inf : infections) {
      std::uint64_t positive = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        if (inf >> i & 1) positive |= bits >> (i * m) & row_mask;
      std::uint32_t suspects = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        if ((bits >> (i * m) & row_mask & ~positive) == 0) ++suspects;
      tests += m + suspects;
    }
    acc += w * static_cast<long double>(tests);
  }
  // weight_sum is 1 per infection up to rounding; dividing by it compensates.
  return {acc / (weight_sum * static_cast<long double>(infections.size())), states};
}

}  // namespace

EnumerationResult enumerate_expected_tests(const ProblemInstance& inst, Scheme scheme,
                                           const DesignParams& params, std::uint64_t budget) {
  if (inst.model() != InfectionModel::fixed_k)
    throw std::invalid_argument("enumeration requires a fixed-k instance");
  const auto n = static_cast<std::uint32_t>(inst.n());
  validate_realized_params(n, params);
  const auto k = static_cast<std::uint32_t>(inst.k());
  const auto m = static_cast<std::uint32_t>(params.m);
  switch (scheme) {
    case Scheme::ftp:
      return enumerate_ftp(n, k, m, static_cast<std::uint32_t>(params.secondary), budget);
    case Scheme::fti:
      return enumerate_fti(n, k, m, static_cast<std::uint32_t>(params.secondary), budget);
    case Scheme::rp:
      return enumerate_rp(n, k, m, params.secondary, budget);
  }
  throw std::logic_error("unreachable");
}

}  // namespace poolscreen
