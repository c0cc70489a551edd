#include "poolscreen/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace poolscreen {

namespace {

PoolingDesign from_rows(std::uint32_t n, std::uint32_t m,
                        std::vector<std::uint32_t>&& flat,
                        std::vector<std::uint32_t>&& offsets) {
  PoolingDesign d;
  d.individuals = n;
  d.pools = m;
  d.offsets = std::move(offsets);
  d.pool_ids = std::move(flat);
  return d;
}

// Partial Fisher-Yates: after the call, perm[0..take) is a uniform ordered
// sample without replacement from the whole array. The array is left
// permuted, which does not bias later draws.
void draw_prefix(std::vector<std::uint32_t>& perm, std::uint32_t take, Rng& rng) {
  const auto size = static_cast<std::uint32_t>(perm.size());
  for (std::uint32_t t = 0; t < take; ++t) {
    std::uniform_int_distribution<std::uint32_t> pick(t, size - 1);
    std::swap(perm[t], perm[pick(rng)]);
  }
}

PoolingDesign sample_ftp(std::uint32_t n, std::uint32_t m, std::uint32_t b, Rng& rng) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);

  // Pool-major picks, then a counting sort into individual-major rows.
  // Pools are visited in ascending index order, so rows come out sorted.
  std::vector<std::uint32_t> picks(static_cast<std::size_t>(m) * b);
  for (std::uint32_t j = 0; j < m; ++j) {
    draw_prefix(perm, b, rng);
    std::copy_n(perm.begin(), b, picks.begin() + static_cast<std::size_t>(j) * b);
  }

  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (std::uint32_t i : picks) ++offsets[i + 1];
  for (std::uint32_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<std::uint32_t> flat(picks.size());
  for (std::uint32_t j = 0; j < m; ++j)
    for (std::uint32_t t = 0; t < b; ++t)
      flat[cursor[picks[static_cast<std::size_t>(j) * b + t]]++] = j;
  return from_rows(n, m, std::move(flat), std::move(offsets));
}

PoolingDesign sample_fti(std::uint32_t n, std::uint32_t m, std::uint32_t d, Rng& rng) {
  std::vector<std::uint32_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0u);

  std::vector<std::uint32_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> flat(static_cast<std::size_t>(n) * d);
  for (std::uint32_t i = 0; i < n; ++i) {
    draw_prefix(perm, d, rng);
    auto row = flat.begin() + static_cast<std::size_t>(i) * d;
    std::copy_n(perm.begin(), d, row);
    std::sort(row, row + d);
    offsets[i + 1] = offsets[i] + d;
  }
  return from_rows(n, m, std::move(flat), std::move(offsets));
}

PoolingDesign sample_rp(std::uint32_t n, std::uint32_t m, double a, Rng& rng) {
  std::vector<std::uint32_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> flat;
  flat.reserve(static_cast<std::size_t>(static_cast<double>(n) * m * a * 1.2) + 16);

  if (a == 1.0) {
    flat.resize(static_cast<std::size_t>(n) * m);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::iota(flat.begin() + static_cast<std::size_t>(i) * m,
                flat.begin() + static_cast<std::size_t>(i + 1) * m, 0u);
      offsets[i + 1] = offsets[i] + m;
    }
    return from_rows(n, m, std::move(flat), std::move(offsets));
  }

  // Geometric skip sampling: the gap to the next included pool is
  // floor(log(u) / log(1-a)) with u uniform on (0,1].
  const double log_miss = std::log1p(-a);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t j = 0;
    while (j < m) {
      const double u = 1.0 - unit(rng);  // (0,1]
      const double gap = std::floor(std::log(u) / log_miss);
      if (!(gap < static_cast<double>(m - j))) break;
      j += static_cast<std::uint32_t>(gap);
      flat.push_back(j);
      ++j;
    }
    offsets[i + 1] = static_cast<std::uint32_t>(flat.size());
  }
  return from_rows(n, m, std::move(flat), std::move(offsets));
}

}  // namespace

PoolingDesign make_design(std::uint32_t pools,
                          const std::vector<std::vector<std::uint32_t>>& rows) {
  PoolingDesign d;
  d.individuals = static_cast<std::uint32_t>(rows.size());
  d.pools = pools;
  d.offsets.reserve(rows.size() + 1);
  d.offsets.push_back(0);
  for (const auto& row : rows) {
    d.pool_ids.insert(d.pool_ids.end(), row.begin(), row.end());
    d.offsets.push_back(static_cast<std::uint32_t>(d.pool_ids.size()));
  }
  check_design(d);
  return d;
}

void check_design(const PoolingDesign& design) {
  if (design.offsets.size() != design.individuals + 1 || design.offsets.front() != 0 ||
      design.offsets.back() != design.pool_ids.size())
    throw std::invalid_argument("design offsets malformed");
  for (std::uint32_t i = 0; i < design.individuals; ++i) {
    if (design.offsets[i] > design.offsets[i + 1])
      throw std::invalid_argument("design offsets not monotone");
    auto row = design.membership(i);
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (row[t] >= design.pools) throw std::invalid_argument("pool index out of range");
      if (t > 0 && row[t] <= row[t - 1])
        throw std::invalid_argument("membership rows must be strictly ascending");
    }
  }
}

PoolingDesign sample_design(Scheme scheme, std::uint32_t n, const DesignParams& params,
                            Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one individual");
  validate_realized_params(n, params);
  const auto m = static_cast<std::uint32_t>(params.m);
  switch (scheme) {
    case Scheme::ftp: return sample_ftp(n, m, static_cast<std::uint32_t>(params.secondary), rng);
    case Scheme::fti: return sample_fti(n, m, static_cast<std::uint32_t>(params.secondary), rng);
    case Scheme::rp: return sample_rp(n, m, params.secondary, rng);
  }
  throw std::logic_error("unreachable");
}

DesignStats design_stats(const PoolingDesign& design) {
  DesignStats stats;
  stats.total_incidence = design.pool_ids.size();

  std::vector<std::size_t> pool_degree(design.pools, 0);
  for (std::uint32_t p : design.pool_ids) ++pool_degree[p];

  std::size_t max_ind = 0, max_pool = 0;
  for (std::uint32_t i = 0; i < design.individuals; ++i)
    max_ind = std::max<std::size_t>(max_ind, design.offsets[i + 1] - design.offsets[i]);
  for (std::size_t deg : pool_degree) max_pool = std::max(max_pool, deg);

  stats.individual_degree_histogram.assign(max_ind + 1, 0);
  for (std::uint32_t i = 0; i < design.individuals; ++i)
    ++stats.individual_degree_histogram[design.offsets[i + 1] - design.offsets[i]];
  stats.pool_degree_histogram.assign(max_pool + 1, 0);
  for (std::size_t deg : pool_degree) ++stats.pool_degree_histogram[deg];
  return stats;
}

void write_design(std::ostream& os, const PoolingDesign& design) {
  for (std::uint32_t i = 0; i < design.individuals; ++i) {
    os << i << ':';
    auto row = design.membership(i);
    for (std::size_t t = 0; t < row.size(); ++t) os << (t == 0 ? " " : ",") << row[t];
    os << '\n';
  }
}

PoolingDesign read_design(std::istream& is, std::uint32_t pools) {
  std::vector<std::vector<std::uint32_t>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("design line missing ':'");
    if (std::stoull(line.substr(0, colon)) != rows.size())
      throw std::invalid_argument("design lines must be in individual order");
    std::vector<std::uint32_t> row;
    std::string rest = line.substr(colon + 1);
    std::istringstream cells(rest);
    std::string cell;
    while (std::getline(cells, cell, ','))
      if (!cell.empty() && cell != " ") row.push_back(static_cast<std::uint32_t>(std::stoul(cell)));
    rows.push_back(std::move(row));
  }
  auto design = make_design(pools, rows);
  return design;
}

}  // namespace poolscreen
