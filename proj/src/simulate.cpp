#include "poolscreen/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace poolscreen {

InfectionOutcome draw_infected(const ProblemInstance& inst, Rng& rng) {
  InfectionOutcome out;
  const auto n = static_cast<std::uint32_t>(inst.n());
  if (inst.model() == InfectionModel::fixed_k) {
    const auto k = static_cast<std::uint32_t>(inst.k());
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::uint32_t t = 0; t < k; ++t) {
      std::uniform_int_distribution<std::uint32_t> pick(t, n - 1);
      std::swap(perm[t], perm[pick(rng)]);
    }
    out.infected.assign(perm.begin(), perm.begin() + k);
    std::sort(out.infected.begin(), out.infected.end());
  } else {
    const double p = inst.p();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::uint32_t i = 0; i < n; ++i)
      if (unit(rng) < p) out.infected.push_back(i);
  }
  return out;
}

StageOneResult run_stage_one(const PoolingDesign& design, const InfectionOutcome& infection) {
  StageOneResult result;
  result.pool_positive.assign(design.pools, 0);
  for (std::uint32_t i : infection.infected)
    for (std::uint32_t p : design.membership(i)) result.pool_positive[p] = 1;
  return result;
}

std::vector<std::uint32_t> decode_suspects(const PoolingDesign& design,
                                           const StageOneResult& stage1) {
  if (stage1.pool_positive.size() != design.pools)
    throw std::invalid_argument("stage-1 outcome size does not match the design");
  std::vector<std::uint32_t> suspects;
  for (std::uint32_t i = 0; i < design.individuals; ++i) {
    bool cleared = false;
    for (std::uint32_t p : design.membership(i)) {
      if (!stage1.pool_positive[p]) {
        cleared = true;
        break;
      }
    }
    if (!cleared) suspects.push_back(i);
  }
  return suspects;
}

TwoStageResult run_two_stage(const PoolingDesign& design, const InfectionOutcome& infection) {
  TwoStageResult result;
  const StageOneResult stage1 = run_stage_one(design, infection);
  result.suspects = decode_suspects(design, stage1);
  result.identified_infected.clear();
  std::set_intersection(result.suspects.begin(), result.suspects.end(),
                        infection.infected.begin(), infection.infected.end(),
                        std::back_inserter(result.identified_infected));
  result.stage1_tests = design.pools;
  result.stage2_tests = static_cast<std::uint32_t>(result.suspects.size());
  result.total_tests = static_cast<std::uint64_t>(result.stage1_tests) + result.stage2_tests;
  return result;
}

ReplicationSummary run_replications(const ProblemInstance& inst, Scheme scheme,
                                    const DesignParams& params, std::uint64_t reps,
                                    std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("need at least one replication");
  const auto n = static_cast<std::uint32_t>(inst.n());
  validate_realized_params(n, params);

  // Integer accumulation keeps the aggregate exact and independent of
  // summation order.
  std::uint64_t sum = 0, sum_sq = 0, token = 0, failures = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    Rng design_rng(mix_seed(mix_seed(seed, r), 0));
    Rng infection_rng(mix_seed(mix_seed(seed, r), 1));
    const PoolingDesign design = sample_design(scheme, n, params, design_rng);
    const InfectionOutcome infection = draw_infected(inst, infection_rng);
    const TwoStageResult result = run_two_stage(design, infection);
    sum += result.total_tests;
    sum_sq += result.total_tests * result.total_tests;
    token += mix_seed(result.total_tests, r);
    failures += result.identified_infected != infection.infected ? 1 : 0;
  }

  ReplicationSummary summary;
  summary.replications = reps;
  summary.determinism_token = token;
  summary.identification_failures = failures;
  summary.mean_total_tests = static_cast<double>(sum) / static_cast<double>(reps);
  if (reps > 1) {
    const long double r = static_cast<long double>(reps);
    const long double variance =
        (static_cast<long double>(sum_sq) - static_cast<long double>(sum) *
                                                static_cast<long double>(sum) / r) /
        (r - 1.0L);
    summary.stderr_defined = true;
    summary.stderr_total_tests =
        static_cast<double>(std::sqrt(std::max(variance, 0.0L) / r));
  }
  return summary;
}

}  // namespace poolscreen
