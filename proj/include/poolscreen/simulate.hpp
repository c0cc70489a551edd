#pragma once

#include <cstdint>
#include <vector>

#include "poolscreen/pooling.hpp"
#include "poolscreen/rng.hpp"
#include "poolscreen/types.hpp"

namespace poolscreen {

struct InfectionOutcome {
  std::vector<std::uint32_t> infected;  // ascending
};

struct StageOneResult {
  std::vector<std::uint8_t> pool_positive;  // one flag per pool
};

struct TwoStageResult {
  std::vector<std::uint32_t> suspects;             // ascending
  std::vector<std::uint32_t> identified_infected;  // suspects that test positive in stage 2
  std::uint32_t stage1_tests = 0;                  // = pool count
  std::uint32_t stage2_tests = 0;                  // = |suspects|
  std::uint64_t total_tests = 0;
};

// fixed_k: uniform k-subset; binomial: independent inclusion with
// probability p (so the draw may be empty or the whole population).
InfectionOutcome draw_infected(const ProblemInstance& inst, Rng& rng);

// A pool is positive iff it contains at least one infected individual.
StageOneResult run_stage_one(const PoolingDesign& design, const InfectionOutcome& infection);

// An individual is a suspect iff it belongs to no negative pool; in
// particular an individual with zero memberships is always a suspect.
std::vector<std::uint32_t> decode_suspects(const PoolingDesign& design,
                                           const StageOneResult& stage1);

// Both stages with error-free tests: stage 2 tests each suspect
// individually, so identified_infected always equals the infected set.
TwoStageResult run_two_stage(const PoolingDesign& design, const InfectionOutcome& infection);

struct ReplicationSummary {
  double mean_total_tests = 0.0;
  double stderr_total_tests = 0.0;  // 0 when stderr_defined is false
  bool stderr_defined = false;      // false for a single replication
  std::uint64_t replications = 0;
  // Order-insensitive digest of the per-replication totals; equal inputs
  // produce equal tokens within one build of the library.
  std::uint64_t determinism_token = 0;
  // Replications where identified_infected differed from the infected set.
  // Always 0 under the error-free test model; counted rather than assumed.
  std::uint64_t identification_failures = 0;
};

// Independently samples a design and an infection outcome per replication
// and aggregates total tests. Replication r derives its design stream from
// mix_seed(mix_seed(seed, r), 0) and its infection stream from
// mix_seed(mix_seed(seed, r), 1), so the result is a pure function of the
// arguments regardless of execution order.
ReplicationSummary run_replications(const ProblemInstance& inst, Scheme scheme,
                                    const DesignParams& params, std::uint64_t reps,
                                    std::uint64_t seed);

}  // namespace poolscreen
