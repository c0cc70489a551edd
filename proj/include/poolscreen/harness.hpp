#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poolscreen/analytic.hpp"
#include "poolscreen/simulate.hpp"
#include "poolscreen/types.hpp"

namespace poolscreen {

// Inclusive arithmetic grid start, start+step, ..., up to stop (included
// when it lands on the grid). Parsed from "start:stop:step".
struct AxisRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

AxisRange parse_range(const std::string& text);

struct SweepSpec {
  std::vector<Scheme> schemes;
  std::size_t n = 0;
  InfectionModel model = InfectionModel::fixed_k;
  AxisRange axis;  // k grid (fixed_k) or p grid (binomial)
  std::uint64_t reps = 1000;
  std::uint64_t base_seed = 42;
};

struct SweepRow {
  Scheme scheme = Scheme::ftp;
  std::size_t n = 0;
  InfectionModel model = InfectionModel::fixed_k;
  double k_or_p = 0.0;
  double m = 0.0;
  double secondary = 0.0;
  std::uint64_t reps = 0;
  double mean_total = 0.0;
  double stderr_total = 0.0;
  double theory_total = 0.0;        // paper_approx E[T] at the realized params
  double theory_closed_form = 0.0;
  std::uint64_t seed = 0;           // per-axis-point seed actually used
  // Not part of the CSV schema; carried for acceptance checks.
  std::uint64_t identification_failures = 0;
};

// For each axis point and scheme: optimize, integer-refine, run reps
// replications. Axis point j runs with seed mix_seed(base_seed, j).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

struct RobustnessRow {
  double k_est = 0.0;
  double inflation_theoretical = 0.0;
  double inflation_simulated = 0.0;
};

// Designs for each k_est, simulates both that design and the true-k design
// on the true instance with the same per-point seed, and reports the ratio
// of mean totals next to the analytic inflation.
std::vector<RobustnessRow> run_robustness(const ProblemInstance& inst_true, Scheme scheme,
                                          const AxisRange& k_est_axis, std::uint64_t reps,
                                          std::uint64_t base_seed);

void write_robustness_csv(const std::vector<RobustnessRow>& rows, const std::string& path);

}  // namespace poolscreen
