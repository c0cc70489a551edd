#include "poolscreen/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace poolscreen {

std::vector<double> AxisRange::values() const {
  if (!(step > 0.0)) throw std::invalid_argument("range step must be positive");
  if (stop < start) throw std::invalid_argument("range stop must be >= start");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + step * 1e-9) break;
    out.push_back(v);
  }
  return out;
}

AxisRange parse_range(const std::string& text) {
  AxisRange range;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &range.start, &range.stop, &range.step,
                  &trailing) != 3)
    throw std::invalid_argument("range must be start:stop:step");
  range.values();  // validates
  return range;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ProblemInstance instance_at(const SweepSpec& spec, double axis_value) {
  if (spec.model == InfectionModel::binomial)
    return ProblemInstance::binomial(spec.n, axis_value);
  const double rounded = std::round(axis_value);
  if (std::abs(axis_value - rounded) > 1e-9)
    throw std::invalid_argument("fixed-k sweep grid must hit integers");
  return ProblemInstance::fixed_k(spec.n, static_cast<std::uint64_t>(rounded));
}

// Writes through a temp file and renames so failures leave no partial file.
void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open output file: " + tmp);
      out << contents;
      if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ignore;
    std::filesystem::remove(tmp, ignore);
    throw;
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.schemes.empty()) throw std::invalid_argument("sweep needs at least one scheme");
  if (spec.reps < 1) throw std::invalid_argument("sweep needs reps >= 1");
  const std::vector<double> axis = spec.axis.values();

  std::vector<SweepRow> rows;
  rows.reserve(axis.size() * spec.schemes.size());
  for (std::size_t j = 0; j < axis.size(); ++j) {
    const ProblemInstance inst = instance_at(spec, axis[j]);
    const std::uint64_t seed = mix_seed(spec.base_seed, j);
    for (Scheme scheme : spec.schemes) {
      const DesignParams params = optimal_design(inst, scheme);
      const ReplicationSummary sim = run_replications(inst, scheme, params, spec.reps, seed);
      SweepRow row;
      row.scheme = scheme;
      row.n = spec.n;
      row.model = spec.model;
      row.k_or_p = axis[j];
      row.m = params.m;
      row.secondary = params.secondary;
      row.reps = spec.reps;
      row.mean_total = sim.mean_total_tests;
      row.stderr_total = sim.stderr_total_tests;
      row.theory_total =
          expected_total_tests(inst, params, PredictionMode::paper_approx).expected_total_tests;
      row.theory_closed_form = closed_form_expected_tests(inst, scheme);
      row.seed = seed;
      row.identification_failures = sim.identification_failures;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "scheme,n,model,k_or_p,m,secondary,reps,mean_total,stderr_total,"
         "theory_total,theory_closed_form,seed\n";
  for (const SweepRow& r : rows) {
    out << scheme_name(r.scheme) << ',' << r.n << ',' << model_name(r.model) << ','
        << fmt(r.k_or_p) << ',' << fmt(r.m) << ',' << fmt(r.secondary) << ',' << r.reps << ','
        << fmt(r.mean_total) << ',' << fmt(r.stderr_total) << ',' << fmt(r.theory_total) << ','
        << fmt(r.theory_closed_form) << ',' << r.seed << '\n';
  }
  atomic_write(path, out.str());
}

std::vector<RobustnessRow> run_robustness(const ProblemInstance& inst_true, Scheme scheme,
                                          const AxisRange& k_est_axis, std::uint64_t reps,
                                          std::uint64_t base_seed) {
  const std::vector<double> estimates = k_est_axis.values();
  const DesignParams params_true = optimal_design(inst_true, scheme);

  std::vector<RobustnessRow> rows;
  rows.reserve(estimates.size());
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    const double k_est = estimates[j];
    const std::uint64_t seed = mix_seed(base_seed, j);
    const DesignParams params_est = detail::design_kbar(
        scheme, static_cast<double>(inst_true.n()), k_est, Refinement::integer_refined);
    const ReplicationSummary sim_est =
        run_replications(inst_true, scheme, params_est, reps, seed);
    const ReplicationSummary sim_true =
        run_replications(inst_true, scheme, params_true, reps, seed);
    RobustnessRow row;
    row.k_est = k_est;
    row.inflation_theoretical = misspecification_inflation(inst_true, scheme, k_est);
    row.inflation_simulated = sim_est.mean_total_tests / sim_true.mean_total_tests;
    rows.push_back(row);
  }
  return rows;
}

void write_robustness_csv(const std::vector<RobustnessRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "k_est,inflation_theoretical,inflation_simulated\n";
  for (const RobustnessRow& r : rows)
    out << fmt(r.k_est) << ',' << fmt(r.inflation_theoretical) << ','
        << fmt(r.inflation_simulated) << '\n';
  atomic_write(path, out.str());
}

}  // namespace poolscreen
