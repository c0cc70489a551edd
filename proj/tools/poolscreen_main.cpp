#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poolscreen/analytic.hpp"
#include "poolscreen/harness.hpp"
#include "poolscreen/oracle.hpp"
#include "poolscreen/simulate.hpp"

namespace {

using namespace poolscreen;

constexpr int kExitInvalidArgs = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBudget = 4;

struct InstanceFlags {
  std::size_t n = 0;
  std::int64_t k = -1;
  double p = -1.0;

  void add_to(CLI::App* cmd, bool require_k_only = false) {
    cmd->add_option("--n", n, "population size")->required();
    auto* kopt = cmd->add_option("--k", k, "infected count (fixed-k model)");
    if (require_k_only)
      kopt->required();
    else
      cmd->add_option("--p", p, "infection probability (binomial model)")->excludes(kopt);
  }

  ProblemInstance make() const {
    if (k >= 0 && p >= 0.0) throw std::invalid_argument("pass --k or --p, not both");
    if (k >= 0) return ProblemInstance::fixed_k(n, static_cast<std::uint64_t>(k));
    if (p >= 0.0) return ProblemInstance::binomial(n, p);
    throw std::invalid_argument("pass --k or --p");
  }
};

std::vector<Scheme> parse_schemes(const std::string& text) {
  if (text == "all") return {Scheme::ftp, Scheme::fti, Scheme::rp};
  auto scheme = parse_scheme(text);
  if (!scheme) throw std::invalid_argument("unknown scheme: " + text);
  return {*scheme};
}

const char* secondary_label(Scheme scheme) {
  switch (scheme) {
    case Scheme::ftp: return "b";
    case Scheme::fti: return "d";
    case Scheme::rp: return "a";
  }
  return "?";
}

PredictionMode parse_mode(const std::string& text) {
  if (text == "paper") return PredictionMode::paper_approx;
  if (text == "exact") return PredictionMode::exact_form;
  throw std::invalid_argument("mode must be paper or exact");
}

void print_design(const ProblemInstance& inst, Scheme scheme, bool show_exact_form) {
  const DesignParams cont = continuous_optimal_design(inst, scheme);
  const DesignParams refined = integer_refine(inst, scheme, cont);
  const double theory =
      expected_total_tests(inst, refined, PredictionMode::paper_approx).expected_total_tests;
  const char* sec = secondary_label(scheme);

  std::printf("scheme=%s n=%zu model=%s kbar=%g\n", std::string(scheme_name(scheme)).c_str(),
              inst.n(), std::string(model_name(inst.model())).c_str(), inst.kbar());
  if (scheme == Scheme::fti) {
    std::printf("  continuous optimum: m*=%.6g %s*=%.6g\n", cont.m, sec, cont.secondary);
  } else {
    const double m_approx = optimal_m(inst, scheme, OptimalMMode::paper_approx);
    std::printf("  continuous optimum: m*=%.6g (stationary; %.6g via the log approximation) "
                "%s*=%.6g\n",
                cont.m, m_approx, sec, cont.secondary);
  }
  std::printf("  integer design:     m=%g %s=%g\n", refined.m, sec, refined.secondary);
  std::printf("  E[T] formula        %.6g\n", theory);
  if (show_exact_form) {
    const double exact =
        expected_total_tests(inst, refined, PredictionMode::exact_form).expected_total_tests;
    std::printf("  E[T] exact form     %.6g\n", exact);
  }
  std::printf("  E[T] closed form    %.6g\n", closed_form_expected_tests(inst, scheme));
}

int run(int argc, char** argv) {
  CLI::App app{"Two-stage group testing: design, analysis, simulation"};
  app.require_subcommand(1);

  std::string scheme_text = "all";
  std::string mode_text = "paper";
  std::uint64_t reps = 1000;
  std::uint64_t seed = 42;
  std::string out_path;
  std::string range_text;

  auto* design = app.add_subcommand("design", "print optimal parameters and predictions");
  InstanceFlags design_inst;
  design_inst.add_to(design);
  design->add_option("--scheme", scheme_text, "ftp|fti|rp|all");
  design->add_option("--mode", mode_text, "paper|exact (exact adds the exact-form prediction)");

  auto* simulate = app.add_subcommand("simulate", "run replications at one design point");
  InstanceFlags sim_inst;
  sim_inst.add_to(simulate);
  simulate->add_option("--scheme", scheme_text, "ftp|fti|rp");
  double sim_m = 0.0, sim_secondary = 0.0;
  auto* opt_m = simulate->add_option("--m", sim_m, "pool count (omit to use the optimizer)");
  simulate->add_option("--secondary", sim_secondary, "b/d/a (omit to use the optimizer)")
      ->needs(opt_m);
  simulate->add_option("--reps", reps, "replication count");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--mode", mode_text, "paper|exact theory to compare against");
  std::string dump_path;
  simulate->add_option("--dump-design", dump_path, "write replication 0's design to a file");

  auto* sweep = app.add_subcommand("sweep", "scheme x axis sweep to CSV");
  std::size_t sweep_n = 0;
  sweep->add_option("--n", sweep_n, "population size")->required();
  auto* krange = sweep->add_option("--k-range", range_text, "k grid start:stop:step");
  std::string prange_text;
  sweep->add_option("--p-range", prange_text, "p grid start:stop:step")->excludes(krange);
  sweep->add_option("--scheme", scheme_text, "ftp|fti|rp|all");
  sweep->add_option("--reps", reps, "replications per point");
  sweep->add_option("--seed", seed, "base seed");
  sweep->add_option("--out", out_path, "output CSV path")->required();

  auto* robustness = app.add_subcommand("robustness", "k-misspecification inflation to CSV");
  std::size_t rob_n = 0;
  std::uint64_t rob_k = 0;
  robustness->add_option("--n", rob_n, "population size")->required();
  robustness->add_option("--k", rob_k, "true infected count")->required();
  robustness->add_option("--k-range", range_text, "k estimates start:stop:step")->required();
  robustness->add_option("--scheme", scheme_text, "ftp|fti|rp");
  robustness->add_option("--reps", reps, "replications per point");
  robustness->add_option("--seed", seed, "base seed");
  robustness->add_option("--out", out_path, "output CSV path")->required();

  auto* oracle = app.add_subcommand("oracle", "exhaustive ground truth for a tiny instance");
  std::size_t orc_n = 0;
  std::uint64_t orc_k = 0;
  double orc_m = 0.0, orc_secondary = 0.0;
  std::uint64_t budget = 10'000'000;
  oracle->add_option("--n", orc_n, "population size")->required();
  oracle->add_option("--k", orc_k, "infected count")->required();
  oracle->add_option("--m", orc_m, "pool count")->required();
  oracle->add_option("--secondary", orc_secondary, "b/d/a")->required();
  oracle->add_option("--scheme", scheme_text, "ftp|fti|rp");
  oracle->add_option("--budget", budget, "max enumerated states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidArgs;  // help exits 0, bad usage exits 2
  }

  if (design->parsed()) {
    const ProblemInstance inst = design_inst.make();
    const bool show_exact = parse_mode(mode_text) == PredictionMode::exact_form;
    for (Scheme scheme : parse_schemes(scheme_text)) print_design(inst, scheme, show_exact);
    return 0;
  }

  if (simulate->parsed()) {
    const ProblemInstance inst = sim_inst.make();
    const std::vector<Scheme> schemes = parse_schemes(scheme_text);
    if (schemes.size() != 1) throw std::invalid_argument("simulate needs a single scheme");
    const Scheme scheme = schemes[0];
    DesignParams params;
    if (opt_m->count() > 0)
      params = DesignParams{scheme, sim_m, sim_secondary};
    else
      params = optimal_design(inst, scheme);
    if (!dump_path.empty()) {
      Rng rng(mix_seed(mix_seed(seed, 0), 0));
      const PoolingDesign d =
          sample_design(scheme, static_cast<std::uint32_t>(inst.n()), params, rng);
      std::ofstream out(dump_path);
      write_design(out, d);
    }
    const ReplicationSummary sim = run_replications(inst, scheme, params, reps, seed);
    const double theory =
        expected_total_tests(inst, params, parse_mode(mode_text)).expected_total_tests;
    std::printf("scheme=%s n=%zu kbar=%g m=%g %s=%g reps=%llu seed=%llu\n",
                std::string(scheme_name(scheme)).c_str(), inst.n(), inst.kbar(), params.m,
                secondary_label(scheme), params.secondary,
                static_cast<unsigned long long>(reps), static_cast<unsigned long long>(seed));
    std::printf("  mean_total=%.6g stderr=%.6g%s\n", sim.mean_total_tests,
                sim.stderr_total_tests, sim.stderr_defined ? "" : " (undefined at reps=1)");
    std::printf("  theory_total(%s)=%.6g rel_gap=%+.3f%%\n", mode_text.c_str(), theory,
                100.0 * (sim.mean_total_tests - theory) / theory);
    std::printf("  identification_failures=%llu\n",
                static_cast<unsigned long long>(sim.identification_failures));
    return 0;
  }

  if (sweep->parsed()) {
    SweepSpec spec;
    spec.n = sweep_n;
    spec.schemes = parse_schemes(scheme_text);
    spec.reps = reps;
    spec.base_seed = seed;
    if (!prange_text.empty()) {
      spec.model = InfectionModel::binomial;
      spec.axis = parse_range(prange_text);
    } else if (!range_text.empty()) {
      spec.model = InfectionModel::fixed_k;
      spec.axis = parse_range(range_text);
    } else {
      throw std::invalid_argument("sweep needs --k-range or --p-range");
    }
    write_sweep_csv(run_sweep(spec), out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  }

  if (robustness->parsed()) {
    const std::vector<Scheme> schemes = parse_schemes(scheme_text);
    if (schemes.size() != 1) throw std::invalid_argument("robustness needs a single scheme");
    const ProblemInstance inst = ProblemInstance::fixed_k(rob_n, rob_k);
    const auto rows = run_robustness(inst, schemes[0], parse_range(range_text), reps, seed);
    write_robustness_csv(rows, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  }

  if (oracle->parsed()) {
    const std::vector<Scheme> schemes = parse_schemes(scheme_text);
    if (schemes.size() != 1) throw std::invalid_argument("oracle needs a single scheme");
    const Scheme scheme = schemes[0];
    const ProblemInstance inst = ProblemInstance::fixed_k(orc_n, orc_k);
    const DesignParams params{scheme, orc_m, orc_secondary};
    const EnumerationResult exact = enumerate_expected_tests(inst, scheme, params, budget);
    const double paper =
        expected_total_tests(inst, params, PredictionMode::paper_approx).expected_total_tests;
    const double exact_form =
        expected_total_tests(inst, params, PredictionMode::exact_form).expected_total_tests;
    const double truth = static_cast<double>(exact.expected_total_tests);
    std::printf("scheme=%s n=%zu k=%llu m=%g %s=%g states=%llu\n",
                std::string(scheme_name(scheme)).c_str(), inst.n(),
                static_cast<unsigned long long>(orc_k), params.m, secondary_label(scheme),
                params.secondary, static_cast<unsigned long long>(exact.state_count));
    std::printf("  E[T] enumeration  %.12g\n", truth);
    std::printf("  E[T] paper        %.12g  abs=%+.4g rel=%+.4f%%\n", paper, paper - truth,
                100.0 * (paper - truth) / truth);
    std::printf("  E[T] exact form   %.12g  abs=%+.4g rel=%+.4f%%\n", exact_form,
                exact_form - truth, 100.0 * (exact_form - truth) / truth);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const poolscreen::infeasible_error& e) {
    std::fprintf(stderr, "infeasible instance: %s\n", e.what());
    return kExitInfeasible;
  } catch (const poolscreen::budget_error& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid arguments: %s\n", e.what());
    return kExitInvalidArgs;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
