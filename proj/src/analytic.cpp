#include "poolscreen/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace poolscreen {

namespace detail {

double hypergeometric_avoidance(std::size_t n, std::uint64_t k, std::uint64_t b) {
  if (k == 0) return 1.0;
  if (b > n - k) return 0.0;
  double v = 1.0;
  // Two equivalent products; take the one with fewer factors.
  if (k <= b) {
    for (std::uint64_t j = 0; j < k; ++j)
      v *= static_cast<double>(n - b - j) / static_cast<double>(n - j);
  } else {
    for (std::uint64_t i = 0; i < b; ++i)
      v *= static_cast<double>(n - k - i) / static_cast<double>(n - i);
  }
  return v;
}

double et_paper(Scheme scheme, double n, double kbar, double m, double secondary) {
  double tp = 0.0;
  switch (scheme) {
    case Scheme::ftp: {
      const double x = secondary / n;
      tp = std::pow(1.0 - x * std::exp(-kbar * x), m);
      break;
    }
    case Scheme::fti: {
      tp = std::pow(1.0 - std::exp(-kbar * secondary / m), secondary);
      break;
    }
    case Scheme::rp: {
      const double a = secondary;
      tp = std::pow(1.0 - a * std::exp(-kbar * a), m);
      break;
    }
  }
  return m + kbar + (n - kbar) * tp;
}

double optimal_secondary_kbar(Scheme scheme, double n, double kbar, double m) {
  if (!(kbar > 0.0)) throw std::invalid_argument("optimal secondary requires kbar > 0");
  switch (scheme) {
    case Scheme::ftp: return n / kbar;
    case Scheme::fti:
      if (!(m > 0.0)) throw std::invalid_argument("fti secondary optimum requires m > 0");
      return (m / kbar) * constants::ln2;
    case Scheme::rp: return 1.0 / kbar;
  }
  throw std::logic_error("unreachable");
}

double optimal_m_kbar(Scheme scheme, double n, double kbar, OptimalMMode mode) {
  if (!(kbar >= 1.0)) throw std::invalid_argument("optimal m requires kbar >= 1");
  if (scheme == Scheme::fti) {
    const double arg = ((n - kbar) / kbar) * constants::ln2_sq;
    if (!(arg > 1.0))
      throw infeasible_error("fti design infeasible: n - kbar too small for a positive pool count");
    return (kbar / constants::ln2_sq) * std::log(arg);
  }
  // ftp and rp share the optimum of m + kbar + (n-kbar)(1 - 1/(e kbar))^m.
  if (mode == OptimalMMode::exact_stationary) {
    const double decay = std::log1p(-1.0 / (constants::euler_e * kbar));
    const double arg = -1.0 / ((n - kbar) * decay);
    if (!(arg < 1.0))
      throw infeasible_error("design infeasible: n - kbar too small for a positive pool count");
    return std::log(arg) / decay;
  }
  const double arg = (n - kbar) / (constants::euler_e * kbar);
  if (!(arg > 1.0))
    throw infeasible_error("design infeasible: n - kbar too small for a positive pool count");
  return constants::euler_e * kbar * std::log(arg);
}

DesignParams integer_refine_kbar(Scheme scheme, double n, double kbar,
                                 const DesignParams& continuous) {
  const long long center = std::llround(continuous.m);
  const long long lo = std::max<long long>(1, center - 2);
  const long long hi = std::max<long long>(lo, center + 2);

  auto secondary_candidates = [&](double m, double out[2]) -> int {
    if (scheme == Scheme::rp) {
      out[0] = std::min(1.0, 1.0 / kbar);
      return 1;
    }
    const double opt = optimal_secondary_kbar(scheme, n, kbar, m);
    const double cap = scheme == Scheme::ftp ? n : m;
    const double fl = std::clamp(std::floor(opt), 1.0, cap);
    const double ce = std::clamp(std::ceil(opt), 1.0, cap);
    out[0] = fl;
    out[1] = ce;
    return ce == fl ? 1 : 2;
  };

  bool have = false;
  std::tuple<double, double, double> best{};  // (E[T], m, secondary)
  for (long long mi = lo; mi <= hi; ++mi) {
    const double m = static_cast<double>(mi);
    double cand[2];
    const int count = secondary_candidates(m, cand);
    for (int c = 0; c < count; ++c) {
      const std::tuple<double, double, double> key{et_paper(scheme, n, kbar, m, cand[c]), m,
                                                   cand[c]};
      if (!have || key < best) {
        best = key;
        have = true;
      }
    }
  }
  return DesignParams{scheme, std::get<1>(best), std::get<2>(best)};
}

DesignParams design_kbar(Scheme scheme, double n, double kbar, Refinement refinement) {
  const double m = optimal_m_kbar(scheme, n, kbar, OptimalMMode::exact_stationary);
  const double secondary = optimal_secondary_kbar(scheme, n, kbar, m);
  const DesignParams continuous{scheme, m, secondary};
  if (refinement == Refinement::continuous) return continuous;
  return integer_refine_kbar(scheme, n, kbar, continuous);
}

}  // namespace detail

double pool_negative_prob(const ProblemInstance& inst, const DesignParams& params,
                          PoolProbMode mode) {
  validate_params(inst, params);
  const double kbar = inst.kbar();
  switch (params.scheme) {
    case Scheme::ftp: {
      if (mode == PoolProbMode::paper)
        return std::pow(1.0 - params.secondary / static_cast<double>(inst.n()), kbar);
      if (inst.model() != InfectionModel::fixed_k)
        throw std::invalid_argument("exact ftp pool probability requires a fixed-k instance");
      if (params.secondary != std::floor(params.secondary))
        throw std::invalid_argument("exact ftp pool probability requires integer b");
      return detail::hypergeometric_avoidance(inst.n(), inst.k(),
                                              static_cast<std::uint64_t>(params.secondary));
    }
    case Scheme::fti:
      return std::pow(1.0 - params.secondary / params.m, kbar);
    case Scheme::rp:
      return std::pow(1.0 - params.secondary, kbar);
  }
  throw std::logic_error("unreachable");
}

AnalyticPrediction expected_total_tests(const ProblemInstance& inst, const DesignParams& params,
                                        PredictionMode mode) {
  validate_params(inst, params);
  const double n = static_cast<double>(inst.n());
  const double kbar = inst.kbar();
  const double m = params.m;

  AnalyticPrediction out;
  switch (params.scheme) {
    case Scheme::ftp: {
      const double x = params.secondary / n;
      out.non_selection_prob = 1.0 - x;
      if (mode == PredictionMode::paper_approx) {
        out.pool_negative_prob = std::exp(-kbar * x);
      } else {
        if (inst.model() != InfectionModel::fixed_k)
          throw std::invalid_argument("exact-form ftp prediction requires a fixed-k instance");
        if (params.secondary != std::floor(params.secondary))
          throw std::invalid_argument("exact-form ftp prediction requires integer b");
        out.pool_negative_prob = detail::hypergeometric_avoidance(
            inst.n(), inst.k(), static_cast<std::uint64_t>(params.secondary));
      }
      out.uninfected_suspect_prob = std::pow(1.0 - x * out.pool_negative_prob, m);
      break;
    }
    case Scheme::fti: {
      const double ratio = params.secondary / m;
      out.non_selection_prob = 1.0 - ratio;
      out.pool_negative_prob = mode == PredictionMode::paper_approx
                                   ? std::exp(-kbar * ratio)
                                   : std::pow(1.0 - ratio, kbar);
      out.uninfected_suspect_prob = std::pow(1.0 - out.pool_negative_prob, params.secondary);
      break;
    }
    case Scheme::rp: {
      const double a = params.secondary;
      out.non_selection_prob = 1.0 - a;
      out.pool_negative_prob = mode == PredictionMode::paper_approx
                                   ? std::exp(-kbar * a)
                                   : std::pow(1.0 - a, kbar);
      out.uninfected_suspect_prob = std::pow(1.0 - a * out.pool_negative_prob, m);
      break;
    }
  }
  out.pool_positive_prob = 1.0 - out.pool_negative_prob;
  out.expected_total_tests = m + kbar + (n - kbar) * out.uninfected_suspect_prob;
  return out;
}

double optimal_secondary(const ProblemInstance& inst, Scheme scheme, double m) {
  return detail::optimal_secondary_kbar(scheme, static_cast<double>(inst.n()), inst.kbar(), m);
}

double optimal_m(const ProblemInstance& inst, Scheme scheme, OptimalMMode mode) {
  return detail::optimal_m_kbar(scheme, static_cast<double>(inst.n()), inst.kbar(), mode);
}

double closed_form_expected_tests(const ProblemInstance& inst, Scheme scheme) {
  const double n = static_cast<double>(inst.n());
  const double kbar = inst.kbar();
  if (!(kbar >= 1.0)) throw std::invalid_argument("closed form requires kbar >= 1");
  const double lg = std::log((n - kbar) / kbar);
  if (scheme == Scheme::fti)
    return constants::fti_linear_coeff * kbar + constants::fti_log_coeff * kbar * lg;
  return kbar + constants::euler_e * kbar * lg;
}

DesignParams continuous_optimal_design(const ProblemInstance& inst, Scheme scheme,
                                       OptimalMMode mode) {
  const double m = optimal_m(inst, scheme, mode);
  return DesignParams{scheme, m, optimal_secondary(inst, scheme, m)};
}

DesignParams integer_refine(const ProblemInstance& inst, Scheme scheme,
                            const DesignParams& continuous) {
  return detail::integer_refine_kbar(scheme, static_cast<double>(inst.n()), inst.kbar(),
                                     continuous);
}

DesignParams optimal_design(const ProblemInstance& inst, Scheme scheme) {
  return integer_refine(inst, scheme, continuous_optimal_design(inst, scheme));
}

double misspecification_inflation(const ProblemInstance& inst_true, Scheme scheme, double k_est,
                                  Refinement refinement) {
  if (!(k_est > 0.0)) throw std::invalid_argument("k estimate must be positive");
  const double n = static_cast<double>(inst_true.n());
  const double kbar = inst_true.kbar();
  const DesignParams mis = detail::design_kbar(scheme, n, k_est, refinement);
  const DesignParams opt = detail::design_kbar(scheme, n, kbar, refinement);
  const double at_mis = detail::et_paper(scheme, n, kbar, mis.m, mis.secondary);
  const double at_opt = detail::et_paper(scheme, n, kbar, opt.m, opt.secondary);
  return at_mis / at_opt;
}

double ObjectiveCurve::operator()(double secondary) const {
  switch (scheme) {
    case Scheme::ftp: {
      const double x = secondary / n;
      return 1.0 - x * std::exp(-kbar * x);
    }
    case Scheme::fti:
      return std::pow(1.0 - std::exp(-kbar * secondary / m), secondary);
    case Scheme::rp:
      return 1.0 - secondary * std::exp(-kbar * secondary);
  }
  throw std::logic_error("unreachable");
}

double normalized_expected_tests(double y, double n, double kbar) {
  return 1.0 + y + ((n - kbar) / kbar) * std::pow(constants::beta, y);
}

}  // namespace poolscreen
