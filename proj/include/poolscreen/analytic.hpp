#pragma once

#include "poolscreen/types.hpp"

namespace poolscreen {

// How the pool-negative probability is evaluated.
//   paper: binomial form (1-b/n)^k, (1-d/m)^k, (1-a)^k.
//   exact: true without-replacement probability C(n-k,b)/C(n,b) for ftp
//          (fixed_k instances with integral b only); identical to `paper`
//          for fti and rp, whose binomial forms are already exact.
enum class PoolProbMode { paper, exact };

// How an expected-tests prediction is assembled.
//   paper_approx: the published formulas with the e^{-x} substitution,
//                 e.g. (1 - (b/n) e^{-kb/n})^m for ftp.
//   exact_form:   the pre-exponential forms built from PoolProbMode::exact
//                 pool probabilities, e.g. (1 - (b/n) w_n)^m with
//                 hypergeometric w_n for ftp.
enum class PredictionMode { paper_approx, exact_form };

enum class OptimalMMode { exact_stationary, paper_approx };

enum class Refinement { integer_refined, continuous };

// One evaluation of the two-stage test-count model. The pool probabilities
// reported here are the ones the expected_total_tests field is built from;
// under paper_approx that is the exponential form, which differs from the
// standalone pool_negative_prob(PoolProbMode::paper) binomial form.
struct AnalyticPrediction {
  double non_selection_prob = 0.0;      // q
  double pool_negative_prob = 0.0;      // w_n / phi_n / theta_n
  double pool_positive_prob = 0.0;      // 1 - pool_negative_prob
  double uninfected_suspect_prob = 0.0; // t_p (ftp, rp) or phi_p^d (fti)
  double expected_total_tests = 0.0;    // m + kbar + (n - kbar) * suspect prob
};

// Probability that a single first-stage pool tests negative.
// b > n-k in exact ftp mode yields 0, a valid probability.
double pool_negative_prob(const ProblemInstance& inst, const DesignParams& params,
                          PoolProbMode mode);

// Full prediction for a design; works for continuous (real-valued) params.
AnalyticPrediction expected_total_tests(const ProblemInstance& inst,
                                        const DesignParams& params,
                                        PredictionMode mode);

// Continuous optimum of the scheme's second parameter: n/kbar (ftp),
// (m/kbar) log 2 (fti), 1/kbar (rp). m is only consulted for fti.
double optimal_secondary(const ProblemInstance& inst, Scheme scheme, double m = 0.0);

// Continuous optimal pool count. For ftp/rp, exact_stationary solves the
// stationarity condition of the paper_approx objective in closed form while
// paper_approx applies the additional log(1 - 1/(ek)) ~ -1/(ek)
// simplification; fti has a single closed form used for both modes.
// Throws infeasible_error when no positive optimum exists.
double optimal_m(const ProblemInstance& inst, Scheme scheme,
                 OptimalMMode mode = OptimalMMode::exact_stationary);

// Closed-form optimum-level expected tests:
//   ftp/rp: kbar + e kbar log((n-kbar)/kbar)
//   fti:    fti_linear_coeff kbar + fti_log_coeff kbar log((n-kbar)/kbar)
double closed_form_expected_tests(const ProblemInstance& inst, Scheme scheme);

// Continuous optimum (optimal_m + optimal_secondary) in one call.
DesignParams continuous_optimal_design(const ProblemInstance& inst, Scheme scheme,
                                       OptimalMMode mode = OptimalMMode::exact_stationary);

// Integer realization of a continuous optimum: searches m in
// [round(m*)-2, round(m*)+2] clamped to >= 1, with b/d in {floor, ceil} of
// the secondary optimum recomputed per candidate m (a stays real for rp),
// and returns the candidate minimizing the paper_approx expected tests.
// Ties break to smaller m, then smaller secondary.
DesignParams integer_refine(const ProblemInstance& inst, Scheme scheme,
                            const DesignParams& continuous);

// Full pipeline: continuous optimum then integer refinement.
DesignParams optimal_design(const ProblemInstance& inst, Scheme scheme);

// Expected-tests inflation from designing for k_est instead of the true
// kbar: E[T](params for k_est, at true kbar) / E[T](params for kbar), both
// via the paper_approx formulas. With Refinement::continuous the ratio uses
// the unrounded optima and is >= 1 up to floating-point noise.
double misspecification_inflation(const ProblemInstance& inst_true, Scheme scheme,
                                  double k_est,
                                  Refinement refinement = Refinement::integer_refined);

// Per-pool / per-individual objective whose m-th (or d-th) power is the
// uninfected-suspect probability: G(b) = 1 - (b/n) e^{-kbar b/n},
// f(d) = (1 - e^{-kbar d/m})^d, G(a) = 1 - a e^{-kbar a}.
struct ObjectiveCurve {
  Scheme scheme = Scheme::ftp;
  double n = 0.0;
  double kbar = 0.0;
  double m = 0.0;  // consulted for fti only

  double operator()(double secondary) const;
};

// Normalized objective g(y) = 1 + y + ((n-kbar)/kbar) beta^y with y = m/kbar;
// E[T] = kbar * g(y) for the fti scheme at the optimal d.
double normalized_expected_tests(double y, double n, double kbar);

namespace detail {
// kbar-parameterized kernels shared by the fixed-k and binomial paths and by
// misspecification analysis (where the design kbar differs from the truth).
double et_paper(Scheme scheme, double n, double kbar, double m, double secondary);
double optimal_m_kbar(Scheme scheme, double n, double kbar, OptimalMMode mode);
double optimal_secondary_kbar(Scheme scheme, double n, double kbar, double m);
DesignParams integer_refine_kbar(Scheme scheme, double n, double kbar,
                                 const DesignParams& continuous);
DesignParams design_kbar(Scheme scheme, double n, double kbar, Refinement refinement);
// C(n-k, b) / C(n, b): probability a uniform b-subset avoids all k marked.
double hypergeometric_avoidance(std::size_t n, std::uint64_t k, std::uint64_t b);
}  // namespace detail

}  // namespace poolscreen
