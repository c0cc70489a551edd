#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace poolscreen {

// Thrown when a requested design has no positive continuous optimum
// (population too small relative to the infected count).
class infeasible_error : public std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when an exhaustive enumeration would exceed its state budget.
class budget_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// First-stage pooling strategies.
enum class Scheme {
  ftp,  // fixed tests per pool: each pool draws b individuals
  fti,  // fixed tests per individual: each individual joins d pools
  rp,   // randomized pooling: each (individual, pool) pair joins with probability a
};

std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view text);

enum class InfectionModel { fixed_k, binomial };

std::string_view model_name(InfectionModel model);

// Population plus infection model. kbar() is the mean infected count and is
// the quantity every analytic formula consumes: k itself under fixed_k, n*p
// under the binomial model.
class ProblemInstance {
 public:
  static ProblemInstance fixed_k(std::size_t n, std::uint64_t k);
  static ProblemInstance binomial(std::size_t n, double p);

  std::size_t n() const { return n_; }
  InfectionModel model() const { return model_; }

  // Infected count; fixed_k instances only.
  std::uint64_t k() const;
  // Infection probability; binomial instances only.
  double p() const;

  double kbar() const {
    return model_ == InfectionModel::fixed_k ? static_cast<double>(k_)
                                             : static_cast<double>(n_) * p_;
  }

 private:
  ProblemInstance() = default;
  std::size_t n_ = 0;
  InfectionModel model_ = InfectionModel::fixed_k;
  std::uint64_t k_ = 0;
  double p_ = 0.0;
};

// Pool count m plus the scheme's second parameter: b for ftp, d for fti,
// a for rp. m and b/d are real-valued so the same type carries continuous
// optima and realized integer designs.
struct DesignParams {
  Scheme scheme = Scheme::ftp;
  double m = 0.0;
  double secondary = 0.0;
};

// Validates params for analytic evaluation against an instance: m >= 1,
// 1 <= b <= n, 1 <= d <= m, 0 < a <= 1. Values may be non-integral.
void validate_params(const ProblemInstance& inst, const DesignParams& params);

// Additionally requires integral m (and integral b/d) so the design can be
// realized by the sampler.
void validate_realized_params(std::size_t n, const DesignParams& params);

namespace constants {
inline constexpr double euler_e = std::numbers::e;
inline constexpr double ln2 = std::numbers::ln2;
inline constexpr double ln2_sq = ln2 * ln2;  // ~0.480453
// beta = (1/2)^ln2, so log(beta) = -ln2_sq.
inline const double beta = std::exp(-ln2_sq);
// E[T] for the fti scheme at its optimum is
// fti_linear_coeff * k + fti_log_coeff * k * log((n-k)/k).
inline const double fti_linear_coeff = 1.0 + 1.0 / ln2_sq + 2.0 * std::log(ln2) / ln2_sq;
inline const double fti_log_coeff = 1.0 / ln2_sq;  // ~2.0814
}  // namespace constants

}  // namespace poolscreen
