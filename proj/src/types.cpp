#include "poolscreen/types.hpp"

#include <string>

namespace poolscreen {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::ftp: return "ftp";
    case Scheme::fti: return "fti";
    case Scheme::rp: return "rp";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  if (text == "ftp") return Scheme::ftp;
  if (text == "fti") return Scheme::fti;
  if (text == "rp") return Scheme::rp;
  return std::nullopt;
}

std::string_view model_name(InfectionModel model) {
  return model == InfectionModel::fixed_k ? "fixedk" : "binomial";
}

ProblemInstance ProblemInstance::fixed_k(std::size_t n, std::uint64_t k) {
  if (n < 2) throw std::invalid_argument("population size must be at least 2");
  // k = 0 is permitted so the no-infection formulas can be evaluated;
  // the optimizers separately require kbar >= 1.
  if (k >= n) throw std::invalid_argument("infected count must be below n");
  ProblemInstance inst;
  inst.n_ = n;
  inst.model_ = InfectionModel::fixed_k;
  inst.k_ = k;
  return inst;
}

ProblemInstance ProblemInstance::binomial(std::size_t n, double p) {
  if (n < 2) throw std::invalid_argument("population size must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("infection probability must be in (0,1)");
  ProblemInstance inst;
  inst.n_ = n;
  inst.model_ = InfectionModel::binomial;
  inst.p_ = p;
  return inst;
}

std::uint64_t ProblemInstance::k() const {
  if (model_ != InfectionModel::fixed_k)
    throw std::logic_error("k() requires a fixed-k instance");
  return k_;
}

double ProblemInstance::p() const {
  if (model_ != InfectionModel::binomial)
    throw std::logic_error("p() requires a binomial instance");
  return p_;
}

void validate_params(const ProblemInstance& inst, const DesignParams& params) {
  if (!(params.m >= 1.0)) throw std::invalid_argument("pool count m must be >= 1");
  switch (params.scheme) {
    case Scheme::ftp:
      if (!(params.secondary >= 1.0 && params.secondary <= static_cast<double>(inst.n())))
        throw std::invalid_argument("ftp requires 1 <= b <= n");
      break;
    case Scheme::fti:
      if (!(params.secondary >= 1.0 && params.secondary <= params.m))
        throw std::invalid_argument("fti requires 1 <= d <= m");
      break;
    case Scheme::rp:
      if (!(params.secondary > 0.0 && params.secondary <= 1.0))
        throw std::invalid_argument("rp requires 0 < a <= 1");
      break;
  }
}

namespace {
bool integral(double v) { return v == std::floor(v); }
}  // namespace

void validate_realized_params(std::size_t n, const DesignParams& params) {
  if (!(params.m >= 1.0) || !integral(params.m))
    throw std::invalid_argument("realized pool count m must be a positive integer");
  switch (params.scheme) {
    case Scheme::ftp:
      if (!integral(params.secondary) || !(params.secondary >= 1.0) ||
          !(params.secondary <= static_cast<double>(n)))
        throw std::invalid_argument("ftp requires integer b in [1, n]");
      break;
    case Scheme::fti:
      if (!integral(params.secondary) || !(params.secondary >= 1.0) ||
          !(params.secondary <= params.m))
        throw std::invalid_argument("fti requires integer d in [1, m]");
      break;
    case Scheme::rp:
      if (!(params.secondary > 0.0 && params.secondary <= 1.0))
        throw std::invalid_argument("rp requires 0 < a <= 1");
      break;
  }
}

}  // namespace poolscreen
