#include "hiercheck/density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hiercheck/errors.hpp"

namespace hiercheck {

namespace {

constexpr double log_2pi = 1.8378770664093454836;

void require_positive_scale(double s2, const char* what) {
  if (!(s2 > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// Lanczos (g = 7, n = 9) log-gamma for positive arguments. std::lgamma writes
// the global signgam in glibc, which is a data race once densities are
// evaluated from parallel tasks; this one is pure.
double log_gamma(double x) {
  static constexpr double coeff[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps small arguments accurate.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double acc = coeff[0];
  for (int k = 1; k < 9; ++k) acc += coeff[k] / (z + k);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// log of the t_nu normalizing constant: lgamma((nu+1)/2) - lgamma(nu/2) - log(nu*pi)/2.
double t_log_norm(double nu) {
  return log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
         0.5 * std::log(nu * std::numbers::pi);
}

}  // namespace

double normal_logpdf(double x, double mean, double var) {
  require_positive_scale(var, "variance");
  const double r = x - mean;
  return -0.5 * (log_2pi + std::log(var) + r * r / var);
}

double student_t_logpdf(double x, double loc, double scale2, double nu) {
  require_positive_scale(scale2, "squared scale");
  const double z2 = (x - loc) * (x - loc) / scale2;
  return t_log_norm(nu) - 0.5 * std::log(scale2) - 0.5 * (nu + 1.0) * std::log1p(z2 / nu);
}

double loglik_level1(const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& values,
                     double theta, double sigma2) {
  require_positive_scale(sigma2, "sigma2");
  if (spec.level1 == LevelKind::Normal) {
    const double ss = (values.array() - theta).square().sum();
    return -0.5 * values.size() * (log_2pi + std::log(sigma2)) - 0.5 * ss / sigma2;
  }
  // One pass over log1p terms; the normalizing constant is shared per call.
  const double c = t_log_norm(spec.nu1) - 0.5 * std::log(sigma2);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const double z2 = (values[j] - theta) * (values[j] - theta) / sigma2;
    acc += c - 0.5 * (spec.nu1 + 1.0) * std::log1p(z2 / spec.nu1);
  }
  return acc;
}

double loglik_level1(const ModelSpec& spec, const GroupData& group, double theta,
                     double sigma2) {
  return loglik_level1(spec, group.values, theta, sigma2);
}

double loglik_level2(const ModelSpec& spec, double theta, double mu, double tau2) {
  require_positive_scale(tau2, "tau2");
  if (spec.level2 == LevelKind::Normal) return normal_logpdf(theta, mu, tau2);
  return student_t_logpdf(theta, mu, tau2, spec.nu2);
}

}  // namespace hiercheck
