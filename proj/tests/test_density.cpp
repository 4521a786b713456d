#include <doctest.h>

#include <cmath>

#include "hiercheck/density.hpp"
#include "support/oracles.hpp"

using namespace hiercheck;

TEST_CASE("level-1 normal log likelihood at the standard point") {
  const ModelSpec spec = ModelSpec::normal_normal();
  Eigen::VectorXd one(1);
  one << 0.0;
  CHECK(loglik_level1(spec, one, 0.0, 1.0) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-12));

  // Same value anywhere on the diagonal x = theta.
  Eigen::VectorXd moved(1);
  moved << 4.25;
  CHECK(loglik_level1(spec, moved, 4.25, 1.0) == loglik_level1(spec, one, 0.0, 1.0));
}

TEST_CASE("level-1 sums over observations") {
  const ModelSpec spec = ModelSpec::normal_normal();
  Eigen::VectorXd values(3);
  values << 0.2, -1.0, 0.7;
  double expected = 0.0;
  for (int j = 0; j < 3; ++j) expected += normal_logpdf(values[j], 0.1, 2.0);
  CHECK(loglik_level1(spec, values, 0.1, 2.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("level-1 Student-t matches the lgamma form of the t3 density") {
  const ModelSpec spec = ModelSpec::student_t(3.0, 2.2);
  Eigen::VectorXd one(1);
  one << 0.0;
  const double expected = oracle::student_t_logpdf_std(0.0, 3.0);
  CHECK(loglik_level1(spec, one, 0.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  // Frozen value of log(Gamma(2) / (Gamma(1.5) sqrt(3 pi))).
  CHECK(expected == doctest::Approx(-1.0008888496235097).epsilon(1e-12));
}

TEST_CASE("level-2 values") {
  const ModelSpec spec = ModelSpec::normal_normal();
  CHECK(loglik_level2(spec, 0.4, 0.4, 1.0) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-12));
  CHECK(loglik_level2(spec, 1.4, 0.4, 1.0) ==
        doctest::Approx(-1.4189385332046727).epsilon(1e-12));

  const ModelSpec robust = ModelSpec::student_t(3.0, 2.2);
  CHECK(loglik_level2(robust, 0.0, 0.0, 1.0) ==
        doctest::Approx(oracle::student_t_logpdf_std(0.0, 2.2)).epsilon(1e-12));
}

TEST_CASE("t density respects the squared-scale parameterization") {
  const ModelSpec robust = ModelSpec::student_t(3.0, 2.2);
  const double scale2 = 4.0;
  // loc + scale*t: density scales by 1/scale.
  const double at_center = loglik_level2(robust, 1.0, 1.0, scale2);
  CHECK(at_center == doctest::Approx(oracle::student_t_logpdf_std(0.0, 2.2) -
                                     0.5 * std::log(scale2)).epsilon(1e-12));
}

TEST_CASE("non-positive scales are rejected") {
  const ModelSpec spec = ModelSpec::normal_normal();
  Eigen::VectorXd one(1);
  one << 0.0;
  CHECK_THROWS(loglik_level1(spec, one, 0.0, 0.0));
  CHECK_THROWS(loglik_level1(spec, one, 0.0, -1.0));
  CHECK_THROWS(loglik_level2(spec, 0.0, 0.0, 0.0));
}
