#include <doctest.h>

#include <cmath>

#include "hiercheck/discrepancy.hpp"
#include "hiercheck/errors.hpp"

using namespace hiercheck;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}
}  // namespace

// Three hand-computed fixtures per kind, exact.
TEST_CASE("overall X2 fixtures") {
  CHECK(eval_group(Discrepancy::OverallX2, vec({0, 4}), 0, 2.0, 1.0, 1.0) == 4.0);
  CHECK(eval_group(Discrepancy::OverallX2, vec({1}), 0, 1.0, 3.0, 2.0) == 0.0);
  CHECK(eval_group(Discrepancy::OverallX2, vec({3, -1, 2}), 0, 1.0, 1.0, 3.0) == 2.25);
}

TEST_CASE("level-1 X2 fixtures") {
  CHECK(eval_group(Discrepancy::Level1X2, vec({0, 4}), 2.0, 0, 1.0, 2.0) == 4.0);
  CHECK(eval_group(Discrepancy::Level1X2, vec({5}), 5.0, 0, 1.0, 7.0) == 0.0);
  CHECK(eval_group(Discrepancy::Level1X2, vec({1, 2, 3}), 2.0, 0, 1.0, 0.5) == 4.0);
}

TEST_CASE("level-2 X2 fixtures") {
  CHECK(eval_group(Discrepancy::Level2X2, vec({9}), 1.0, 1.0, 5.0, 1.0) == 0.0);
  CHECK(eval_group(Discrepancy::Level2X2, vec({9}), 3.0, 1.0, 2.0, 1.0) == 2.0);
  CHECK(eval_group(Discrepancy::Level2X2, vec({9}), -1.0, 1.0, 0.25, 1.0) == 16.0);
}

TEST_CASE("max and min observation fixtures") {
  CHECK(eval_group(Discrepancy::MaxObs, vec({-1, 0, 7}), 0, 0, 1, 1) == 7.0);
  CHECK(eval_group(Discrepancy::MaxObs, vec({2}), 0, 0, 1, 1) == 2.0);
  CHECK(eval_group(Discrepancy::MaxObs, vec({-5, -3}), 0, 0, 1, 1) == -3.0);
  CHECK(eval_group(Discrepancy::MinObs, vec({-1, 0, 7}), 0, 0, 1, 1) == -1.0);
  CHECK(eval_group(Discrepancy::MinObs, vec({2}), 0, 0, 1, 1) == 2.0);
  CHECK(eval_group(Discrepancy::MinObs, vec({-5, -3}), 0, 0, 1, 1) == -5.0);
}

TEST_CASE("max absolute deviation fixtures") {
  CHECK(eval_group(Discrepancy::MaxAbsDevTheta, vec({1, 5, 2}), 2.0, 0, 1, 1) == 3.0);
  CHECK(eval_group(Discrepancy::MaxAbsDevTheta, vec({0}), -4.0, 0, 1, 1) == 4.0);
  CHECK(eval_group(Discrepancy::MaxAbsDevTheta, vec({-2, 2}), 1.0, 0, 1, 1) == 3.0);
  CHECK(eval_group(Discrepancy::MaxAbsDevMu, vec({1, 5, 2}), 0, 0.0, 1, 1) == 5.0);
  CHECK(eval_group(Discrepancy::MaxAbsDevMu, vec({3}), 0, 3.0, 1, 1) == 0.0);
  CHECK(eval_group(Discrepancy::MaxAbsDevMu, vec({-6, 1}), 0, -1.0, 1, 1) == 5.0);
}

TEST_CASE("population fixtures") {
  // Group means 1, 2, 3 with mu = 2.
  Dataset d = validate_dataset({{"a", 1.0}, {"b", 2.0}, {"c", 3.0}});
  ParamState s;
  s.mu = 2.0;
  s.tau2 = 1.0;
  s.sigma2 = 1.0;
  s.thetas = vec({1.0, 2.0, 3.0});
  CHECK(eval_population(Discrepancy::MaxGroupMeanDev, d, s) == 1.0);

  Dataset single = validate_dataset({{"a", 4.0}});
  ParamState s1;
  s1.mu = 1.0;
  s1.tau2 = 1.0;
  s1.sigma2 = 1.0;
  s1.thetas = vec({4.0});
  CHECK(eval_population(Discrepancy::MaxGroupMeanDev, single, s1) == 3.0);
  // Single-group dataset: population X2 equals the per-group value.
  CHECK(eval_population(Discrepancy::OverallX2, single, s1) ==
        eval_group(Discrepancy::OverallX2, single.groups[0].values, 4.0, 1.0, 1.0, 1.0));

  Dataset two = validate_dataset({{"a", -2.0}, {"b", 0.0}});
  ParamState s2;
  s2.mu = 1.0;
  s2.tau2 = 1.0;
  s2.sigma2 = 1.0;
  s2.thetas = vec({-2.0, 0.0});
  CHECK(eval_population(Discrepancy::MaxGroupMeanDev, two, s2) == 3.0);
  CHECK(eval_population(Discrepancy::Level2X2, two, s2) == 9.0 + 1.0);
}

TEST_CASE("scope guards") {
  CHECK_THROWS(eval_group(Discrepancy::MaxGroupMeanDev, vec({1.0}), 0, 0, 1, 1));
  Dataset d = validate_dataset({{"a", 1.0}});
  ParamState s;
  s.thetas = vec({1.0});
  CHECK_THROWS(eval_population(Discrepancy::MaxObs, d, s));
}

TEST_CASE("argument dependence declarations") {
  CHECK(depends_on(Discrepancy::MaxObs).uses_data);
  CHECK_FALSE(depends_on(Discrepancy::MaxObs).uses_theta);
  CHECK_FALSE(depends_on(Discrepancy::MaxObs).uses_eta);

  CHECK_FALSE(depends_on(Discrepancy::Level2X2).uses_data);
  CHECK(depends_on(Discrepancy::Level2X2).uses_theta);
  CHECK(depends_on(Discrepancy::Level2X2).uses_eta);

  CHECK(depends_on(Discrepancy::OverallX2).uses_data);
  CHECK_FALSE(depends_on(Discrepancy::OverallX2).uses_theta);
  CHECK(depends_on(Discrepancy::OverallX2).uses_eta);

  CHECK(depends_on(Discrepancy::Level1X2).uses_theta);
  CHECK(depends_on(Discrepancy::MaxAbsDevTheta).uses_theta);
  CHECK_FALSE(depends_on(Discrepancy::MaxAbsDevMu).uses_theta);
}

TEST_CASE("names round-trip and unknown names are config errors") {
  for (Discrepancy k : all_discrepancies()) {
    CHECK(kind_from_name(kind_name(k)) == k);
  }
  CHECK_THROWS_AS(kind_from_name("not_a_kind"), config_error);
}
