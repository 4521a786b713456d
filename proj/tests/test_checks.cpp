#include <doctest.h>

#include <cmath>

#include "hiercheck/checks.hpp"
#include "hiercheck/errors.hpp"

using namespace hiercheck;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Dataset five_groups() {
  return validate_dataset({{"g1", 0.2}, {"g1", 1.1}, {"g1", -0.4},
                           {"g2", 2.0}, {"g2", 1.4}, {"g2", 2.6},
                           {"g3", -1.0}, {"g3", -0.2}, {"g3", -1.7},
                           {"g4", 0.8}, {"g4", 0.1}, {"g4", 1.3},
                           {"g5", -0.6}, {"g5", 0.4}, {"g5", -1.1}});
}

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const bool both_nan = std::isnan(a(r, c)) && std::isnan(b(r, c));
      if (!both_nan && a(r, c) != b(r, c)) return false;
    }
  }
  return true;
}

CheckConfig quick_config(std::uint64_t seed, int draws = 300, int burn = 100) {
  CheckConfig cfg;
  cfg.kinds = {Discrepancy::OverallX2, Discrepancy::Level1X2, Discrepancy::Level2X2,
               Discrepancy::MaxObs};
  cfg.sampler.m_draws = draws;
  cfg.sampler.burn_in = burn;
  cfg.sampler.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("tail probability counts strict exceedances") {
  CHECK(tail_probability(vec({1, 2, 3}), vec({2, 2, 2})) == doctest::Approx(1.0 / 3.0));
  CHECK(tail_probability(vec({1, 2}), vec({1, 2})) == 0.0);  // ties never count
  CHECK(tail_probability(vec({5, 5}), vec({1, 2})) == 1.0);
  CHECK_THROWS(tail_probability(vec({1, 2}), vec({1})));
  CHECK_THROWS(tail_probability(Eigen::VectorXd(), Eigen::VectorXd()));
}

TEST_CASE("bonferroni adjustment") {
  CHECK(bonferroni_adjust(0.007, 5) == doctest::Approx(0.035).epsilon(1e-15));
  CHECK(bonferroni_adjust(0.5, 3) == 1.0);
  CHECK(bonferroni_adjust(0.0, 10) == 0.0);
  CHECK_THROWS(bonferroni_adjust(-0.1, 2));
  CHECK_THROWS(bonferroni_adjust(1.1, 2));
  CHECK_THROWS(bonferroni_adjust(0.5, 0));
}

TEST_CASE("check config validation") {
  CheckConfig cfg;
  cfg.sampler.m_draws = 200;
  CHECK_THROWS_AS(validate_check_config(cfg, "cv"), config_error);  // no kinds

  cfg.kinds = {Discrepancy::MaxObs, Discrepancy::MaxObs};
  CHECK_THROWS_AS(validate_check_config(cfg, "cv"), config_error);  // duplicate

  cfg.kinds = {Discrepancy::Level2X2};
  cfg.theta_mode = ThetaMode::Literal;
  CHECK_THROWS_AS(validate_check_config(cfg, "cv"), config_error);  // degenerate

  cfg.theta_mode = ThetaMode::PosteriorRealized;
  CHECK_NOTHROW(validate_check_config(cfg, "cv"));

  cfg.kinds = {Discrepancy::MaxGroupMeanDev};
  CHECK_THROWS_AS(validate_check_config(cfg, "cv"), config_error);  // population-only
  CHECK_NOTHROW(validate_check_config(cfg, "ppc"));
}

TEST_CASE("regular check report shape and determinism") {
  const Dataset data = five_groups();
  const ModelSpec spec = ModelSpec::normal_normal();
  CheckConfig cfg = quick_config(11);
  cfg.kinds.push_back(Discrepancy::MaxGroupMeanDev);
  cfg.adjust = Adjust::Bonferroni;

  const CheckReport report = ppc_report(data, spec, cfg);
  CHECK(report.method == "ppc");
  CHECK(report.has_population);
  REQUIRE(report.groups.size() == 5);
  REQUIRE(report.p.rows() == 5);
  REQUIRE(report.p.cols() == 6);

  // Per-group kinds fill the group columns; population column only for
  // population-capable kinds; MaxGroupMeanDev is population-only.
  for (int kk = 0; kk < 4; ++kk) {
    for (int i = 0; i < 5; ++i) {
      CHECK_FALSE(std::isnan(report.p(kk, i)));
      CHECK(report.p(kk, i) >= 0.0);
      CHECK(report.p(kk, i) <= 1.0);
    }
  }
  CHECK_FALSE(std::isnan(report.p(0, 5)));  // overall_x2 sums across groups
  CHECK(std::isnan(report.p(3, 5)));        // max_obs has no population value
  for (int i = 0; i < 5; ++i) CHECK(std::isnan(report.p(4, i)));
  CHECK_FALSE(std::isnan(report.p(4, 5)));

  // Bonferroni block: min(1, I*p) cell-wise.
  REQUIRE(report.p_adjusted.size() > 0);
  CHECK(report.p_adjusted(0, 0) == bonferroni_adjust(report.p(0, 0), 5));

  const CheckReport again = ppc_report(data, spec, cfg);
  CHECK(same_matrix(report.p, again.p));
}

TEST_CASE("regular check: the data-free second-level X2 is degenerate by construction") {
  // Both sides evaluate Level2X2 at the same posterior draw, so the strict
  // inequality never fires: p is exactly zero. The cross-validated check is
  // the meaningful one for this kind.
  const Dataset data = five_groups();
  const CheckReport report = ppc_report(data, ModelSpec::normal_normal(), quick_config(13));
  for (int i = 0; i < 5; ++i) CHECK(report.p(2, i) == 0.0);
}

TEST_CASE("cv per-group check returns one p-value per kind") {
  const Dataset data = five_groups();
  const ModelSpec spec = ModelSpec::normal_normal();
  const CheckConfig cfg = quick_config(21);
  const auto p = cv_ppc_group(data, 2, spec, cfg);
  REQUIRE(p.size() == cfg.kinds.size());
  for (const auto& [kind, value] : p) {
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
  }
  const auto again = cv_ppc_group(data, 2, spec, cfg);
  CHECK(p == again);
  CHECK_THROWS(cv_ppc_group(data, 9, spec, cfg));
  CHECK_THROWS(cv_ppc_group(data, -1, spec, cfg));
}

TEST_CASE("cv report shape, floor, and adjustment") {
  const Dataset data = five_groups();
  const ModelSpec spec = ModelSpec::normal_normal();
  CheckConfig cfg = quick_config(31);
  cfg.adjust = Adjust::Bonferroni;

  const CheckReport report = cv_ppc_report(data, spec, cfg);
  CHECK(report.method == "cv");
  CHECK_FALSE(report.has_population);
  REQUIRE(report.p.rows() == 4);
  REQUIRE(report.p.cols() == 5);
  for (int kk = 0; kk < 4; ++kk) {
    for (int i = 0; i < 5; ++i) {
      CHECK(report.p(kk, i) >= 0.0);
      CHECK(report.p(kk, i) <= 1.0);
      CHECK(report.p_adjusted(kk, i) == bonferroni_adjust(report.p(kk, i), 5));
    }
  }

  const Dataset three = validate_dataset(
      {{"a", 1.0}, {"a", 0.5}, {"b", 2.0}, {"b", 2.4}, {"c", 0.1}, {"c", -0.3}});
  CHECK_THROWS_WITH_AS(cv_ppc_report(three, spec, cfg),
                       "cross-validated checks require at least 4 groups under default priors",
                       data_error);
}

TEST_CASE("cv with pinned true scales and symmetric data gives p near 1/2") {
  // Groups mirrored around zero and a single zero observation left out: the
  // replicate law of the maximum is symmetric around zero, so the true tail
  // probability is exactly 1/2.
  const Dataset data = validate_dataset({{"z", 0.0},
                                         {"p1", 1.3}, {"p1", 0.7},
                                         {"m1", -1.3}, {"m1", -0.7},
                                         {"p2", 2.1}, {"p2", 0.4},
                                         {"m2", -2.1}, {"m2", -0.4}});
  CheckConfig cfg;
  cfg.kinds = {Discrepancy::MaxObs};
  cfg.sampler.m_draws = 4000;
  cfg.sampler.burn_in = 400;
  cfg.sampler.seed = 99;
  cfg.sampler.fix_sigma2 = 1.0;
  cfg.sampler.fix_tau2 = 1.0;
  const auto p = cv_ppc_group(data, 0, ModelSpec::normal_normal(), cfg);
  CHECK(std::abs(p.at(Discrepancy::MaxObs) - 0.5) < 0.04);
}

TEST_CASE("regular check on mirror-symmetric data gives p exactly 1/2 in expectation") {
  // The dataset is invariant under negation and the priors are scale/location
  // objective, so the posterior of the zero group's center is symmetric
  // around zero and P(replicate max > 0) is exactly one half.
  const Dataset data = validate_dataset({{"z", 0.0},
                                         {"p1", 1.3}, {"p1", 0.7},
                                         {"m1", -1.3}, {"m1", -0.7},
                                         {"p2", 2.1}, {"p2", 0.4},
                                         {"m2", -2.1}, {"m2", -0.4}});
  CheckConfig cfg;
  cfg.kinds = {Discrepancy::MaxObs};
  cfg.sampler.m_draws = 4000;
  cfg.sampler.burn_in = 500;
  cfg.sampler.seed = 2718;
  const CheckReport report = ppc_report(data, ModelSpec::normal_normal(), cfg);
  CHECK(std::abs(report.p(0, 0) - 0.5) < 0.04);
}

TEST_CASE("literal mode runs for data-dependent kinds") {
  const Dataset data = five_groups();
  CheckConfig cfg = quick_config(41);
  cfg.kinds = {Discrepancy::MaxObs, Discrepancy::Level1X2};
  cfg.theta_mode = ThetaMode::Literal;
  const auto p = cv_ppc_group(data, 0, ModelSpec::normal_normal(), cfg);
  CHECK(p.at(Discrepancy::MaxObs) >= 0.0);
  CHECK(p.at(Discrepancy::Level1X2) <= 1.0);
}

TEST_CASE("student-t model cv check runs end to end") {
  const Dataset data = five_groups();
  const ModelSpec spec = ModelSpec::student_t(3.0, 2.2);
  CheckConfig cfg = quick_config(51, 200, 80);
  const CheckReport report = cv_ppc_report(data, spec, cfg);
  for (int kk = 0; kk < report.p.rows(); ++kk) {
    for (int i = 0; i < report.p.cols(); ++i) {
      CHECK(report.p(kk, i) >= 0.0);
      CHECK(report.p(kk, i) <= 1.0);
    }
  }
}
