#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/errors.hpp"
#include "dpbinom/intervals.hpp"
#include "dpbinom/one_sided.hpp"
#include "dpbinom/rng.hpp"
#include "dpbinom/two_sided.hpp"
#include "test_util.hpp"

using namespace dpbinom;

TEST_CASE("lower bound inverts the one-sided p-value") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  for (const double z : {4.0, 11.0, 18.5, 26.0}) {
    const IntervalResult r = ci_lower(z, 30, 0.05, priv);
    CHECK(r.upper == 1.0);
    if (r.lower > 1e-6 && r.lower < 1.0 - 1e-6) {
      const double p = ump_pvalue(z, 30, r.lower, priv, Side::Greater);
      CHECK(std::abs(p - 0.05) < 1e-6);
    }
    // duality: inside the region iff the p-value clears the level
    for (double theta = 0.05; theta < 1.0; theta += 0.1) {
      const double p = ump_pvalue(z, 30, theta, priv, Side::Greater);
      if (std::abs(p - 0.05) > 1e-7)
        CHECK((theta >= r.lower) == (p >= 0.05));
    }
  }
}

TEST_CASE("upper bound reflects the lower bound") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  for (const double z : {-2.0, 3.5, 9.0, 22.0, 31.0}) {
    const IntervalResult up = ci_upper(z, 30, 0.05, priv);
    const IntervalResult lo = ci_lower(30.0 - z, 30, 0.05, priv);
    CHECK(up.lower == 0.0);
    CHECK(std::abs(up.upper - (1.0 - lo.lower)) < 1e-6);
  }
}

TEST_CASE("intervals nest as the confidence level rises") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const double z = 13.0;
  const int n = 30;
  for (auto kind : {IntervalKind::Bonferroni, IntervalKind::ApproxUmpu}) {
    IntervalResult prev{};
    bool first = true;
    for (const double alpha : {0.2, 0.1, 0.05, 0.01}) {
      const IntervalResult cur = kind == IntervalKind::Bonferroni
                                     ? ci_bonferroni(z, n, alpha, priv)
                                     : ci_approx_umpu(z, n, alpha, priv);
      if (!first) {
        CHECK(cur.lower <= prev.lower + 1e-9);
        CHECK(cur.upper >= prev.upper - 1e-9);
      }
      prev = cur;
      first = false;
    }
  }
}

TEST_CASE("equal-tails interval is built from half-level one-sided bounds") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const IntervalResult both = ci_bonferroni(11.0, 30, 0.05, priv);
  const IntervalResult lo = ci_lower(11.0, 30, 0.025, priv);
  const IntervalResult up = ci_upper(11.0, 30, 0.025, priv);
  CHECK(both.lower == doctest::Approx(lo.lower).epsilon(1e-12));
  CHECK(both.upper == doctest::Approx(up.upper).epsilon(1e-12));
  CHECK(both.lower < both.upper);
}

TEST_CASE("tiny alpha pushes one-sided bounds to the boundary") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const IntervalResult lo = ci_lower(15.0, 30, 1e-9, priv);
  CHECK(lo.lower < 1e-3);
  const IntervalResult up = ci_upper(15.0, 30, 1e-9, priv);
  CHECK(up.upper > 1.0 - 1e-3);
}

TEST_CASE("interval bounds stay in [0,1] for out-of-range statistics") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  for (const double z : {-40.0, -3.0, 33.0, 70.0}) {
    for (const IntervalResult r :
         {ci_lower(z, 30, 0.05, priv), ci_upper(z, 30, 0.05, priv),
          ci_bonferroni(z, 30, 0.05, priv), ci_approx_umpu(z, 30, 0.05, priv)}) {
      CHECK(r.lower >= 0.0);
      CHECK(r.upper <= 1.0);
      CHECK(r.lower <= r.upper);
    }
  }
}

TEST_CASE("pinned-center interval contains the point estimate") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  for (const double z : {2.0, 7.5, 16.0, 28.0}) {
    const IntervalResult r = ci_approx_umpu(z, 30, 0.05, priv);
    if (!r.unimodality_warning) {
      const double anchor = std::clamp(z / 30.0, 0.0, 1.0);
      CHECK(r.lower <= anchor + 1e-9);
      CHECK(r.upper >= anchor - 1e-9);
    }
  }
}

TEST_CASE("one-sided coverage meets the nominal level") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  Rng rng(99);
  const int reps = 1000;
  const double theta = 0.4;
  int covered = 0;
  for (int i = 0; i < reps; ++i) {
    const int x = rng.binomial(30, theta);
    const double z = x + tulap_sample(noise, rng);
    const IntervalResult r = ci_lower(z, 30, 0.05, priv);
    covered += theta >= r.lower;
  }
  const double se = std::sqrt(0.95 * 0.05 / reps);
  CHECK(static_cast<double>(covered) / reps >= 0.95 - 3.0 * se);
}

TEST_CASE("two-sided coverage lands near the nominal level") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  const int reps = 1000;
  for (const double theta : {0.2, 0.5}) {
    Rng rng(mix_seed(7, static_cast<uint64_t>(theta * 100), 0));
    int cov_b = 0, cov_a = 0;
    double width_b = 0.0, width_a = 0.0;
    for (int i = 0; i < reps; ++i) {
      const int x = rng.binomial(30, theta);
      const double z = x + tulap_sample(noise, rng);
      const IntervalResult rb = ci_bonferroni(z, 30, 0.05, priv);
      const IntervalResult ra = ci_approx_umpu(z, 30, 0.05, priv);
      cov_b += theta >= rb.lower && theta <= rb.upper;
      cov_a += theta >= ra.lower && theta <= ra.upper;
      width_b += rb.upper - rb.lower;
      width_a += ra.upper - ra.lower;
    }
    CHECK(static_cast<double>(cov_b) / reps >= 0.93);
    CHECK(static_cast<double>(cov_a) / reps >= 0.93);
    CHECK(static_cast<double>(cov_a) / reps <= 0.975);
    // the pinned-center interval is shorter on average near the middle
    if (theta == 0.5) CHECK(width_a < width_b);
  }
}

TEST_CASE("searched interval is symmetric at the central statistic") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const IntervalResult r = ci_umau(15.0, 30, 0.05, priv);
  CHECK_FALSE(r.unimodality_warning);
  CHECK(std::abs((r.lower + r.upper) / 2.0 - 0.5) < 2e-3);
  CHECK(r.lower < 0.5);
  CHECK(r.upper > 0.5);
}

TEST_CASE("searched interval coverage is near nominal") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  Rng rng(4242);
  const int reps = 200;
  const double theta = 0.5;
  int covered = 0;
  for (int i = 0; i < reps; ++i) {
    const int x = rng.binomial(30, theta);
    const double z = x + tulap_sample(noise, rng);
    const IntervalResult r = ci_umau(z, 30, 0.05, priv);
    covered += theta >= r.lower && theta <= r.upper;
  }
  const double se = std::sqrt(0.95 * 0.05 / reps);
  CHECK(static_cast<double>(covered) / reps >= 0.95 - 3.0 * se);
  CHECK(static_cast<double>(covered) / reps <= 0.95 + 3.0 * se + 1e-12);
}

TEST_CASE("confidence curve endpoints and monotonicity") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  const double z = 13.0;
  const int n = 30;
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.01 * i);
  const CdResult cd = confidence_distribution(z, n, priv, grid);
  REQUIRE(cd.values.size() == grid.size());
  CHECK(std::abs(cd.values.front() - tulap_cdf(0.0 - z, noise)) < 1e-12);
  CHECK(std::abs(cd.values.back() - tulap_cdf(n - z, noise)) < 1e-12);
  for (size_t i = 1; i < cd.values.size(); ++i)
    CHECK(cd.values[i] >= cd.values[i - 1] - 1e-12);
}

TEST_CASE("confidence curve quantile matches the lower bound") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const double z = 13.0;
  const int n = 30;
  for (const double alpha : {0.025, 0.05, 0.2, 0.5}) {
    const IntervalResult lo = ci_lower(z, n, alpha, priv);
    // invert the curve by bisection on the p-value itself
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (a + b);
      if (ump_pvalue(z, n, mid, priv, Side::Greater) < alpha)
        a = mid;
      else
        b = mid;
    }
    CHECK(std::abs(lo.lower - 0.5 * (a + b)) < 1e-6);
  }
}

TEST_CASE("confidence-curve median is a median-unbiased estimator") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  Rng rng(808);
  const int reps = 2000;
  const double theta = 0.35;
  int below = 0;
  for (int i = 0; i < reps; ++i) {
    const int x = rng.binomial(30, theta);
    const double z = x + tulap_sample(noise, rng);
    below += confidence_distribution_median(z, 30, priv) <= theta;
  }
  const double frac = static_cast<double>(below) / reps;
  const double se = std::sqrt(0.25 / reps);
  CHECK(std::abs(frac - 0.5) < 3.0 * se);
}

TEST_CASE("interval and curve argument validation") {
  const PrivacyParams priv = privacy_to_tulap(1.0, 0.0);
  CHECK_THROWS_AS(ci_lower(3.0, 30, 0.0, priv), DomainError);
  CHECK_THROWS_AS(ci_lower(3.0, 30, 1.0, priv), DomainError);
  CHECK_THROWS_AS(ci_lower(3.0, -2, 0.05, priv), DomainError);
  CHECK_THROWS_AS(ci_umau(std::nan(""), 30, 0.05, priv), DomainError);
  CHECK_THROWS_AS(
      confidence_distribution(3.0, 30, priv, {0.5, 0.4}), DomainError);
  CHECK_THROWS_AS(
      confidence_distribution(3.0, 30, priv, {-0.1, 0.5}), DomainError);
  CHECK_THROWS_AS(confidence_distribution(3.0, 30, priv, {}), DomainError);
}
