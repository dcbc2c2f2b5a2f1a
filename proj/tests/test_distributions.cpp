#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/errors.hpp"
#include "dpbinom/rng.hpp"
#include "test_util.hpp"

using namespace dpbinom;

TEST_CASE("cdf closed-form values at b=0.5") {
  const TulapParams t = make_tulap(0.0, 0.5, 0.0);
  CHECK(std::abs(tulap_cdf(0.0, t) - 0.5) < 1e-15);
  CHECK(std::abs(tulap_cdf(1.0, t) - 0.75) < 1e-15);
  CHECK(std::abs(tulap_cdf(-1.0, t) - 0.25) < 1e-15);
  // symmetric truncation preserves the median
  const TulapParams tq = make_tulap(0.0, 0.5, 1.0 / 6.0);
  CHECK(std::abs(tulap_cdf(0.0, tq) - 0.5) < 1e-15);
}

TEST_CASE("cdf symmetry about the location") {
  for (const double q : {0.0, 0.25}) {
    const TulapParams t = make_tulap(1.3, 0.37, q);
    for (double off = -7.0; off <= 7.0; off += 0.137) {
      const double sum = tulap_cdf(1.3 + off, t) + tulap_cdf(1.3 - off, t);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("cdf is nondecreasing and continuous") {
  const TulapParams t = make_tulap(0.0, 0.6, 0.1);
  double prev = 0.0;
  for (double x = -12.0; x <= 12.0; x += 0.01) {
    const double f = tulap_cdf(x, t);
    CHECK(f >= prev - 1e-15);
    prev = f;
  }
  // no jumps at half-integers: wrong tie-breaking in the nearest-integer
  // rounding would show up as a step here
  for (const double x : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) {
    const double gap =
        std::abs(tulap_cdf(x + 1e-9, t) - tulap_cdf(x - 1e-9, t));
    CHECK(gap < 1e-7);
  }
}

TEST_CASE("one-step growth identity, no truncation") {
  for (const double b : {0.1, 0.5, 0.9}) {
    const TulapParams t = make_tulap(0.0, b, 0.0);
    const double m = 0.77;
    for (int w = -6; w <= 5; ++w) {
      const double p = tulap_cdf(w - m, t);
      const double next = tulap_cdf(w + 1 - m, t);
      const double expected = std::min(p / b, 1.0 - b * (1.0 - p));
      CHECK(std::abs(next - expected) < 1e-12);
    }
  }
}

TEST_CASE("one-step growth identity with truncation") {
  struct Config {
    double epsilon, delta;
  };
  for (const Config c : {Config{1.0, 0.01}, Config{std::log(2.0), 0.1}}) {
    const PrivacyParams pp = privacy_to_tulap(c.epsilon, c.delta);
    const TulapParams t = make_tulap(0.0, pp.b, pp.q);
    const double ee = std::exp(c.epsilon);
    const double low_cut = (1.0 - c.delta) / (1.0 + ee);
    const double m = 0.3;
    for (int w = -8; w <= 8; ++w) {
      const double p = tulap_cdf(w - m, t);
      if (p <= 0.0) continue;  // the recurrence pins values after the 0-run
      const double next = tulap_cdf(w + 1 - m, t);
      double expected;
      if (p <= low_cut)
        expected = ee * p + c.delta;
      else if (p <= 1.0 - c.delta)
        expected = 1.0 - (1.0 - p) / ee + c.delta / ee;
      else
        expected = 1.0;
      CHECK(std::abs(next - expected) < 1e-10);
    }
  }
}

TEST_CASE("quantile values and round trip") {
  CHECK(std::abs(tulap_quantile(0.5, make_tulap(3.0, 0.4, 0.0)) - 3.0) <
        1e-9);
  CHECK(std::abs(tulap_quantile(0.75, make_tulap(0.0, 0.5, 0.0)) - 1.0) <
        1e-9);
  for (const auto& [b, q] : std::vector<std::pair<double, double>>{
           {0.5, 0.0}, {0.3, 0.2}, {0.9, 1.0 / 6.0}}) {
    for (const double m : {0.0, 2.5}) {
      const TulapParams t = make_tulap(m, b, q);
      double prev = -1e308;
      for (int i = 1; i <= 99; ++i) {
        const double p = 0.01 * i;
        const double x = tulap_quantile(p, t);
        CHECK(x >= prev);
        prev = x;
        CHECK(std::abs(tulap_cdf(x, t) - p) < 1e-10);
      }
    }
  }
  const TulapParams t = make_tulap(0.0, 0.5, 0.0);
  CHECK_THROWS_AS(tulap_quantile(0.0, t), DomainError);
  CHECK_THROWS_AS(tulap_quantile(1.0, t), DomainError);
  CHECK_THROWS_AS(tulap_quantile(-0.1, t), DomainError);
}

TEST_CASE("sampler moments at b=0.5") {
  const TulapParams t = make_tulap(0.0, 0.5, 0.0);
  Rng rng(12345);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = tulap_sample(t, rng);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double true_var = 49.0 / 12.0;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(true_var / n));
  CHECK(std::abs(var - true_var) < 0.01 * true_var);
}

TEST_CASE("sampler matches cdf in KS distance") {
  const TulapParams t = make_tulap(5.0, 0.3, 0.2);
  Rng rng(777);
  std::vector<double> draws(1000000);
  for (double& d : draws) d = tulap_sample(t, rng);
  const double ks = testutil::ks_distance(
      std::move(draws), [&](double x) { return tulap_cdf(x, t); });
  CHECK(ks < 0.002);
}

TEST_CASE("sampler cross-checks the closed-form cdf at x=1") {
  const TulapParams t = make_tulap(0.0, 0.5, 0.0);
  Rng rng(2024);
  const int n = 200000;
  int count = 0;
  for (int i = 0; i < n; ++i) count += tulap_sample(t, rng) <= 1.0;
  const double phat = static_cast<double>(count) / n;
  CHECK(std::abs(phat - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / n));
}

TEST_CASE("noise degenerates to uniform as b goes to 0") {
  const TulapParams t = make_tulap(0.0, 0.0, 0.0);
  CHECK(tulap_cdf(-0.5, t) == 0.0);
  CHECK(std::abs(tulap_cdf(0.0, t) - 0.5) < 1e-15);
  CHECK(tulap_cdf(0.5, t) == 1.0);
  CHECK(std::abs(tulap_cdf(0.25, t) - 0.75) < 1e-15);
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = tulap_sample(t, rng);
    CHECK(v > -0.5);
    CHECK(v < 0.5);
  }
  const PrivacyParams strong = privacy_to_tulap(50.0, 0.0);
  CHECK(strong.b < 2e-22);
}

TEST_CASE("privacy parameter mapping") {
  const PrivacyParams p = privacy_to_tulap(std::log(2.0), 0.1);
  CHECK(std::abs(p.b - 0.5) < 1e-15);
  CHECK(std::abs(p.q - 1.0 / 6.0) < 1e-15);
  const PrivacyParams p0 = privacy_to_tulap(1.0, 0.0);
  CHECK(p0.q == 0.0);
  CHECK(std::abs(p0.b - std::exp(-1.0)) < 1e-15);
  CHECK_THROWS_AS(privacy_to_tulap(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(privacy_to_tulap(1e-11, 0.0), DomainError);
  CHECK_THROWS_AS(privacy_to_tulap(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(privacy_to_tulap(1.0, -0.1), DomainError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(privacy_to_tulap(nan, 0.0), DomainError);
}

TEST_CASE("geometric draws count failures before a success") {
  Rng rng(31);
  const int n = 200000;
  double sum = 0.0;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t g = rng.geometric(0.5);
    sum += static_cast<double>(g);
    zeros += g == 0;
  }
  const double mean = sum / n;  // b / (1 - b) = 1
  CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(2.0 / n));
  // P(G = 0) = 1 - b
  CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) <
        3.0 * std::sqrt(0.25 / n));
  CHECK(rng.geometric(0.0) == 0);
}

TEST_CASE("laplace sampler moments") {
  Rng rng(55);
  const int n = 1000000;
  double sumsq = 0.0;
  int nonpos = 0;
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) {
    const double v = laplace_sample(1.0, rng);
    draws[static_cast<size_t>(i)] = v;
    sumsq += v * v;
    nonpos += v <= 0.0;
  }
  CHECK(std::abs(sumsq / n - 2.0) < 0.04);
  CHECK(std::abs(static_cast<double>(nonpos) / n - 0.5) < 0.002);
  std::nth_element(draws.begin(), draws.begin() + n / 2, draws.end());
  CHECK(std::abs(draws[n / 2]) < 0.01);
  CHECK_THROWS_AS(laplace_sample(0.0, rng), DomainError);
  CHECK_THROWS_AS(laplace_sample(-1.0, rng), DomainError);
}

TEST_CASE("binomial pmf vector") {
  const PmfVector p2 = binom_pmf_vector(2, 0.5);
  CHECK(std::abs(p2.weights[0] - 0.25) < 1e-15);
  CHECK(std::abs(p2.weights[1] - 0.5) < 1e-15);
  CHECK(std::abs(p2.weights[2] - 0.25) < 1e-15);
  const PmfVector p0 = binom_pmf_vector(0, 0.3);
  REQUIRE(p0.weights.size() == 1);
  CHECK(p0.weights[0] == 1.0);

  for (const int n : {1, 2, 5, 17, 30}) {
    const std::vector<double> choose = testutil::pascal_row(n);
    for (int ti = 0; ti <= 10; ++ti) {
      const double theta = 0.1 * ti;
      const PmfVector p = binom_pmf_vector(n, theta);
      double sum = 0.0;
      for (int x = 0; x <= n; ++x) {
        const double naive = choose[static_cast<size_t>(x)] *
                             std::pow(theta, x) *
                             std::pow(1.0 - theta, n - x);
        CHECK(std::abs(p.weights[static_cast<size_t>(x)] - naive) < 1e-12);
        sum += p.weights[static_cast<size_t>(x)];
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(binom_pmf_vector(5, -0.1), DomainError);
  CHECK_THROWS_AS(binom_pmf_vector(5, 1.1), DomainError);
  CHECK_THROWS_AS(binom_pmf_vector(-1, 0.5), DomainError);
}

TEST_CASE("hypergeometric pmf vector") {
  const PmfVector h1 = hypergeom_pmf_vector(1);
  CHECK(std::abs(h1.weights[0] - 0.5) < 1e-15);
  CHECK(std::abs(h1.weights[1] - 0.5) < 1e-15);
  const PmfVector h2 = hypergeom_pmf_vector(2);
  CHECK(std::abs(h2.weights[0] - 1.0 / 6.0) < 1e-14);
  CHECK(std::abs(h2.weights[1] - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(h2.weights[2] - 1.0 / 6.0) < 1e-14);
  const PmfVector h7 = hypergeom_pmf_vector(7);
  double sum = 0.0;
  for (int t = 0; t <= 7; ++t) {
    CHECK(std::abs(h7.weights[static_cast<size_t>(t)] -
                   h7.weights[static_cast<size_t>(7 - t)]) < 1e-14);
    sum += h7.weights[static_cast<size_t>(t)];
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
  CHECK_THROWS_AS(hypergeom_pmf_vector(0), DomainError);
}

TEST_CASE("pmf validation") {
  PmfVector p = binom_pmf_vector(3, 0.4);
  CHECK_NOTHROW(validate_pmf(p));
  PmfVector bad = p;
  bad.weights.pop_back();
  CHECK_THROWS_AS(validate_pmf(bad), DomainError);
  bad = p;
  bad.weights[1] = -0.01;
  CHECK_THROWS_AS(validate_pmf(bad), DomainError);
  bad = p;
  bad.weights[1] += 0.5;
  CHECK_THROWS_AS(validate_pmf(bad), DomainError);
  bad = p;
  bad.weights[1] = std::nan("");
  CHECK_THROWS_AS(validate_pmf(bad), DomainError);
}

TEST_CASE("make_tulap and cdf input validation") {
  CHECK_THROWS_AS(make_tulap(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_tulap(0.0, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(make_tulap(0.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(make_tulap(0.0, 0.5, -0.1), DomainError);
  const TulapParams t = make_tulap(0.0, 0.5, 0.0);
  CHECK_THROWS_AS(tulap_cdf(std::nan(""), t), DomainError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(tulap_cdf(inf, t) == 1.0);
  CHECK(tulap_cdf(-inf, t) == 0.0);
}

TEST_CASE("replicate seed mixing separates points and replicates") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t p = 0; p < 20; ++p)
    for (std::uint64_t r = 0; r < 50; ++r)
      seen.insert(mix_seed(42, p, r));
  CHECK(seen.size() == 20u * 50u);
  CHECK(mix_seed(1, 2, 3) != mix_seed(2, 1, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
}
