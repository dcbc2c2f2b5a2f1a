#include "dpbinom/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dpbinom/errors.hpp"
#include "dpbinom/intervals.hpp"
#include "dpbinom/rng.hpp"
#include "dpbinom/two_sided.hpp"

namespace dpbinom {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double proportion_se(double p_hat, long long reps) {
  return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) /
                   static_cast<double>(reps));
}

// Noise-free limit: b = 0 makes the Tulap collapse to Uniform(-1/2, 1/2),
// which reproduces the classical randomized test.
PrivacyParams non_private_params() {
  PrivacyParams p;
  p.epsilon = std::numeric_limits<double>::infinity();
  p.delta = 0.0;
  p.b = 0.0;
  p.q = 0.0;
  return p;
}

void check_mc_config(double theta0, double alpha, long long replicates) {
  if (!(theta0 > 0.0 && theta0 < 1.0))
    throw DomainError("theta0 must lie strictly inside (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie strictly inside (0, 1)");
  if (replicates < 1) throw DomainError("replicates must be positive");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::UmpLeft: return "ump_left";
    case Method::UmpRight: return "ump_right";
    case Method::Umpu: return "umpu";
    case Method::ApproxUmpu: return "approx_umpu";
    case Method::Bonferroni: return "bonferroni";
    case Method::BaselineNormal: return "baseline_normal";
    case Method::NonPrivate: return "non_private";
  }
  throw DomainError("unknown method");
}

std::string to_csv(const SimResult& result) {
  std::ostringstream os;
  os << "n,theta0,theta,epsilon,delta,alpha,method,quantity,estimate,mc_se\n";
  for (const SimRow& r : result.rows) {
    os << r.n << ',' << fmt(r.theta0) << ',' << fmt(r.theta) << ','
       << fmt(r.epsilon) << ',' << fmt(r.delta) << ',' << fmt(r.alpha) << ','
       << r.method << ',' << r.quantity << ',' << fmt(r.estimate) << ','
       << fmt(r.mc_se) << '\n';
  }
  return os.str();
}

double exact_power(const TestVector& tv, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("theta must lie in [0, 1]");
  const PmfVector pmf = binom_pmf_vector(tv.n, theta);
  return clamp01(kahan_dot(tv.phi, pmf.weights));
}

double baseline_normal_pvalue(double z, int n, double theta0, double epsilon) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  if (n < 0) throw DomainError("n must be nonnegative");
  if (!(theta0 >= 0.0 && theta0 <= 1.0))
    throw DomainError("theta0 must lie in [0, 1]");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainError("epsilon must be positive and finite");
  const double var = n * theta0 * (1.0 - theta0) + 2.0 / (epsilon * epsilon);
  const double scaled = (z - n * theta0) / std::sqrt(2.0 * var);
  return 0.5 * std::erfc(scaled);
}

SimResult power_vs_n(const PowerVsNConfig& config) {
  check_mc_config(config.theta0, config.alpha, config.replicates);
  if (!(config.theta > 0.0 && config.theta < 1.0))
    throw DomainError("theta must lie strictly inside (0, 1)");
  if (config.n_grid.empty()) throw DomainError("n_grid is empty");
  const PrivacyParams priv =
      privacy_to_tulap(config.epsilon, config.delta);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  const PrivacyParams np = non_private_params();
  const double laplace_scale = 1.0 / config.epsilon;

  SimResult result;
  for (size_t i = 0; i < config.n_grid.size(); ++i) {
    const int n = config.n_grid[i];
    if (n < 1) throw DomainError("n must be positive");
    const PmfVector pmf0 = binom_pmf_vector(n, config.theta0);
    long long ump = 0, base = 0, nonpriv = 0;
    for (long long r = 0; r < config.replicates; ++r) {
      Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(r)));
      const int x = rng.binomial(n, config.theta);
      const double z = x + tulap_sample(noise, rng);
      if (ump_pvalue(z, n, config.theta0, priv, Side::Greater, &pmf0) <
          config.alpha)
        ++ump;
      const double zl = x + rng.laplace(laplace_scale);
      if (baseline_normal_pvalue(zl, n, config.theta0, config.epsilon) <
          config.alpha)
        ++base;
      const double zn = x + rng.uniform_centered();
      if (ump_pvalue(zn, n, config.theta0, np, Side::Greater, &pmf0) <
          config.alpha)
        ++nonpriv;
    }
    auto push = [&](Method m, long long count) {
      SimRow row;
      row.n = n;
      row.theta0 = config.theta0;
      row.theta = config.theta;
      row.epsilon = config.epsilon;
      row.delta = config.delta;
      row.alpha = config.alpha;
      row.method = method_name(m);
      row.quantity = "power";
      row.estimate =
          static_cast<double>(count) / static_cast<double>(config.replicates);
      row.mc_se = proportion_se(row.estimate, config.replicates);
      result.rows.push_back(std::move(row));
    };
    push(Method::UmpRight, ump);
    push(Method::BaselineNormal, base);
    push(Method::NonPrivate, nonpriv);
  }
  return result;
}

SimResult type1_sweep(const Type1Config& config) {
  if (config.n < 1) throw DomainError("n must be positive");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw DomainError("alpha must lie strictly inside (0, 1)");
  if (config.replicates < 1) throw DomainError("replicates must be positive");
  std::vector<double> grid = config.theta0_grid;
  if (grid.empty())
    for (int i = 1; i <= 49; ++i) grid.push_back(0.02 * i);
  const PrivacyParams priv =
      privacy_to_tulap(config.epsilon, config.delta);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  const double laplace_scale = 1.0 / config.epsilon;

  SimResult result;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double theta0 = grid[i];
    if (!(theta0 > 0.0 && theta0 < 1.0))
      throw DomainError("theta0 grid values must lie strictly inside (0, 1)");
    const PmfVector pmf0 = binom_pmf_vector(config.n, theta0);
    long long ump = 0, base = 0;
    for (long long r = 0; r < config.replicates; ++r) {
      Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(r)));
      const int x = rng.binomial(config.n, theta0);
      const double z = x + tulap_sample(noise, rng);
      if (ump_pvalue(z, config.n, theta0, priv, Side::Greater, &pmf0) <
          config.alpha)
        ++ump;
      const double zl = x + rng.laplace(laplace_scale);
      if (baseline_normal_pvalue(zl, config.n, theta0, config.epsilon) <
          config.alpha)
        ++base;
    }
    auto push = [&](Method m, long long count) {
      SimRow row;
      row.n = config.n;
      row.theta0 = theta0;
      row.theta = theta0;
      row.epsilon = config.epsilon;
      row.delta = config.delta;
      row.alpha = config.alpha;
      row.method = method_name(m);
      row.quantity = "type1_error";
      row.estimate =
          static_cast<double>(count) / static_cast<double>(config.replicates);
      row.mc_se = proportion_se(row.estimate, config.replicates);
      result.rows.push_back(std::move(row));
    };
    push(Method::UmpRight, ump);
    push(Method::BaselineNormal, base);
  }
  return result;
}

SimResult two_sided_power_sweep(const TwoSidedPowerConfig& config) {
  if (!(config.theta0 > 0.0 && config.theta0 < 1.0))
    throw DomainError("theta0 must lie strictly inside (0, 1)");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw DomainError("alpha must lie strictly inside (0, 1)");
  const PrivacyParams priv =
      privacy_to_tulap(config.epsilon, config.delta);

  auto vectors_for = [&](int n) {
    std::vector<std::pair<Method, TestVector>> out;
    out.emplace_back(Method::UmpLeft,
                     test_vector_one_sided(n, config.theta0, config.alpha,
                                           priv, Side::Less));
    out.emplace_back(Method::UmpRight,
                     test_vector_one_sided(n, config.theta0, config.alpha,
                                           priv, Side::Greater));
    out.emplace_back(Method::Umpu,
                     umpu_test_vector(n, config.theta0, config.alpha, priv));
    out.emplace_back(
        Method::ApproxUmpu,
        approx_umpu_test_vector(n, config.theta0, config.alpha, priv));
    out.emplace_back(
        Method::Bonferroni,
        bonferroni_test_vector(n, config.theta0, config.alpha, priv));
    return out;
  };

  auto push = [&](SimResult& result, int n, double theta, Method m,
                  double power) {
    SimRow row;
    row.n = n;
    row.theta0 = config.theta0;
    row.theta = theta;
    row.epsilon = config.epsilon;
    row.delta = config.delta;
    row.alpha = config.alpha;
    row.method = method_name(m);
    row.quantity = "power";
    row.estimate = power;
    row.mc_se = 0.0;  // computed exactly, no sampling involved
    result.rows.push_back(std::move(row));
  };

  SimResult result;
  if (!config.n_grid.empty()) {
    if (!(config.theta >= 0.0 && config.theta <= 1.0))
      throw DomainError("theta must lie in [0, 1]");
    for (const int n : config.n_grid) {
      if (n < 1) throw DomainError("n must be positive");
      for (const auto& [m, tv] : vectors_for(n))
        push(result, n, config.theta, m, exact_power(tv, config.theta));
    }
    return result;
  }

  if (config.n < 1) throw DomainError("n must be positive");
  std::vector<double> grid = config.theta_grid;
  if (grid.empty())
    for (int i = 0; i <= 100; ++i) grid.push_back(0.01 * i);
  const auto vectors = vectors_for(config.n);
  for (const double theta : grid)
    for (const auto& [m, tv] : vectors)
      push(result, config.n, theta, m, exact_power(tv, theta));
  return result;
}

SimResult ci_width_sweep(const CiWidthConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw DomainError("alpha must lie strictly inside (0, 1)");
  if (config.replicates < 1) throw DomainError("replicates must be positive");
  const PrivacyParams priv =
      privacy_to_tulap(config.epsilon, config.delta);
  const TulapParams noise = make_tulap(0.0, priv.b, priv.q);
  const long long reps = config.replicates;

  struct Acc {
    double width_sum = 0.0;
    double width_sumsq = 0.0;
    long long covered = 0;
  };

  SimResult result;
  auto run_point = [&](size_t point, int n, double theta) {
    if (n < 1) throw DomainError("n must be positive");
    if (!(theta > 0.0 && theta < 1.0))
      throw DomainError("theta must lie strictly inside (0, 1)");
    Acc bonf, apx;
    for (long long r = 0; r < reps; ++r) {
      Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(point),
                       static_cast<std::uint64_t>(r)));
      const int x = rng.binomial(n, theta);
      const double z = x + tulap_sample(noise, rng);
      const IntervalResult b = ci_bonferroni(z, n, config.alpha, priv);
      const IntervalResult a = ci_approx_umpu(z, n, config.alpha, priv);
      const double wb = b.upper - b.lower;
      const double wa = a.upper - a.lower;
      bonf.width_sum += wb;
      bonf.width_sumsq += wb * wb;
      bonf.covered += (b.lower <= theta && theta <= b.upper);
      apx.width_sum += wa;
      apx.width_sumsq += wa * wa;
      apx.covered += (a.lower <= theta && theta <= a.upper);
    }
    auto push = [&](Method m, const Acc& acc) {
      SimRow row;
      row.n = n;
      row.theta0 = theta;  // interval studies have no null value; echo truth
      row.theta = theta;
      row.epsilon = config.epsilon;
      row.delta = config.delta;
      row.alpha = config.alpha;
      row.method = method_name(m);
      const double mean = acc.width_sum / static_cast<double>(reps);
      row.quantity = "mean_width";
      row.estimate = mean;
      row.mc_se =
          reps > 1
              ? std::sqrt(std::max(0.0, acc.width_sumsq -
                                            acc.width_sum * mean) /
                          (static_cast<double>(reps - 1) *
                           static_cast<double>(reps)))
              : 0.0;
      result.rows.push_back(row);
      row.quantity = "coverage";
      row.estimate =
          static_cast<double>(acc.covered) / static_cast<double>(reps);
      row.mc_se = proportion_se(row.estimate, reps);
      result.rows.push_back(std::move(row));
    };
    push(Method::Bonferroni, bonf);
    push(Method::ApproxUmpu, apx);
  };

  if (!config.n_grid.empty()) {
    for (size_t i = 0; i < config.n_grid.size(); ++i)
      run_point(i, config.n_grid[i], config.theta);
    return result;
  }
  std::vector<double> grid = config.theta_grid;
  if (grid.empty())
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  for (size_t i = 0; i < grid.size(); ++i)
    run_point(i, config.n, grid[i]);
  return result;
}

}  // namespace dpbinom
