#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/one_sided.hpp"

namespace dpbinom {

enum class Method {
  UmpLeft,    // one-sided test of H: theta >= theta0 (rejects for small z)
  UmpRight,   // one-sided test of H: theta <= theta0 (rejects for large z)
  Umpu,
  ApproxUmpu,
  Bonferroni,
  BaselineNormal,
  NonPrivate,
};

std::string method_name(Method m);

struct SimRow {
  int n = 0;
  double theta0 = 0.0;
  double theta = 0.0;  // true parameter the data were drawn from
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  std::string method;
  std::string quantity;  // power | type1_error | coverage | mean_width
  double estimate = 0.0;
  double mc_se = 0.0;  // zero for exactly computed quantities
};

struct SimResult {
  std::vector<SimRow> rows;
};

std::string to_csv(const SimResult& result);

// Exact power: expected value of the test vector under Binomial(n, theta).
double exact_power(const TestVector& tv, double theta);

// Upper-tail p-value of the plug-in normal approximation: the private
// statistic is compared to a normal with the null mean and variance
// n * theta0 * (1 - theta0) + 2 / epsilon^2 (binomial sampling noise plus
// the variance of the Laplace privacy noise).
double baseline_normal_pvalue(double z, int n, double theta0, double epsilon);

// Power of one-sided tests versus sample size, estimated by simulation for
// the private UMP test, the plug-in normal baseline (Laplace noise), and the
// non-private randomized UMP test.
struct PowerVsNConfig {
  std::vector<int> n_grid = {30, 50, 100, 200, 300, 500, 700, 1000};
  double theta0 = 0.9;
  double theta = 0.95;
  double epsilon = 1.0;
  double delta = 0.0;
  double alpha = 0.05;
  long long replicates = 10000;
  std::uint64_t seed = 1;
};

SimResult power_vs_n(const PowerVsNConfig& config);

// Empirical type I error of the one-sided private UMP test and the plug-in
// normal baseline across null values.
struct Type1Config {
  int n = 30;
  std::vector<double> theta0_grid;  // default 0.02, 0.04, ..., 0.98
  double epsilon = 1.0;
  double delta = 0.0;
  double alpha = 0.05;
  long long replicates = 100000;
  std::uint64_t seed = 1;
};

SimResult type1_sweep(const Type1Config& config);

// Exact power of the five two-sided-capable tests. With an n_grid the truth
// is fixed and n varies; otherwise n is fixed and the truth sweeps a grid.
struct TwoSidedPowerConfig {
  int n = 30;
  double theta0 = 0.1;
  std::vector<double> theta_grid;  // default 0.0, 0.01, ..., 1.0
  std::vector<int> n_grid;         // switches to power-versus-n mode
  double theta = 0.75;             // truth used in n-grid mode
  double epsilon = 0.1;
  double delta = 0.0;
  double alpha = 0.05;
};

SimResult two_sided_power_sweep(const TwoSidedPowerConfig& config);

// Mean width and empirical coverage of the equal-tails and distance-based
// two-sided intervals, by simulation. With an n_grid the truth is fixed and
// n varies; otherwise n is fixed and the truth sweeps a grid.
struct CiWidthConfig {
  int n = 30;
  std::vector<double> theta_grid;  // default 0.05, 0.10, ..., 0.95
  std::vector<int> n_grid;         // switches to width-versus-n mode
  double theta = 0.5;              // truth used in n-grid mode
  double epsilon = 1.0;
  double delta = 0.0;
  double alpha = 0.05;
  long long replicates = 1000;
  std::uint64_t seed = 1;
};

SimResult ci_width_sweep(const CiWidthConfig& config);

}  // namespace dpbinom
