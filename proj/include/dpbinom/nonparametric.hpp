#pragma once

#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/one_sided.hpp"
#include "dpbinom/rng.hpp"

namespace dpbinom {

enum class Alternative { Greater, Less, TwoSided };

struct PairedSample {
  std::vector<double> x;
  std::vector<double> y;
};

struct SignStat {
  int t = 0;            // pairs with x > y
  int n_effective = 0;  // pairs that were not ties
  int ties = 0;
};

// Counts strict x > y among pairs, dropping exact ties from the sample size.
SignStat sign_statistic(const PairedSample& sample);

struct NonparamResult {
  double z = 0.0;
  double p_value = 1.0;
  int n_effective = 0;
  int ties_dropped = 0;
};

// Privatized sign test of H: P(x > y | x != y) against theta0.
// Changing one pair moves the count by at most one, so the binomial
// machinery applies unchanged.
NonparamResult sign_test(const PairedSample& sample, double theta0,
                         const PrivacyParams& privacy, Rng& rng,
                         Alternative alt);

struct TwoSample {
  std::vector<double> x;
  std::vector<double> y;
};

// Number of x-values among the top half of the pooled sample. Requires equal
// sample sizes and fully distinct pooled values.
int median_statistic(const TwoSample& sample);

// Privatized two-sample median test; the statistic is hypergeometric under
// the null of exchangeability, centered at n/2.
NonparamResult median_test(const TwoSample& sample,
                           const PrivacyParams& privacy, Rng& rng,
                           Alternative alt);

}  // namespace dpbinom
