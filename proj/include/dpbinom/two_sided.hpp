#pragma once

#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/one_sided.hpp"

namespace dpbinom {

// Equal-tails two-sided p-value: twice the smaller one-sided p, capped at 1.
double bonferroni_pvalue(double z, int n, double theta0,
                         const PrivacyParams& privacy,
                         const PmfVector* null_pmf = nullptr);

// Pointwise sum of the two one-sided level-alpha/2 vectors, capped at 1.
TestVector bonferroni_test_vector(int n, double theta0, double alpha,
                                  const PrivacyParams& privacy);

// Two-sided unbiased test phi(x) = F(|x - k| - m) with k, m solved so that
// size = alpha and the first-moment (unbiasedness) condition holds.
struct UmpuSolution {
  double k = 0.0;
  double m = 0.0;
  int n = 0;
  double theta0 = 0.0;
  double alpha = 0.0;
  PrivacyParams privacy;
  double size_achieved = 0.0;
  // Residual of the centered first-moment equation at the solution.
  double unbiasedness_residual = 0.0;
};

UmpuSolution umpu_solve(int n, double theta0, double alpha,
                        const PrivacyParams& privacy);

TestVector umpu_test_vector(int n, double theta0, double alpha,
                            const PrivacyParams& privacy);

// Same functional form with the center pinned at n * theta0; only the
// threshold m is calibrated, so size = alpha but exact unbiasedness is
// given up (it still holds when theta0 = 1/2 by symmetry).
TestVector approx_umpu_test_vector(int n, double theta0, double alpha,
                                   const PrivacyParams& privacy);

// Two-sided p-value of the distance statistic |z - n * theta0|:
// the null probability that a fresh private statistic lands at least as far
// from n * theta0 as z did, on either side.
double approx_pvalue(double z, int n, double theta0,
                     const PrivacyParams& privacy,
                     const PmfVector* null_pmf = nullptr);

// Deterministic level-alpha rule applied to the released statistic: centers
// the cut at the unbiased-test solution k(alpha), then widens it so the null
// probability of the rejection event |Z - k| >= t is exactly alpha. Reusing
// the per-count threshold m(alpha) directly would over-reject, because the
// far tail of the noise can cross the near cut as well.
bool umau_rejects(double z, int n, double theta0, double alpha,
                  const PrivacyParams& privacy);

struct UmauPvalue {
  double value = 1.0;
  // False if the reject-at-level-alpha predicate was not monotone along the
  // probe grid; the reported value is then the first crossing found.
  bool predicate_monotone = true;
};

// Smallest alpha at which the exact-size rule of umau_rejects fires for z,
// found by probing a 50-point alpha grid and bisecting the first crossing.
UmauPvalue umau_pvalue(double z, int n, double theta0,
                       const PrivacyParams& privacy);

}  // namespace dpbinom
