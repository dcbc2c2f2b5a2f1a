#pragma once

#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/one_sided.hpp"

namespace dpbinom {

enum class IntervalKind {
  LowerOneSided,
  UpperOneSided,
  Bonferroni,
  ApproxUmpu,
  Umau,
};

struct IntervalResult {
  double lower = 0.0;
  double upper = 1.0;
  double coverage = 0.0;  // nominal coverage 1 - alpha
  IntervalKind kind = IntervalKind::LowerOneSided;
  double z = 0.0;
  int n = 0;
  // Set when the acceptance region probed non-contiguous: the reported
  // endpoints are then the outermost crossings.
  bool unimodality_warning = false;
};

// One-sided lower bound: smallest theta0 the upper-tail p-value does not
// reject at level alpha. Interval is [lower, 1].
IntervalResult ci_lower(double z, int n, double alpha,
                        const PrivacyParams& privacy);

// One-sided upper bound, mirror image: interval is [0, upper].
IntervalResult ci_upper(double z, int n, double alpha,
                        const PrivacyParams& privacy);

// Equal-tails interval: intersection of the two one-sided bounds at alpha/2.
IntervalResult ci_bonferroni(double z, int n, double alpha,
                             const PrivacyParams& privacy);

// Inverts the two-sided distance p-value around its anchor z/n.
IntervalResult ci_approx_umpu(double z, int n, double alpha,
                              const PrivacyParams& privacy);

// Inverts the exact unbiased test at fixed alpha: theta0 is kept when
// |z - k(theta0)| < m(theta0).
IntervalResult ci_umau(double z, int n, double alpha,
                       const PrivacyParams& privacy);

// Upper-tail p-value of z as a function of theta0: a cumulative confidence
// distribution over the parameter, evaluated on a grid.
struct CdResult {
  std::vector<double> grid;
  std::vector<double> values;
  double z = 0.0;
  int n = 0;
};

CdResult confidence_distribution(double z, int n, const PrivacyParams& privacy,
                                 const std::vector<double>& grid);

// Parameter value where the confidence distribution crosses 1/2.
double confidence_distribution_median(double z, int n,
                                      const PrivacyParams& privacy);

}  // namespace dpbinom
