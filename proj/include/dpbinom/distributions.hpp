#pragma once

#include <vector>

#include "dpbinom/rng.hpp"

namespace dpbinom {

// Privacy budget and the noise shape it induces:
//   b = exp(-epsilon), q = 2*delta*b / (1 - b + 2*delta*b).
// delta = 0 if and only if q = 0; q is strictly increasing in delta.
struct PrivacyParams {
  double epsilon;
  double delta;
  double b;
  double q;
};

// Validates (epsilon, delta) and derives (b, q). Throws DomainError on
// epsilon < 1e-10, delta outside [0, 1), or non-finite inputs.
PrivacyParams privacy_to_tulap(double epsilon, double delta);

// Noise distribution parameters: location m, geometric base b in [0, 1),
// truncation mass q in [0, 1). The distribution is a difference of two
// geometrics plus Uniform(-1/2, 1/2), shifted by m and truncated
// symmetrically to the central 1 - q probability mass. b = 0 is the
// degenerate uniform-only limit.
struct TulapParams {
  double m;
  double b;
  double q;
};

// Validates parameters; b is clamped to at most 1 - 1e-12.
TulapParams make_tulap(double m, double b, double q);

// Exact cdf. Nondecreasing, continuous, symmetric: F(m+t) + F(m-t) = 1.
// Non-finite x maps to 0 or 1 by sign; NaN is a DomainError.
double tulap_cdf(double x, const TulapParams& p);

// Inverse cdf by bisection, absolute tolerance 1e-12 in x.
// Throws DomainError on prob outside (0, 1).
double tulap_quantile(double prob, const TulapParams& p);

// One draw via two geometrics plus a uniform, with rejection when q > 0
// (acceptance probability 1 - q).
double tulap_sample(const TulapParams& p, Rng& rng);

// Probability vector on {0, ..., n}.
struct PmfVector {
  int n;
  std::vector<double> weights;
};

// Throws DomainError if weights has wrong length, a negative entry, a
// non-finite entry, or total mass off 1 by more than 1e-9.
void validate_pmf(const PmfVector& pmf);

// Binomial(n, theta) weights via log-gamma; exact point mass at theta 0 or 1.
PmfVector binom_pmf_vector(int n, double theta);

// Weights of the number of first-sample elements among the top n of a pooled
// ranking of two size-n samples: w[t] = C(n,t)*C(n,n-t)/C(2n,n).
PmfVector hypergeom_pmf_vector(int n);

// Centered Laplace draw. Throws DomainError on scale <= 0.
double laplace_sample(double scale, Rng& rng);

// Compensated dot product of two equal-length vectors.
double kahan_dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dpbinom
