#pragma once

#include <vector>

#include "dpbinom/distributions.hpp"
#include "dpbinom/rng.hpp"

namespace dpbinom {

enum class Side { Greater, Less };

enum class TestKind {
  OneSidedGreater,
  OneSidedLess,
  Bonferroni,
  Umpu,
  ApproxUmpu,
};

// Randomized test on counts 0..n: phi[x] is the rejection probability at x.
// Construction guarantees the privacy inequalities (see verify_dp) and exact
// size alpha under the null weights.
struct TestVector {
  int n;
  std::vector<double> phi;
  double theta0;
  double alpha;
  PrivacyParams privacy;
  TestKind kind;
  // Mean of (x - n*theta0) under phi * null pmf; meaningful for the
  // two-sided kinds, 0.0 otherwise.
  double unbiasedness_residual = 0.0;
};

enum class NullKind { Binomial, Hypergeometric };

// The single private release Z = x + noise; every downstream inference is a
// post-processing of this value.
struct PrivateSummary {
  double z;
  int n;
  PrivacyParams privacy;
  NullKind null_pmf_kind = NullKind::Binomial;
};

struct Decision {
  bool reject;
  double rejection_probability;
};

// Releases Z = x + noise with noise centered at 0. Throws DomainError on x
// outside [0, n].
PrivateSummary privatize(int x, int n, const PrivacyParams& privacy, Rng& rng);

// Offset m such that the one-sided test has exact size alpha under
// Binomial(n, theta0): side Greater solves sum F(x - m) pmf[x] = alpha,
// side Less solves sum (1 - F(x - m)) pmf[x] = alpha. The size is continuous
// and strictly monotone in m, so the root is unique.
double calibrate_m(int n, double theta0, double alpha,
                   const PrivacyParams& privacy, Side side);

// phi[x] = F(x - m) (Greater) or 1 - F(x - m) (Less) at the calibrated m.
TestVector test_vector_one_sided(int n, double theta0, double alpha,
                                 const PrivacyParams& privacy, Side side);

// F(x - z) for x = 0..n with noise shape from privacy; the z-dependent half
// of the p-value dot product, reusable across null weights.
std::vector<double> cdf_offset_vector(double z, int n,
                                      const PrivacyParams& privacy);

// One-sided p-value: Greater is sum F(x - z) pmf[x]; Less is its complement.
// Nonincreasing in z; for the binomial null, nondecreasing in theta0.
// null_pmf defaults to Binomial(n, theta0).
double ump_pvalue(double z, int n, double theta0, const PrivacyParams& privacy,
                  Side side, const PmfVector* null_pmf = nullptr);

// Bernoulli(phi[x]) draw. Throws DomainError on x outside [0, n].
Decision decide(const TestVector& tv, int x, Rng& rng);

// Result of checking the 4n privacy inequalities
//   phi[x]   <= e^eps * phi[x-1] + delta
//   phi[x-1] <= e^eps * phi[x]   + delta
// and the same pair for 1 - phi.
struct DpReport {
  bool passes;
  double max_violation;  // most positive left-minus-right difference
  int worst_x;           // the x of the worst pair (paired with x - 1)
};

// passes iff max_violation <= 1e-12.
DpReport verify_dp(const TestVector& tv, const PrivacyParams& privacy);

}  // namespace dpbinom
