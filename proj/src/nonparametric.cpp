#include "dpbinom/nonparametric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dpbinom/errors.hpp"
#include "dpbinom/two_sided.hpp"

namespace dpbinom {

SignStat sign_statistic(const PairedSample& sample) {
  if (sample.x.size() != sample.y.size())
    throw DomainError("paired sample requires equal-length x and y");
  if (sample.x.empty()) throw DomainError("paired sample is empty");
  SignStat s;
  for (size_t i = 0; i < sample.x.size(); ++i) {
    const double a = sample.x[i];
    const double b = sample.y[i];
    if (std::isnan(a) || std::isnan(b))
      throw DomainError("paired sample contains NaN");
    if (a > b)
      ++s.t;
    else if (a == b)
      ++s.ties;
  }
  s.n_effective = static_cast<int>(sample.x.size()) - s.ties;
  if (s.n_effective < 1)
    throw DomainError("all pairs are tied; no information remains");
  return s;
}

NonparamResult sign_test(const PairedSample& sample, double theta0,
                         const PrivacyParams& privacy, Rng& rng,
                         Alternative alt) {
  if (!(theta0 > 0.0 && theta0 < 1.0))
    throw DomainError("theta0 must lie strictly inside (0, 1)");
  const SignStat s = sign_statistic(sample);
  const PrivateSummary summary = privatize(s.t, s.n_effective, privacy, rng);
  NonparamResult out;
  out.z = summary.z;
  out.n_effective = s.n_effective;
  out.ties_dropped = s.ties;
  switch (alt) {
    case Alternative::Greater:
      out.p_value =
          ump_pvalue(out.z, s.n_effective, theta0, privacy, Side::Greater);
      break;
    case Alternative::Less:
      out.p_value =
          ump_pvalue(out.z, s.n_effective, theta0, privacy, Side::Less);
      break;
    case Alternative::TwoSided:
      out.p_value = approx_pvalue(out.z, s.n_effective, theta0, privacy);
      break;
  }
  return out;
}

int median_statistic(const TwoSample& sample) {
  const size_t n = sample.x.size();
  if (n != sample.y.size())
    throw DomainError("median test requires equal sample sizes");
  if (n < 1) throw DomainError("samples are empty");
  std::vector<double> pooled;
  pooled.reserve(2 * n);
  for (const double v : sample.x) {
    if (std::isnan(v)) throw DomainError("sample contains NaN");
    pooled.push_back(v);
  }
  for (const double v : sample.y) {
    if (std::isnan(v)) throw DomainError("sample contains NaN");
    pooled.push_back(v);
  }
  std::sort(pooled.begin(), pooled.end());
  for (size_t i = 1; i < pooled.size(); ++i)
    if (pooled[i] == pooled[i - 1])
      throw DomainError("pooled sample contains tied values");
  // Values above the n-th smallest are exactly the top half.
  const double cut = pooled[n - 1];
  int t = 0;
  for (const double v : sample.x)
    if (v > cut) ++t;
  return t;
}

NonparamResult median_test(const TwoSample& sample,
                           const PrivacyParams& privacy, Rng& rng,
                           Alternative alt) {
  const int t = median_statistic(sample);
  const int n = static_cast<int>(sample.x.size());
  const PrivateSummary summary = privatize(t, n, privacy, rng);
  const PmfVector pmf = hypergeom_pmf_vector(n);
  NonparamResult out;
  out.z = summary.z;
  out.n_effective = n;
  out.ties_dropped = 0;
  // The null distribution is symmetric about n/2, so theta0 = 1/2 centers
  // the two-sided distance statistic correctly.
  switch (alt) {
    case Alternative::Greater:
      out.p_value = ump_pvalue(out.z, n, 0.5, privacy, Side::Greater, &pmf);
      break;
    case Alternative::Less:
      out.p_value = ump_pvalue(out.z, n, 0.5, privacy, Side::Less, &pmf);
      break;
    case Alternative::TwoSided:
      out.p_value = approx_pvalue(out.z, n, 0.5, privacy, &pmf);
      break;
  }
  return out;
}

}  // namespace dpbinom
