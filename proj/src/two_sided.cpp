#include "dpbinom/two_sided.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dpbinom/errors.hpp"
#include "rootfind.hpp"

namespace dpbinom {

namespace {

void check_two_sided(int n, double theta0, double alpha) {
  if (n < 0) throw DomainError("n must be nonnegative");
  if (!(theta0 > 0.0 && theta0 < 1.0))
    throw DomainError("theta0 must lie strictly inside (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie strictly inside (0, 1)");
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// phi(x) = F(|x - k| - m) evaluated over the support.
std::vector<double> folded_vector(int n, double k, double m,
                                  const TulapParams& noise) {
  std::vector<double> phi(static_cast<size_t>(n) + 1);
  for (int x = 0; x <= n; ++x)
    phi[static_cast<size_t>(x)] = tulap_cdf(std::abs(x - k) - m, noise);
  return phi;
}

// Calibrate m so that sum_x F(|x - k| - m) pmf[x] = alpha; decreasing in m.
double solve_m_for_center(int n, double k, double alpha,
                          const TulapParams& noise, const PmfVector& pmf,
                          double xtol) {
  auto size_of = [&](double m) {
    return kahan_dot(folded_vector(n, k, m, noise), pmf.weights);
  };
  return detail::solve_decreasing(size_of, alpha, -1.0, n + 1.0, 200, xtol,
                                  1e-10, "umpu threshold");
}

// Centered first moment of the rejection vector; positive when the center k
// sits left of the null mean, negative when it sits right of it.
double moment_residual(int n, double k, double m, double theta0,
                       const TulapParams& noise, const PmfVector& pmf) {
  std::vector<double> terms(static_cast<size_t>(n) + 1);
  for (int x = 0; x <= n; ++x)
    terms[static_cast<size_t>(x)] =
        (x - n * theta0) * tulap_cdf(std::abs(x - k) - m, noise);
  return kahan_dot(terms, pmf.weights);
}

}  // namespace

double bonferroni_pvalue(double z, int n, double theta0,
                         const PrivacyParams& privacy,
                         const PmfVector* null_pmf) {
  const double p_great =
      ump_pvalue(z, n, theta0, privacy, Side::Greater, null_pmf);
  return std::min(1.0, 2.0 * std::min(p_great, 1.0 - p_great));
}

TestVector bonferroni_test_vector(int n, double theta0, double alpha,
                                  const PrivacyParams& privacy) {
  check_two_sided(n, theta0, alpha);
  TestVector upper =
      test_vector_one_sided(n, theta0, alpha / 2.0, privacy, Side::Greater);
  const TestVector lower =
      test_vector_one_sided(n, theta0, alpha / 2.0, privacy, Side::Less);
  for (size_t i = 0; i < upper.phi.size(); ++i)
    upper.phi[i] = std::min(1.0, upper.phi[i] + lower.phi[i]);
  upper.alpha = alpha;
  upper.kind = TestKind::Bonferroni;
  return upper;
}

UmpuSolution umpu_solve(int n, double theta0, double alpha,
                        const PrivacyParams& privacy) {
  check_two_sided(n, theta0, alpha);
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  const PmfVector pmf = binom_pmf_vector(n, theta0);

  // Loose threshold solves while hunting for k, one tight solve at the end.
  auto residual_at = [&](double k, double xtol, double* m_out) {
    const double m = solve_m_for_center(n, k, alpha, noise, pmf, xtol);
    if (m_out) *m_out = m;
    return moment_residual(n, k, m, theta0, noise, pmf);
  };

  double lo = -1.0;
  double hi = n + 1.0;
  double r_lo = residual_at(lo, 1e-10, nullptr);
  double r_hi = residual_at(hi, 1e-10, nullptr);
  double k;
  if (r_lo > 0.0 && r_hi < 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double r_mid = residual_at(mid, 1e-10, nullptr);
      if (r_mid > 0.0) {
        lo = mid;
        r_lo = r_mid;
      } else {
        hi = mid;
        r_hi = r_mid;
      }
    }
    k = 0.5 * (lo + hi);
  } else if (std::abs(r_lo) <= 1e-9 && std::abs(r_hi) <= 1e-9) {
    // Degenerate support (n = 0): every center is unbiased.
    k = n * theta0;
  } else {
    throw ConvergenceError(
        "umpu center: moment residual does not change sign over [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  UmpuSolution sol;
  sol.k = k;
  sol.m = solve_m_for_center(n, k, alpha, noise, pmf, 1e-13);
  sol.n = n;
  sol.theta0 = theta0;
  sol.alpha = alpha;
  sol.privacy = privacy;
  sol.size_achieved =
      kahan_dot(folded_vector(n, k, sol.m, noise), pmf.weights);
  sol.unbiasedness_residual =
      moment_residual(n, k, sol.m, theta0, noise, pmf);
  return sol;
}

TestVector umpu_test_vector(int n, double theta0, double alpha,
                            const PrivacyParams& privacy) {
  const UmpuSolution sol = umpu_solve(n, theta0, alpha, privacy);
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  TestVector tv;
  tv.n = n;
  tv.phi = folded_vector(n, sol.k, sol.m, noise);
  tv.theta0 = theta0;
  tv.alpha = alpha;
  tv.privacy = privacy;
  tv.kind = TestKind::Umpu;
  tv.unbiasedness_residual = sol.unbiasedness_residual;
  return tv;
}

TestVector approx_umpu_test_vector(int n, double theta0, double alpha,
                                   const PrivacyParams& privacy) {
  check_two_sided(n, theta0, alpha);
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  const PmfVector pmf = binom_pmf_vector(n, theta0);
  const double k = n * theta0;
  const double m = solve_m_for_center(n, k, alpha, noise, pmf, 1e-13);
  TestVector tv;
  tv.n = n;
  tv.phi = folded_vector(n, k, m, noise);
  tv.theta0 = theta0;
  tv.alpha = alpha;
  tv.privacy = privacy;
  tv.kind = TestKind::ApproxUmpu;
  tv.unbiasedness_residual = moment_residual(n, k, m, theta0, noise, pmf);
  return tv;
}

double approx_pvalue(double z, int n, double theta0,
                     const PrivacyParams& privacy, const PmfVector* null_pmf) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  if (n < 0) throw DomainError("n must be nonnegative");
  if (!(theta0 >= 0.0 && theta0 <= 1.0))
    throw DomainError("theta0 must lie in [0, 1]");
  const double center = n * theta0;
  const double t = std::abs(z - center);
  // P(Z' >= center + t) + P(Z' <= center - t) for a fresh private statistic.
  const double upper_tail =
      ump_pvalue(center + t, n, theta0, privacy, Side::Greater, null_pmf);
  const double lower_tail =
      ump_pvalue(center - t, n, theta0, privacy, Side::Greater, null_pmf);
  return clamp01(upper_tail + 1.0 - lower_tail);
}

bool umau_rejects(double z, int n, double theta0, double alpha,
                  const PrivacyParams& privacy) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  check_two_sided(n, theta0, alpha);
  const UmpuSolution sol = umpu_solve(n, theta0, alpha, privacy);
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  const PmfVector pmf = binom_pmf_vector(n, theta0);
  // P(|X + N - k| >= t) under the null; equals 1 at t = 0 by symmetry, so
  // the bracket never has to extend below zero.
  auto cut_mass = [&](double t) {
    std::vector<double> terms(static_cast<size_t>(n) + 1);
    for (int x = 0; x <= n; ++x)
      terms[static_cast<size_t>(x)] = tulap_cdf(x - sol.k - t, noise) +
                                      tulap_cdf(sol.k - x - t, noise);
    return kahan_dot(terms, pmf.weights);
  };
  const double hi = std::max(sol.k, n - sol.k) + 1.0;
  const double t = detail::solve_decreasing(cut_mass, alpha, 0.0, hi, 80,
                                            1e-11, 1e-8, "release threshold");
  return std::abs(z - sol.k) >= t;
}

UmauPvalue umau_pvalue(double z, int n, double theta0,
                       const PrivacyParams& privacy) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  check_two_sided(n, theta0, 0.5);

  auto rejects = [&](double alpha) {
    return umau_rejects(z, n, theta0, alpha, privacy);
  };

  constexpr double kAlphaLo = 1e-6;
  constexpr double kAlphaHi = 1.0 - 1e-6;
  constexpr int kProbes = 50;

  // Rejection should switch on once and stay on as alpha grows; probe the
  // whole range so a violation is detected rather than silently bisected.
  std::vector<double> grid(kProbes);
  std::vector<char> rej(kProbes);
  int first_reject = -1;
  for (int i = 0; i < kProbes; ++i) {
    grid[static_cast<size_t>(i)] =
        kAlphaLo + (kAlphaHi - kAlphaLo) * i / (kProbes - 1);
    rej[static_cast<size_t>(i)] = rejects(grid[static_cast<size_t>(i)]);
    if (rej[static_cast<size_t>(i)] && first_reject < 0) first_reject = i;
  }

  UmauPvalue out;
  for (int i = first_reject < 0 ? kProbes : first_reject; i < kProbes; ++i)
    if (!rej[static_cast<size_t>(i)]) out.predicate_monotone = false;

  if (first_reject < 0) {
    out.value = kAlphaHi;  // never rejected: p-value is effectively 1
    return out;
  }
  if (first_reject == 0) {
    out.value = kAlphaLo;  // rejected at the smallest level probed
    return out;
  }

  double lo = grid[static_cast<size_t>(first_reject - 1)];  // no reject
  double hi = grid[static_cast<size_t>(first_reject)];      // reject
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (rejects(mid))
      hi = mid;
    else
      lo = mid;
  }
  out.value = hi;
  return out;
}

}  // namespace dpbinom
