#include "dpbinom/one_sided.hpp"

#include <cmath>

#include "dpbinom/errors.hpp"
#include "rootfind.hpp"

namespace dpbinom {

namespace {

void check_common(int n, double theta0, double alpha) {
  if (n < 0) throw DomainError("n must be nonnegative");
  if (!(theta0 > 0.0 && theta0 < 1.0))
    throw DomainError("theta0 must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

PrivateSummary privatize(int x, int n, const PrivacyParams& privacy, Rng& rng) {
  if (x < 0 || x > n) throw DomainError("privatize: x must lie in [0, n]");
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  return PrivateSummary{x + tulap_sample(noise, rng), n, privacy,
                        NullKind::Binomial};
}

double calibrate_m(int n, double theta0, double alpha,
                   const PrivacyParams& privacy, Side side) {
  check_common(n, theta0, alpha);
  const PmfVector pmf = binom_pmf_vector(n, theta0);
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  // Greater size = g(m), Less size = 1 - g(m), with g strictly decreasing.
  auto g = [&](double m) {
    std::vector<double> f(pmf.weights.size());
    for (int x = 0; x <= n; ++x)
      f[static_cast<size_t>(x)] = tulap_cdf(x - m, noise);
    return kahan_dot(f, pmf.weights);
  };
  const double target = side == Side::Greater ? alpha : 1.0 - alpha;
  return detail::solve_decreasing(g, target, -1.0, n + 1.0, 200, 1e-13, 1e-10,
                                  "calibrate_m");
}

TestVector test_vector_one_sided(int n, double theta0, double alpha,
                                 const PrivacyParams& privacy, Side side) {
  const double m = calibrate_m(n, theta0, alpha, privacy, side);
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  TestVector tv{n,
                std::vector<double>(static_cast<size_t>(n) + 1, 0.0),
                theta0,
                alpha,
                privacy,
                side == Side::Greater ? TestKind::OneSidedGreater
                                      : TestKind::OneSidedLess};
  for (int x = 0; x <= n; ++x) {
    const double c = tulap_cdf(x - m, noise);
    tv.phi[static_cast<size_t>(x)] = side == Side::Greater ? c : 1.0 - c;
  }
  return tv;
}

std::vector<double> cdf_offset_vector(double z, int n,
                                      const PrivacyParams& privacy) {
  const TulapParams noise = make_tulap(0.0, privacy.b, privacy.q);
  std::vector<double> f(static_cast<size_t>(n) + 1);
  for (int x = 0; x <= n; ++x)
    f[static_cast<size_t>(x)] = tulap_cdf(x - z, noise);
  return f;
}

double ump_pvalue(double z, int n, double theta0, const PrivacyParams& privacy,
                  Side side, const PmfVector* null_pmf) {
  if (n < 0) throw DomainError("ump_pvalue: n must be nonnegative");
  if (std::isnan(z)) throw DomainError("ump_pvalue: z is NaN");
  PmfVector local{0, {}};
  if (null_pmf == nullptr) {
    if (!(theta0 >= 0.0 && theta0 <= 1.0))
      throw DomainError("ump_pvalue: theta0 must lie in [0, 1]");
    local = binom_pmf_vector(n, theta0);
    null_pmf = &local;
  } else {
    validate_pmf(*null_pmf);
    if (null_pmf->n != n)
      throw DomainError("ump_pvalue: null pmf length does not match n");
  }
  const double greater =
      kahan_dot(cdf_offset_vector(z, n, privacy), null_pmf->weights);
  const double clamped = greater < 0.0 ? 0.0 : (greater > 1.0 ? 1.0 : greater);
  return side == Side::Greater ? clamped : 1.0 - clamped;
}

Decision decide(const TestVector& tv, int x, Rng& rng) {
  if (x < 0 || x > tv.n) throw DomainError("decide: x must lie in [0, n]");
  const double p = tv.phi[static_cast<size_t>(x)];
  return Decision{rng.bernoulli(p), p};
}

DpReport verify_dp(const TestVector& tv, const PrivacyParams& privacy) {
  const double e = std::exp(privacy.epsilon);
  const double d = privacy.delta;
  DpReport report{true, 0.0, -1};
  for (int x = 1; x <= tv.n; ++x) {
    const double a = tv.phi[static_cast<size_t>(x)];
    const double b = tv.phi[static_cast<size_t>(x) - 1];
    const double v1 = a - (e * b + d);
    const double v2 = b - (e * a + d);
    const double v3 = (1.0 - a) - (e * (1.0 - b) + d);
    const double v4 = (1.0 - b) - (e * (1.0 - a) + d);
    const double worst = std::fmax(std::fmax(v1, v2), std::fmax(v3, v4));
    if (worst > report.max_violation) {
      report.max_violation = worst;
      report.worst_x = x;
    }
  }
  report.passes = report.max_violation <= 1e-12;
  return report;
}

}  // namespace dpbinom
