#include "dpbinom/distributions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "dpbinom/errors.hpp"

namespace dpbinom {

namespace {

// Nearest integer, ties to even; relies on the default rounding mode.
double round_even(double t) { return std::nearbyint(t); }

// Centered untruncated cdf. The closed form is evaluated on t <= 0, where
// the geometric power b^-round(t) never exceeds 1; positive t uses the
// exact reflection F(t) = 1 - F(-t).
double cdf0(double t, double b) {
  if (b <= 0.0) {
    if (t <= -0.5) return 0.0;
    if (t >= 0.5) return 1.0;
    return t + 0.5;
  }
  if (t > 0.0) return 1.0 - cdf0(-t, b);
  const double r = round_even(t);
  return std::pow(b, -r) / (1.0 + b) * (b + (t - r + 0.5) * (1.0 - b));
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t point,
                       std::uint64_t replicate) {
  auto fin = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return fin(fin(fin(seed) ^ point) ^ replicate);
}

long long Rng::geometric(double b) {
  if (b <= 0.0) return 0;
  // P(G >= k) = b^k via inversion; 1 - uniform01() lies in (0, 1].
  const double u = 1.0 - uniform01();
  return static_cast<long long>(std::floor(std::log(u) / std::log(b)));
}

double Rng::laplace(double scale) {
  const double u = uniform_centered();
  const double tail = std::fmax(1.0 - 2.0 * std::fabs(u), 1e-300);
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log(tail);
}

int Rng::binomial(int n, double theta) {
  int s = 0;
  for (int i = 0; i < n; ++i) s += bernoulli(theta) ? 1 : 0;
  return s;
}

PrivacyParams privacy_to_tulap(double epsilon, double delta) {
  if (!std::isfinite(epsilon) || !std::isfinite(delta))
    throw DomainError("privacy_to_tulap: non-finite input");
  if (epsilon < 1e-10)
    throw DomainError("privacy_to_tulap: epsilon must be at least 1e-10");
  if (delta < 0.0 || delta >= 1.0)
    throw DomainError("privacy_to_tulap: delta must lie in [0, 1)");
  double b = std::exp(-epsilon);
  if (b > 1.0 - 1e-12) b = 1.0 - 1e-12;
  const double q = delta == 0.0 ? 0.0 : 2.0 * delta * b / (1.0 - b + 2.0 * delta * b);
  return PrivacyParams{epsilon, delta, b, q};
}

TulapParams make_tulap(double m, double b, double q) {
  if (!std::isfinite(m) || !std::isfinite(b) || !std::isfinite(q))
    throw DomainError("make_tulap: non-finite parameter");
  if (b < 0.0 || b >= 1.0) throw DomainError("make_tulap: b must lie in [0, 1)");
  if (q < 0.0 || q >= 1.0) throw DomainError("make_tulap: q must lie in [0, 1)");
  if (b > 1.0 - 1e-12) b = 1.0 - 1e-12;
  return TulapParams{m, b, q};
}

double tulap_cdf(double x, const TulapParams& p) {
  if (std::isnan(x)) throw DomainError("tulap_cdf: x is NaN");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double f0 = cdf0(x - p.m, p.b);
  if (p.q <= 0.0) return f0;
  return clamp01((f0 - p.q / 2.0) / (1.0 - p.q));
}

double tulap_quantile(double prob, const TulapParams& p) {
  if (!(prob > 0.0 && prob < 1.0))
    throw DomainError("tulap_quantile: prob must lie in (0, 1)");
  // Target in untruncated-cdf space; the tail bound below brackets it.
  const double p0 = prob * (1.0 - p.q) + p.q / 2.0;
  double half = 1.0;
  if (p.b > 0.0) {
    const double tail = std::fmin(p0, 1.0 - p0) * (1.0 + p.b);
    half = std::log(tail) / std::log(p.b) + 2.0;
    if (!(half > 1.0)) half = 1.0;
  }
  double lo = p.m - half;
  double hi = p.m + half;
  for (int i = 0; tulap_cdf(lo, p) > prob; ++i) {
    if (i >= 60) throw ConvergenceError("tulap_quantile: no lower bracket");
    lo -= half;
    half *= 2.0;
  }
  for (int i = 0; tulap_cdf(hi, p) < prob; ++i) {
    if (i >= 60) throw ConvergenceError("tulap_quantile: no upper bracket");
    hi += half;
    half *= 2.0;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (tulap_cdf(mid, p) < prob)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double tulap_sample(const TulapParams& p, Rng& rng) {
  while (true) {
    const long long g1 = p.b > 0.0 ? rng.geometric(p.b) : 0;
    const long long g2 = p.b > 0.0 ? rng.geometric(p.b) : 0;
    const double u = rng.uniform_centered();
    const double cand = static_cast<double>(g1 - g2) + u + p.m;
    if (p.q <= 0.0) return cand;
    const double f0 = cdf0(cand - p.m, p.b);
    if (f0 >= p.q / 2.0 && f0 <= 1.0 - p.q / 2.0) return cand;
  }
}

void validate_pmf(const PmfVector& pmf) {
  if (pmf.n < 0 || pmf.weights.size() != static_cast<size_t>(pmf.n) + 1)
    throw DomainError("pmf: weights must have length n + 1");
  double sum = 0.0;
  for (double w : pmf.weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw DomainError("pmf: weights must be finite and nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw DomainError("pmf: total mass " + std::to_string(sum) + " is not 1");
}

PmfVector binom_pmf_vector(int n, double theta) {
  if (n < 0) throw DomainError("binom_pmf_vector: n must be nonnegative");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("binom_pmf_vector: theta must lie in [0, 1]");
  PmfVector pmf{n, std::vector<double>(static_cast<size_t>(n) + 1, 0.0)};
  if (theta == 0.0) {
    pmf.weights[0] = 1.0;
    return pmf;
  }
  if (theta == 1.0) {
    pmf.weights[static_cast<size_t>(n)] = 1.0;
    return pmf;
  }
  const double lognum = std::lgamma(n + 1.0);
  const double lt = std::log(theta);
  const double l1t = std::log1p(-theta);
  for (int x = 0; x <= n; ++x) {
    const double lw = lognum - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) +
                      x * lt + (n - x) * l1t;
    pmf.weights[static_cast<size_t>(x)] = std::exp(lw);
  }
  return pmf;
}

PmfVector hypergeom_pmf_vector(int n) {
  if (n < 1) throw DomainError("hypergeom_pmf_vector: n must be positive");
  PmfVector pmf{n, std::vector<double>(static_cast<size_t>(n) + 1, 0.0)};
  auto lchoose = [](double a, double k) {
    return std::lgamma(a + 1.0) - std::lgamma(k + 1.0) - std::lgamma(a - k + 1.0);
  };
  const double denom = lchoose(2.0 * n, n);
  for (int t = 0; t <= n; ++t)
    pmf.weights[static_cast<size_t>(t)] = std::exp(2.0 * lchoose(n, t) - denom);
  return pmf;
}

double laplace_sample(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw DomainError("laplace_sample: scale must be positive");
  return rng.laplace(scale);
}

double kahan_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  double carry = 0.0;
  const size_t k = a.size() < b.size() ? a.size() : b.size();
  for (size_t i = 0; i < k; ++i) {
    const double term = a[i] * b[i] - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace dpbinom
