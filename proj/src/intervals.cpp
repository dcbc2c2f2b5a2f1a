#include "dpbinom/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dpbinom/errors.hpp"
#include "dpbinom/two_sided.hpp"

namespace dpbinom {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void check_interval_args(double z, int n, double alpha) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  if (n < 0) throw DomainError("n must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie strictly inside (0, 1)");
}

// Upper-tail p-value as a function of theta0, with the z-dependent part
// computed once. Nondecreasing in theta0.
class PvalueCurve {
 public:
  PvalueCurve(double z, int n, const PrivacyParams& privacy)
      : n_(n), offsets_(cdf_offset_vector(z, n, privacy)) {}

  double operator()(double theta0) const {
    const PmfVector pmf = binom_pmf_vector(n_, theta0);
    return clamp01(kahan_dot(offsets_, pmf.weights));
  }

 private:
  int n_;
  std::vector<double> offsets_;
};

}  // namespace

IntervalResult ci_lower(double z, int n, double alpha,
                        const PrivacyParams& privacy) {
  check_interval_args(z, n, alpha);
  const PvalueCurve p(z, n, privacy);
  IntervalResult out;
  out.coverage = 1.0 - alpha;
  out.kind = IntervalKind::LowerOneSided;
  out.z = z;
  out.n = n;
  out.upper = 1.0;
  if (p(0.0) >= alpha) {
    out.lower = 0.0;
  } else if (p(1.0) < alpha) {
    out.lower = 1.0;  // even theta = 1 is rejected; interval collapses
  } else {
    double lo = 0.0, hi = 1.0;  // p(lo) < alpha <= p(hi)
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (p(mid) >= alpha)
        hi = mid;
      else
        lo = mid;
    }
    out.lower = 0.5 * (lo + hi);
  }
  return out;
}

IntervalResult ci_upper(double z, int n, double alpha,
                        const PrivacyParams& privacy) {
  check_interval_args(z, n, alpha);
  const PvalueCurve p(z, n, privacy);
  auto q = [&](double theta0) { return 1.0 - p(theta0); };  // lower tail
  IntervalResult out;
  out.coverage = 1.0 - alpha;
  out.kind = IntervalKind::UpperOneSided;
  out.z = z;
  out.n = n;
  out.lower = 0.0;
  if (q(1.0) >= alpha) {
    out.upper = 1.0;
  } else if (q(0.0) < alpha) {
    out.upper = 0.0;
  } else {
    double lo = 0.0, hi = 1.0;  // q(lo) >= alpha > q(hi)
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (q(mid) >= alpha)
        lo = mid;
      else
        hi = mid;
    }
    out.upper = 0.5 * (lo + hi);
  }
  return out;
}

IntervalResult ci_bonferroni(double z, int n, double alpha,
                             const PrivacyParams& privacy) {
  check_interval_args(z, n, alpha);
  IntervalResult out;
  out.lower = ci_lower(z, n, alpha / 2.0, privacy).lower;
  out.upper = ci_upper(z, n, alpha / 2.0, privacy).upper;
  out.coverage = 1.0 - alpha;
  out.kind = IntervalKind::Bonferroni;
  out.z = z;
  out.n = n;
  return out;
}

IntervalResult ci_approx_umpu(double z, int n, double alpha,
                              const PrivacyParams& privacy) {
  check_interval_args(z, n, alpha);
  if (n < 1) throw DomainError("n must be at least 1 for this interval");
  auto keeps = [&](double theta0) {
    return approx_pvalue(z, n, theta0, privacy) >= alpha;
  };
  const double anchor = clamp01(z / n);  // p-value is exactly 1 here

  IntervalResult out;
  out.coverage = 1.0 - alpha;
  out.kind = IntervalKind::ApproxUmpu;
  out.z = z;
  out.n = n;

  constexpr int kProbes = 64;
  // Scan outward-in on each side; the endpoint is the outermost crossing of
  // the keep predicate, and extra crossings set the warning flag.
  auto scan = [&](double from, double to) {
    // from is the outer end (kept status unknown), to is the anchor (kept).
    double boundary = from;
    if (keeps(from)) {
      return boundary;  // kept all the way to the boundary of [0, 1]
    }
    double prev = from;
    bool prev_keep = false;
    double out_lo = from, out_hi = to;
    bool found = false;
    for (int i = 1; i <= kProbes; ++i) {
      const double t = from + (to - from) * i / kProbes;
      const bool k = i == kProbes ? true : keeps(t);
      if (k != prev_keep) {
        if (!found && k) {
          out_lo = prev;
          out_hi = t;
          found = true;
        } else {
          out.unimodality_warning = true;
        }
      }
      prev = t;
      prev_keep = k;
    }
    // out_lo rejected, out_hi kept; bisect to the crossing
    while (std::abs(out_hi - out_lo) > 1e-10) {
      const double mid = 0.5 * (out_lo + out_hi);
      if (keeps(mid))
        out_hi = mid;
      else
        out_lo = mid;
    }
    boundary = 0.5 * (out_lo + out_hi);
    return boundary;
  };

  out.lower = anchor <= 0.0 ? 0.0 : scan(0.0, anchor);
  out.upper = anchor >= 1.0 ? 1.0 : scan(1.0, anchor);
  if (out.lower > out.upper) std::swap(out.lower, out.upper);
  return out;
}

IntervalResult ci_umau(double z, int n, double alpha,
                       const PrivacyParams& privacy) {
  check_interval_args(z, n, alpha);
  if (n < 1) throw DomainError("n must be at least 1 for this interval");
  constexpr double kEdge = 1e-9;  // solver needs theta0 strictly inside (0,1)
  auto keeps = [&](double theta0) {
    const double t = std::min(1.0 - kEdge, std::max(kEdge, theta0));
    return !umau_rejects(z, n, t, alpha, privacy);
  };

  IntervalResult out;
  out.coverage = 1.0 - alpha;
  out.kind = IntervalKind::Umau;
  out.z = z;
  out.n = n;

  constexpr int kProbes = 41;
  std::vector<double> grid(kProbes);
  std::vector<char> kept(kProbes);
  int first = -1, last = -1;
  for (int i = 0; i < kProbes; ++i) {
    grid[static_cast<size_t>(i)] = static_cast<double>(i) / (kProbes - 1);
    kept[static_cast<size_t>(i)] = keeps(grid[static_cast<size_t>(i)]);
    if (kept[static_cast<size_t>(i)]) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) {
    // No probed parameter is kept; report a point at the natural estimate.
    const double c = clamp01(z / n);
    out.lower = c;
    out.upper = c;
    out.unimodality_warning = true;
    return out;
  }
  for (int i = first; i <= last; ++i)
    if (!kept[static_cast<size_t>(i)]) out.unimodality_warning = true;

  auto bisect = [&](double rejected, double accepted) {
    while (std::abs(accepted - rejected) > 1e-8) {
      const double mid = 0.5 * (rejected + accepted);
      if (keeps(mid))
        accepted = mid;
      else
        rejected = mid;
    }
    return 0.5 * (rejected + accepted);
  };

  out.lower = first == 0 ? 0.0
                         : bisect(grid[static_cast<size_t>(first - 1)],
                                  grid[static_cast<size_t>(first)]);
  out.upper = last == kProbes - 1
                  ? 1.0
                  : bisect(grid[static_cast<size_t>(last + 1)],
                           grid[static_cast<size_t>(last)]);
  return out;
}

CdResult confidence_distribution(double z, int n, const PrivacyParams& privacy,
                                 const std::vector<double>& grid) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  if (n < 0) throw DomainError("n must be nonnegative");
  if (grid.empty()) throw DomainError("grid must not be empty");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw DomainError("grid values must lie in [0, 1]");
    if (i > 0 && grid[i] < grid[i - 1])
      throw DomainError("grid must be nondecreasing");
  }
  const PvalueCurve p(z, n, privacy);
  CdResult out;
  out.grid = grid;
  out.values.reserve(grid.size());
  for (const double g : grid) out.values.push_back(p(g));
  out.z = z;
  out.n = n;
  return out;
}

double confidence_distribution_median(double z, int n,
                                      const PrivacyParams& privacy) {
  if (std::isnan(z)) throw DomainError("z must not be NaN");
  if (n < 0) throw DomainError("n must be nonnegative");
  const PvalueCurve p(z, n, privacy);
  if (p(0.0) >= 0.5) return 0.0;
  if (p(1.0) < 0.5) return 1.0;
  double lo = 0.0, hi = 1.0;  // p(lo) < 1/2 <= p(hi)
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (p(mid) >= 0.5)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dpbinom
