#include "smin/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smin/errors.hpp"
#include "smin/rng.hpp"

namespace smin {

namespace {

constexpr long long kStarveLimit = 1'000'000;
// Consecutive rejections before a sampler switches to its fallback; at 1000
// the empirical acceptance rate has fallen below ~0.1%.
constexpr int kFallbackTrigger = 1000;

void two_smallest(const Vector& x, double& lo, double& second) {
  lo = std::numeric_limits<double>::infinity();
  second = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (v < lo) {
      second = lo;
      lo = v;
    } else if (v < second) {
      second = v;
    }
  }
}

}  // namespace

void validate(const DomainSpec& spec) {
  if (spec.n < 2) {
    throw BadDimension("domain needs n >= 2, got " + std::to_string(spec.n));
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw Error("alpha must lie in (0, 1), got " + std::to_string(spec.alpha));
  }
  if (!(spec.beta > 0.0 && spec.beta < 1.0)) {
    throw Error("beta must lie in (0, 1), got " + std::to_string(spec.beta));
  }
}

double feasibility_bound(int n, double alpha) {
  if (n < 3) {
    throw BadDimension("feasibility bound needs n >= 3, got " +
                       std::to_string(n));
  }
  if (!(alpha > 0.0)) {
    throw AlphaTooLarge("alpha must be positive, got " + std::to_string(alpha));
  }
  if (!(alpha < 1.0 / (n - 2))) {
    throw AlphaTooLarge("alpha must be below 1/(n-2) = " +
                        std::to_string(1.0 / (n - 2)) + ", got " +
                        std::to_string(alpha));
  }
  return (1.0 - (n - 2) * alpha) / (n - 1);
}

bool feasible(const DomainSpec& spec) {
  validate(spec);
  if (spec.n == 2) return true;
  return spec.beta <= feasibility_bound(spec.n, spec.alpha) + kMembershipSlack;
}

double in_A_margin(const Vector& x, const DomainSpec& spec) {
  validate(spec);
  if (x.size() != spec.n) {
    throw BadDimension("point size does not match spec.n");
  }
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    margin = std::min(margin, 1.0 - std::abs(x[i]));
  }
  const double m = x.sum();
  double lo, second;
  two_smallest(x, lo, second);
  margin = std::min(margin, lo + second - spec.beta * m);
  return margin;
}

bool in_A(const Vector& x, const DomainSpec& spec) {
  return x.sum() > 0.0 && in_A_margin(x, spec) >= -kMembershipSlack;
}

double in_Aminus_margin(const Vector& x, const DomainSpec& spec) {
  const double m = x.sum();
  return std::min(in_A_margin(x, spec), -spec.alpha * m - x.minCoeff());
}

bool in_Aminus(const Vector& x, const DomainSpec& spec) {
  return x.sum() > 0.0 && in_Aminus_margin(x, spec) >= -kMembershipSlack;
}

Vector aminus_witness(const DomainSpec& spec, double lambda) {
  validate(spec);
  Vector x = Vector::Constant(spec.n, lambda);
  x[0] = -(spec.n - 1) * spec.alpha * lambda / (1.0 + spec.alpha);
  return x;
}

std::vector<Vector> sample_A(const DomainSpec& spec, std::uint64_t seed,
                             long long count) {
  validate(spec);
  std::vector<Vector> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));

  Rng rng(derive_seed(seed, 0x0a));
  Vector x(spec.n);
  int consecutive = 0;
  long long dry = 0;
  bool fallback = false;
  while (static_cast<long long>(out.size()) < count) {
    for (int i = 0; i < spec.n; ++i) x[i] = rng.uniform(-1.0, 1.0);
    if (in_A(x, spec)) {
      out.push_back(x);
      consecutive = 0;
      dry = 0;
      continue;
    }
    if (!fallback && ++consecutive >= kFallbackTrigger) fallback = true;
    if (fallback) {
      // Shrink toward the constant vector at the draw's scale, which is a
      // member whenever beta <= 2/n.
      const double c = std::max(x.cwiseAbs().mean(), 0.25);
      bool done = false;
      for (int k = 1; k <= 20 && !done; ++k) {
        const double s = k / 20.0;
        Vector y = (1.0 - s) * x + s * Vector::Constant(spec.n, c);
        if (in_A(y, spec)) {
          out.push_back(y);
          dry = 0;
          done = true;
        }
      }
      if (done) continue;
    }
    if (++dry >= kStarveLimit) {
      throw SamplerStarved("sample_A: no member found in 10^6 draws");
    }
  }
  return out;
}

std::vector<Vector> sample_Aminus(const DomainSpec& spec, std::uint64_t seed,
                                  long long count) {
  validate(spec);
  if (spec.n >= 3) {
    const double bmax = feasibility_bound(spec.n, spec.alpha);
    if (spec.beta > bmax + kMembershipSlack) {
      throw EmptyDomain("A_n^- is empty: beta exceeds " + std::to_string(bmax),
                        bmax);
    }
  }
  std::vector<Vector> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));

  const double lambda_max =
      std::min((spec.alpha + 1.0) / (spec.n - 1), 1.0);
  Rng rng(derive_seed(seed, 0x0b));
  std::vector<int> perm(spec.n);
  Vector x(spec.n);
  long long dry = 0;
  while (static_cast<long long>(out.size()) < count) {
    const double lambda = rng.uniform(0.2, 1.0) * lambda_max;
    const Vector w = aminus_witness(spec, lambda);
    // Mostly jittered witnesses for coverage; a pure witness every few draws
    // keeps the sampler alive at beta = beta_max, where the cone degenerates
    // to the witness family itself.
    const bool pure = rng.unit() < 0.15;
    const double amp = pure ? 0.0 : rng.uniform(0.0, 0.5) * lambda;
    for (int i = 0; i < spec.n; ++i) x[i] = w[i] + amp * rng.uniform(-1.0, 1.0);
    for (int i = 0; i < spec.n; ++i) perm[i] = i;
    rng.shuffle(perm);
    Vector y(spec.n);
    for (int i = 0; i < spec.n; ++i) y[perm[i]] = x[i];
    if (in_Aminus(y, spec)) {
      out.push_back(y);
      dry = 0;
      continue;
    }
    if (++dry >= kStarveLimit) {
      throw SamplerStarved("sample_Aminus: no member found in 10^6 draws");
    }
  }
  return out;
}

double lambda_lower(double alpha, double delta) {
  const double num = alpha * (1.0 - 2.0 * delta) + 1.0 + alpha;
  const double den =
      std::sqrt(1.0 + 4.0 * alpha * (1.0 + alpha) * (1.0 - delta));
  return 0.5 * (1.0 - num / den);
}

}  // namespace smin
