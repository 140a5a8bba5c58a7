#include "smin/approx.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "smin/errors.hpp"

namespace smin {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw DeltaOutOfRange("delta must lie in (0, 1/2), got " +
                          std::to_string(delta));
  }
}

// Kernel without argument validation; hot path of the subset recursion.
// All expressions are symmetric in (x1, x2) ulp-for-ulp, so mu(a, b) and
// mu(b, a) return identical bits.
inline double mu_value(double x1, double x2, double delta) {
  const double d = 0.5 * (x1 - x2);
  double q = d * d + delta * (x1 * x2);
  if (q < 0.0) q = 0.0;
  return 0.5 * (x1 + x2) - std::sqrt(q);
}

struct MuDerivs {
  double g1, g2;            // first partials
  double h11, h12, h22;     // second partials (rank-one matrix)
};

// R = sqrt((x1-x2)^2 + 4 d x1 x2) = 2 sqrt(radicand); vanishes only at the
// origin, where mu is not differentiable.
inline double mu_R(double x1, double x2, double delta) {
  const double d = 0.5 * (x1 - x2);
  double q = d * d + delta * (x1 * x2);
  if (q < 0.0) q = 0.0;
  const double R = 2.0 * std::sqrt(q);
  if (R == 0.0) {
    throw SingularPoint("mu is not differentiable at (0, 0)");
  }
  return R;
}

inline void mu_first(double x1, double x2, double delta, double& g1,
                     double& g2) {
  const double R = mu_R(x1, x2, delta);
  g1 = 0.5 * (1.0 + ((1.0 - 2.0 * delta) * x2 - x1) / R);
  g2 = 0.5 * (1.0 + ((1.0 - 2.0 * delta) * x1 - x2) / R);
}

inline MuDerivs mu_derivs(double x1, double x2, double delta) {
  MuDerivs d;
  const double R = mu_R(x1, x2, delta);
  d.g1 = 0.5 * (1.0 + ((1.0 - 2.0 * delta) * x2 - x1) / R);
  d.g2 = 0.5 * (1.0 + ((1.0 - 2.0 * delta) * x1 - x2) / R);
  const double coef = 2.0 * delta * (1.0 - delta) / (R * R * R);
  d.h11 = -coef * x2 * x2;
  d.h12 = coef * x1 * x2;
  d.h22 = -coef * x1 * x1;
  return d;
}

void validate_point(const Vector& x, const ApproxConfig& cfg) {
  validate(cfg);
  if (x.size() != cfg.n) {
    throw BadDimension("point has " + std::to_string(x.size()) +
                       " coordinates, config expects " + std::to_string(cfg.n));
  }
}

// Fills v[mask] = mu^{|mask|}(coordinates in mask) for every nonempty mask.
// Singletons hold the coordinate itself; for a pair the general recursion
// averages mu(x_i, x_j) with mu(x_j, x_i), which is exact by symmetry of the
// kernel arithmetic, so no special base case is needed.
void forward_values(const Vector& x, double delta, std::vector<double>& v) {
  const int n = static_cast<int>(x.size());
  const std::size_t full = (std::size_t{1} << n) - 1;
  for (int i = 0; i < n; ++i) v[std::size_t{1} << i] = x[i];
  for (std::size_t mask = 3; mask <= full; ++mask) {
    const int k = std::popcount(mask);
    if (k < 2) continue;
    double acc = 0.0;
    for (std::size_t bits = mask; bits != 0; bits &= bits - 1) {
      const int i = std::countr_zero(bits);
      acc += mu_value(x[i], v[mask ^ (std::size_t{1} << i)], delta);
    }
    v[mask] = acc / k;
  }
}

}  // namespace

void validate(const ApproxConfig& cfg) {
  if (cfg.n < 2) {
    throw BadDimension("approximation needs n >= 2, got " +
                       std::to_string(cfg.n));
  }
  if (cfg.n > kMaxDim) {
    throw DimensionTooLarge("n = " + std::to_string(cfg.n) +
                            " exceeds the subset-table cap " +
                            std::to_string(kMaxDim));
  }
  check_delta(cfg.delta);
}

double min_n(const Vector& x) {
  if (x.size() == 0) throw EmptyInput("min_n of an empty vector");
  return x.minCoeff();
}

double mu2(double x1, double x2, double delta) {
  check_delta(delta);
  return mu_value(x1, x2, delta);
}

std::pair<double, double> mu2_grad(double x1, double x2, double delta) {
  check_delta(delta);
  if (x1 == 0.0 && x2 == 0.0) {
    throw SingularPoint("mu is not differentiable at (0, 0)");
  }
  double g1, g2;
  mu_first(x1, x2, delta, g1, g2);
  return {g1, g2};
}

Eigen::Matrix2d mu2_hess(double x1, double x2, double delta) {
  check_delta(delta);
  if (x1 == 0.0 && x2 == 0.0) {
    throw SingularPoint("mu is not differentiable at (0, 0)");
  }
  const MuDerivs d = mu_derivs(x1, x2, delta);
  Eigen::Matrix2d h;
  h << d.h11, d.h12, d.h12, d.h22;
  return h;
}

double mun(const Vector& x, const ApproxConfig& cfg) {
  validate_point(x, cfg);
  const int n = cfg.n;
  if (n == 2) return mu_value(x[0], x[1], cfg.delta);
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> v(full + 1, 0.0);
  forward_values(x, cfg.delta, v);
  return v[full];
}

std::vector<double> mun_subsets(const Vector& x, const ApproxConfig& cfg) {
  validate_point(x, cfg);
  const std::size_t full = (std::size_t{1} << cfg.n) - 1;
  std::vector<double> v(full + 1, 0.0);
  forward_values(x, cfg.delta, v);
  return v;
}

namespace {

double mun_rec(const std::vector<double>& w, double delta) {
  const std::size_t k = w.size();
  if (k == 2) return mu_value(w[0], w[1], delta);
  double acc = 0.0;
  std::vector<double> bar(k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t t = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) bar[t++] = w[j];
    }
    acc += mu_value(w[i], mun_rec(bar, delta), delta);
  }
  return acc / static_cast<double>(k);
}

}  // namespace

double mun_bruteforce(const Vector& x, const ApproxConfig& cfg) {
  validate_point(x, cfg);
  if (cfg.n > kMaxBruteforceDim) {
    throw DimensionTooLarge("naive recursion capped at n = " +
                            std::to_string(kMaxBruteforceDim));
  }
  std::vector<double> w(x.data(), x.data() + x.size());
  return mun_rec(w, cfg.delta);
}

namespace {

// Adjoint sweep: adj[S] = d mu^n / d v[S].  Parents are numerically larger
// masks, so a descending pass finalizes adj[S] before it is consumed.
void adjoint_sweep(const Vector& x, double delta, const std::vector<double>& v,
                   std::vector<double>& adj, Vector& grad) {
  const int n = static_cast<int>(x.size());
  const std::size_t full = (std::size_t{1} << n) - 1;
  grad.setZero();
  std::fill(adj.begin(), adj.end(), 0.0);
  adj[full] = 1.0;
  for (std::size_t mask = full; mask >= 3; --mask) {
    const int k = std::popcount(mask);
    if (k < 2) continue;
    const double a = adj[mask];
    if (a == 0.0) continue;
    const double w = a / k;
    for (std::size_t bits = mask; bits != 0; bits &= bits - 1) {
      const int i = std::countr_zero(bits);
      const std::size_t sub = mask ^ (std::size_t{1} << i);
      double g1, g2;
      mu_first(x[i], v[sub], delta, g1, g2);
      grad[i] += w * g1;
      adj[sub] += w * g2;
    }
  }
  for (int j = 0; j < n; ++j) {
    grad[j] += adj[std::size_t{1} << j];
  }
}

}  // namespace

std::pair<double, Vector> mun_grad(const Vector& x, const ApproxConfig& cfg) {
  validate_point(x, cfg);
  const std::size_t full = (std::size_t{1} << cfg.n) - 1;
  std::vector<double> v(full + 1, 0.0), adj(full + 1, 0.0);
  forward_values(x, cfg.delta, v);
  Vector grad(cfg.n);
  adjoint_sweep(x, cfg.delta, v, adj, grad);
  return {v[full], std::move(grad)};
}

EvalResult mun_eval(const Vector& x, const ApproxConfig& cfg) {
  validate_point(x, cfg);
  const int n = cfg.n;
  const double delta = cfg.delta;
  const std::size_t full = (std::size_t{1} << n) - 1;

  std::vector<double> v(full + 1, 0.0);
  forward_values(x, delta, v);

  EvalResult out;
  out.value = v[full];
  out.gradient = Vector(n);
  out.hessian = Matrix::Zero(n, n);

  std::vector<double> adj(full + 1, 0.0);
  adjoint_sweep(x, delta, v, adj, out.gradient);

  // One forward tangent sweep per coordinate d, then the differentiated
  // adjoint recursion accumulates Hessian column d.  adj is reused from the
  // gradient pass; tan/dadj are reset per column.
  std::vector<double> tan(full + 1, 0.0), dadj(full + 1, 0.0);
  for (int d = 0; d < n; ++d) {
    std::fill(tan.begin(), tan.end(), 0.0);
    std::fill(dadj.begin(), dadj.end(), 0.0);
    tan[std::size_t{1} << d] = 1.0;
    for (std::size_t mask = 3; mask <= full; ++mask) {
      const int k = std::popcount(mask);
      if (k < 2) continue;
      double acc = 0.0;
      for (std::size_t bits = mask; bits != 0; bits &= bits - 1) {
        const int i = std::countr_zero(bits);
        const std::size_t sub = mask ^ (std::size_t{1} << i);
        double g1, g2;
        mu_first(x[i], v[sub], delta, g1, g2);
        if (i == d) acc += g1;
        acc += g2 * tan[sub];
      }
      tan[mask] = acc / k;
    }

    for (std::size_t mask = full; mask >= 3; --mask) {
      const int k = std::popcount(mask);
      if (k < 2) continue;
      const double a = adj[mask];
      const double da = dadj[mask];
      if (a == 0.0 && da == 0.0) continue;
      const double inv = 1.0 / k;
      for (std::size_t bits = mask; bits != 0; bits &= bits - 1) {
        const int i = std::countr_zero(bits);
        const std::size_t sub = mask ^ (std::size_t{1} << i);
        const MuDerivs md = mu_derivs(x[i], v[sub], delta);
        const double dg1 = (i == d ? md.h11 : 0.0) + md.h12 * tan[sub];
        const double dg2 = (i == d ? md.h12 : 0.0) + md.h22 * tan[sub];
        out.hessian(i, d) += inv * (da * md.g1 + a * dg1);
        dadj[sub] += inv * (da * md.g2 + a * dg2);
      }
    }
    for (int j = 0; j < n; ++j) {
      out.hessian(j, d) += dadj[std::size_t{1} << j];
    }
  }

  return out;
}

}  // namespace smin
