#include "smin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smin/errors.hpp"

namespace smin {

namespace {

// 5-point, 4th-order first-derivative stencils.
inline double d1_center(const std::vector<double>& f, std::size_t i, double h) {
  return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

inline double d1_end_minus1(const std::vector<double>& f, std::size_t i,
                            double h) {
  return (3.0 * f[i + 1] + 10.0 * f[i] - 18.0 * f[i - 1] + 6.0 * f[i - 2] -
          f[i - 3]) /
         (12.0 * h);
}

inline double d1_end(const std::vector<double>& f, std::size_t i, double h) {
  return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] +
          3.0 * f[i - 4]) /
         (12.0 * h);
}

}  // namespace

BowlProfile solve_bowl(int n, double r_max, double step) {
  if (n < 2) {
    throw BadDimension("bowl needs surface dimension n >= 2, got " +
                       std::to_string(n));
  }
  if (!(step > 0.0)) throw Error("step must be positive");
  if (!(r_max >= 10.0 * step)) throw Error("r_max must be at least 10*step");

  const std::size_t N =
      static_cast<std::size_t>(std::llround(r_max / step)) + 1;
  BowlProfile P;
  P.n = n;
  P.step = step;
  P.r.resize(N);
  P.u.resize(N);
  P.u_p.resize(N);
  P.u_pp.resize(N);
  P.kappa_rad.resize(N);
  P.kappa_ang.resize(N);
  P.H.resize(N);
  P.nu_e.resize(N);
  P.tau_e.resize(N);

  // Series coefficients from substituting u = a2 r^2 + a4 r^4 + a6 r^6 into
  // the profile equation u'' = (1 + u'^2)(1 - (n-1) u'/r).
  const double dn = n;
  const double a2 = 1.0 / (2.0 * dn);
  const double a4 = 1.0 / (4.0 * dn * dn * dn * (dn + 2.0));
  const double a6 = (3.0 - dn) / (6.0 * (dn + 4.0) * (dn + 2.0) *
                                  dn * dn * dn * dn * dn);

  const std::size_t i0 = std::min<std::size_t>(10, N - 1);
  for (std::size_t i = 0; i <= i0; ++i) {
    const double r = i * step;
    const double r2 = r * r;
    P.r[i] = r;
    P.u[i] = ((a6 * r2 + a4) * r2 + a2) * r2;
    P.u_p[i] = ((6.0 * a6 * r2 + 4.0 * a4) * r2 + 2.0 * a2) * r;
  }

  // RK4 on (u, p); the second-order form is regular away from r = 0, but the
  // slope's r-derivatives grow like r^-k there, so near the axis each grid
  // step is split into sub-steps of size ~ step * r.  That keeps the local
  // truncation budget ~ step^4 per unit length and the profile genuinely
  // 4th-order under refinement.
  const auto slope = [n](double r, double p) {
    return (1.0 + p * p) * (1.0 - (n - 1) * p / r);
  };
  double u = P.u[i0], p = P.u_p[i0];
  for (std::size_t i = i0; i + 1 < N; ++i) {
    const double r0 = i * step;
    const int m = static_cast<int>(std::ceil(1.0 / std::min(r0, 1.0)));
    const double h = step / m;
    for (int sub = 0; sub < m; ++sub) {
      const double r = r0 + sub * h;
      const double k1u = p, k1p = slope(r, p);
      const double k2u = p + 0.5 * h * k1p, k2p = slope(r + 0.5 * h, k2u);
      const double k3u = p + 0.5 * h * k2p, k3p = slope(r + 0.5 * h, k3u);
      const double k4u = p + h * k3p, k4p = slope(r + h, k4u);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    P.r[i + 1] = (i + 1) * step;
    P.u[i + 1] = u;
    P.u_p[i + 1] = p;
  }

  // u'': series inside [0, r0], finite differences of u' beyond (one-sided
  // at the tail).
  for (std::size_t i = 0; i <= i0; ++i) {
    const double r2 = P.r[i] * P.r[i];
    P.u_pp[i] = (30.0 * a6 * r2 + 12.0 * a4) * r2 + 2.0 * a2;
  }
  for (std::size_t i = i0 + 1; i < N; ++i) {
    if (i + 2 < N) {
      P.u_pp[i] = d1_center(P.u_p, i, step);
    } else if (i + 1 < N) {
      P.u_pp[i] = d1_end_minus1(P.u_p, i, step);
    } else {
      P.u_pp[i] = d1_end(P.u_p, i, step);
    }
  }

  for (std::size_t i = 0; i < N; ++i) {
    const double up = P.u_p[i];
    const double w = std::sqrt(1.0 + up * up);
    P.nu_e[i] = 1.0 / w;
    P.tau_e[i] = up / w;
    P.kappa_rad[i] = P.u_pp[i] / (w * w * w);
    double up_over_r;
    if (i <= i0) {
      // series form of u'/r, regular at the axis
      const double r2 = P.r[i] * P.r[i];
      up_over_r = (6.0 * a6 * r2 + 4.0 * a4) * r2 + 2.0 * a2;
    } else {
      up_over_r = up / P.r[i];
    }
    P.kappa_ang[i] = up_over_r / w;
    P.H[i] = P.kappa_rad[i] + (n - 1) * P.kappa_ang[i];
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    residual = std::max(residual, std::abs(P.H[i] - P.nu_e[i]));
  }
  P.translator_residual = residual;
  if (residual > kResidualGate) {
    throw StepTooLarge("translator-identity residual " +
                       std::to_string(residual) + " exceeds " +
                       std::to_string(kResidualGate));
  }
  return P;
}

double two_convexity_ratio(std::span<const double> kappas) {
  double lo = std::numeric_limits<double>::infinity(), second = lo;
  double sum = 0.0;
  for (double k : kappas) {
    sum += k;
    if (k < lo) {
      second = lo;
      lo = k;
    } else if (k < second) {
      second = k;
    }
  }
  return (lo + second) / sum;
}

double two_convexity_ratio(const BowlProfile& profile) {
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double kr = profile.kappa_rad[i], ka = profile.kappa_ang[i];
    const double pair =
        profile.n >= 3 ? std::min(kr + ka, 2.0 * ka) : kr + ka;
    inf = std::min(inf, pair / profile.H[i]);
  }
  return inf;
}

std::vector<double> grim_reaper_product(int n, double x1) {
  if (n < 1) throw BadDimension("grim reaper product needs n >= 1");
  if (!(std::abs(x1) < M_PI / 2.0)) {
    throw OutOfDomain("grim reaper curve lives over |x1| < pi/2");
  }
  std::vector<double> kappas(static_cast<std::size_t>(n), 0.0);
  kappas[0] = std::cos(x1);
  return kappas;
}

std::vector<double> drift_laplacian(const BowlProfile& P,
                                    std::span<const double> field) {
  const std::size_t N = P.size();
  if (N < 5) throw GridTooShort("drift Laplacian needs at least 5 nodes");
  if (field.size() != N) {
    throw Error("field must be sampled at every profile node");
  }
  const double h = P.step;
  const int n = P.n;

  // centered f' and the flux r^{n-1} f' / w at nodes 1..N-2
  std::vector<double> fp(N, 0.0), flux(N, 0.0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    fp[i] = (field[i + 1] - field[i - 1]) / (2.0 * h);
    const double w = std::sqrt(1.0 + P.u_p[i] * P.u_p[i]);
    flux[i] = std::pow(P.r[i], n - 1) * fp[i] / w;
  }

  std::vector<double> out(N - 2 * kProfileTrim, 0.0);
  for (std::size_t i = kProfileTrim; i + kProfileTrim < N; ++i) {
    const double w = std::sqrt(1.0 + P.u_p[i] * P.u_p[i]);
    const double lap = (flux[i + 1] - flux[i - 1]) / (2.0 * h) /
                       (std::pow(P.r[i], n - 1) * w);
    const double drift = P.tau_e[i] * fp[i] / w;
    out[i - kProfileTrim] = lap + drift;
  }
  return out;
}

std::vector<OperatorSample> operator_samples(const BowlProfile& P,
                                             const ApproxConfig& cfg) {
  validate(cfg);
  if (cfg.n != P.n) {
    throw BadDimension("config dimension must match the profile");
  }
  const std::size_t N = P.size();
  if (N < 5) throw GridTooShort("operator evaluation needs at least 5 nodes");
  const int n = P.n;
  const double h = P.step;

  // Every node's curvature tuple must lie in the admissible cone.  A box
  // overrun alone (some |kappa| > 1, never seen on a bowl) is absorbed by
  // degree-one homogeneity: the tuple is evaluated rescaled into the box.
  std::vector<double> scale(N, 1.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double kr = P.kappa_rad[i], ka = P.kappa_ang[i];
    const double pair = n >= 3 ? std::min(kr + ka, 2.0 * ka) : kr + ka;
    if (!(pair > 0.0) || !(P.H[i] > 0.0)) {
      throw DomainViolation(
          "curvature tuple leaves the admissible cone at r = " +
          std::to_string(P.r[i]));
    }
    scale[i] = std::max({1.0, std::abs(kr), std::abs(ka)});
  }

  std::vector<double> mu(N, 0.0), Q(N, 0.0);
  Vector tuple(n);
  for (std::size_t i = 0; i < N; ++i) {
    tuple[0] = P.kappa_rad[i] / scale[i];
    for (int j = 1; j < n; ++j) tuple[j] = P.kappa_ang[i] / scale[i];
    mu[i] = scale[i] * mun(tuple, cfg);
    Q[i] = mu[i] / (P.H[i] - mu[i]);
  }

  const auto L_H = drift_laplacian(P, P.H);
  const auto L_mu = drift_laplacian(P, mu);
  const auto L_Q = drift_laplacian(P, Q);

  const auto arclength_d = [&](const std::vector<double>& f, std::size_t i) {
    const double w = std::sqrt(1.0 + P.u_p[i] * P.u_p[i]);
    return (f[i + 1] - f[i - 1]) / (2.0 * h) / w;
  };

  std::vector<OperatorSample> out(N - 2 * kProfileTrim);
  for (std::size_t i = kProfileTrim; i + kProfileTrim < N; ++i) {
    OperatorSample& s = out[i - kProfileTrim];
    const double kr = P.kappa_rad[i], ka = P.kappa_ang[i];
    s.r = P.r[i];
    s.H = P.H[i];
    s.mu_n = mu[i];
    s.Q_delta = Q[i];
    s.A2 = kr * kr + (n - 1) * ka * ka;
    s.grad_H = arclength_d(P.H, i);
    s.grad_mu = arclength_d(mu, i);
    s.L_H = L_H[i - kProfileTrim];
    s.L_mu = L_mu[i - kProfileTrim];
    s.L_Q = L_Q[i - kProfileTrim];
    s.h_rad_1 = arclength_d(P.kappa_rad, i);
    s.h_ang_1 = arclength_d(P.kappa_ang, i);

    // gradient is degree-0 homogeneous, the Hessian degree -1
    tuple[0] = kr / scale[i];
    for (int j = 1; j < n; ++j) tuple[j] = ka / scale[i];
    EvalResult ev = mun_eval(tuple, cfg);
    ev.value *= scale[i];
    ev.hessian /= scale[i];

    // first sum of the contraction: quadratic form of the mu Hessian on the
    // curvature derivative vector (h_111, h_221, ..., h_nn1)
    Vector hvec(n);
    hvec[0] = s.h_rad_1;
    for (int j = 1; j < n; ++j) hvec[j] = s.h_ang_1;
    double term = hvec.dot(ev.hessian * hvec);

    // second sum: only radial/angular pairs survive on a rotational surface
    // (tied angular pairs contribute nothing); Codazzi gives
    // sum_k h_{1jk}^2 = h_{1jj}^2 = (d kappa_ang / ds)^2, and the ordered
    // pair sum doubles each unordered pair.
    const double gap = kr - ka;
    if (std::abs(gap) > 1e-12 * std::max({1.0, std::abs(kr), std::abs(ka)})) {
      for (int j = 1; j < n; ++j) {
        const double quot = (ev.gradient[0] - ev.gradient[j]) / gap;
        term += 2.0 * quot * s.h_ang_1 * s.h_ang_1;
      }
    }
    s.term24 = term;

    s.residual18 = s.L_H + s.A2 * s.H;
    s.residual21 = s.H * s.L_mu - s.mu_n * s.L_H - s.H * s.term24;
    const double hm = s.H - s.mu_n;
    const double grad_Q = arclength_d(Q, i);
    s.lhs22 = s.L_Q + 2.0 * (s.grad_H - s.grad_mu) * grad_Q / hm;
    s.rhs22 = s.H * s.term24 / (hm * hm);
  }
  return out;
}

}  // namespace smin
