#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smin/approx.hpp"

namespace smin {

// Discretized rotationally symmetric graphical translator u(r) on [0, r_max].
// The graph satisfies  u'' / (1+u'^2)^{3/2} + (n-1) u' / (r sqrt(1+u'^2))
//                    = 1 / sqrt(1+u'^2)
// with u(0) = u'(0) = 0.  kappa_ang carries multiplicity n-1.
struct BowlProfile {
  int n = 3;  // surface dimension
  double step = 0.01;
  std::vector<double> r, u, u_p, u_pp;
  std::vector<double> kappa_rad, kappa_ang;
  std::vector<double> H, nu_e, tau_e;  // H and the vertical components of the
                                       // normal and the radial tangent
  double translator_residual = 0.0;    // max |H - nu_e| over the grid
  std::size_t size() const { return r.size(); }
};

// Nodes dropped per side by the finite-difference operators.
inline constexpr int kProfileTrim = 2;
// solve_bowl throws StepTooLarge beyond this translator-identity residual.
inline constexpr double kResidualGate = 1e-3;

// Integrates the profile: power series  u = r^2/(2n) + c4 r^4 + c6 r^6  on
// [0, 10*step], classical RK4 beyond.  u'' is stored from a 4th-order finite
// difference of u' (series-exact near the axis), which makes the translator
// identity H = nu_e a genuine 4th-order convergence diagnostic.
BowlProfile solve_bowl(int n, double r_max, double step);

// (two smallest curvatures) / H for one tuple, and its infimum over a
// profile's grid.
double two_convexity_ratio(std::span<const double> kappas);
double two_convexity_ratio(const BowlProfile& profile);

// Principal curvatures (cos x1, 0, ..., 0) of the grim reaper product
// Gamma x R^{n-1}.  OutOfDomain for |x1| >= pi/2.
std::vector<double> grim_reaper_product(int n, double x1);

// Drift Laplacian  L f = Delta f + <e, grad f>  of a rotationally invariant
// field sampled at the profile nodes, by nested centered differences of
//   Delta f = (r^{1-n} / w) d/dr ( r^{n-1} f' / w ),   w = sqrt(1 + u'^2).
// Output covers the interior nodes [kProfileTrim, size - kProfileTrim).
// GridTooShort below 5 nodes.
std::vector<double> drift_laplacian(const BowlProfile& profile,
                                    std::span<const double> field);

// Operator data at one interior node.
struct OperatorSample {
  double r = 0.0;
  double H = 0.0, mu_n = 0.0, Q_delta = 0.0;  // Q = mu / (H - mu)
  double grad_H = 0.0, grad_mu = 0.0;         // arclength derivatives
  double L_H = 0.0, L_mu = 0.0, L_Q = 0.0;
  double A2 = 0.0;                            // |A|^2
  double term24 = 0.0;                        // F^{ij,pq} h_ijk h_pqk
  double h_rad_1 = 0.0, h_ang_1 = 0.0;        // covariant radial derivatives
                                              // of the diagonal curvatures
  double residual18 = 0.0;                    // L H + |A|^2 H
  double residual21 = 0.0;  // H L mu - mu L H - H term24
  double lhs22 = 0.0;       // L Q + 2 <grad(H - mu), grad Q> / (H - mu)
  double rhs22 = 0.0;       // H term24 / (H - mu)^2
};

// Evaluates mu^n, Q_delta, the drift Laplacians and the second-derivative
// contraction at every interior node.  DomainViolation if some node's
// curvature tuple leaves the admissible cone.
std::vector<OperatorSample> operator_samples(const BowlProfile& profile,
                                             const ApproxConfig& cfg);

}  // namespace smin
