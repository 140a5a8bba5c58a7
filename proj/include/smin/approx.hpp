#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace smin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dimension and smoothing parameter of the recursive min approximation.
// delta must lie in (0, 1/2); n >= 2.
struct ApproxConfig {
  int n = 2;
  double delta = 1e-2;
};

// Subset tables are keyed by bitmask, so the evaluator is capped at the mask
// width we are willing to allocate (2^n doubles per table).
inline constexpr int kMaxDim = 24;
// The naive recursion visits n!/(n-k)! nodes; past 9 it is useless even as an
// oracle.
inline constexpr int kMaxBruteforceDim = 9;

// Throws BadDimension / DeltaOutOfRange / DimensionTooLarge.
void validate(const ApproxConfig& cfg);

// Value, gradient and Hessian of mu^n at one point.
struct EvalResult {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

// Exact minimum of the coordinates.  EmptyInput on a zero-length vector.
double min_n(const Vector& x);

// Two-variable kernel  mu(x1, x2) = (x1+x2)/2 - sqrt((x1-x2)^2/4 + d x1 x2).
// The radicand is clamped at zero: it is nonnegative on the admissible cone
// and for x1 x2 <= 0, but rounding can push it slightly negative.
double mu2(double x1, double x2, double delta);

// Closed-form partials; each lies in [0, 1] on A_2.
// SingularPoint at x1 = x2 = 0, where mu is not differentiable.
std::pair<double, double> mu2_grad(double x1, double x2, double delta);

// Rank-one Hessian of mu; negative semidefinite.
Eigen::Matrix2d mu2_hess(double x1, double x2, double delta);

// Recursive approximation  mu^n(x) = (1/n) sum_i mu(x_i, mu^{n-1}(xbar^i)),
// evaluated by dynamic programming over coordinate subsets keyed by bitmask:
// each size-k subset is visited once, O(2^n * n) instead of factorial work.
double mun(const Vector& x, const ApproxConfig& cfg);

// mu^{|S|} restricted to every coordinate subset S, indexed by bitmask;
// singleton entries hold the coordinates, the full mask equals mun(x).
// Useful when all deletions mu^{n-1}(xbar^i) of a point are needed at once.
std::vector<double> mun_subsets(const Vector& x, const ApproxConfig& cfg);

// Value and gradient only (one adjoint sweep, no Hessian).
std::pair<double, Vector> mun_grad(const Vector& x, const ApproxConfig& cfg);

// Literal recursion with no memoization; oracle for mun.  n <= 9.
double mun_bruteforce(const Vector& x, const ApproxConfig& cfg);

// Value plus first and second derivatives.  The gradient is an adjoint
// (reverse) sweep over the subset DAG; the Hessian is n forward tangent
// sweeps, one per coordinate, each combined with the adjoint pass.
EvalResult mun_eval(const Vector& x, const ApproxConfig& cfg);

}  // namespace smin
