#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "smin/domains.hpp"

namespace smin {

// Tolerances used by the campaigns.  Margins already fold the tolerance of
// their check, so a report passes iff worst_margin >= 0.
inline constexpr double kEqTol = 1e-10;   // equality identities, scaled by max(1, |m|)
inline constexpr double kIneqTol = 1e-9;  // inequality slacks
inline constexpr double kEigTol = 1e-8;   // eigenvalue nonpositivity

// Outcome of one verification campaign.  Pure function of
// (lemma_id, spec, deltas, seed, samples); elapsed_seconds excluded.
struct PropertyReport {
  std::string lemma_id;
  DomainSpec spec;
  std::vector<double> deltas;  // single entry except for the grid campaign
  long long samples_tested = 0;
  long long violations = 0;
  // Smallest tolerance-adjusted slack over all checks; negative means a
  // violated check, +inf means nothing was tested.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::map<std::string, double> measured_constants;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
};

// Two-variable kernel on A_2 and A_2^-: positivity, partial bounds,
// concavity, the Euler identity, the min-approximation bound, and the
// endpoint partial-derivative brackets on A_2^- (which need alpha).
PropertyReport check_lemma23(double delta, std::uint64_t seed,
                             long long samples, double alpha = 0.2,
                             int threads = 1);

// Magnitude bounds, deletion closure, the sqrt(delta) min-approximation bound
// (measured constant c_n), and pair admissibility of (x_i, mu^{n-1}(xbar^i)).
PropertyReport check_lemma24(const DomainSpec& spec, double delta,
                             std::uint64_t seed, long long samples,
                             int threads = 1);

// Symmetry, positivity, monotonicity, concavity, homogeneity, Euler identity
// and the mean bound for mu^n.
PropertyReport check_cor25(const DomainSpec& spec, double delta,
                           std::uint64_t seed, long long samples,
                           int threads = 1);

// Strict gradient ordering on A_n, convergence of the partials on A_n^-
// along a decreasing delta grid, and diagonal Hessian negativity on A_n^-.
// Reported violations cover the ordering/diagonal checks at the smallest
// grid delta plus any non-monotone convergence sequence; per-delta counts and
// the measured threshold delta_n land in measured_constants.
PropertyReport check_lemma26(const DomainSpec& spec,
                             const std::vector<double>& delta_grid,
                             std::uint64_t seed, long long samples,
                             int threads = 1);

// Difference-quotient bound for positive coordinate pairs on A_n^- (n >= 3)
// with the constant Lambda^{n-2} / (2 n!); for n = 2 the closed-form quotient
// identity and its bound on positive pairs of A_2 (delta < 1/4).
PropertyReport check_lemma27(const DomainSpec& spec, double delta,
                             std::uint64_t seed, long long samples,
                             int threads = 1);

}  // namespace smin
