#pragma once

#include <cstdint>
#include <vector>

#include "smin/approx.hpp"

namespace smin {

// Parameters of the admissible cones A_n and A_n^-:
//   A_n   = { |x_j| <= 1, x_k + x_l >= beta * m > 0 for all k != l },
//   A_n^- = { x in A_n : min(x) <= -alpha * m },          m = sum x_i.
struct DomainSpec {
  int n = 3;
  double alpha = 0.2;
  double beta = 0.3;
};

// n >= 2, alpha and beta in (0, 1).
void validate(const DomainSpec& spec);

// Boundary-membership slack: constructive witnesses sit exactly on the
// hyperplanes x_1 + x_2 = beta m and min = -alpha m and must be accepted.
inline constexpr double kMembershipSlack = 1e-12;

// Largest beta for which A_n^- is nonempty: (1 - (n-2) alpha) / (n-1).
// AlphaTooLarge unless 0 < alpha < 1/(n-2); BadDimension for n < 3.
double feasibility_bound(int n, double alpha);

// True when A_n^- is nonempty for spec (always for n = 2).
bool feasible(const DomainSpec& spec);

// Most violated constraint slack; >= -kMembershipSlack means member.
// Covers box bounds and the pair-sum constraint (only the two smallest
// coordinates need testing).  Positivity of m is checked separately since it
// is strict.
double in_A_margin(const Vector& x, const DomainSpec& spec);
double in_Aminus_margin(const Vector& x, const DomainSpec& spec);

bool in_A(const Vector& x, const DomainSpec& spec);
bool in_Aminus(const Vector& x, const DomainSpec& spec);

// Member of A_n^- from the feasibility construction:
//   x_1 = -(n-1) alpha lambda / (1+alpha),  x_2 = ... = x_n = lambda,
// valid for 0 < lambda <= min((alpha+1)/(n-1), 1).
Vector aminus_witness(const DomainSpec& spec, double lambda);

// Deterministic rejection samplers.  Points are drawn uniformly in the box
// [-1,1]^n and rejected; if acceptance collapses, draws are shrunk toward a
// known member (constant vector for A_n, the witness family for A_n^-).
// Identical (spec, seed) give identical output, and shorter runs are prefixes
// of longer ones.  SamplerStarved after 10^6 consecutive failed draws;
// EmptyDomain when beta exceeds the feasibility bound.
std::vector<Vector> sample_A(const DomainSpec& spec, std::uint64_t seed,
                             long long count);
std::vector<Vector> sample_Aminus(const DomainSpec& spec, std::uint64_t seed,
                                  long long count);

// Lower bound Lambda(alpha, delta) for the partial of mu with respect to the
// positive coordinate on A_2^-; positive for delta > 0 and -> 0 as delta -> 0.
double lambda_lower(double alpha, double delta);

}  // namespace smin
