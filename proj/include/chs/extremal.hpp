#pragma once

// Sharp extremal constants and extremizers of h_{2k} and of exponential
// moments on the unit sphere, the non-negative orthant, the centred sphere
// and the unit cube boundary.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chs/core.hpp"

namespace chs {

struct ExtremalResult {
  double value = 0.0;
  Weights argvec;
  std::string structure;
  /// Auxiliary scalars (roots, support sizes, bounds) in insertion order.
  std::vector<std::pair<std::string, double>> certificate;

  /// Certificate entry by name; throws InvalidArgument when absent.
  double cert(std::string_view key) const;
};

struct MinMax {
  ExtremalResult min;
  ExtremalResult max;
};

/// Search interval for a sign-changing scalar function.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-12;

  void validate() const;
};

/// Minimum of h_{2k} on the unit sphere for even n, attained at the
/// half-plus/half-minus vector.
ExtremalResult hunter_min(int n, int k);

/// Minimum and maximum of h_4 on the unit sphere. The maximum sits at the
/// flat vector; for odd n the minimum is searched along the two-level family
/// ((n-1)/2 copies of a, (n+1)/2 copies of b).
MinMax h4_unconditional(int n);

/// Largest admissible constant c in the odd-n h_4 bound h_4 >= (1+c)/8.
double rho1(int n);

/// Minimum of E(sum a_i X_i)^k over non-negative unit a: min_m rho(m, k).
ExtremalResult nonneg_min(int n, int k);

/// Continuous minimizer of n -> rho(n, k).
double nk_continuous(int k);

/// Positive root of ln(1+u) = u/2.
double u0_ratio();

/// E(x G_1 + G_2)^k with G_i ~ Gamma(gamma_i) as a polynomial in x.
Poly gamma_pair_moment_poly(int gamma1, int gamma2, int k);

/// ln E(x G_{n-1} + X)^k - (k/2) ln((n-1)x^2 + 1), the log-moment along
/// the unit vectors (s, x s, ..., x s).
double nonneg_max_objective(int n, int k, double x);

/// Maximum of E(sum a_i X_i)^k over non-negative unit a, searched over
/// vectors (s, t, ..., t) with s >= t.
ExtremalResult nonneg_max(int n, int k);

/// Minimum of h_{2k} on the centred sphere (sum a = 0, |a| = 1), even n.
ExtremalResult centred_min(int n, int k);

/// Maximum of h_{2k} on the centred sphere.
ExtremalResult centred_max(int n, int k);

/// p_m at the centred maximizer.
double centred_p_max(int n, int m);

/// Minimum of h_4 on the centred sphere.
ExtremalResult centred_h4_min(int n);

/// Minimum and maximum of E|sum a_i X_i|^q on the centred sphere for n = 3.
MinMax centred_n3_bounds(double q);

/// Minimum of h_{2k} over the unit-cube boundary |a|_inf = 1, attained at
/// (t, ..., t, 1).
ExtremalResult linf_min(int n, int k);

}  // namespace chs
