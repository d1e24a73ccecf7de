#pragma once

// Independent oracles: a random-restart constrained optimizer and sampling
// suites for the inequalities behind the closed forms.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "chs/core.hpp"
#include "chs/exp_moments.hpp"
#include "chs/extremal.hpp"
#include "chs/report.hpp"

namespace chs {

enum class ConstraintKind { unit_l2, unit_l2_nonneg, unit_l2_zero_sum, unit_linf };

std::string_view to_string(ConstraintKind k);
ConstraintKind parse_constraint(std::string_view name);

struct ConstraintSet {
  ConstraintKind kind = ConstraintKind::unit_l2;
  int n = 2;

  /// Feasibility map; idempotent. Throws SamplerDegenerate when the input
  /// collapses to zero under the map.
  std::vector<double> project(std::vector<double> x) const;
  bool feasible(std::span<const double> x, double tol = 1e-9) const;
};

/// h_d(a), or E|sum a_i X_i|^q.
struct Objective {
  enum class Kind { chs, abs_moment };
  Kind kind = Kind::chs;
  int degree = 2;
  double q = 1.0;

  static Objective chs_degree(int d);
  static Objective abs_moment_q(double q);

  double value(std::span<const double> a) const;
  /// True when an analytic gradient is available on the whole constraint set.
  bool has_gradient(const ConstraintSet& c) const;
  std::vector<double> gradient(std::span<const double> a) const;
  std::string label() const;
};

enum class Direction { min, max };

struct OptimizerSettings {
  int restarts = 64;
  int iterations = 2000;
  double initial_step = 0.25;
  double grow = 1.2;
  double shrink = 0.5;
  double min_step = 1e-13;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it

  void validate() const;
};

/// Best value over restarts of projected local search. The result's
/// structure tag lists the distinct coordinate levels after clustering.
ExtremalResult optimize_constrained(const Objective& objective, const ConstraintSet& constraints,
                                    Direction direction, const OptimizerSettings& settings);

/// Distinct sorted values of x, merging neighbours closer than `gap`.
std::vector<double> cluster_levels(std::span<const double> x, double gap = 1e-4);

/// True when x equals a permutation of y or of -y within tol.
bool is_signed_permutation_of(std::span<const double> x, std::span<const double> y, double tol);

/// E(sum a_i X_i)^q for arbitrary real a: exact for integer q (even, or
/// non-negative a), otherwise quadrature of the mixture density after
/// snapping near-equal coordinates together.
double robust_abs_moment(std::span<const double> a, double q);

// Property suites. Each returns a report with its inputs, seed, counts and
// margins; `pass` follows the stated criterion.

/// Moments of sqrt-weights under Robin-Hood transfers. For k <= 4 passes on
/// zero violations; for k > 4 it is a negative control that passes when a
/// violation is found.
Report schur_concavity_check(int k, int n, int trials, std::uint64_t seed);

/// h_{2k}(x) <= h_{2k}(y) on integer majorization pairs x < y, k = 1..kmax.
Report tao_schur_convexity_check(int n, int pairs, int kmax, std::uint64_t seed);

/// (a_i - a_j)(d_i - d_j) h_{2k}(a) >= 0 on uniform samples in [-2, 2]^n.
Report schur_ostrowski_check(int n, int samples, int kmax, std::uint64_t seed);

/// Power sums of non-negative triples with matched p_1, p_2 are ordered by
/// the product.
Report abc_power_lemma_check(int trials, std::uint64_t seed);

/// E(sum a_i X_i)^q >= min_m rho(m, q) on random non-negative unit a.
/// Report only: pass means "no counterexample found".
Report conjecture1_scan(int n, std::span<const double> q_grid, int trials, std::uint64_t seed);

/// All moment routes for one weight vector.
Report crosscheck_moments(const Weights& a, std::span<const double> q_grid, const McSettings& mc);

/// Midpoint log-concavity of q -> E(a_1 X_1 + a_2 X_2)^q / Gamma(1+q), plus
/// G(q) >= G(0)^{1-q/4} G(4)^{q/4} on [0, 4].
Report borell_logconcavity_check(const Weights& a, double q_lo, double q_hi, double step);

/// Route agreement on `vectors` random admissible weight vectors.
Report moment_routes_check(int vectors, int max_n, std::uint64_t seed, std::uint64_t mc_samples);

/// Optimizer against closed forms over the regimes with n in [2, max_n],
/// k in [1, max_k].
Report closed_form_oracle_check(int max_n, int max_k, const OptimizerSettings& settings);

/// Every gating check at its default budget.
std::vector<Report> verify_all(std::uint64_t seed);

/// Names accepted by run_check.
std::vector<std::string_view> check_names();
Report run_check(std::string_view name, std::uint64_t seed);

}  // namespace chs
