#pragma once

// Moments E|sum a_i X_i|^q of weighted sums of i.i.d. standard exponentials.
//
// Four independent routes are provided: the Gamma interpolation formula,
// quadrature of the exponential-mixture density, Fourier inversion with the
// Taylor part of the characteristic function removed analytically, and Monte
// Carlo with a counter-based generator.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "chs/core.hpp"

namespace chs {

enum class MomentMethod { interpolation, density_quadrature, fourier, monte_carlo };

std::string_view to_string(MomentMethod m);
MomentMethod parse_moment_method(std::string_view name);

struct MomentQuery {
  double q = 1.0;
  MomentMethod method = MomentMethod::interpolation;
};

struct McSettings {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it

  void validate() const;
};

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for the deterministic routes
};

/// k! h_k(a) = E(sum a_i X_i)^k.
double integer_moment(const Weights& a, int k);

/// Gamma(n+q) / (Gamma(n) n^{q/2}). Throws PoleHit when n+q is a
/// non-positive integer.
double rho(double n, double q);

/// Density of sum a_i X_i at t; at t = 0 the average of the one-sided limits.
/// Requires non-zero, pairwise-distinct coefficients.
double density_at(const Weights& a, double t, const EvalConfig& cfg = {});

/// True when q lies in one of the Fourier windows (0,2), (2,4), (4,6).
bool in_fourier_window(double q);

MomentEstimate abs_moment(const Weights& a, const MomentQuery& query, const McSettings& mc = {},
                          const EvalConfig& cfg = {});

/// Monte Carlo estimates for several exponents from one sample stream.
std::vector<MomentEstimate> abs_moment_mc_batch(const Weights& a, std::span<const double> qs,
                                                const McSettings& mc);

/// Re prod_j (1 + i a_j t)^{-1}.
double char_fn_real(const Weights& a, double t);

/// E(a_1 X_1 + a_2 X_2)^q / Gamma(1+q) for non-negative, distinct a_1, a_2.
double borell_G(const Weights& a, double q);

/// Density of sum a_i X_i as a finite mixture of scaled Gamma densities,
/// obtained from the partial-fraction expansion of prod (1 - a_i s)^{-1}.
/// Exactly repeated coefficients become higher-order Gamma blocks; zero
/// coefficients are dropped.
class MixtureDensity {
 public:
  struct Block {
    double alpha;  // the coefficient value
    int order;     // Gamma shape
    double coeff;  // mixture weight
  };

  explicit MixtureDensity(const Weights& a, double distinctness_tol = 1e-8);

  double operator()(double t) const;
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  /// sum_b coeff_b Gamma(order_b + q) / Gamma(order_b) |alpha_b|^q.
  double closed_form_abs_moment(double q) const;
  /// Numerical integral of |t|^q against the density.
  double quadrature_abs_moment(double q, double rel_tol = 1e-12) const;

 private:
  double side(double t, bool positive) const;
  std::vector<Block> blocks_;
  double scale_ = 1.0;
};

}  // namespace chs
