#pragma once

// Special functions, bisection and quadrature shared by every module.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

#include "chs/errors.hpp"

namespace chs::num {

/// log|Gamma(x)| together with the sign of Gamma(x).
/// Throws PoleHit when x is a non-positive integer.
struct SignedLog {
  double log_abs;
  int sign;
};
SignedLog signed_lgamma(double x);

/// n! as a double; exact for n <= 22, log-gamma beyond.
double factorial(int n);
double log_factorial(int n);

/// Binomial coefficient C(n,k) for integers 0 <= k <= n. Exact whenever the
/// value fits in 2^53; log-gamma otherwise.
double binomial(int n, int k);
double log_binomial(double n, double k);

/// Exact C(n,k) when it fits in 64 bits.
bool binomial_exact(int n, int k, std::uint64_t& out);

/// Rising factorial x (x+1) ... (x+m-1) into `out` when it fits in 64 bits.
bool rising_exact(std::uint64_t x, int m, unsigned __int128& out);

struct BisectResult {
  double root;
  int iterations;
};

/// Plain bisection. The bracket must carry a sign change; stops when the
/// bracket is narrower than `tol` or f hits zero exactly.
BisectResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
                    int max_iter = 4000);

/// Adaptive Gauss-Kronrod on a finite interval. Throws NonConvergedQuadrature
/// when the error estimate stays above rel_tol * max(|I|, abs_floor).
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_floor = 0.0);

/// Double-exponential (tanh-sinh) quadrature on a finite interval; robust to
/// algebraic endpoint singularities such as t^q near 0.
double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor = 0.0);

/// Integral over [a, inf) through the map t = a + s / (1 - s).
double integrate_to_inf(const std::function<double(double)>& f, double a, double rel_tol,
                        double abs_floor = 0.0);

}  // namespace chs::num
