#pragma once

// Complete homogeneous symmetric polynomials h_k, power sums, majorization.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "chs/errors.hpp"

namespace chs {

/// A finite, non-empty sequence of real coefficients a = (a_1, ..., a_n).
class Weights {
 public:
  Weights() = default;
  explicit Weights(std::vector<double> coords);
  Weights(std::initializer_list<double> coords);

  /// `value` repeated `copies` times.
  static Weights constant(std::size_t copies, double value);

  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& vec() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  bool is_unit_l2(double tol = 1e-9) const;
  bool is_zero_sum(double tol = 1e-9) const;
  bool is_nonneg() const;
  bool is_unit_linf(double tol = 1e-9) const;

  /// Smallest pairwise gap |a_i - a_j|, +inf for n = 1.
  double min_gap() const;

 private:
  std::vector<double> coords_;
};

/// Univariate polynomial, ascending coefficients.
struct Poly {
  std::vector<double> coeffs;

  /// Degree after trimming trailing coefficients with |c| <= 1e-12; -1 for zero.
  int degree() const;
  double operator()(double x) const;
  Poly derivative() const;
};

struct EvalConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_k_partition = 30;
  double distinctness_tol = 1e-8;

  void validate() const;
};

enum class HMethod { direct, recurrence, power_sum, lagrange };

std::string_view to_string(HMethod m);
HMethod parse_hmethod(std::string_view name);

/// Multiset count C(n+k-1, k) above which `direct` refuses.
inline constexpr double kDirectBudget = 1e7;

/// h_k(a). `recurrence` is total; the other methods carry the
/// preconditions documented on HMethod and throw when they are violated.
double h_eval(const Weights& a, int k, HMethod method = HMethod::recurrence,
              const EvalConfig& cfg = {});

/// h_0(x), ..., h_kmax(x) via the generating-function recurrence.
std::vector<double> h_table(std::span<const double> x, int kmax);

/// h_k by recurrence on a raw coordinate span (no Weights validation).
double h_value(std::span<const double> x, int k);

/// Partial derivatives d/dx_i h_k(a) = h_{k-1}(a, a_i).
std::vector<double> h_grad(const Weights& a, int k);

/// p_m(a) = sum a_i^m.
double power_sum(const Weights& a, int m);

/// sum_{j=0}^m C(copies+j-1, j) t^j, i.e. h_m(t, ..., t, 1) with `copies`
/// repetitions of t.
double h_repeated(double t, int copies, int m);

std::vector<double> rearrange_desc(std::span<const double> x);

/// True iff x is majorized by y.
bool majorizes(std::span<const double> x, std::span<const double> y, double abs_tol = 1e-9);

/// (a_i - a_j) (d_i - d_j) h_{2k}(a), non-negative for every real a.
double schur_ostrowski_value(const Weights& a, int k, std::size_t i, std::size_t j);

/// (sum a_i^2)^k / (k! 2^k).
double hunter_1977_bound(const Weights& a, int k);

enum class PalindromeClass { palindromic, anti_palindromic, neither };

std::string_view to_string(PalindromeClass c);
PalindromeClass palindrome_class(const Poly& p, double abs_tol = 1e-12);

/// Elementary symmetric polynomials e_0..e_n of x.
std::vector<double> elementary_symmetric(std::span<const double> x);

}  // namespace chs
