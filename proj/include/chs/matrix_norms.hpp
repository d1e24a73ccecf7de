#pragma once

// Norms of real square matrices induced by h_d of the singular values, and
// their sharp comparison with the operator norm.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chs/errors.hpp"

namespace chs {

/// Dense real n x n matrix, row-major.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t n, std::vector<double> row_major);

  static RealMatrix identity(std::size_t n);
  static RealMatrix diagonal(std::span<const double> d);
  /// Entries i.i.d. uniform on [-1, 1] from the counter-based generator.
  static RealMatrix random_uniform(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);
  /// Plain decimal rows, comma-separated, no header; blank lines ignored.
  static RealMatrix parse_csv(std::string_view text);
  static RealMatrix read_csv(const std::string& path);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<double>& entries() const noexcept { return a_; }

  RealMatrix scaled(double c) const;
  RealMatrix operator+(const RealMatrix& other) const;
  RealMatrix operator*(const RealMatrix& other) const;
  RealMatrix transposed() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct SingularValues {
  std::vector<double> values;  // non-increasing, non-negative
};

inline constexpr std::size_t kMaxMatrixDim = 64;

/// One-sided Jacobi: plane rotations orthogonalize the columns of A, whose
/// norms are then the singular values.
SingularValues singular_values(const RealMatrix& a, int max_sweeps = 80);

/// h_d(s_1, ..., s_n)^{1/d} for even d >= 2.
double chs_norm(const RealMatrix& a, int d);
double chs_norm(const SingularValues& s, int d);

/// Schatten-p norm for p >= 1; p = +inf gives the operator norm.
double classical_norms(const RealMatrix& a, double p);
double classical_norms(const SingularValues& s, double p);

struct ComparisonConstants {
  double lower = 0.0;
  double upper = 0.0;
  double t = 0.0;  // root behind the lower constant
};

/// Best constants with lower |A|_op <= |A|_{H_d} <= upper |A|_op on n x n
/// matrices.
ComparisonConstants comparison_constants(int n, int d);

}  // namespace chs
