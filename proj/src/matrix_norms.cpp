#include "chs/matrix_norms.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "chs/core.hpp"
#include "chs/extremal.hpp"
#include "chs/numerics.hpp"
#include "chs/rng.hpp"

namespace chs {

RealMatrix::RealMatrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (n == 0) throw InvalidArgument("matrix dimension must be positive");
  if (a_.size() != n * n) throw LengthMismatch("matrix needs n*n entries");
  for (double v : a_) {
    if (!std::isfinite(v)) throw InvalidArgument("matrix entries must be finite");
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
  return RealMatrix(n, std::move(a));
}

RealMatrix RealMatrix::diagonal(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = d[i];
  return RealMatrix(n, std::move(a));
}

RealMatrix RealMatrix::random_uniform(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  const CounterRng rng(seed, stream);
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = 2.0 * rng.uniform(i) - 1.0;
  return RealMatrix(n, std::move(a));
}

RealMatrix RealMatrix::parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      const char* begin = cell.c_str();
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(begin, &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == begin || *end != '\0' || errno == ERANGE) {
        throw InvalidArgument("matrix CSV: cannot parse '" + cell + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("matrix CSV is empty");
  const std::size_t n = rows.size();
  std::vector<double> a;
  for (const auto& r : rows) {
    if (r.size() != n) throw InvalidArgument("matrix CSV must describe a square matrix");
    a.insert(a.end(), r.begin(), r.end());
  }
  return RealMatrix(n, std::move(a));
}

RealMatrix RealMatrix::read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open matrix file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_csv(buf.str());
}

RealMatrix RealMatrix::scaled(double c) const {
  std::vector<double> a(a_);
  for (double& v : a) v *= c;
  return RealMatrix(n_, std::move(a));
}

RealMatrix RealMatrix::operator+(const RealMatrix& other) const {
  if (other.n_ != n_) throw LengthMismatch("matrix sizes differ");
  std::vector<double> a(a_);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += other.a_[i];
  return RealMatrix(n_, std::move(a));
}

RealMatrix RealMatrix::operator*(const RealMatrix& other) const {
  if (other.n_ != n_) throw LengthMismatch("matrix sizes differ");
  std::vector<double> a(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      const double v = a_[i * n_ + k];
      for (std::size_t j = 0; j < n_; ++j) a[i * n_ + j] += v * other.a_[k * n_ + j];
    }
  }
  return RealMatrix(n_, std::move(a));
}

RealMatrix RealMatrix::transposed() const {
  std::vector<double> a(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) a[j * n_ + i] = a_[i * n_ + j];
  }
  return RealMatrix(n_, std::move(a));
}

SingularValues singular_values(const RealMatrix& a, int max_sweeps) {
  const std::size_t n = a.size();
  if (n == 0) throw InvalidArgument("empty matrix");
  if (n > kMaxMatrixDim) throw InvalidArgument("singular_values supports n <= 64");
  // Column-major working copy: col[j][i] = A(i, j).
  std::vector<std::vector<double>> col(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) col[j][i] = a(i, j);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += col[p][i] * col[p][i];
          beta += col[q][i] * col[q][i];
          gamma += col[p][i] * col[q][i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        converged = false;
        // Rotation zeroing the (p, q) entry of the 2x2 Gram block.
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = col[p][i];
          const double y = col[q][i];
          col[p][i] = c * x - s * y;
          col[q][i] = s * x + c * y;
        }
      }
    }
  }
  if (!converged) throw ConvergenceFailure("Jacobi SVD did not converge");
  SingularValues sv;
  for (const auto& c : col) {
    double s = 0.0;
    for (double v : c) s += v * v;
    sv.values.push_back(std::sqrt(s));
  }
  std::sort(sv.values.begin(), sv.values.end(), std::greater<>());
  return sv;
}

double chs_norm(const SingularValues& s, int d) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("CHS norm needs an even degree d >= 2");
  const double h = h_value(s.values, d);
  return std::pow(std::max(h, 0.0), 1.0 / d);
}

double chs_norm(const RealMatrix& a, int d) { return chs_norm(singular_values(a), d); }

double classical_norms(const SingularValues& s, double p) {
  if (std::isinf(p) && p > 0.0) return s.values.empty() ? 0.0 : s.values.front();
  if (!(p >= 1.0)) throw InvalidArgument("Schatten norms need p >= 1");
  const double top = s.values.empty() ? 0.0 : s.values.front();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : s.values) acc += std::pow(v / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double classical_norms(const RealMatrix& a, double p) { return classical_norms(singular_values(a), p); }

ComparisonConstants comparison_constants(int n, int d) {
  if (n < 2) throw InvalidArgument("comparison_constants needs n >= 2");
  if (d < 2 || d % 2 != 0) throw InvalidArgument("comparison_constants needs an even d >= 2");
  const int k = d / 2;
  const double upper = std::exp(num::log_binomial(n + d - 1, d) / d);
  const double t = linf_min(n, k).cert("t");
  return {upper * std::abs(t), upper, t};
}

}  // namespace chs
