#include "chs/numerics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace chs::num {

namespace {

constexpr std::array<double, 23> kFactorials = [] {
  std::array<double, 23> f{};
  f[0] = 1.0;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<double>(i);
  return f;
}();

constexpr double kTwo53 = 9007199254740992.0;

}  // namespace

SignedLog signed_lgamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw PoleHit("Gamma pole at " + std::to_string(x));
  }
  int sign = 1;
  if (x < 0.0) {
    // Gamma alternates sign between consecutive negative integers.
    const auto cell = static_cast<long long>(std::ceil(-x));
    sign = (cell % 2 == 1) ? -1 : 1;
  }
  return {std::lgamma(x), sign};
}

double factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of a negative integer");
  if (n < static_cast<int>(kFactorials.size())) return kFactorials[static_cast<std::size_t>(n)];
  return std::exp(std::lgamma(n + 1.0));
}

double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("factorial of a negative integer");
  if (n < static_cast<int>(kFactorials.size())) {
    return std::log(kFactorials[static_cast<std::size_t>(n)]);
  }
  return std::lgamma(n + 1.0);
}

bool binomial_exact(int n, int k, std::uint64_t& out) {
  if (k < 0 || n < 0 || k > n) {
    out = 0;
    return true;
  }
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

bool rising_exact(std::uint64_t x, int m, unsigned __int128& out) {
  unsigned __int128 acc = 1;
  const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 120;
  for (int i = 0; i < m; ++i) {
    const unsigned __int128 factor = x + static_cast<std::uint64_t>(i);
    if (factor != 0 && acc > cap / factor) return false;
    acc *= factor;
  }
  out = acc;
  return true;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::uint64_t exact = 0;
  if (binomial_exact(n, k, exact) && static_cast<double>(exact) <= kTwo53) {
    return static_cast<double>(exact);
  }
  return std::exp(log_binomial(n, k));
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

BisectResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
                    int max_iter) {
  if (!(lo < hi)) throw BracketFailure("bisection bracket must satisfy lo < hi");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return {lo, 0};
  if (fhi == 0.0) return {hi, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw BracketFailure("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "]");
  }
  int it = 0;
  while (hi - lo > tol && it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    ++it;
    if (fm == 0.0) return {mid, it};
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), it};
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_floor) {
  if (a == b) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double value = GK::integrate(f, a, b, 18, rel_tol, &err, &l1);
  if (!std::isfinite(value)) throw NonConvergedQuadrature("non-finite quadrature value");
  // Boost measures the error relative to the L1 norm of the integrand.
  const double scale = std::max({std::abs(value), l1, abs_floor});
  if (err > 10.0 * rel_tol * scale + std::numeric_limits<double>::min()) {
    throw NonConvergedQuadrature("quadrature error estimate " + std::to_string(err) +
                                 " exceeds tolerance");
  }
  return value;
}

double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor) {
  if (a == b) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  double l1 = 0.0;
  const double value = ts.integrate(f, a, b, rel_tol, &err, &l1);
  if (!std::isfinite(value)) throw NonConvergedQuadrature("non-finite quadrature value");
  const double scale = std::max({std::abs(value), l1, abs_floor});
  if (err > 10.0 * rel_tol * scale + std::numeric_limits<double>::min()) {
    throw NonConvergedQuadrature("quadrature error estimate " + std::to_string(err) +
                                 " exceeds tolerance");
  }
  return value;
}

double integrate_to_inf(const std::function<double(double)>& f, double a, double rel_tol,
                        double abs_floor) {
  auto mapped = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double t = a + s / one_minus;
    const double v = f(t);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, rel_tol, abs_floor);
}

}  // namespace chs::num
