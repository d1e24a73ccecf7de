#include "chs/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chs/exp_moments.hpp"
#include "chs/numerics.hpp"

namespace chs {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw InvalidArgument(msg);
}

Weights half_plus_minus(int n) {
  std::vector<double> a(static_cast<std::size_t>(n));
  const double v = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i < n / 2 ? v : -v;
  return Weights(std::move(a));
}

Weights flat(int n) {
  return Weights::constant(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
}

std::vector<double> two_level(int first, double a, int second, double b) {
  std::vector<double> v(static_cast<std::size_t>(first), a);
  v.insert(v.end(), static_cast<std::size_t>(second), b);
  return v;
}

double rel_diff(double x, double y) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), std::numeric_limits<double>::min()});
}

// Golden-section maximization of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ExtremalResult::cert(std::string_view key) const {
  for (const auto& [name, value] : certificate) {
    if (name == key) return value;
  }
  throw InvalidArgument("no certificate entry '" + std::string(key) + "'");
}

void RootBracket::validate() const {
  if (!(lo < hi)) throw BracketFailure("bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw InvalidArgument("bracket tolerance must be positive");
}

ExtremalResult hunter_min(int n, int k) {
  if (n < 2 || n % 2 != 0) throw OddDimension("hunter_min needs an even dimension n >= 2");
  require(k >= 1, "hunter_min needs k >= 1");
  const double half = n / 2.0;
  const double log_value = std::lgamma(half + k) - std::lgamma(k + 1.0) - std::lgamma(half) -
                           k * std::log(static_cast<double>(n));
  return {std::exp(log_value), half_plus_minus(n), "half_plus_minus", {}};
}

double rho1(int n) {
  require(n >= 3 && n % 2 == 1, "rho1 needs an odd n >= 3");
  const double x = n;
  const double root = std::sqrt(8.0 - 8.0 * x + x * x + 2.0 * x * x * x + x * x * x * x);
  return (-4.0 + 7.0 * x + 4.0 * x * x + x * x * x - (x + 3.0) * root) / (2.0 * x * x - 2.0);
}

MinMax h4_unconditional(int n) {
  require(n >= 2, "h4_unconditional needs n >= 2");
  const Weights f = flat(n);
  ExtremalResult max{h_value(f.coords(), 4), f, "flat", {}};
  if (n % 2 == 0) {
    ExtremalResult min = hunter_min(n, 2);
    return {std::move(min), std::move(max)};
  }

  // Unit vectors ((n-1)/2 copies of cos(th)/sqrt(g1), (n+1)/2 copies of
  // sin(th)/sqrt(g2)); h_4 is even, so th in [0, pi) covers the family.
  const int g1 = (n - 1) / 2;
  const int g2 = (n + 1) / 2;
  const double s1 = std::sqrt(static_cast<double>(g1));
  const double s2 = std::sqrt(static_cast<double>(g2));
  const auto vec = [&](double th) { return two_level(g1, std::cos(th) / s1, g2, std::sin(th) / s2); };
  const auto value = [&](double th) { return h_value(vec(th), 4); };
  const auto slope = [&](double th) {
    const Weights v(vec(th));
    const auto g = h_grad(v, 4);
    return -g.front() * s1 * std::sin(th) + g.back() * s2 * std::cos(th);
  };

  constexpr int kGrid = 2000;
  const double step = std::numbers::pi / kGrid;
  int best = 0;
  double best_value = value(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double v = value(i * step);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double theta = best * step;
  const double lo = (best - 1) * step;
  const double hi = (best + 1) * step;
  if (slope(lo) < 0.0 && slope(hi) > 0.0) theta = num::bisect(slope, lo, hi, 1e-15).root;

  const Weights arg(vec(theta));
  const double c = rho1(n);
  ExtremalResult min{h_value(arg.coords(), 4), arg, "two_level_split",
                     {{"ratio_a_over_b", arg.vec().front() / arg.vec().back()},
                      {"rho1", c},
                      {"lower_bound", (1.0 + c) / 8.0}}};
  return {std::move(min), std::move(max)};
}

ExtremalResult nonneg_min(int n, int k) {
  require(n >= 1, "nonneg_min needs n >= 1");
  require(k >= 0, "nonneg_min needs k >= 0");
  int best_m = 1;
  double best = rho(1.0, k);
  for (int m = 2; m <= n; ++m) {
    const double v = rho(m, k);
    if (v < best * (1.0 - 1e-13)) {
      best = v;
      best_m = m;
    }
  }
  const double v = 1.0 / std::sqrt(static_cast<double>(best_m));
  return {best, Weights(two_level(best_m, v, n - best_m, 0.0)), "equal_support_m",
          {{"m", static_cast<double>(best_m)}}};
}

double nk_continuous(int k) {
  require(k >= 3, "nk_continuous needs k >= 3");
  // d/dn ln rho(n, k) = sum_{j<k} 1/(n+j) - k/(2n).
  const auto slope = [k](double n) {
    double s = 0.0;
    for (int j = k - 1; j >= 0; --j) s += 1.0 / (n + j);
    return s - k / (2.0 * n);
  };
  return num::bisect(slope, 1e-3, static_cast<double>(k), 1e-10).root;
}

double u0_ratio() {
  const auto f = [](double u) { return std::log1p(u) - u / 2.0; };
  return num::bisect(f, 1.0, 10.0, 1e-12).root;
}

Poly gamma_pair_moment_poly(int gamma1, int gamma2, int k) {
  require(gamma1 >= 1 && gamma2 >= 1, "gamma shapes must be positive integers");
  require(k >= 0, "moment order must be non-negative");
  Poly p;
  p.coeffs.resize(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    // C(k,j) (gamma1)_j (gamma2)_{k-j}: Gamma(j+g1)/Gamma(g1) is a rising factorial.
    std::uint64_t binom = 0;
    unsigned __int128 r1 = 0;
    unsigned __int128 r2 = 0;
    bool exact = num::binomial_exact(k, j, binom) &&
                 num::rising_exact(static_cast<std::uint64_t>(gamma1), j, r1) &&
                 num::rising_exact(static_cast<std::uint64_t>(gamma2), k - j, r2);
    if (exact) {
      const unsigned __int128 cap = ~static_cast<unsigned __int128>(0);
      unsigned __int128 prod = binom;
      if (r1 != 0 && prod > cap / r1) exact = false;
      if (exact) prod *= r1;
      if (exact && r2 != 0 && prod > cap / r2) exact = false;
      if (exact) {
        prod *= r2;
        // Exact below 2^53; correctly rounded above.
        p.coeffs[static_cast<std::size_t>(j)] = static_cast<double>(prod);
        continue;
      }
    }
    const double log_c = num::log_binomial(k, j) + std::lgamma(j + static_cast<double>(gamma1)) -
                         std::lgamma(static_cast<double>(gamma1)) +
                         std::lgamma(k - j + static_cast<double>(gamma2)) -
                         std::lgamma(static_cast<double>(gamma2));
    if (log_c > std::log(std::numeric_limits<double>::max())) {
      throw Overflow("moment polynomial coefficient exceeds the double range");
    }
    p.coeffs[static_cast<std::size_t>(j)] = std::exp(log_c);
  }
  return p;
}

namespace {

// The moment polynomial scaled to unit maximal coefficient, with the log of
// the scale kept separately so large k stay representable.
struct ScaledMomentPoly {
  Poly p;
  double log_scale;

  ScaledMomentPoly(int n, int k) : p(gamma_pair_moment_poly(n - 1, 1, k)) {
    const double m = *std::max_element(p.coeffs.begin(), p.coeffs.end());
    for (double& c : p.coeffs) c /= m;
    log_scale = std::log(m);
  }
};

double objective(const ScaledMomentPoly& sp, int n, int k, double x) {
  return std::log(sp.p(x)) + sp.log_scale - 0.5 * k * std::log1p((n - 1.0) * x * x);
}

}  // namespace

double nonneg_max_objective(int n, int k, double x) {
  require(n >= 2 && k >= 1, "nonneg_max_objective needs n >= 2, k >= 1");
  require(x >= 0.0, "nonneg_max_objective needs x >= 0");
  return objective(ScaledMomentPoly(n, k), n, k, x);
}

ExtremalResult nonneg_max(int n, int k) {
  require(n >= 2, "nonneg_max needs n >= 2");
  require(k >= 1, "nonneg_max needs k >= 1");
  const ScaledMomentPoly sp(n, k);
  const auto f = [&](double x) { return objective(sp, n, k, x); };

  // Stationarity numerator g = P' ((n-1)x^2 + 1) - k (n-1) x P; the x^{k+1}
  // terms cancel.
  const Poly dp = sp.p.derivative();
  const double m = n - 1.0;
  const auto g = [&](double x) { return dp(x) * (m * x * x + 1.0) - k * m * x * sp.p(x); };

  std::vector<double> candidates = {1.0};
  constexpr int kGrid = 10000;
  double prev_x = 1.0 / kGrid;
  double prev_g = g(prev_x);
  double grid_best_x = 1.0;
  double grid_best_f = f(1.0);
  for (int i = 1; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double fx = f(x);
    if (fx > grid_best_f) {
      grid_best_f = fx;
      grid_best_x = x;
    }
    if (i == 1) continue;
    const double gx = g(x);
    if (gx == 0.0) {
      candidates.push_back(x);
    } else if (std::signbit(gx) != std::signbit(prev_g) && prev_g != 0.0) {
      candidates.push_back(num::bisect(g, prev_x, x, 1e-15).root);
    }
    prev_x = x;
    prev_g = gx;
  }

  double best_x = 1.0;
  double best_f = f(1.0);
  for (double x : candidates) {
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  // Fallback when sign changes were missed (e.g. a double root).
  double fallback = 0.0;
  if (grid_best_f > best_f + 1e-9) {
    const double lo = std::max(1e-12, grid_best_x - 1.0 / kGrid);
    const double hi = std::min(1.0, grid_best_x + 1.0 / kGrid);
    best_x = golden_max(f, lo, hi, 1e-13);
    best_f = f(best_x);
    fallback = 1.0;
  }
  const double f1 = f(1.0);
  if (std::abs(best_f - f1) < 1e-10) {
    best_x = 1.0;
    best_f = f1;
  }

  const double s = 1.0 / std::sqrt(1.0 + m * best_x * best_x);
  const double t = best_x * s;
  return {std::exp(best_f), Weights(two_level(1, s, n - 1, t)),
          best_x == 1.0 ? "flat" : "s_then_t_repeated",
          {{"x", best_x},
           {"s", s},
           {"t", t},
           {"value_at_flat", std::exp(f1)},
           {"stationary_points", static_cast<double>(candidates.size() - 1)},
           {"grid_fallback", fallback}}};
}

ExtremalResult centred_min(int n, int k) {
  if (n < 2 || n % 2 != 0) throw OddDimension("centred_min needs an even dimension n >= 2");
  return hunter_min(n, k);
}

ExtremalResult centred_max(int n, int k) {
  require(n >= 2, "centred_max needs n >= 2");
  require(k >= 1, "centred_max needs k >= 1");
  const double small = -1.0 / std::sqrt(static_cast<double>(n) * (n - 1));
  const double big = std::sqrt((n - 1.0) / n);
  const Weights a(two_level(n - 1, small, 1, big));
  return {h_value(a.coords(), 2 * k), a, "t_repeated_then_spike", {}};
}

double centred_p_max(int n, int m) {
  require(n >= 2, "centred_p_max needs n >= 2");
  require(m >= 1, "centred_p_max needs m >= 1");
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return std::pow((n - 1.0) / n, m / 2.0) +
         sign * (n - 1.0) * std::pow(static_cast<double>(n) * (n - 1), -m / 2.0);
}

ExtremalResult centred_h4_min(int n) {
  require(n >= 2, "centred_h4_min needs n >= 2");
  if (n % 2 == 0) {
    const Weights a = half_plus_minus(n);
    return {h_value(a.coords(), 4), a, "half_plus_minus", {{"sum_a4", 1.0 / n}}};
  }
  const double x = n;
  const double up = std::sqrt((x + 1.0) / (x * (x - 1.0)));
  const double down = -std::sqrt((x - 1.0) / (x * (x + 1.0)));
  const Weights a(two_level((n - 1) / 2, up, (n + 1) / 2, down));
  return {h_value(a.coords(), 4), a, "two_level_split",
          {{"sum_a4", (x * x + 3.0) / (x * (x * x - 1.0))}}};
}

MinMax centred_n3_bounds(double q) {
  require(std::isfinite(q) && q > -1.0, "centred_n3_bounds needs q > -1");
  const bool integer = q == std::floor(q);
  if (q >= 6.0 && !integer) {
    throw UnsupportedExponent("no ordering is known for non-integer q >= 6");
  }
  const double r6 = 1.0 / std::sqrt(6.0);
  const double r2 = 1.0 / std::sqrt(2.0);
  const Weights x1{r6, r6, -2.0 * r6};
  const Weights x2{r2, -r2, 0.0};

  double v1;
  double v2;
  if (q == 0.0 || q == 2.0) {
    v1 = v2 = 1.0;
  } else if (q == 4.0) {
    v1 = v2 = 6.0;
  } else {
    // x2 is a scaled Laplace variable; x1 carries a repeated coefficient, so
    // its moment comes from the Gamma-block mixture density.
    v2 = std::tgamma(1.0 + q) / std::pow(2.0, q / 2.0);
    v1 = MixtureDensity(x1).quadrature_abs_moment(q);
  }
  ExtremalResult at1{v1, x1, "two_equal_one_double", {{"q", q}}};
  ExtremalResult at2{v2, x2, "plus_minus_zero", {{"q", q}}};
  const bool x1_is_min = (q > -1.0 && q < 0.0) || (q > 2.0 && q < 4.0);
  if (q == 0.0 || q == 2.0 || q == 4.0) return {at1, at2};
  if (x1_is_min) return {std::move(at1), std::move(at2)};
  return {std::move(at2), std::move(at1)};
}

ExtremalResult linf_min(int n, int k) {
  require(n >= 2, "linf_min needs n >= 2");
  require(k >= 1, "linf_min needs k >= 1");
  const auto poly = [n, k](double t) { return h_repeated(t, n, 2 * k - 1); };
  const double t = num::bisect(poly, -1.0 + 1e-12, -1e-12, 1e-13).root;
  const double value = num::binomial(n + 2 * k - 1, 2 * k) * std::pow(t, 2 * k);
  const Weights a(two_level(n - 1, t, 1, 1.0));
  const double direct = h_value(a.coords(), 2 * k);
  if (rel_diff(direct, value) > 1e-9) {
    throw ConvergenceFailure("closed-form minimum disagrees with direct evaluation");
  }
  return {value, a, "t_repeated_then_one", {{"t", t}}};
}

}  // namespace chs
