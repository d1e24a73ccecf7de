#include "chs/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "chs/numerics.hpp"

namespace chs {

Weights::Weights(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("weights must have at least one coordinate");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw InvalidArgument("weights must be finite");
  }
}

Weights::Weights(std::initializer_list<double> coords) : Weights(std::vector<double>(coords)) {}

Weights Weights::constant(std::size_t copies, double value) {
  return Weights(std::vector<double>(copies, value));
}

bool Weights::is_unit_l2(double tol) const {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return std::abs(s - 1.0) <= tol;
}

bool Weights::is_zero_sum(double tol) const {
  return std::abs(std::accumulate(coords_.begin(), coords_.end(), 0.0)) <= tol;
}

bool Weights::is_nonneg() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c >= 0.0; });
}

bool Weights::is_unit_linf(double tol) const {
  double m = 0.0;
  for (double c : coords_) m = std::max(m, std::abs(c));
  return std::abs(m - 1.0) <= tol;
}

double Weights::min_gap() const {
  std::vector<double> s(coords_);
  std::sort(s.begin(), s.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.size(); ++i) gap = std::min(gap, s[i] - s[i - 1]);
  return gap;
}

int Poly::degree() const {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d >= 0 && std::abs(coeffs[static_cast<std::size_t>(d)]) <= 1e-12) --d;
  return d;
}

double Poly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::derivative() const {
  Poly d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
  }
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

void EvalConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(distinctness_tol > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (max_k_partition < 1) throw InvalidArgument("max_k_partition must be positive");
}

std::string_view to_string(HMethod m) {
  switch (m) {
    case HMethod::direct: return "direct";
    case HMethod::recurrence: return "recurrence";
    case HMethod::power_sum: return "power_sum";
    case HMethod::lagrange: return "lagrange";
  }
  return "?";
}

HMethod parse_hmethod(std::string_view name) {
  for (HMethod m : {HMethod::direct, HMethod::recurrence, HMethod::power_sum, HMethod::lagrange}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown evaluation method '" + std::string(name) + "'");
}

std::vector<double> h_table(std::span<const double> x, int kmax) {
  if (kmax < 0) throw InvalidArgument("degree must be non-negative");
  std::vector<double> h(static_cast<std::size_t>(kmax) + 1, 0.0);
  h[0] = 1.0;
  // Multiplying the generating function by 1/(1 - t x_i) is a prefix sum
  // with ratio x_i along the degree axis.
  for (double xi : x) {
    for (std::size_t j = 1; j < h.size(); ++j) h[j] += xi * h[j - 1];
  }
  return h;
}

double h_value(std::span<const double> x, int k) { return h_table(x, k).back(); }

namespace {

double h_direct(std::span<const double> x, int k) {
  const auto n = static_cast<int>(x.size());
  if (num::binomial(n + k - 1, k) > kDirectBudget) {
    throw BudgetExceeded("direct enumeration exceeds " + std::to_string(kDirectBudget) +
                         " monomials");
  }
  if (k == 0) return 1.0;
  // Odometer over non-decreasing index sequences idx[0] <= ... <= idx[k-1].
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  std::vector<double> prefix(static_cast<std::size_t>(k) + 1, 1.0);
  for (int p = 0; p < k; ++p) prefix[p + 1] = prefix[p] * x[0];
  double total = 0.0;
  while (true) {
    total += prefix[k];
    int p = k - 1;
    while (p >= 0 && idx[p] == n - 1) --p;
    if (p < 0) break;
    const int next = idx[p] + 1;
    for (int q = p; q < k; ++q) {
      idx[q] = next;
      prefix[q + 1] = prefix[q] * x[next];
    }
  }
  return total;
}

double h_power_sum(std::span<const double> x, int k, const EvalConfig& cfg) {
  if (k > cfg.max_k_partition) {
    throw BudgetExceeded("power-sum expansion limited to k <= " +
                         std::to_string(cfg.max_k_partition));
  }
  if (k == 0) return 1.0;
  std::vector<double> p(static_cast<std::size_t>(k) + 1, 0.0);
  for (double xi : x) {
    double pw = 1.0;
    for (int m = 1; m <= k; ++m) {
      pw *= xi;
      p[m] += pw;
    }
  }
  // Multiplicity vectors (m_1, ..., m_k) with sum i m_i = k, generated by
  // choosing m_i for decreasing part sizes i.
  std::function<double(int, int)> expand = [&](int part, int remaining) -> double {
    if (remaining == 0) return 1.0;
    if (part == 1) {
      return std::pow(p[1], remaining) / num::factorial(remaining);
    }
    double sum = 0.0;
    double factor = 1.0;
    const double step = p[part] / part;
    for (int m = 0; m * part <= remaining; ++m) {
      if (m > 0) factor *= step / m;
      sum += factor * expand(part - 1, remaining - m * part);
    }
    return sum;
  };
  return expand(k, k);
}

void require_distinct(std::span<const double> x, double tol, std::string_view what) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] - s[i - 1] < tol) {
      throw DistinctnessViolation(std::string(what) + " requires pairwise-distinct coordinates");
    }
  }
}

double h_lagrange(std::span<const double> x, int k, const EvalConfig& cfg) {
  require_distinct(x, cfg.distinctness_tol, "lagrange evaluation");
  const auto n = static_cast<int>(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double denom = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) denom *= x[i] - x[j];
    }
    total += std::pow(x[i], n + k - 1) / denom;
  }
  return total;
}

}  // namespace

double h_eval(const Weights& a, int k, HMethod method, const EvalConfig& cfg) {
  if (k < 0) throw InvalidArgument("degree must be non-negative");
  switch (method) {
    case HMethod::recurrence: return h_value(a.coords(), k);
    case HMethod::direct: return h_direct(a.coords(), k);
    case HMethod::power_sum: return h_power_sum(a.coords(), k, cfg);
    case HMethod::lagrange: return h_lagrange(a.coords(), k, cfg);
  }
  throw InvalidArgument("unknown evaluation method");
}

std::vector<double> h_grad(const Weights& a, int k) {
  if (k < 1) throw InvalidArgument("gradient requires k >= 1");
  // h_{k-1}(a, a_i) = h_{k-1}(a) + a_i h_{k-2}(a, a_i) unrolls into
  // sum_j a_i^j h_{k-1-j}(a), one Horner pass per coordinate.
  const auto base = h_table(a.coords(), k - 1);
  std::vector<double> g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc = acc * a[i] + base[static_cast<std::size_t>(j)];
    g[i] = acc;
  }
  return g;
}

double power_sum(const Weights& a, int m) {
  if (m < 1) throw InvalidArgument("power sum requires m >= 1");
  double s = 0.0;
  for (double c : a.coords()) s += std::pow(c, m);
  return s;
}

double h_repeated(double t, int copies, int m) {
  if (copies < 1) throw InvalidArgument("copies must be positive");
  if (m < 0) throw InvalidArgument("degree must be non-negative");
  if (t == 0.0) return 1.0;
  const double log_abs_t = std::log(std::abs(t));
  double total = 0.0;
  for (int j = 0; j <= m; ++j) {
    std::uint64_t exact = 0;
    double magnitude;
    if (num::binomial_exact(copies + j - 1, j, exact) && exact < (1ULL << 53)) {
      magnitude = static_cast<double>(exact) * std::pow(std::abs(t), j);
    } else {
      magnitude = std::exp(num::log_binomial(copies + j - 1, j) + j * log_abs_t);
    }
    total += (t < 0.0 && (j % 2 == 1)) ? -magnitude : magnitude;
  }
  return total;
}

std::vector<double> rearrange_desc(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

bool majorizes(std::span<const double> x, std::span<const double> y, double abs_tol) {
  if (x.size() != y.size()) throw LengthMismatch("majorization needs equal lengths");
  const auto xs = rearrange_desc(x);
  const auto ys = rearrange_desc(y);
  double px = 0.0;
  double py = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    px += xs[i];
    py += ys[i];
    if (i + 1 < xs.size() && px > py + abs_tol) return false;
  }
  return std::abs(px - py) <= abs_tol;
}

double schur_ostrowski_value(const Weights& a, int k, std::size_t i, std::size_t j) {
  if (k < 1) throw InvalidArgument("schur_ostrowski_value requires k >= 1");
  if (i >= a.size() || j >= a.size()) throw IndexOutOfRange("coordinate index out of range");
  if (i == j) throw InvalidArgument("schur_ostrowski_value requires i != j");
  const auto g = h_grad(a, 2 * k);
  return (a[i] - a[j]) * (g[i] - g[j]);
}

double hunter_1977_bound(const Weights& a, int k) {
  if (k < 1) throw InvalidArgument("hunter_1977_bound requires k >= 1");
  double s = 0.0;
  for (double c : a.coords()) s += c * c;
  return std::pow(s, k) / (num::factorial(k) * std::pow(2.0, k));
}

std::string_view to_string(PalindromeClass c) {
  switch (c) {
    case PalindromeClass::palindromic: return "palindromic";
    case PalindromeClass::anti_palindromic: return "anti_palindromic";
    case PalindromeClass::neither: return "neither";
  }
  return "?";
}

PalindromeClass palindrome_class(const Poly& p, double abs_tol) {
  const int deg = p.degree();
  if (deg < 0) return PalindromeClass::palindromic;
  const auto c = [&](int i) { return p.coeffs[static_cast<std::size_t>(i)]; };
  bool pal = true;
  bool anti = true;
  for (int i = 0; i <= deg; ++i) {
    pal = pal && std::abs(c(i) - c(deg - i)) <= abs_tol;
    anti = anti && std::abs(c(i) + c(deg - i)) <= abs_tol;
  }
  if (pal) return PalindromeClass::palindromic;
  if (anti) return PalindromeClass::anti_palindromic;
  return PalindromeClass::neither;
}

std::vector<double> elementary_symmetric(std::span<const double> x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += x[i] * e[j - 1];
  }
  return e;
}

}  // namespace chs
