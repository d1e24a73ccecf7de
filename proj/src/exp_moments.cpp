#include "chs/exp_moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "chs/numerics.hpp"
#include "chs/rng.hpp"

namespace chs {

namespace {

void require_exponent(double q) {
  if (!std::isfinite(q) || !(q > -1.0)) {
    throw InvalidArgument("absolute moments need a finite exponent q > -1");
  }
}

std::vector<double> nonzero_coords(const Weights& a) {
  std::vector<double> out;
  for (double c : a.coords()) {
    if (c != 0.0) out.push_back(c);
  }
  return out;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double c : x) m = std::max(m, std::abs(c));
  return m;
}

// Moments of the zero variable: 1 at q = 0, 0 for q > 0, divergent below.
double degenerate_moment(double q) {
  if (q > 0.0) return 0.0;
  if (q == 0.0) return 1.0;
  throw InvalidArgument("negative moments of the zero combination diverge");
}

double interpolation_moment(const Weights& a, double q, const EvalConfig& cfg) {
  const auto x = nonzero_coords(a);
  if (x.empty()) return degenerate_moment(q);
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < cfg.distinctness_tol) {
      throw DistinctnessViolation("interpolation formula requires pairwise-distinct coefficients");
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i != j) prod *= x[j] / (x[j] - x[i]);
    }
    total += std::pow(std::abs(x[j]), q) * prod;
  }
  return std::tgamma(1.0 + q) * total;
}

int fourier_window_index(double q) {
  for (int w = 0; w < 3; ++w) {
    if (q > 2.0 * w && q < 2.0 * w + 2.0) return w;
  }
  return -1;
}

// E|W|^p = -C_p int_0^inf (Re phi(t) - T_w(t)) t^{-p-1} dt, where T_w is the
// Taylor polynomial of Re phi through degree 2w. Weights are rescaled so that
// max |a_i| = 1; the power series of Re phi then converges for t < 1, so the
// integral over [0, T0] is summed termwise and only the tail is integrated
// numerically, the Taylor part of the tail being integrated exactly.
double fourier_moment(const Weights& a, double p, const EvalConfig& cfg) {
  const int w = fourier_window_index(p);
  if (w < 0) {
    throw UnsupportedExponent("fourier route needs q in (0,2), (2,4) or (4,6); got " +
                              std::to_string(p));
  }
  const double scale = max_abs(a.coords());
  if (scale == 0.0) return 0.0;
  std::vector<double> b(a.vec());
  for (double& c : b) c /= scale;
  const Weights bw(b);

  constexpr double t0 = 0.5;
  constexpr int kMaxTerms = 400;
  const auto h = h_table(bw.coords(), 2 * kMaxTerms);
  const auto h2 = [&](int j) { return h[static_cast<std::size_t>(2 * j)]; };
  const auto sgn = [](int j) { return (j % 2 == 0) ? 1.0 : -1.0; };

  double inner = 0.0;
  int small_run = 0;
  for (int j = w + 1; j <= kMaxTerms; ++j) {
    const double term = sgn(j) * h2(j) * std::pow(t0, 2.0 * j - p) / (2.0 * j - p);
    inner += term;
    small_run = (std::abs(term) <= 1e-18 * std::abs(inner)) ? small_run + 1 : 0;
    if (small_run >= 3) break;
  }
  double taylor_tail = 0.0;
  for (int j = 0; j <= w; ++j) {
    taylor_tail += sgn(j) * h2(j) * std::pow(t0, 2.0 * j - p) / (p - 2.0 * j);
  }
  const auto integrand = [&](double t) { return char_fn_real(bw, t) * std::pow(t, -p - 1.0); };
  const double floor = 1e-3 * (std::abs(inner) + std::abs(taylor_tail));
  const double outer = num::integrate_to_inf(integrand, t0, std::min(cfg.rel_tol, 1e-11), floor);

  const double cp = (2.0 / std::numbers::pi) * std::tgamma(1.0 + p) * std::sin(p * std::numbers::pi / 2.0);
  return -cp * (inner + outer - taylor_tail) * std::pow(scale, p);
}

constexpr std::uint64_t kMcChunk = 1u << 14;


}  // namespace

std::string_view to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::interpolation: return "interpolation";
    case MomentMethod::density_quadrature: return "density_quadrature";
    case MomentMethod::fourier: return "fourier";
    case MomentMethod::monte_carlo: return "monte_carlo";
  }
  return "?";
}

MomentMethod parse_moment_method(std::string_view name) {
  for (MomentMethod m : {MomentMethod::interpolation, MomentMethod::density_quadrature,
                         MomentMethod::fourier, MomentMethod::monte_carlo}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown moment method '" + std::string(name) + "'");
}

void McSettings::validate() const {
  if (samples < 1000) throw InvalidArgument("Monte Carlo needs at least 1000 samples");
}

double integer_moment(const Weights& a, int k) {
  if (k < 0) throw InvalidArgument("moment order must be non-negative");
  const double h = h_value(a.coords(), k);
  if (k <= 170) return num::factorial(k) * h;
  if (h == 0.0) return 0.0;
  const double mag = std::exp(num::log_factorial(k) + std::log(std::abs(h)));
  return h < 0.0 ? -mag : mag;
}

double rho(double n, double q) {
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("rho needs n > 0");
  if (!std::isfinite(q)) throw InvalidArgument("rho needs a finite exponent");
  if (n == std::floor(n) && q == std::floor(q) && q >= 0.0 && q <= 60.0 && n <= 1e6) {
    // Rising factorial n (n+1) ... (n+q-1) over n^{q/2}; exact for small
    // arguments, so rho(1, k) = k! to the last bit.
    const int k = static_cast<int>(q);
    double rise = 1.0;
    for (int j = 0; j < k; ++j) rise *= n + j;
    double denom = 1.0;
    for (int j = 0; j < k / 2; ++j) denom *= n;
    if (k % 2 == 1) denom *= std::sqrt(n);
    return rise / denom;
  }
  const auto top = num::signed_lgamma(n + q);
  const double log_mag = top.log_abs - std::lgamma(n) - 0.5 * q * std::log(n);
  return top.sign * std::exp(log_mag);
}

double density_at(const Weights& a, double t, const EvalConfig& cfg) {
  for (double c : a.coords()) {
    if (c == 0.0) throw ZeroCoefficient("density formula needs non-zero coefficients");
  }
  if (a.min_gap() < cfg.distinctness_tol) {
    throw DistinctnessViolation("density formula requires pairwise-distinct coefficients");
  }
  return MixtureDensity(a, cfg.distinctness_tol)(t);
}

bool in_fourier_window(double q) { return fourier_window_index(q) >= 0; }

MomentEstimate abs_moment(const Weights& a, const MomentQuery& query, const McSettings& mc,
                          const EvalConfig& cfg) {
  require_exponent(query.q);
  cfg.validate();
  switch (query.method) {
    case MomentMethod::interpolation:
      return {interpolation_moment(a, query.q, cfg), 0.0};
    case MomentMethod::density_quadrature: {
      if (nonzero_coords(a).empty()) return {degenerate_moment(query.q), 0.0};
      const MixtureDensity g(a, cfg.distinctness_tol);
      return {g.quadrature_abs_moment(query.q, std::min(cfg.rel_tol, 1e-12)), 0.0};
    }
    case MomentMethod::fourier:
      return {fourier_moment(a, query.q, cfg), 0.0};
    case MomentMethod::monte_carlo: {
      const double qs[] = {query.q};
      return abs_moment_mc_batch(a, qs, mc).front();
    }
  }
  throw InvalidArgument("unknown moment method");
}

std::vector<MomentEstimate> abs_moment_mc_batch(const Weights& a, std::span<const double> qs,
                                                const McSettings& mc) {
  mc.validate();
  for (double q : qs) require_exponent(q);
  const std::size_t nq = qs.size();
  const std::size_t n = a.size();
  const std::uint64_t chunks = (mc.samples + kMcChunk - 1) / kMcChunk;
  // Per-chunk partial sums, merged in chunk order so the result does not
  // depend on how chunks are distributed over threads.
  std::vector<double> sums(static_cast<std::size_t>(chunks) * nq * 2, 0.0);
  const CounterRng rng(mc.seed);

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) break;
      const std::uint64_t begin = c * kMcChunk;
      const std::uint64_t end = std::min(mc.samples, begin + kMcChunk);
      double* s = &sums[static_cast<std::size_t>(c) * nq * 2];
      for (std::uint64_t i = begin; i < end; ++i) {
        double w = 0.0;
        for (std::size_t j = 0; j < n; ++j) w += a[j] * rng.exponential(i * n + j);
        const double aw = std::abs(w);
        for (std::size_t m = 0; m < nq; ++m) {
          const double v = std::pow(aw, qs[m]);
          s[2 * m] += v;
          s[2 * m + 1] += v * v;
        }
      }
    }
  };
  unsigned threads = mc.threads != 0 ? mc.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const auto count = static_cast<double>(mc.samples);
  std::vector<MomentEstimate> out(nq);
  for (std::size_t m = 0; m < nq; ++m) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
      s1 += sums[static_cast<std::size_t>(c) * nq * 2 + 2 * m];
      s2 += sums[static_cast<std::size_t>(c) * nq * 2 + 2 * m + 1];
    }
    const double mean = s1 / count;
    const double var = std::max(0.0, (s2 - count * mean * mean) / (count - 1.0));
    out[m] = {mean, std::sqrt(var / count)};
  }
  return out;
}

double char_fn_real(const Weights& a, double t) {
  const auto e = elementary_symmetric(a.coords());
  const std::size_t n = a.size();
  const double at = std::abs(t);
  const auto sgn = [](std::size_t m) { return (m / 2) % 2 == 0 ? 1.0 : -1.0; };
  if (at <= 1.0) {
    double num = 0.0;
    for (std::size_t m = 0; m <= n; m += 2) num += sgn(m) * e[m] * std::pow(t, static_cast<double>(m));
    double den = 1.0;
    for (double c : a.coords()) den *= 1.0 + c * c * t * t;
    return num / den;
  }
  // Divide numerator and denominator by t^{2n} so large |t| cannot overflow.
  const double u = 1.0 / at;
  double num = 0.0;
  for (std::size_t m = 0; m <= n; m += 2) {
    num += sgn(m) * e[m] * std::pow(u, static_cast<double>(n - m));
  }
  double den = 1.0;
  for (double c : a.coords()) den *= u * u + c * c;
  return num / den * std::pow(u, static_cast<double>(n));
}

double borell_G(const Weights& a, double q) {
  if (a.size() != 2) throw InvalidArgument("borell_G needs exactly two coefficients");
  if (!a.is_nonneg()) throw InvalidArgument("borell_G needs non-negative coefficients");
  if (a[0] == a[1]) throw DistinctnessViolation("borell_G needs distinct coefficients");
  require_exponent(q);
  // Interpolation formula for n = 2, divided by Gamma(1+q).
  return (std::pow(a[0], q + 1.0) - std::pow(a[1], q + 1.0)) / (a[0] - a[1]);
}

MixtureDensity::MixtureDensity(const Weights& a, double distinctness_tol) {
  auto x = nonzero_coords(a);
  if (x.empty()) throw ZeroCoefficient("all coefficients are zero; the sum has no density");
  std::sort(x.begin(), x.end());
  scale_ = max_abs(x);

  struct Group {
    double alpha;
    int mult;
  };
  std::vector<Group> groups;
  for (double c : x) {
    const double v = c / scale_;
    if (!groups.empty() && v == groups.back().alpha) {
      ++groups.back().mult;
      continue;
    }
    if (!groups.empty() && (c - groups.back().alpha * scale_) < distinctness_tol) {
      throw DistinctnessViolation("coefficients closer than the distinctness tolerance");
    }
    groups.push_back({v, 1});
  }

  // Laurent expansion of prod_p (1 - alpha_p s)^{-m_p} at s = 1/alpha_r in
  // u = 1 - alpha_r s: every other factor reads A_p + B_p u.
  for (const auto& r : groups) {
    std::vector<double> series(static_cast<std::size_t>(r.mult), 0.0);
    series[0] = 1.0;
    for (const auto& p : groups) {
      if (&p == &r) continue;
      const double A = (r.alpha - p.alpha) / r.alpha;
      const double B = p.alpha / r.alpha;
      // (A + B u)^{-m} = A^{-m} sum_i C(m+i-1, i) (-B/A)^i u^i.
      std::vector<double> factor(series.size(), 0.0);
      const double lead = std::pow(A, -p.mult);
      double ratio_pow = 1.0;
      for (std::size_t i = 0; i < factor.size(); ++i) {
        factor[i] = lead * num::binomial(p.mult + static_cast<int>(i) - 1, static_cast<int>(i)) *
                    ratio_pow;
        ratio_pow *= -B / A;
      }
      std::vector<double> product(series.size(), 0.0);
      for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = 0; i + j < series.size(); ++j) product[i + j] += series[i] * factor[j];
      }
      series = std::move(product);
    }
    for (int l = 1; l <= r.mult; ++l) {
      blocks_.push_back({r.alpha, l, series[static_cast<std::size_t>(r.mult - l)]});
    }
  }
}

double MixtureDensity::side(double t, bool positive) const {
  // Density in normalised units (max |alpha| = 1), t >= 0 measured on the
  // given side; at t = 0 this is the one-sided limit.
  double total = 0.0;
  for (const auto& b : blocks_) {
    if ((b.alpha > 0.0) != positive) continue;
    const double s = std::abs(b.alpha);
    if (t == 0.0) {
      if (b.order == 1) total += b.coeff / s;
      continue;
    }
    const double log_kernel = (b.order - 1) * std::log(t) - t / s - std::lgamma(b.order) - b.order * std::log(s);
    total += b.coeff * std::exp(log_kernel);
  }
  return total;
}

double MixtureDensity::operator()(double t) const {
  const double u = t / scale_;
  if (u == 0.0) return 0.5 * (side(0.0, true) + side(0.0, false)) / scale_;
  return side(std::abs(u), u > 0.0) / scale_;
}

double MixtureDensity::closed_form_abs_moment(double q) const {
  require_exponent(q);
  double total = 0.0;
  for (const auto& b : blocks_) {
    total += b.coeff * std::exp(std::lgamma(b.order + q) - std::lgamma(b.order) +
                                q * std::log(std::abs(b.alpha)));
  }
  return total * std::pow(scale_, q);
}

double MixtureDensity::quadrature_abs_moment(double q, double rel_tol) const {
  require_exponent(q);
  double total = 0.0;
  for (bool positive : {true, false}) {
    const bool present = std::any_of(blocks_.begin(), blocks_.end(),
                                     [&](const Block& b) { return (b.alpha > 0.0) == positive; });
    if (!present) continue;
    const double head = num::integrate_singular(
        [&](double t) { return std::pow(t, q) * side(t, positive); }, 0.0, 1.0, rel_tol);
    const double tail = num::integrate_to_inf(
        [&](double t) { return std::pow(t, q) * side(t, positive); }, 1.0, rel_tol, std::abs(head));
    total += head + tail;
  }
  return total * std::pow(scale_, q);
}

}  // namespace chs
