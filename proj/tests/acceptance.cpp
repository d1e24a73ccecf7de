// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chs/core.hpp"
#include "chs/exp_moments.hpp"
#include "chs/extremal.hpp"
#include "chs/matrix_norms.hpp"
#include "chs/verify.hpp"
#include "oracles.hpp"

using namespace chs;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

// (n/2 + k - 1)! / (k! (n/2 - 1)! n^k) by direct products.
double hunter_formula(int n, int k) {
  long double v = 1.0L;
  for (int j = 1; j <= k; ++j) v *= static_cast<long double>(n / 2 - 1 + j) / j;
  for (int j = 0; j < k; ++j) v /= n;
  return static_cast<double>(v);
}

Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 4, 6, 8}) {
    for (int k = 1; k <= 5; ++k) {
      const auto r = hunter_min(n, k);
      const double f = hunter_formula(n, k);
      const double direct = h_eval(Weights(oracle::half_plus_minus(n)), 2 * k, HMethod::direct);
      worst = std::max({worst, rel(r.value, f), rel(direct, f)});
    }
  }
  o.require(worst <= 1e-10, "closed form deviates by " + num(worst));
  double worst_oracle = 0.0;
  OptimizerSettings st;
  for (int n : {2, 4, 6}) {
    for (int k = 1; k <= 3; ++k) {
      const auto got = optimize_constrained(Objective::chs_degree(2 * k), {ConstraintKind::unit_l2, n},
                                            Direction::min, st);
      worst_oracle = std::max(worst_oracle, rel(got.value, hunter_formula(n, k)));
      // For k = 1 every unit vector with zero sum is optimal; the structure
      // statement applies from k = 2 on.
      if (k > 1) {
        o.require(is_signed_permutation_of(got.argvec.coords(), oracle::half_plus_minus(n), 1e-3),
                  "oracle argvec off structure at n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  }
  o.require(worst_oracle <= 1e-5, "oracle deviates by " + num(worst_oracle));
  if (o.pass) o.detail = "max closed-form dev " + num(worst) + ", max oracle dev " + num(worst_oracle);
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (int n = 2; n <= 20; n += 2) {
    const double v = h_eval(Weights(oracle::half_plus_minus(n)), 4);
    worst = std::max(worst, rel(v, 1.0 / 8.0 + 1.0 / (4.0 * n)));
  }
  o.require(worst <= 1e-12, "max dev " + num(worst));
  if (o.pass) o.detail = "max rel dev " + num(worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double ref[] = {1.2900, 1.6958, 2.0989, 2.5006, 2.9014, 3.3015, 3.7012, 4.1005, 4.4997, 4.8986, 5.2974};
  double worst = 0.0;
  for (int k = 5; k <= 15; ++k) worst = std::max(worst, std::abs(nk_continuous(k) - ref[k - 5]));
  o.require(worst <= 5e-4, "n_k dev " + num(worst));
  const double u0 = u0_ratio();
  o.require(std::abs(u0 - 2.51) <= 0.01, "u0 = " + num(u0));
  const double ratio = nk_continuous(200) / 200.0;
  o.require(std::abs(ratio - 1.0 / u0) <= 2e-2, "n_200/200 = " + num(ratio));
  if (o.pass) o.detail = "max n_k dev " + num(worst) + ", u0 " + num(u0) + ", n_200/200 " + num(ratio);
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int n = 1; n <= 8; ++n) {
    for (int k = 1; k <= 4; ++k) {
      const auto r = nonneg_min(n, k);
      double fact = 1.0;
      for (int j = 2; j <= k; ++j) fact *= j;
      o.require(r.value == fact && r.cert("m") == 1.0,
                "k=" + std::to_string(k) + " n=" + std::to_string(n) + " not k! at m=1");
    }
  }
  const auto r7 = nonneg_min(4, 7);
  o.require(r7.cert("m") == 2.0, "k=7 support " + num(r7.cert("m")));
  o.require(rel(r7.value, 3563.81817718019952298) <= 1e-12, "k=7 value " + num(r7.value));
  o.require(r7.value < 5040.0 && r7.value < rho(3, 7), "k=7 does not beat m=1 and m=3");
  OptimizerSettings st;
  const auto got = optimize_constrained(Objective::abs_moment_q(7), {ConstraintKind::unit_l2_nonneg, 4},
                                        Direction::min, st);
  o.require(got.value >= r7.value * (1.0 - 1e-6), "oracle reached " + num(got.value));
  if (o.pass) o.detail = "rho(2,7) " + num(r7.value) + ", oracle min " + num(got.value);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto p = gamma_pair_moment_poly(6, 1, 7);
  o.require(p.coeffs.size() == 8, "degree");
  if (p.coeffs.size() == 8) {
    o.require(p.coeffs[7] == 3991680.0, "x^7 coefficient " + num(p.coeffs[7]));
    o.require(p.coeffs[6] == 2328480.0, "x^6 coefficient " + num(p.coeffs[6]));
    o.require(p.coeffs[0] == 5040.0, "constant " + num(p.coeffs[0]));
  }
  if (o.pass) o.detail = "coefficients 5040 .. 3991680 exact";
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int n = 2; n <= 8; n += 2) {
    for (int k = 1; k <= 4; ++k) {
      o.require(rel(centred_min(n, k).value, hunter_min(n, k).value) <= 1e-12,
                "centred_min differs at n=" + std::to_string(n));
    }
  }
  const auto cm = centred_max(3, 2);
  double p4 = 0.0;
  for (double c : cm.argvec.coords()) p4 += c * c * c * c;
  o.require(std::abs(cm.value - 0.25) <= 1e-12, "centred_max(3,2) " + num(cm.value));
  o.require(std::abs(p4 - 0.5) <= 1e-12, "sum a^4 " + num(p4));
  const auto b2 = centred_n3_bounds(2);
  const auto b4 = centred_n3_bounds(4);
  o.require(b2.min.value == 1.0 && b2.max.value == 1.0, "q=2 bounds");
  o.require(b4.min.value == 6.0 && b4.max.value == 6.0, "q=4 bounds");
  const auto b3 = centred_n3_bounds(3);
  o.require(std::abs(b3.max.value - 3.0 / std::sqrt(2.0)) <= 1e-9, "q=3 max " + num(b3.max.value));
  o.require(b3.min.value < b3.max.value, "q=3 min not below max");
  McSettings mc;
  mc.samples = 1'000'000;
  const auto est = abs_moment(b3.min.argvec, MomentQuery{3.0, MomentMethod::monte_carlo}, mc);
  const double z = std::abs(est.value - b3.min.value) / est.std_error;
  o.require(z <= 4.0, "Monte Carlo z = " + num(z));
  if (o.pass) o.detail = "q=3 min " + num(b3.min.value) + " < max " + num(b3.max.value) + ", MC z " + num(z);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto l21 = linf_min(2, 1);
  o.require(std::abs(l21.cert("t") + 0.5) <= 1e-12 && std::abs(l21.value - 0.75) <= 1e-12, "linf_min(2,1)");
  const auto l22 = linf_min(2, 2);
  const double t = l22.cert("t");
  o.require(std::abs(t + 0.60583) <= 5e-6, "linf_min(2,2) root " + num(t));
  o.require(std::abs(l22.value - 0.67355) <= 5e-6, "linf_min(2,2) value " + num(l22.value));
  o.require(std::abs(h_eval(Weights{t, 1.0}, 4, HMethod::direct) - l22.value) <= 1e-9, "direct h_4(t,1)");
  double worst_grad = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int k = 1; k <= 3; ++k) {
      const auto r = linf_min(n, k);
      const auto g = h_grad(r.argvec, 2 * k);
      double dt = 0.0;
      for (int i = 0; i + 1 < n; ++i) dt += g[static_cast<std::size_t>(i)];
      worst_grad = std::max(worst_grad, std::abs(dt));
    }
  }
  o.require(worst_grad <= 1e-8, "stationarity residual " + num(worst_grad));
  // By symmetry and evenness the largest |coordinate| can be taken to be the
  // last one, equal to +1.
  double worst_gap = INFINITY;
  for (int n : {2, 3}) {
    for (int k : {1, 2}) {
      const double closed = linf_min(n, k).value;
      const int steps = 1000;
      double best = INFINITY;
      std::vector<double> x(static_cast<std::size_t>(n), 1.0);
      if (n == 2) {
        for (int i = 0; i <= steps; ++i) {
          x[0] = -1.0 + 2e-3 * i;
          best = std::min(best, h_value(x, 2 * k));
        }
      } else {
        for (int i = 0; i <= steps; ++i) {
          for (int j = 0; j <= steps; ++j) {
            x[0] = -1.0 + 2e-3 * i;
            x[1] = -1.0 + 2e-3 * j;
            best = std::min(best, h_value(x, 2 * k));
          }
        }
      }
      worst_gap = std::min(worst_gap, best - closed);
    }
  }
  o.require(worst_gap >= -1e-6, "grid point below closed form by " + num(-worst_gap));
  if (o.pass) o.detail = "t " + num(t) + ", stationarity " + num(worst_grad) + ", min grid margin " + num(worst_gap);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto r = moment_routes_check(100, 5, 0, 1'000'000);
  o.require(r.number("deterministic_failures") == 0,
            "deterministic routes disagree, max rel dev " + num(r.number("max_rel_dev_deterministic")));
  o.require(r.number("mc_failures") == 0, std::to_string(static_cast<int>(r.number("mc_failures"))) +
                                              " Monte Carlo comparisons beyond 4 sigma (max z " +
                                              num(r.number("max_mc_z")) + ")");
  if (o.pass) {
    o.detail = "max rel dev " + num(r.number("max_rel_dev_deterministic")) + ", max MC z " +
               num(r.number("max_mc_z"));
  } else {
    o.detail += "; max rel dev " + num(r.number("max_rel_dev_deterministic"));
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto so = schur_ostrowski_check(5, 10000, 4, 0);
  o.require(*so.pass, "Schur-Ostrowski violations " + num(so.number("violations")));
  const auto tao = tao_schur_convexity_check(4, 1000, 3, 0);
  o.require(*tao.pass, "Schur-convexity violations " + num(tao.number("violations")));
  const auto ctl = schur_concavity_check(5, 3, 2000, 0);
  o.require(*ctl.pass, "k=5 counterexample not found");
  const auto abc = abc_power_lemma_check(10000, 0);
  o.require(*abc.pass, "power lemma violations " + num(abc.number("violations")));
  const auto bor = borell_logconcavity_check(Weights{1.0, 0.5}, -0.5, 6.0, 0.25);
  o.require(*bor.pass, "log-concavity violations");
  if (o.pass) o.detail = "k=5 control found " + num(ctl.number("violations")) + " violations";
  return o;
}

Outcome criterion10() {
  Outcome o;
  int sandwich_fail = 0;
  double worst_id = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int d : {2, 4}) {
      const auto c = comparison_constants(n, d);
      for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto m = RealMatrix::random_uniform(static_cast<std::size_t>(n), s, 100 + d);
        const auto sv = singular_values(m);
        const double op = classical_norms(sv, INFINITY);
        const double h = chs_norm(sv, d);
        if (h < c.lower * op - 1e-9 || h > c.upper * op + 1e-9) ++sandwich_fail;
        if (d == 2) {
          const double s1 = classical_norms(sv, 1.0);
          const double s2 = classical_norms(sv, 2.0);
          worst_id = std::max(worst_id, std::abs(h * h - (s1 * s1 + s2 * s2) / 2.0));
        }
      }
      for (double scale : {0.5, -3.0, 7.25}) {
        const auto ci = RealMatrix::identity(static_cast<std::size_t>(n)).scaled(scale);
        o.require(rel(chs_norm(ci, d), c.upper * std::abs(scale)) <= 1e-12, "cI norm at n=" + std::to_string(n));
      }
    }
  }
  o.require(sandwich_fail == 0, std::to_string(sandwich_fail) + " sandwich failures");
  o.require(worst_id <= 1e-9, "h_2 identity dev " + num(worst_id));
  if (o.pass) o.detail = "6000 matrices, identity dev " + num(worst_id);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"Hunter minimum closed form and oracle", criterion1},
      {"h_4 identity at the half-plus/half-minus vector", criterion2},
      {"table of continuous minimizers n_k", criterion3},
      {"non-negative regime minimum", criterion4},
      {"gamma pair moment polynomial", criterion5},
      {"centred regime", criterion6},
      {"unit-cube boundary regime", criterion7},
      {"moment route agreement", criterion8},
      {"property suites", criterion9},
      {"matrix norm comparison", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %zu: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
