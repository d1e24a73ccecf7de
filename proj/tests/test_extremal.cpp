#include <cmath>
#include <random>

#include "chs/exp_moments.hpp"
#include "chs/extremal.hpp"
#include "chs/numerics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chs;

namespace {

std::vector<double> unit_random(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  double s = 0.0;
  for (double& c : v) {
    c = z(gen);
    s += c * c;
  }
  for (double& c : v) c /= std::sqrt(s);
  return v;
}

}  // namespace

TEST_CASE("hunter_min") {
  CHECK(hunter_min(2, 1).value == doctest::Approx(0.5));
  CHECK(hunter_min(4, 2).value == doctest::Approx(3.0 / 16.0).epsilon(1e-14));
  CHECK(hunter_min(6, 1).value == doctest::Approx(0.5));
  for (int n : {2, 4, 6, 8}) {
    for (int k = 1; k <= 5; ++k) {
      const auto r = hunter_min(n, k);
      CHECK(r.structure == "half_plus_minus");
      CHECK(r.argvec.is_unit_l2(1e-12));
      CHECK(r.argvec.is_zero_sum(1e-12));
      const double ref = std::pow(n, 2 * k) <= 1e6 ? oracle::h_bruteforce(r.argvec.vec(), 2 * k)
                                                   : h_eval(r.argvec, 2 * k, HMethod::direct);
      CHECK(oracle::rel_err(r.value, ref) < 1e-10);
      CHECK(r.value >= hunter_1977_bound(r.argvec, k) - 1e-15);
      if (k >= 2) CHECK(r.value > hunter_1977_bound(r.argvec, k));
    }
  }
  CHECK_THROWS_AS(hunter_min(3, 2), OddDimension);
  CHECK_THROWS_AS(hunter_min(4, 0), InvalidArgument);
}

TEST_CASE("h_4 on the unit sphere") {
  const auto even = h4_unconditional(4);
  CHECK(even.min.value == doctest::Approx(3.0 / 16.0));
  CHECK(h4_unconditional(2).max.value == doctest::Approx(1.25));

  // True odd-n minima along the two-level family, frozen from a 30-digit
  // search confirmed by random-restart Nelder-Mead.
  const double want[] = {0.2231892120605135489, 0.1784922630775704183, 0.1620572469600488192,
                         0.1534320462422468629};
  for (int i = 0; i < 4; ++i) {
    const int n = 3 + 2 * i;
    const auto r = h4_unconditional(n);
    CHECK(r.min.value == doctest::Approx(want[i]).epsilon(1e-10));
    CHECK(r.min.argvec.is_unit_l2(1e-12));
    CHECK(r.min.cert("lower_bound") <= r.min.value);
    CHECK(r.max.value == doctest::Approx(num::binomial(n + 3, 4) / (n * n)));
  }
  CHECK(h4_unconditional(3).min.cert("ratio_a_over_b") ==
        doctest::Approx(-std::cbrt(4.0)).epsilon(1e-8));

  std::mt19937_64 gen(4);
  for (int n = 2; n <= 6; ++n) {
    const auto r = h4_unconditional(n);
    for (int trial = 0; trial < 1000; ++trial) {
      const double v = h_value(unit_random(gen, n), 4);
      CHECK(v >= r.min.value - 1e-9);
      CHECK(v <= r.max.value + 1e-9);
    }
  }
}

TEST_CASE("rho1") {
  CHECK(rho1(10001) * 10001 == doctest::Approx(2.0).epsilon(1e-2));
  for (int n = 3; n <= 41; n += 2) {
    CHECK(rho1(n) >= 2.0 / n);
    CHECK(rho1(n) <= 2.0 / (n - 1));
  }
  CHECK(rho1(3) == doctest::Approx(0.75735931288).epsilon(1e-10));
  CHECK_THROWS_AS(rho1(4), InvalidArgument);
}

TEST_CASE("nonneg_min") {
  for (int k = 0; k <= 4; ++k) {
    for (int n = 1; n <= 6; ++n) {
      const auto r = nonneg_min(n, k);
      CHECK(r.cert("m") == 1.0);
      CHECK(r.value == doctest::Approx(num::factorial(k)));
    }
  }
  const auto r = nonneg_min(5, 7);
  CHECK(r.cert("m") == 2.0);
  CHECK(r.value == doctest::Approx(3563.81817718019952298).epsilon(1e-12));
  CHECK(r.value < rho(1, 7));
  CHECK(r.value < rho(3, 7));
  CHECK(r.argvec.is_unit_l2());
  CHECK(r.argvec.is_nonneg());
  CHECK(nonneg_min(4, 1).value == doctest::Approx(1.0));
}

TEST_CASE("n_k table and u0") {
  const double table[] = {1.2900, 1.6958, 2.0989, 2.5006, 2.9014, 3.3015,
                          3.7012, 4.1005, 4.4997, 4.8986, 5.2974};
  for (int k = 5; k <= 15; ++k) {
    const double nk = nk_continuous(k);
    CHECK(std::abs(nk - table[k - 5]) <= 5e-4);
    // rho(., k) on integers decreases then increases, with the minimum at a
    // neighbour of n_k.
    const int m = static_cast<int>(nonneg_min(k + 5, k).cert("m"));
    CHECK((m == static_cast<int>(std::floor(nk)) || m == static_cast<int>(std::ceil(nk))));
    int turns = 0;
    for (int n = 2; n < k + 5; ++n) {
      const bool down_before = rho(n, k) < rho(n - 1, k);
      const bool down_after = rho(n + 1, k) < rho(n, k);
      if (down_before != down_after) ++turns;
    }
    CHECK(turns <= 1);
  }
  const double u0 = u0_ratio();
  CHECK(std::abs(u0 - 2.51) <= 0.01);
  CHECK(std::abs(std::log1p(u0) - u0 / 2) < 1e-11);
  CHECK(std::abs(nk_continuous(200) / 200 - 1 / u0) < 2e-2);
  CHECK_THROWS_AS(nk_continuous(2), InvalidArgument);
}

TEST_CASE("gamma pair moment polynomial") {
  const Poly p = gamma_pair_moment_poly(6, 1, 7);
  const double fig1[] = {5040, 30240, 105840, 282240, 635040, 1270080, 2328480, 3991680};
  for (int j = 0; j <= 7; ++j) CHECK(p.coeffs[j] == fig1[j]);
  // At x = 1 the polynomial is E(G_7)^7 = 7 * 8 * ... * 13.
  CHECK(p(1.0) == doctest::Approx(std::tgamma(14.0) / std::tgamma(7.0)));
  CHECK(p(1.0) == doctest::Approx(integer_moment(Weights::constant(7, 1.0), 7)));
  CHECK_THROWS_AS(gamma_pair_moment_poly(20, 1, 400), Overflow);
}

TEST_CASE("nonneg_max") {
  const auto flat7 = nonneg_max(7, 7);
  CHECK(flat7.structure == "flat");
  CHECK(flat7.cert("x") == 1.0);
  CHECK(flat7.value == doctest::Approx(9530.25848351755966874).epsilon(1e-11));
  CHECK(flat7.value == doctest::Approx(rho(7, 7)).epsilon(1e-12));

  // Interior maximizers, frozen from a 30-digit grid-and-refine search.
  struct Case {
    int n, k;
    double x, value;
  };
  const Case cases[] = {{7, 10, 0.124999389874751365, 5165641.52148223254},
                        {4, 7, 0.199709404670778350, 6620.08915031308815},
                        {3, 8, 0.155048730056176096, 46803.5622768020786},
                        {2, 6, 0.226270945277023883, 801.080489464113820}};
  for (const auto& c : cases) {
    const auto r = nonneg_max(c.n, c.k);
    CHECK(r.structure == "s_then_t_repeated");
    CHECK(r.cert("x") == doctest::Approx(c.x).epsilon(1e-8));
    CHECK(r.value == doctest::Approx(c.value).epsilon(1e-11));
    CHECK(r.argvec.is_unit_l2(1e-12));
    CHECK(oracle::rel_err(integer_moment(r.argvec, c.k), r.value) < 1e-9);
  }
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= 4; ++k) CHECK(nonneg_max(n, k).structure == "flat");
  }
  CHECK(nonneg_max_objective(7, 7, 1.0) == doctest::Approx(std::log(rho(7, 7))));
}

TEST_CASE("centred regime") {
  for (int n : {2, 4, 6}) {
    for (int k = 1; k <= 4; ++k) {
      const auto c = centred_min(n, k);
      const auto h = hunter_min(n, k);
      CHECK(c.value == h.value);
      CHECK(std::abs(power_sum(c.argvec, 1)) < 1e-15);
    }
  }
  CHECK(centred_min(2, 3).value == doctest::Approx(0.125));
  CHECK_THROWS_AS(centred_min(5, 1), OddDimension);

  const auto m3 = centred_max(3, 2);
  CHECK(m3.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(power_sum(m3.argvec, 4) == doctest::Approx(0.5));
  for (int n = 2; n <= 7; ++n) {
    const auto m = centred_max(n, 2);
    CHECK(std::abs(power_sum(m.argvec, 1)) < 1e-12);
    CHECK(power_sum(m.argvec, 2) == doctest::Approx(1.0).epsilon(1e-12));
    for (int p = 1; p <= 6; ++p) {
      CHECK(centred_p_max(n, p) == doctest::Approx(power_sum(m.argvec, p)).epsilon(1e-12));
    }
  }
  CHECK(centred_max(2, 1).value == doctest::Approx(centred_min(2, 1).value));
  CHECK(centred_p_max(3, 3) == doctest::Approx(0.408248290463863).epsilon(1e-12));

  CHECK(centred_h4_min(4).value == doctest::Approx(3.0 / 16.0));
  const auto h3 = centred_h4_min(3);
  CHECK(h3.value == doctest::Approx(0.25));
  CHECK(h3.cert("sum_a4") == doctest::Approx(0.5));
  for (int n = 3; n <= 9; n += 2) {
    const auto h = centred_h4_min(n);
    CHECK(h.argvec.is_unit_l2(1e-12));
    CHECK(h.argvec.is_zero_sum(1e-12));
    CHECK(power_sum(h.argvec, 4) == doctest::Approx(h.cert("sum_a4")));
  }
}

TEST_CASE("centred n = 3 moment bounds") {
  auto b2 = centred_n3_bounds(2.0);
  CHECK(b2.min.value == 1.0);
  CHECK(b2.max.value == 1.0);
  auto b4 = centred_n3_bounds(4.0);
  CHECK(b4.min.value == 6.0);
  CHECK(b4.max.value == 6.0);

  const auto b3 = centred_n3_bounds(3.0);
  CHECK(b3.max.value == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b3.min.value == doctest::Approx(2.086602373481966528).epsilon(1e-10));
  CHECK(b3.min.structure == "two_equal_one_double");

  // Frozen x1/x2 pairs: (q, value at x1, value at x2).
  const double table[][3] = {{1.0, 0.72577473860242314, 0.70710678118654752},
                             {0.5, 0.76486683225206857, 0.74522504471454512},
                             {5.0, 22.37805444024138016, 21.21320343559642573},
                             {2.5, 1.38130903424071976, 1.39729695883977211}};
  for (const auto& row : table) {
    const auto b = centred_n3_bounds(row[0]);
    const double lo = std::min(row[1], row[2]);
    const double hi = std::max(row[1], row[2]);
    CHECK(b.min.value == doctest::Approx(lo).epsilon(1e-10));
    CHECK(b.max.value == doctest::Approx(hi).epsilon(1e-10));
  }
  const auto neg = centred_n3_bounds(-0.5);
  CHECK(neg.min.structure == "two_equal_one_double");
  CHECK(neg.min.value < neg.max.value);
  CHECK(neg.max.value == doctest::Approx(std::tgamma(0.5) * std::pow(2.0, 0.25)));
  CHECK_THROWS_AS(centred_n3_bounds(6.5), UnsupportedExponent);
  CHECK_NOTHROW(centred_n3_bounds(7.0));
}

TEST_CASE("linf_min") {
  const auto r21 = linf_min(2, 1);
  CHECK(std::abs(r21.cert("t") + 0.5) < 1e-12);
  CHECK(std::abs(r21.value - 0.75) < 1e-12);

  struct Case {
    int n, k;
    double t, value;
  };
  const Case cases[] = {{2, 2, -0.605829586188268020990938731157, 0.673553223476410008900477133722},
                        {3, 1, -1.0 / 3.0, 2.0 / 3.0},
                        {3, 2, -0.437080177525463992937129506941, 0.547438960396565215896102925336},
                        {2, 3, -0.670332047603096827743186427118, 0.63509389397174151671751738666},
                        {4, 2, -0.342384094858369131699303654003, 0.480974853718827264976129013464}};
  for (const auto& c : cases) {
    const auto r = linf_min(c.n, c.k);
    CHECK(r.cert("t") == doctest::Approx(c.t).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(c.value).epsilon(1e-11));
    CHECK(r.argvec.is_unit_linf(1e-15));
    CHECK(oracle::rel_err(oracle::h_bruteforce(r.argvec.vec(), 2 * c.k), r.value) < 1e-9);
    const auto g = h_grad(r.argvec, 2 * c.k);
    for (int i = 0; i + 1 < c.n; ++i) CHECK(std::abs(g[i]) <= 1e-8);
  }
  // t_{3,k} decreases towards -1; reference values from 40-digit bisection.
  CHECK(linf_min(3, 40).cert("t") == doctest::Approx(-0.8894850566904789932).epsilon(1e-11));
  CHECK(linf_min(3, 200).cert("t") == doctest::Approx(-0.9688704892039777656).epsilon(1e-11));
  double prev = 0.0;
  for (int k = 1; k <= 60; ++k) {
    const double t = linf_min(3, k).cert("t");
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("certificate lookup") {
  CHECK_THROWS_AS(hunter_min(2, 1).cert("t"), InvalidArgument);
  CHECK_THROWS_AS((RootBracket{1.0, 0.0}.validate()), BracketFailure);
}
