#include <cmath>
#include <random>

#include "chs/core.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chs;

TEST_CASE("h_eval small cases") {
  CHECK(h_eval(Weights{1, 1, 1}, 2) == doctest::Approx(6.0));
  CHECK(h_eval(Weights{-0.5, 1}, 2, HMethod::lagrange) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(h_eval(Weights{0.3, -2.0}, 0) == 1.0);
  const Weights a(oracle::half_plus_minus(4));
  CHECK(h_eval(a, 4) == doctest::Approx(3.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("h_eval methods agree with the brute-force oracle") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const int k = trial % 9;
    const auto x = oracle::uniform_vector(gen, n, -2.0, 2.0);
    const Weights a(x);
    const double want = oracle::h_bruteforce(x, k);
    const double scale = std::max(1.0, std::abs(want));
    for (HMethod m : {HMethod::recurrence, HMethod::direct, HMethod::power_sum}) {
      CHECK(std::abs(h_eval(a, k, m) - want) <= 1e-9 * scale);
    }
    if (a.min_gap() >= 1e-2) {
      CHECK(std::abs(h_eval(a, k, HMethod::lagrange) - want) <= 1e-9 * scale * 1e3);
    }
  }
}

TEST_CASE("h_eval preconditions") {
  CHECK_THROWS_AS(h_eval(Weights{0.5, 0.5}, 3, HMethod::lagrange), DistinctnessViolation);
  CHECK_THROWS_AS(h_eval(Weights{1.0, 2.0}, 31, HMethod::power_sum), BudgetExceeded);
  CHECK_THROWS_AS(h_eval(Weights::constant(20, 0.1), 20, HMethod::direct), BudgetExceeded);
  CHECK_THROWS_AS(h_eval(Weights{1.0}, -1), InvalidArgument);
  CHECK_THROWS_AS(Weights(std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(Weights({1.0, NAN}), InvalidArgument);
  CHECK(parse_hmethod("power_sum") == HMethod::power_sum);
  CHECK_THROWS_AS(parse_hmethod("newton"), InvalidArgument);
}

TEST_CASE("h_grad") {
  const auto g = h_grad(Weights{1, 1}, 2);
  CHECK(g[0] == doctest::Approx(3.0));
  CHECK(g[1] == doctest::Approx(3.0));

  const auto sym = h_grad(Weights{-0.4, -0.4, -0.4, 1.0}, 6);
  CHECK(sym[0] == doctest::Approx(sym[1]).epsilon(1e-15));
  CHECK(sym[1] == doctest::Approx(sym[2]).epsilon(1e-15));

  const std::vector<double> x = {0.3, -0.7, 1.1};
  const auto grad = h_grad(Weights(x), 4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto up = x;
    auto dn = x;
    up[i] += 1e-6;
    dn[i] -= 1e-6;
    const double fd = (oracle::h_bruteforce(up, 4) - oracle::h_bruteforce(dn, 4)) / 2e-6;
    CHECK(oracle::rel_err(grad[i], fd) < 1e-5);
  }
}

TEST_CASE("difference identity") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = oracle::uniform_vector(gen, 1 + trial % 4, -1.5, 1.5);
    const auto ab = oracle::uniform_vector(gen, 2, -1.5, 1.5);
    const int k = 2 + trial % 6;
    auto xa = x;
    xa.push_back(ab[0]);
    auto xb = x;
    xb.push_back(ab[1]);
    auto xab = xa;
    xab.push_back(ab[1]);
    const double lhs = h_value(xa, k - 1) - h_value(xb, k - 1);
    const double rhs = (ab[0] - ab[1]) * h_value(xab, k - 2);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("positivity of even degrees") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = oracle::uniform_vector(gen, 1 + trial % 7, -1.0, 1.0);
    CHECK(h_value(x, 2 * (1 + trial % 5)) > 0.0);
  }
}

TEST_CASE("generating function truncation") {
  const std::vector<double> x = {0.9, -0.4, 0.25};
  const double t = 0.5 / 0.9;
  double prod = 1.0;
  for (double c : x) prod /= 1.0 - t * c;
  const auto h = h_table(x, 200);
  double partial = 0.0;
  double pw = 1.0;
  for (int k = 0; k <= 200; ++k) {
    partial += h[k] * pw;
    pw *= t;
  }
  CHECK(partial == doctest::Approx(prod).epsilon(1e-13));
}

TEST_CASE("power sums") {
  CHECK(power_sum(Weights{1, -1}, 3) == 0.0);
  CHECK(power_sum(Weights(oracle::half_plus_minus(6)), 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(power_sum(Weights{1.0}, 0), InvalidArgument);
}

TEST_CASE("h_repeated") {
  CHECK(h_repeated(-0.5, 2, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(h_repeated(0.0, 5, 7) == 1.0);
  CHECK(h_repeated(-0.5, 2, 2) == doctest::Approx(0.75));
  for (int n = 1; n <= 6; ++n) {
    for (int m = 0; m <= 9; ++m) {
      std::vector<double> x(static_cast<std::size_t>(n), -0.37);
      x.push_back(1.0);
      CHECK(oracle::rel_err(h_repeated(-0.37, n, m), h_value(x, m)) < 1e-10);
    }
  }
}

TEST_CASE("rearrangement and majorization") {
  CHECK(rearrange_desc(std::vector<double>{1, 3, 2}) == std::vector<double>{3, 2, 1});
  CHECK(rearrange_desc(std::vector<double>{2, 2, 1}) == std::vector<double>{2, 2, 1});
  const std::vector<double> flat = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const std::vector<double> spike = {1.0, 0.0, 0.0};
  CHECK(majorizes(flat, spike));
  CHECK_FALSE(majorizes(spike, flat));
  CHECK(majorizes(spike, spike));
  CHECK_FALSE(majorizes(std::vector<double>{0.6, 0.4}, std::vector<double>{0.5, 0.5}));
  CHECK_THROWS_AS(majorizes(flat, std::vector<double>{1.0, 0.0}), LengthMismatch);
}

TEST_CASE("Schur-convexity of even-degree h on integer majorization pairs") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> coord(-4, 4);
  int checked = 0;
  for (int trial = 0; trial < 4000 && checked < 300; ++trial) {
    std::vector<double> x(4);
    std::vector<double> y(4);
    for (auto& c : x) c = coord(gen);
    for (auto& c : y) c = coord(gen);
    if (!majorizes(x, y)) continue;
    ++checked;
    for (int k = 1; k <= 3; ++k) CHECK(h_value(x, 2 * k) <= h_value(y, 2 * k) + 1e-9);
  }
  CHECK(checked > 50);
}

TEST_CASE("Schur-Ostrowski value") {
  // a = (1, -1): h_2 gradient is (2 a_1 + a_2, a_1 + 2 a_2) = (1, -1).
  CHECK(schur_ostrowski_value(Weights{1, -1}, 1, 0, 1) == doctest::Approx(4.0));
  CHECK(schur_ostrowski_value(Weights{0.3, 0.3, -1}, 2, 0, 1) == 0.0);
  CHECK_THROWS_AS(schur_ostrowski_value(Weights{1, 2}, 1, 0, 2), IndexOutOfRange);
  CHECK_THROWS_AS(schur_ostrowski_value(Weights{1, 2}, 1, 1, 1), InvalidArgument);
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 500; ++trial) {
    const Weights a(oracle::uniform_vector(gen, 5, -2.0, 2.0));
    CHECK(schur_ostrowski_value(a, 1 + trial % 3, trial % 5, (trial + 1 + trial % 4) % 5) >= -1e-9);
  }
}

TEST_CASE("Hunter 1977 bound") {
  const Weights unit(oracle::half_plus_minus(2));
  CHECK(hunter_1977_bound(unit, 1) == doctest::Approx(0.5));
  CHECK(hunter_1977_bound(unit, 2) == doctest::Approx(0.125));
  CHECK(hunter_1977_bound(Weights{0, 0}, 3) == 0.0);
}

TEST_CASE("palindromes") {
  CHECK(palindrome_class(Poly{{1, 2, 1}}) == PalindromeClass::palindromic);
  const Poly anti{{1, 0, -1}};
  CHECK(palindrome_class(anti) == PalindromeClass::anti_palindromic);
  CHECK(anti(1.0) == 0.0);
  CHECK(palindrome_class(Poly{{1, 2, 3}}) == PalindromeClass::neither);
  CHECK(Poly{{1, 2, 0, 1e-14}}.degree() == 1);
}

TEST_CASE("elementary symmetric polynomials") {
  const auto e = elementary_symmetric(std::vector<double>{1, 2, 3});
  CHECK(e == std::vector<double>{1, 6, 11, 6});
}
