#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>

#include "apz/error.hpp"
#include "apz/numbertheory.hpp"
#include "doctest.h"

using namespace apz;
using std::numbers::pi;

namespace {

constexpr double kCatalan = 0.91596559417721901505;

cplx sigma_brute(cplx t, std::uint64_t k) {
  cplx acc = 0;
  for (std::uint64_t d = 1; d <= k; ++d)
    if (k % d == 0) acc += std::pow(cplx(double(d)), t);
  return acc;
}

}  // namespace

TEST_CASE("divisor_sigma: small values and brute force") {
  CHECK(divisor_sigma(1.0, 6) == cplx(12.0));
  CHECK(divisor_sigma(0.0, 6) == cplx(4.0));
  CHECK(std::abs(divisor_sigma(-1.0, 4) - 1.75) < 1e-15);
  CHECK(divisor_sigma(2.0, 1) == cplx(1.0));

  auto table = divisor_sigma_table(cplx(0.3, -1.2), 3000);
  for (std::uint64_t k = 1; k <= 3000; k += 7) {
    cplx b = sigma_brute(cplx(0.3, -1.2), k);
    CAPTURE(k);
    CHECK(std::abs(divisor_sigma(cplx(0.3, -1.2), k) - b) < 1e-12 * std::abs(b) + 1e-12);
    CHECK(std::abs(table[k] - b) < 1e-12 * std::abs(b) + 1e-12);
  }
  CHECK_THROWS_AS(divisor_sigma(1.0, 0), Error);
}

TEST_CASE("factorize: product and primality of factors") {
  for (std::uint64_t n : {1ULL, 2ULL, 360ULL, 999999999989ULL, 549755813888ULL, 600851475143ULL, 999999000001ULL}) {
    auto f = factorize(n);
    std::uint64_t prod = 1, last = 0;
    for (auto [p, e] : f.factors) {
      CHECK(p > last);
      last = p;
      for (int i = 0; i < e; ++i) prod *= p;
      CHECK(factorize(p).factors.size() == 1);
    }
    CHECK(prod == n);
  }
  CHECK(factorize(999999999989ULL).factors.size() == 1);
  CHECK_THROWS_AS(factorize(2'000'000'000'000ULL), Error);
}

TEST_CASE("divisor_sigma: multiplicativity on coprime pairs") {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10000);
  int checked = 0;
  while (checked < 5000) {
    std::uint64_t m = pick(rng), n = pick(rng);
    if (std::gcd(m, n) != 1) continue;
    ++checked;
    CAPTURE(m);
    CAPTURE(n);
    for (double t : {0.0, 1.0, 2.0}) CHECK(divisor_sigma(t, m * n) == divisor_sigma(t, m) * divisor_sigma(t, n));
    cplx t(-0.7, 2.1);
    cplx lhs = divisor_sigma(t, m * n), rhs = divisor_sigma(t, m) * divisor_sigma(t, n);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
  }
}

TEST_CASE("divisor_bound_constant dominates d(n) / n^eps") {
  const int N = 200000;
  auto d = divisor_sigma_table(0.0, N);
  for (double eps : {0.25, 0.5}) {
    double c = divisor_bound_constant(eps), worst = 0;
    for (int n = 1; n <= N; ++n) worst = std::max(worst, d[n].real() / std::pow(double(n), eps));
    CAPTURE(eps);
    CHECK(worst <= c * (1 + 1e-12));
  }
  // the sup for eps = 1/2 is attained at n = 12: d = 6
  CHECK(std::abs(divisor_bound_constant(0.5) - 6 / std::sqrt(12.0)) < 1e-12);
}

TEST_CASE("nested_T: commutation and the single-sum form") {
  auto g = make_sine();
  auto alpha = AlphaSpec::golden();
  const std::int64_t N = 1500;
  for (double s : {2.0, 2.5, 3.0}) {
    for (double t : {2.0, 2.5, 3.0}) {
      CAPTURE(s);
      CAPTURE(t);
      auto a = nested_T(g, alpha, s, t, N);
      auto b = nested_T(g, alpha, t, s, N);
      CHECK(std::abs(a.value - b.value) <= a.err + b.err);
      auto c = nested_single_sum(g, alpha, s, t, N * N / 8);
      CHECK(std::abs(a.value - c.value) <= a.err + c.err);
      CHECK(std::abs(a.value - c.value) < 1e-4);
    }
  }
  // s = t = 2 is sum d(k) / k^2 sin(2 pi k alpha)
  auto single = nested_single_sum(g, alpha, 2.0, 2.0, 20000);
  CompensatedSum<double> brute;
  for (int k = 1; k <= 20000; ++k)
    brute.add(divisor_sigma(0.0, k).real() / (double(k) * k) * std::sin(2 * pi * std::fmod(k * alpha.value(), 1.0)));
  CHECK(std::abs(single.value - brute.value()) < 1e-9);

  CHECK_THROWS_AS(nested_T(g, alpha, 1.0, 2.0, 10), Error);
  CHECK_THROWS_AS(nested_single_sum(g, alpha, 2.0, cplx(0.9, 1), 10), Error);
}

TEST_CASE("nested sums: serial and parallel agree bitwise") {
  auto g = make_analytic_decay(1);
  auto a = nested_T(g, AlphaSpec::silver(), cplx(2, 1), 3.0, 700, Exec::serial);
  auto b = nested_T(g, AlphaSpec::silver(), cplx(2, 1), 3.0, 700, Exec::parallel);
  CHECK(a.value == b.value);
  auto c = nested_single_sum(g, AlphaSpec::silver(), 2.5, cplx(2, -1), 50000, Exec::serial);
  auto d = nested_single_sum(g, AlphaSpec::silver(), 2.5, cplx(2, -1), 50000, Exec::parallel);
  CHECK(c.value == d.value);
}

TEST_CASE("parseval: convention factor and the Ramanujan ratio") {
  double f = convention_factor();
  CHECK(std::abs(f - 0.5) < 1e-12);

  auto base = parseval_ratio(2.0, 2.0, 2.0, 2.0);
  double z4 = std::pow(pi, 4) / 90, z8 = std::pow(pi, 8) / 9450;
  CHECK(std::abs(base.coefficient_sum - std::pow(z4, 4) / z8) < 1e-10);
  CHECK(std::abs(base.zeta_ratio - std::pow(z4, 4) / z8) < 1e-12);

  for (auto [s, t, u, v] : {std::array<double, 4>{2, 2, 2, 2}, {2, 3, 2, 3}, {2.5, 2.5, 2, 3}, {1.5, 2, 1.5, 3}}) {
    auto r = parseval_ratio(s, t, u, v);
    CAPTURE(s);
    CAPTURE(t);
    CAPTURE(u);
    CAPTURE(v);
    CHECK(std::abs(r.ratio - f) < 1e-5);
  }
  CHECK_THROWS_AS(parseval_ratio(0.5, 2.0, 0.4, 2.0), Error);
}

TEST_CASE("h_alpha_sample: symmetry and a Catalan oracle") {
  auto set = h_alpha_sample(2.0, 2.0, 8);
  REQUIRE(set.samples.size() == 8);
  CHECK_FALSE(set.heuristic);
  CHECK(set.samples[0].value == cplx(0.0));
  for (int i = 1; i < 8; ++i) CHECK(set.samples[i].value == -set.samples[8 - i].value);
  // alpha = 1/4: sin(pi k / 2) is the character mod 4, so the series is L(2, chi)^2
  CHECK(std::abs(set.samples[2].value - kCatalan * kCatalan) < 1e-8);
  CHECK(std::isfinite(set.samples[2].err));

  auto heur = h_alpha_sample(1.0, 1.0, 16, 20000);
  CHECK(heur.heuristic);
  CHECK(std::isnan(heur.samples[3].err));
  // d(k)/k sin at 1/4 is formally L(1, chi)^2 = (pi/4)^2
  CHECK(std::abs(heur.samples[4].value - pi * pi / 16) < 1e-2);
}
