#include <algorithm>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "apz/error.hpp"
#include "apz/walks.hpp"
#include "doctest.h"

using namespace apz;
using Dec50 = boost::multiprecision::cpp_dec_float_50;
using std::numbers::pi;

namespace {

Dec50 golden50() { return (boost::multiprecision::sqrt(Dec50(5)) - 1) / 2; }

// frac(x * n) at 50 digits, rounded to double at the end
double frac50(const Dec50& x, std::int64_t n) {
  Dec50 v = x * n;
  v -= boost::multiprecision::floor(v);
  return static_cast<double>(v);
}

// Im[e(a)(e(k a) - 1)/(e(a) - 1)] for sin(2 pi x)
double sine_closed_form(std::int64_t k) {
  double a = frac50(golden50(), 1), ka = frac50(golden50(), k);
  std::complex<double> ea = std::polar(1.0, 2 * pi * a), eka = std::polar(1.0, 2 * pi * ka);
  return (ea * (eka - 1.0) / (ea - 1.0)).imag();
}

}  // namespace

TEST_CASE("walk: rational rotation returns to zero") {
  auto tr = walk(make_sine(), AlphaSpec::rational(1, 4), 4);
  CHECK(std::fabs(tr.at(4)->S) < 1e-15);
  CHECK(tr.at(1)->S == doctest::Approx(1.0));
  CHECK_THROWS_AS(walk(make_sine(), AlphaSpec::golden(), 0), Error);
}

TEST_CASE("walk: sine against the geometric closed form up to 10^6") {
  std::vector<std::int64_t> special = {999'999, 123'457, 500'001};
  auto tr = walk(make_sine(), AlphaSpec::golden(), 1'000'000, special);
  double worst = 0;
  for (const auto& p : tr.checkpoints) worst = std::max(worst, std::fabs(p.S - sine_closed_form(p.k)));
  CHECK(worst < 1e-9);
  // the closed form is bounded by 2/|e(alpha) - 1|
  CHECK(tr.final_max() <= 2 / chord_to_one(AlphaSpec::golden().phase()));
}

TEST_CASE("walk: telescoping and running max invariants") {
  auto g = make_power_decay(3);
  std::vector<std::int64_t> special;
  for (std::int64_t k : {100, 1000, 4097, 20000}) {
    special.push_back(k - 1);
    special.push_back(k);
  }
  auto tr = walk(g, AlphaSpec::silver(), 30000, special);
  Dec50 silver = boost::multiprecision::sqrt(Dec50(2)) - 1;
  for (std::size_t i = 1; i < tr.checkpoints.size(); ++i) {
    const auto& a = tr.checkpoints[i - 1];
    const auto& b = tr.checkpoints[i];
    CHECK(b.running_max >= a.running_max);
    if (b.k == a.k + 1) {
      double direct = g.evaluate(frac50(silver, b.k)).real();
      CHECK(std::fabs((b.S - a.S) - direct) < 1e-12);
    }
  }
}

TEST_CASE("walk: singular evaluation reports the offending index") {
  try {
    walk(make_log_singular(), AlphaSpec::rational(1, 3), 10);
    FAIL("expected EvaluationAtSingularity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EvaluationAtSingularity);
    CHECK(e.context() == "n=3");
  }
}

TEST_CASE("denjoy_koksma_certificate: sawtooth at Fibonacci denominators") {
  auto alpha = AlphaSpec::golden();
  auto conv = convergents(cf_expand(alpha, 30), 30);
  std::vector<std::int64_t> qs;
  for (auto& c : conv) qs.push_back(c.q);
  auto tr = walk(make_sawtooth(), alpha, 100000, qs);
  auto rep = denjoy_koksma_certificate(tr, conv, 2.0);
  CHECK(rep.all_q_pass);
  CHECK(rep.q_checks.size() >= 20);
  CHECK(rep.global_checked);
  CHECK(rep.global_pass);

  auto sin_rep = denjoy_koksma_certificate(walk(make_sine(), alpha, 100000, qs), conv, 4.0);
  CHECK(sin_rep.all_q_pass);

  // negative control
  auto forged = tr;
  for (auto& p : forged.checkpoints) {
    if (p.k == 987) p.S = 2.5;
  }
  auto bad = denjoy_koksma_certificate(forged, conv, 2.0);
  CHECK_FALSE(bad.all_q_pass);
  auto it = std::find_if(bad.q_checks.begin(), bad.q_checks.end(), [](const DKCheck& c) { return !c.pass; });
  REQUIRE(it != bad.q_checks.end());
  CHECK(it->q == 987);

  auto sparse = walk(make_sawtooth(), alpha, 100000);
  CHECK_THROWS_AS(denjoy_koksma_certificate(sparse, conv, 2.0), Error);
}

TEST_CASE("quadratic_walk: small cases and exact phases") {
  CHECK(quadratic_walk(AlphaSpec::rational(1, 4), 4).at(4)->S == doctest::Approx(2.0).epsilon(1e-14));
  auto zero = quadratic_walk(AlphaSpec::rational(0, 1), 1000);
  for (const auto& p : zero.checkpoints) CHECK(p.S == 0);
  auto est = cahen_abscissa(zero);
  CHECK(est.degenerate);
  CHECK(est.sigma_hat == 0);

  // summand at n = 77777 against 50-digit n^2 gamma
  std::int64_t n = 77777;
  auto tr = quadratic_walk(AlphaSpec::golden(), n, {n});
  CHECK(std::fabs(tr.at(n)->term - std::sin(2 * pi * frac50(golden50(), n * n))) < 1e-9);
}

TEST_CASE("rademacher_walk: determinism, triangle bound and sweeps") {
  auto a = rademacher_walk(1, 10), b = rademacher_walk(1, 10);
  REQUIRE(a.checkpoints.size() == b.checkpoints.size());
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) CHECK(a.checkpoints[i].S == b.checkpoints[i].S);
  auto c = rademacher_walk(7, 1 << 16);
  for (const auto& p : c.checkpoints) CHECK(std::fabs(p.S) <= static_cast<double>(p.k));

  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 16; ++s) seeds.push_back(s);
  auto ser = rademacher_sweep(seeds, 1 << 17, Exec::serial);
  auto par = rademacher_sweep(seeds, 1 << 17, Exec::parallel);
  std::vector<double> sig;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(ser[i].sigma_hat == par[i].sigma_hat);
    sig.push_back(ser[i].sigma_hat);
  }
  std::sort(sig.begin(), sig.end());
  double median = 0.5 * (sig[7] + sig[8]);
  CHECK(median > 0.35);
  CHECK(median < 0.65);
}

TEST_CASE("cahen_abscissa: bounded walk and preconditions") {
  auto est = cahen_abscissa(walk(make_sine(), AlphaSpec::golden(), 1 << 16));
  CHECK(est.sigma_hat <= 0.05);
  CHECK_FALSE(est.window_slopes.empty());
  CHECK(est.sigma_ratio < 1);
  CHECK_THROWS_AS(cahen_abscissa(walk(make_sine(), AlphaSpec::golden(), 100)), Error);
}

TEST_CASE("log_singular_walk: no truncation for golden, agrees with the plain walk") {
  auto res = log_singular_walk(AlphaSpec::golden(), 100000);
  CHECK_FALSE(res.truncation_active);
  CHECK(res.fitted_C > 0);
  CHECK(res.fitted_C < 10);
  auto plain = walk(make_log_singular(), AlphaSpec::golden(), 100000);
  for (const auto& p : plain.checkpoints) {
    auto q = res.trace.at(p.k);
    REQUIRE(q.has_value());
    CHECK(std::fabs(q->S - p.S) < 1e-9);
  }
  CHECK_THROWS_AS(log_singular_walk(AlphaSpec::rational(2, 7), 10), Error);
}

TEST_CASE("root_product_log_sum equals log q") {
  for (std::int64_t q : {2, 3, 5, 7, 101, 1000}) {
    double direct = 0;
    for (std::int64_t j = 1; j < q; ++j) direct += std::log(std::abs(std::polar(1.0, 2 * pi * j / q) - 1.0));
    CHECK(std::fabs(root_product_log_sum(q) - std::log(double(q))) < 1e-10);
    CHECK(std::fabs(direct - std::log(double(q))) < 1e-9);
  }
  CHECK(root_product_log_sum(1) == 0);
}
