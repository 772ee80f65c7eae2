#include <cmath>
#include <numbers>

#include "apz/error.hpp"
#include "apz/periodic.hpp"
#include "doctest.h"

using namespace apz;
using std::numbers::pi;

namespace {

// Trapezoid rule on one period; spectrally accurate for smooth periodic f.
cplx periodic_mean(const std::function<cplx(double)>& f, int n = 4096) {
  cplx s{};
  for (int i = 0; i < n; ++i) s += f(static_cast<double>(i) / n);
  return s / static_cast<double>(n);
}

}  // namespace

TEST_CASE("make_trig_poly: sine values, variation and mean") {
  auto s = make_sine();
  CHECK(s.evaluate(0.25).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.evaluate(1.0 / 12).real() == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(s.variation().has_value());
  CHECK(*s.variation() == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(s.decay_class() == DecayClass::finite);

  auto c = make_trig_poly({{0, 2.0}});
  CHECK(c.mean() == cplx(2.0));
  CHECK_THROWS_AS(make_trig_poly({}), Error);
  CHECK_THROWS_AS(make_trig_poly({{3, 0.0}}), Error);
}

TEST_CASE("make_power_decay: closed form and truncated sums") {
  auto g3 = make_power_decay(3);
  CHECK(std::fabs(g3.evaluate(0.5).real()) < 1e-14);

  // alternating series 1 - 3^-3 + 5^-3 - ... = pi^3/32; error below the next term
  double beta3 = 0;
  for (int j = 0; j < 200000; ++j) beta3 += (j % 2 == 0 ? 1.0 : -1.0) / std::pow(2.0 * j + 1, 3);
  CHECK(g3.evaluate(0.25).real() == doctest::Approx(beta3).epsilon(1e-13));
  CHECK(beta3 == doctest::Approx(pi * pi * pi / 32).epsilon(1e-12));

  // periodicity
  CHECK(g3.evaluate(0.37).real() == doctest::Approx(g3.evaluate(1.37).real()).epsilon(1e-14));

  // even t goes through the truncated sum; brute force over 10^7 terms
  auto g2 = make_power_decay(2);
  double brute = 0;
  for (long k = 10'000'000; k >= 1; --k) brute += std::sin(2 * pi * static_cast<double>(k % 6) / 6) / (double(k) * k);
  CHECK(std::fabs(g2.evaluate(1.0 / 6, 1e-10).real() - brute) < 1e-8);

  // non-integer t against brute force
  auto g25 = make_power_decay(2.5);
  double brute25 = 0;
  for (long k = 2'000'000; k >= 1; --k) brute25 += std::sin(2 * pi * 0.3 * k) / std::pow(double(k), 2.5);
  CHECK(std::fabs(g25.evaluate(0.3, 1e-10).real() - brute25) < 1e-8);

  CHECK_THROWS_AS(make_power_decay(1.0), Error);
  CHECK(g3.coeff(2) == cplx(0, -1.0 / 16));
  CHECK(g3.coeff(-2) == std::conj(g3.coeff(2)));
}

TEST_CASE("make_analytic_decay: geometric closed forms") {
  auto g = make_analytic_decay(1);
  CHECK(g.evaluate(0.0).real() == doctest::Approx(2 / (std::exp(1.0) - 1)).epsilon(1e-14));
  CHECK(g.evaluate(0.5).real() == doctest::Approx(-2 / (std::exp(1.0) + 1)).epsilon(1e-14));
  CHECK(g.mean() == cplx{});
  CHECK(g.evaluate(0.3).real() == doctest::Approx(g.evaluate(-0.3).real()).epsilon(1e-15));
  // closed form against the coefficient sum
  double x = 0.137, s = 0;
  for (int k = 1; k < 60; ++k) s += 2 * std::exp(-double(k)) * std::cos(2 * pi * k * x);
  CHECK(g.evaluate(x).real() == doctest::Approx(s).epsilon(1e-13));
  CHECK_THROWS_AS(make_analytic_decay(0), Error);
}

TEST_CASE("make_log_singular: values, singularity and coefficients") {
  auto g = make_log_singular();
  CHECK(g.evaluate(0.5).real() == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(std::fabs(g.evaluate(1.0 / 6).real()) < 1e-14);
  CHECK_THROWS_AS(g.evaluate(0.0), Error);
  CHECK_THROWS_AS(g.evaluate(3.0), Error);
  CHECK_FALSE(g.variation().has_value());

  // c_3 = int_0^1 g(x) e^{-6 pi i x} dx by midpoint rule (integrable singularity)
  const int n = 2'000'000;
  cplx c3{};
  for (int i = 0; i < n; ++i) {
    double x = (i + 0.5) / n;
    c3 += g.evaluate(x).real() * std::polar(1.0, -6 * pi * x);
  }
  c3 /= double(n);
  CHECK(std::abs(c3 - cplx(-1.0 / 3)) < 1e-5);
  CHECK(g.coeff(3) == cplx(-1.0 / 3));
}

TEST_CASE("make_sawtooth: values, variation and validated coefficients") {
  auto g = make_sawtooth();
  CHECK(g.evaluate(0.25).real() == 0.25);
  CHECK(g.evaluate(0.75).real() == -0.25);
  CHECK(*g.variation() == 2.0);
  CHECK(estimate_variation([&](double x) { return g.evaluate(x).real(); }) == doctest::Approx(2.0).epsilon(1e-6));

  // c_k = int_{-1/2}^{1/2} x e^{-2 pi i k x} dx by 20-point Gauss-Legendre on each of 64 cells
  static const double gl_x[] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                0.9931285991850949};
  static const double gl_w[] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                0.0176140071391521};
  for (int k : {1, 2, 3, -5}) {
    cplx ck{};
    const int cells = 64;
    for (int c = 0; c < cells; ++c) {
      double a = -0.5 + double(c) / cells, h = 1.0 / cells, mid = a + h / 2;
      for (int j = 0; j < 10; ++j) {
        for (double sgn : {-1.0, 1.0}) {
          double x = mid + sgn * gl_x[j] * h / 2;
          ck += gl_w[j] * h / 2 * x * std::polar(1.0, -2 * pi * k * x);
        }
      }
    }
    CHECK(std::abs(ck - g.coeff(k)) < 1e-13);
  }

  // The Fourier series sum sin(2 pi n x)/n equals pi (1/2 - x) on (0,1), not 1/2 - x.
  double x = 0.3, s = 0;
  for (int n = 1; n <= 200000; ++n) s += std::sin(2 * pi * n * x) / n;
  CHECK(s == doctest::Approx(pi * (0.5 - x)).epsilon(1e-4));
}

TEST_CASE("coboundary_transfer: exact for trig polynomials") {
  auto g = make_sine();
  auto alpha = AlphaSpec::golden();
  auto ct = coboundary_transfer(g, alpha, 1);
  CHECK(ct.coeffs.size() == 2);
  CHECK(ct.residual_bound == 0);
  Phase a = alpha.phase();
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    Phase x = Phase::from_double(i / 10000.0);
    cplx diff = g.evaluate(x) - (ct.evaluate(x + a) - ct.evaluate(x));
    worst = std::max(worst, std::abs(diff));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("coboundary_transfer: analytic decay and identity invariant") {
  auto alpha = AlphaSpec::golden();
  Phase a = alpha.phase();
  auto check = [&](const PeriodicFunction& g, std::int64_t K, double target) {
    auto ct = coboundary_transfer(g, alpha, K);
    double worst = 0, hmax = 0;
    for (int i = 0; i < 4096; ++i) {
      Phase x = Phase::from_double(i / 4096.0);
      worst = std::max(worst, std::abs(g.evaluate(x) - (ct.evaluate(x + a) - ct.evaluate(x))));
      hmax = std::max(hmax, std::abs(ct.evaluate(x)));
    }
    CHECK(worst <= ct.residual_bound + 1e-12);
    CHECK(worst < target);
    CHECK(hmax <= ct.sup_bound);
  };
  check(make_analytic_decay(2), 40, 1e-8);
  check(make_analytic_decay(1), 30, 1e-8);
  check(make_trig_poly({{2, cplx(0.3, 0.1)}, {-2, cplx(0.3, -0.1)}, {5, 1.0}, {-5, 1.0}}), 5, 1e-12);
}

TEST_CASE("coboundary_transfer: error paths") {
  CHECK_THROWS_AS(coboundary_transfer(make_trig_poly({{0, 1.0}, {1, 1.0}}), AlphaSpec::golden(), 3), Error);
  try {
    coboundary_transfer(make_sine(), AlphaSpec::rational(1, 4), 1);
    FAIL("expected RationalAlpha");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RationalAlpha);
  }
  try {
    coboundary_transfer(make_trig_poly({{0, 1.0}}), AlphaSpec::golden(), 1);
    FAIL("expected NonzeroMean");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonzeroMean);
  }
  // the transfer of a power-decay function with too little smoothness has no finite bound
  auto ct = coboundary_transfer(make_sawtooth(), AlphaSpec::golden(), 10);
  CHECK(std::isinf(ct.sup_bound));
}

TEST_CASE("invariants: real symmetry, mean and variation subadditivity") {
  std::vector<PeriodicFunction> models = {make_sine(), make_analytic_decay(0.7), make_power_decay(3),
                                          make_power_decay(2.5), make_sawtooth(),
                                          make_trig_poly({{3, cplx(0.2, 0.4)}, {-3, cplx(0.2, -0.4)}})};
  for (const auto& g : models) {
    CAPTURE(g.describe());
    for (int i = 0; i < 200; ++i) CHECK(std::fabs(g.evaluate(i / 200.0 + 0.0012, 1e-10).imag()) < 1e-12);
    if (g.decay_class() == DecayClass::finite || g.decay_class() == DecayClass::analytic) {
      cplx m = periodic_mean([&](double x) { return g.evaluate(x); });
      CHECK(std::abs(m - g.mean()) < 1e-9);
    }
  }
  auto s = make_sine();
  auto w = make_sawtooth();
  double vs = estimate_variation([&](double x) { return s.evaluate(x).real(); });
  double vw = estimate_variation([&](double x) { return w.evaluate(x).real(); });
  double vsum = estimate_variation([&](double x) { return s.evaluate(x).real() + w.evaluate(x).real(); });
  CHECK(vsum <= vs + vw + 1e-9);
}

TEST_CASE("parse_function grammar") {
  CHECK(parse_function("sin").describe() == "sin");
  CHECK(parse_function("sawtooth").family() == PeriodicFunction::Family::sawtooth);
  CHECK(parse_function("logsin").family() == PeriodicFunction::Family::log_singular);
  CHECK(parse_function("power:3").decay_parameter() == 3);
  CHECK(parse_function("analytic:2").decay_parameter() == 2);
  auto t = parse_function("trig:{1=0:-0.5,-1=0:0.5}");
  CHECK(t.describe() == "sin");
  auto u = parse_function("trig:{1=1}");
  CHECK(u.coeff(1) == cplx(1.0));
  CHECK_FALSE(u.is_real());
  CHECK_THROWS_AS(parse_function("cos"), Error);
  CHECK_THROWS_AS(parse_function("power:x"), Error);
  CHECK_THROWS_AS(parse_function("trig:1=2"), Error);
}
