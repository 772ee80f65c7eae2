// One PASS/FAIL line per acceptance criterion. argv[1] is the apz CLI binary.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "apz/diophantine.hpp"
#include "apz/error.hpp"
#include "apz/lerch.hpp"
#include "apz/numbertheory.hpp"
#include "apz/taylor.hpp"
#include "apz/walks.hpp"
#include "apz/zeta.hpp"

using namespace apz;
using std::numbers::pi;

namespace {

constexpr double kCatalan = 0.91596559417721901505;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body, double time_limit = 0) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, std::string("error ") + std::string(to_string(e.code())) + ": " + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    o.pass = false;
    o.detail += " | over time limit " + std::to_string(time_limit) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s | %s | %.2f s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

long double phase_ld(Phase p) {
  auto raw = p.raw();
  return std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(raw >> 64)), -64) +
         std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(raw)), -128);
}

std::string run_capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  pclose(p);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "apz";
  auto golden = AlphaSpec::golden();

  criterion(1, "Denjoy-Koksma at Fibonacci q <= 1e5, sawtooth, golden", [&] {
    auto cf = cf_expand(golden, 40);
    std::vector<Convergent> convs;
    std::vector<std::int64_t> qs;
    for (auto& c : convergents(cf, cf.size()))
      if (c.q <= 100000) {
        convs.push_back(c);
        qs.push_back(c.q);
      }
    auto g = make_sawtooth();
    auto trace = walk(g, golden, 100000, qs);
    auto rep = denjoy_koksma_certificate(trace, convs, 2.0);
    double worst = 0;
    bool all = rep.all_q_pass;
    for (auto& c : rep.q_checks) {
      worst = std::max(worst, std::fabs(c.S_q));
      all = all && std::fabs(c.S_q) <= 2.0;
    }
    return Outcome{all && !rep.q_checks.empty(),
                   std::to_string(rep.q_checks.size()) + " denominators, max |S_q| = " + sci(worst)};
  }, 5.0);

  criterion(2, "closed-form sine walk to k = 1e6", [&] {
    const std::int64_t K = 1'000'000;
    std::vector<std::int64_t> every(K);
    for (std::int64_t k = 0; k < K; ++k) every[k] = k + 1;
    auto trace = walk(make_sine(), golden, K, every);
    Phase a = golden.phase();
    long double two_pi = 2 * std::numbers::pi_v<long double>;
    long double ta = phase_ld(a);
    auto e = [&](long double turns) { return std::polar(1.0L, two_pi * turns); };
    std::complex<long double> ea = e(ta);
    // S_k = Im[e(a) (1 - e(k a)) / (1 - e(a))]
    double worst = 0;
    for (auto& p : trace.checkpoints) {
      long double exact = (ea * (1.0L - e(phase_ld(a.times(p.k)))) / (1.0L - ea)).imag();
      worst = std::max(worst, static_cast<double>(std::fabs(exact - p.S)));
    }
    return Outcome{worst < 1e-9 && trace.checkpoints.size() >= std::size_t(K),
                   "max deviation " + sci(worst) + " over " + std::to_string(trace.checkpoints.size()) + " k"};
  }, 10.0);

  criterion(3, "root product sum_j log|e(j/q) - 1| = log q", [&] {
    double worst = 0;
    for (std::int64_t q : {3, 5, 7, 101}) worst = std::max(worst, std::fabs(root_product_log_sum(q) - std::log(double(q))));
    return Outcome{worst < 1e-10, "max error " + sci(worst)};
  });

  criterion(4, "Lerch continuation (a + z d/dz) L(z, s+1) = L(z, s)", [&] {
    double worst = 0;
    for (Phase ph : {golden.phase(), AlphaSpec::silver().phase()}) {
      for (cplx s : {cplx(1.5, 0), cplx(1.5, 2)}) {
        LerchParams lo(ph, s, 1.0), hi(ph, s + 1.0, 1.0);
        cplx lhs = 1.0 * lerch_integral(hi, 1e-13).value + hi.z() * lerch_derivative(hi, 1, 1e-13).value;
        worst = std::max(worst, std::abs(lhs - lerch_integral(lo, 1e-13).value));
      }
    }
    return Outcome{worst < 1e-7, "max residual " + sci(worst)};
  }, 30.0);

  criterion(5, "polylog classical values", [&] {
    double e2 = std::abs(polylog(0.5, 2.0).value - (-pi * pi / 12));
    double e1 = std::abs(polylog(0.5, 1.0).value - (-std::log(2.0)));
    return Outcome{e2 < 1e-9 && e1 < 1e-9, "Li2(-1) err " + sci(e2) + ", Li1(-1) err " + sci(e1)};
  });

  criterion(6, "entire continuation K vs 2K, analytic(1), golden", [&] {
    bool ok = true;
    double worst_err = 0, worst_gap = 0;
    for (double s : {-2.0, -1.0, -0.5, 0.5, 2.0}) {
      ZetaRequest r;
      r.g = make_analytic_decay(1);
      r.alpha = golden;
      r.s = s;
      r.tol = 1e-8;
      auto a = zeta_polylog(r);
      r.K_fourier = 2 * a.terms;
      auto b = zeta_polylog(r);
      double gap = std::abs(a.value - b.value);
      ok = ok && gap <= a.err + b.err && a.err < 1e-5 && b.err < 1e-5;
      worst_err = std::max({worst_err, a.err, b.err});
      worst_gap = std::max(worst_gap, gap);
    }
    return Outcome{ok, "max |K - 2K| " + sci(worst_gap) + ", max err " + sci(worst_err)};
  });

  criterion(7, "zeta_direct vs zeta_polylog", [&] {
    bool ok = true;
    double worst_err = 0, worst_gap = 0;
    for (const auto& g : {make_sine(), make_analytic_decay(2)}) {
      for (double s : {0.5, 1.5, 2.5}) {
        ZetaRequest r;
        r.g = g;
        r.alpha = golden;
        r.s = s;
        r.tol = 1e-9;
        auto d = zeta_direct(r);
        auto p = zeta_polylog(r);
        double gap = std::abs(d.value - p.value);
        ok = ok && gap <= d.err + p.err && d.err < 1e-6 && p.err < 1e-6;
        worst_err = std::max({worst_err, d.err, p.err});
        worst_gap = std::max(worst_gap, gap);
      }
    }
    return Outcome{ok, "max difference " + sci(worst_gap) + ", max err " + sci(worst_err)};
  });

  criterion(8, "rational decomposition: pi/4 and Catalan", [&] {
    double e1 = std::abs(zeta_rational(make_sine(), 1, 4, 1.0).value - pi / 4);
    double e2 = std::abs(zeta_rational(make_sine(), 1, 4, 2.0).value - kCatalan);
    return Outcome{e1 < 1e-8 && e2 < 1e-8, "errors " + sci(e1) + ", " + sci(e2)};
  });

  criterion(9, "commutation and divisor single sum, N = M = 1e4", [&] {
    auto g = make_sine();
    auto st = nested_T(g, golden, 3.0, 2.0, 10000);
    auto ts = nested_T(g, golden, 2.0, 3.0, 10000);
    auto single = nested_single_sum(g, golden, 3.0, 2.0, 10000);
    double c = std::abs(st.value - ts.value), d = std::abs(st.value - single.value);
    return Outcome{c < 1e-8 && d < 1e-8, "|T(3,2) - T(2,3)| " + sci(c) + ", |T - single| " + sci(d)};
  });

  criterion(10, "Parseval ratio constant across tuples", [&] {
    double factor = convention_factor();
    std::vector<cplx> ratios;
    for (auto [s, t, u, v] : {std::array<double, 4>{2, 2, 2, 2}, {2, 3, 2, 3}, {2.5, 2.5, 2, 3}})
      ratios.push_back(parseval_ratio(s, t, u, v).ratio);
    double spread = 0;
    for (auto r : ratios) spread = std::max({spread, std::abs(r - ratios[0]), std::abs(r - factor)});
    return Outcome{spread < 1e-5, "measured factor " + std::to_string(factor) + ", max spread " + sci(spread)};
  });

  criterion(11, "radial probe at t = 1 - 2^-20, analytic(1), golden", [&] {
    auto g = make_analytic_decay(1);
    auto reps = radial_probes(g, golden, {1, 2}, 20);
    double worst = 0;
    for (auto& r : reps) worst = std::max(worst, r.deviation);
    // the same limit along the ray e^{+2 pi i j alpha}, where c_{-j} = e^{-j} is targeted
    double t = 1 - std::ldexp(1.0, -20);
    for (std::int64_t j : {1, 2}) {
      auto f = pole_sum_polar(g, golden, t, golden.phase().times(j), 0, 1e-12 / (1 - t));
      worst = std::max(worst, std::abs((1 - t) * f.value - std::exp(-double(j))));
    }
    return Outcome{worst < 1e-3, "max |(1-t) f - e^-j| " + sci(worst)};
  });

  criterion(12, "abscissa calibration", [&] {
    auto sine = cahen_abscissa(walk(make_sine(), golden, 1'000'000));
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 32; ++s) seeds.push_back(s);
    auto sweep = rademacher_sweep(seeds, 1'000'000);
    std::vector<double> sig;
    for (auto& e : sweep) sig.push_back(e.sigma_hat);
    std::sort(sig.begin(), sig.end());
    double median = 0.5 * (sig[15] + sig[16]);
    auto quad = cahen_abscissa(quadratic_walk(golden, 1'000'000));
    bool a = sine.sigma_hat <= 0.05, b = median >= 0.4 && median <= 0.6, c = quad.sigma_hat < 0.2;
    std::ostringstream os;
    os << "sin " << sine.sigma_hat << (a ? " ok" : " FAIL") << ", rademacher median " << median
       << (b ? " ok" : " FAIL") << ", quadratic " << quad.sigma_hat << " (ratio " << quad.sigma_ratio << ")"
       << (c ? " ok" : " FAIL");
    return Outcome{a && b && c, os.str()};
  }, 180.0);

  criterion(13, "CLI runs emit byte-identical CSV on repeat", [&] {
    std::vector<std::string> runs = {
        "walk --g sawtooth --alpha surd:-1,1,5,2 --K 100000 --special q-convergents",
        "walk --g sin --alpha surd:-1,1,5,2 --K 1000000",
        "cf --alpha surd:-1,1,5,2 --depth 20 --format csv",
        "lerch --phase surd:-1,1,5,2 --s 1.5,2 --format csv",
        "lerch --phase 0.5 --s 2 --format csv",
        "zeta --g analytic:1 --alpha surd:-1,1,5,2 --s -1 --method polylog --format csv",
        "zeta --g sin --alpha surd:-1,1,5,2 --s 0.5 --method direct --format csv",
        "zeta --g sin --alpha rat:1/4 --s 2 --format csv",
        "commute --g sin --alpha surd:-1,1,5,2 --s 3 --t 2 --N 10000 --M 10000",
        "parseval --s 2.5 --t 2.5 --u 2 --v 3",
        "taylor --g analytic:1 --alpha surd:-1,1,5,2 --probe 1 --mmax 20",
        "walk --rademacher 7 --K 1000000",
        "walk --quadratic --alpha surd:-1,1,5,2 --K 1000000",
    };
    int same = 0;
    std::string bad;
    for (auto& r : runs) {
      std::string a = run_capture(cli + " " + r), b = run_capture(cli + " " + r);
      if (!a.empty() && a == b && a.find("\"code\"") == std::string::npos) {
        ++same;
      } else {
        bad += " [" + r + "]";
      }
    }
    return Outcome{same == int(runs.size()),
                   std::to_string(same) + "/" + std::to_string(runs.size()) + " identical" + bad};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
