// Serial reference vs OpenMP timings for the data-parallel kernels.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "apz/kernels.hpp"
#include "apz/numbertheory.hpp"
#include "apz/walks.hpp"
#include "apz/zeta.hpp"

using namespace apz;

namespace {

template <class F>
double seconds(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, const std::function<cplx(Exec)>& kernel) {
  cplx a = kernel(Exec::serial), b;  // warm-up: static tables, page faults
  double ts = seconds([&] { a = kernel(Exec::serial); });
  double tp = seconds([&] { b = kernel(Exec::parallel); });
  std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", name, ts, tp, ts / tp, a == b ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) set_thread_count(std::stoi(argv[1]));
  std::printf("threads: %d\n", thread_count());
  std::printf("%-28s %10s %10s %9s  %s\n", "kernel", "serial_s", "omp_s", "speedup", "result");

  auto sine = make_sine();
  auto golden = AlphaSpec::golden();
  row("nested_T N=4000", [&](Exec e) { return nested_T(sine, golden, 3.0, 2.0, 4000, e).value; });
  row("nested_single_sum M=2e6", [&](Exec e) { return nested_single_sum(sine, golden, 3.0, 2.0, 2'000'000, e).value; });
  row("parseval K=1e6", [&](Exec e) { return parseval_ratio(2.0, 3.0, 2.0, 3.0, 1'000'000, e).coefficient_sum; });
  row("zeta_polylog analytic:1", [&](Exec e) {
    ZetaRequest r;
    r.g = make_analytic_decay(0.5);
    r.alpha = golden;
    r.s = cplx(-0.5, 2);
    r.tol = 1e-8;
    r.exec = e;
    return zeta_polylog(r).value;
  });
  row("rademacher 16 seeds K=2^18", [&](Exec e) {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 16; ++s) seeds.push_back(s);
    double acc = 0;
    for (auto& est : rademacher_sweep(seeds, 1 << 18, e)) acc += est.sigma_hat;
    return cplx(acc);
  });
  return 0;
}
