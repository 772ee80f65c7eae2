#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "apz/diophantine.hpp"
#include "apz/kernels.hpp"
#include "apz/lerch.hpp"
#include "apz/periodic.hpp"

namespace apz {

struct FactoredInteger {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, int>> factors;  // (prime, exponent), primes increasing
};

// Trial division against a table of primes below 10^6; n <= 10^12.
FactoredInteger factorize(std::uint64_t n);

// sigma_t(k) = sum_{d | k} d^t
cplx divisor_sigma(cplx t, std::uint64_t k);
// sigma_t(k) for k = 0..M (index 0 unused), by a divisor sieve.
std::vector<cplx> divisor_sigma_table(cplx t, std::int64_t M);

// sup_n d(n) / n^eps, exact for eps in (0, 1].
double divisor_bound_constant(double eps);

// sum_{m,n <= N} g(m n alpha) / (n^s m^t); Re s, Re t > 1.
SeriesValue nested_T(const PeriodicFunction& g, const AlphaSpec& alpha, cplx s, cplx t, std::int64_t N,
                     Exec exec = Exec::parallel);

// sum_{k <= M} sigma_{t-s}(k) / k^t g(k alpha); Re s, Re t > 1.
SeriesValue nested_single_sum(const PeriodicFunction& g, const AlphaSpec& alpha, cplx s, cplx t, std::int64_t M,
                              Exec exec = Exec::parallel);

struct ParsevalReport {
  cplx coefficient_sum{};  // sum_k sigma_{t-s}(k) sigma_{v-u}(k) / k^{t+v}
  cplx integral{};         // convention_factor * coefficient_sum
  cplx zeta_ratio{};       // zeta(s+u) zeta(s+v) zeta(t+u) zeta(t+v) / zeta(s+t+u+v)
  double convention_factor = 0;
  cplx ratio{};            // integral / zeta_ratio
  double tail = 0;         // bound on the dropped coefficient terms
  std::int64_t K = 0;
};

// int_0^1 f_{s,t} f_{u,v} d alpha for f_{s,t}(alpha) = sum_k sigma_{t-s}(k) k^{-t} sin(2 pi k alpha),
// by quadrature on a uniform grid of `grid` points with the series cut at K terms.
cplx parseval_quadrature(cplx s, cplx t, cplx u, cplx v, std::int64_t K, std::int64_t grid);

// int sin^2 per mode, measured once by parseval_quadrature at (2,2,2,2) and cached.
double convention_factor();

ParsevalReport parseval_ratio(cplx s, cplx t, cplx u, cplx v, std::int64_t K = 100000,
                              Exec exec = Exec::parallel);

struct HSample {
  double alpha = 0;
  cplx value{};
  double err = 0;  // NaN on the Cesaro path
};

struct HSampleSet {
  std::vector<HSample> samples;
  bool heuristic = false;  // Fejer-weighted truncation, no error bound
  std::int64_t M = 0;
};

// f_{s,t}(i / grid), i = 0..grid-1, with M series terms. Falls back to Fejer
// weights when the coefficients are not absolutely summable.
HSampleSet h_alpha_sample(cplx s, cplx t, std::int64_t grid, std::int64_t M = 1'000'000,
                          Exec exec = Exec::parallel);

}  // namespace apz
