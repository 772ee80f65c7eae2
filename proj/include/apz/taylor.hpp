#pragma once

#include <cstdint>
#include <vector>

#include "apz/diophantine.hpp"
#include "apz/kernels.hpp"
#include "apz/lerch.hpp"
#include "apz/periodic.hpp"

namespace apz {

// f(z) = sum_{n>=1} g(n alpha) z^n, |z| < 1; geometric tail bound.
SeriesValue taylor_eval(const PeriodicFunction& g, const AlphaSpec& alpha, cplx z, double tol = 1e-12);

// f(z) = sum_k c_k e_k z / (1 - e_k z), e_k = e^{2 pi i k alpha}: the same
// function away from the poles e_k^{-1}, including |z| > 1. K = 0 picks the
// smallest cutoff meeting tol (analytic g); finite g always uses every term.
SeriesValue pole_sum_eval(const PeriodicFunction& g, const AlphaSpec& alpha, cplx z, std::int64_t K = 0,
                          double tol = 1e-12);
// z = radius * e^{2 pi i angle}; exact pole distances along rays through poles.
SeriesValue pole_sum_polar(const PeriodicFunction& g, const AlphaSpec& alpha, double radius, Phase angle,
                           std::int64_t K = 0, double tol = 1e-12);

struct ProbeReport {
  std::int64_t j = 0;
  std::vector<double> t_values;  // 1 - 2^{-m}, m = 4..m_max
  std::vector<cplx> values;      // f(t e^{-2 pi i j alpha})
  std::vector<cplx> scaled;      // (1 - t) f
  std::vector<double> cauchy_diffs;  // |scaled[i+1] - scaled[i]|
  cplx limit_estimate{};
  cplx target{};  // c_j
  double deviation = 0;  // |limit_estimate - c_j|
};

// Radial limit of (1 - t) f along the ray through the pole of the c_j term,
// which sits at e^{-2 pi i j alpha} for f = sum_{n>=1} g(n alpha) z^n.
ProbeReport radial_probe(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t j, int m_max = 20);
std::vector<ProbeReport> radial_probes(const PeriodicFunction& g, const AlphaSpec& alpha,
                                       const std::vector<std::int64_t>& js, int m_max = 20,
                                       Exec exec = Exec::parallel);

// h(z) / (1 - z^q) with h(z) = sum_{n=1}^{q} g(n p/q) z^n.
SeriesValue rational_taylor(const PeriodicFunction& g, std::int64_t p, std::int64_t q, cplx z);

// Closed arc {start + u : 0 <= u <= length} on R/Z; length >= 1 is the whole circle.
struct Arc {
  Phase start;
  u128 length = 0;
  bool full = false;

  static Arc from_turns(double start, double length);
  bool contains(Phase x) const { return full || (x - start).raw() <= length; }
};

// c_k = 1/|k|! for |k| <= K, zeroed when the pole e^{-2 pi i k alpha} lies on an arc.
PeriodicFunction masked_series(const AlphaSpec& alpha, const std::vector<Arc>& arcs, std::int64_t K);

}  // namespace apz
