#pragma once

#include <cstdint>
#include <string>

#include "apz/diophantine.hpp"
#include "apz/kernels.hpp"
#include "apz/lerch.hpp"
#include "apz/periodic.hpp"

namespace apz {

// zeta_{g,alpha}(s) = sum_{n>=1} g(n alpha) / n^s
struct ZetaRequest {
  PeriodicFunction g;
  AlphaSpec alpha;
  cplx s{2.0, 0.0};
  double tol = 1e-10;
  std::int64_t K_fourier = 0;  // 0: smallest K whose tail bound meets tol
  std::int64_t N_direct = 0;   // 0: default cap of 10^7 terms
  Exec exec = Exec::parallel;
};

// Partial sum to N plus J rounds of summation by parts against the transfers
// h_1 = T g, h_{j+1} = T h_j (T the coboundary inverse), with explicit
// boundary terms. J = 0 is the plain truncated sum (Re s > 1 only).
SeriesValue zeta_direct(const ZetaRequest& req);

// sum_{0<|k|<=K} c_k Li_s(e^{2 pi i k alpha}); valid for every s.
SeriesValue zeta_polylog(const ZetaRequest& req);

// q^{-s} sum_{l=1}^{q} g(l p/q) (zeta(s, l/q) - 1/(s-1)); needs sum_l g(l p/q) = 0.
SeriesValue zeta_rational(const PeriodicFunction& g, std::int64_t p, std::int64_t q, cplx s, double tol = 1e-14);

// rational alpha -> rational; finite/analytic g -> polylog; otherwise direct.
SeriesValue zeta_auto(const ZetaRequest& req);

// Picks a method by name: direct | polylog | rational | auto.
SeriesValue zeta_by_method(const ZetaRequest& req, const std::string& method);

}  // namespace apz
