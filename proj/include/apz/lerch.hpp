#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "apz/phase.hpp"

namespace apz {

using cplx = std::complex<double>;

struct SeriesValue {
  cplx value{};
  double err = 0;           // estimated absolute error
  std::int64_t terms = 0;   // summands or quadrature nodes
  std::string method;       // integral | recursion(m) | euler_maclaurin | direct_abel | ...
  int depth = 0;            // continuation depth m
};

// Gamma on the complex plane: shifted Stirling series plus reflection.
cplx gamma_complex(cplx s);
// log Gamma(s) for Re s > 0 (principal branch continued along the real axis).
cplx lgamma_complex(cplx s);

struct QuadResult {
  cplx value{};
  double err = 0;
  std::int64_t nodes = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b]; bisects the worst segment until the
// summed |K15 - G7| estimates fall below abs_tol or `node_cap` evaluations.
QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                        std::int64_t node_cap = 200000);

// L(z, s) = sum_{n>=0} z^n / (n + a)^s with z = e^{2 pi i theta}.
class LerchParams {
 public:
  LerchParams(Phase z_phase, cplx s, double a = 1.0);
  LerchParams(double z_phase, cplx s, double a = 1.0) : LerchParams(Phase::from_double(z_phase), s, a) {}

  Phase z_phase() const { return phase_; }
  cplx z() const;
  cplx s() const { return s_; }
  double a() const { return a_; }
  // |z - 1|
  double conditioning() const;
  // m >= 0 with Re(s) + m in (1, 2]; 0 whenever Re s > 1.
  int continuation_depth() const;

 private:
  Phase phase_;
  cplx s_;
  double a_;
};

// Integral representation, Re s > 1.
SeriesValue lerch_integral(const LerchParams& p, double tol = 1e-12);
// j-th z-derivative of L, Re s > 1.
SeriesValue lerch_derivative(const LerchParams& p, int j, double tol = 1e-12);

// Coefficients of (a + z d/dz)^m = sum_j A_{m,j} z^j (d/dz)^j, j = 0..m.
std::vector<double> operator_coefficients(int m, double a);

// L(z, s) for any s via L(z, s) = (a + z d/dz)^m L(z, s + m).
SeriesValue lerch_continued(Phase z_phase, cplx s, double a = 1.0, double tol = 1e-12);
SeriesValue lerch_continued(double z_phase, cplx s, double a = 1.0, double tol = 1e-12);

// B_j, j = 0..m, with |L(z, s)| <= sum_j B_j / lb^{j+1} for every |z| = 1,
// where lb <= |1 - z e^{-t}| for all t >= 0 (lb >= |z - 1|/2 always).
std::vector<double> lerch_majorant_coefficients(cplx s, double a = 1.0);

// Li_s(z) = sum_{n>=1} z^n / n^s = z L(z, s, 1).
SeriesValue polylog(Phase z_phase, cplx s, double tol = 1e-12);
SeriesValue polylog(double z_phase, cplx s, double tol = 1e-12);

// zeta(s, u) = sum_{n>=0} (n + u)^{-s} by Euler-Maclaurin; u > 0, s != 1.
SeriesValue hurwitz_zeta(cplx s, double u, double tol = 1e-14);
// zeta(s, u) - 1/(s - 1), entire in s; at s = 1 this is -digamma(u).
SeriesValue hurwitz_zeta_regularized(cplx s, double u, double tol = 1e-14);

// e^w - 1 without cancellation for small |w|.
cplx expm1_complex(cplx w);

}  // namespace apz
