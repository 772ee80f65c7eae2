#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "apz/diophantine.hpp"
#include "apz/phase.hpp"

namespace apz {

using cplx = std::complex<double>;

enum class DecayClass { finite, power, analytic, log_singular };

// A 1-periodic function g(x) = sum_k c_k e^{2 pi i k x}. The Fourier data is a
// rule (c_k on demand), so truncation orders are chosen by each consumer.
class PeriodicFunction {
 public:
  enum class Family { trig, power, analytic, log_singular, sawtooth };

  Family family() const { return family_; }
  DecayClass decay_class() const;
  // t for power decay (1 for the sawtooth), delta for analytic decay.
  double decay_parameter() const { return param_; }
  bool is_real() const { return real_; }

  cplx coeff(std::int64_t k) const;
  cplx mean() const { return coeff(0); }
  // Largest |k| with c_k != 0 for finite tables.
  std::int64_t degree() const;
  const std::map<std::int64_t, cplx>& table() const { return table_; }

  // Exact variation when known in closed form or measured at construction.
  std::optional<double> variation() const { return variation_; }
  // Upper bound on sup_x |g(x)|; +inf when unbounded.
  double sup_bound() const;

  // Sum over |k| > K of |c_k| * w(k)^J with w(k) = |k|^r / (4 C): the
  // majorant of the J-times small-divisor weighted Fourier tail. J = 0 gives
  // the plain coefficient tail. +inf when the weighted series diverges.
  double weighted_tail(std::int64_t K, int J, const DiophantineEstimate& est) const;
  double coefficient_tail(std::int64_t K) const;

  // |returned - g(x)| <= tol. Throws EvaluationAtSingularity for the log family
  // within 2^-64 of an integer and ToleranceUnreachable when truncation would exceed caps.
  cplx evaluate(Phase x, double tol = 1e-13) const;
  cplx evaluate(double x, double tol = 1e-13) const { return evaluate(Phase::from_double(x), tol); }
  // Real part only; the fast path used by summation kernels.
  double evaluate_real(Phase x, double tol = 1e-13) const { return evaluate(x, tol).real(); }

  std::string describe() const;

  friend PeriodicFunction make_trig_poly(std::map<std::int64_t, cplx> coeffs);
  friend PeriodicFunction make_power_decay(double t);
  friend PeriodicFunction make_analytic_decay(double delta);
  friend PeriodicFunction make_log_singular();
  friend PeriodicFunction make_sawtooth();

 private:
  cplx eval_trig(Phase x) const;
  double eval_power(Phase x, double tol) const;

  Family family_ = Family::trig;
  double param_ = 0;
  bool real_ = true;
  std::map<std::int64_t, cplx> table_;
  std::optional<double> variation_;
};

PeriodicFunction make_trig_poly(std::map<std::int64_t, cplx> coeffs);
PeriodicFunction make_power_decay(double t);
PeriodicFunction make_analytic_decay(double delta);
PeriodicFunction make_log_singular();
PeriodicFunction make_sawtooth();
// sin(2 pi x) as the table {1: -i/2, -1: i/2}.
PeriodicFunction make_sine();

// Parses `sin | sawtooth | logsin | power:t | analytic:delta | trig:{k=re[:im],...}`.
PeriodicFunction parse_function(const std::string& text);

// Sampled-partition variation: uniform partitions doubled until two successive
// sums differ by less than `rel_tol`.
double estimate_variation(const std::function<double(double)>& f, double rel_tol = 1e-6,
                          std::size_t max_points = std::size_t{1} << 22);

// Solution h of g(x) = h(x + alpha) - h(x), truncated to 0 < |k| <= K.
struct CoboundaryTransfer {
  PeriodicFunction base;
  AlphaSpec alpha;
  std::int64_t K = 0;
  std::map<std::int64_t, cplx> coeffs;  // h_k
  double sup_bound = 0;        // >= sup |h| including the truncated tail
  double residual_bound = 0;   // >= sup |g - (h(. + alpha) - h)| for the truncated h

  cplx evaluate(Phase x) const;
};

CoboundaryTransfer coboundary_transfer(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t K);
// Same, reusing a precomputed Diophantine estimate.
CoboundaryTransfer coboundary_transfer(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t K,
                                       const DiophantineEstimate& est);

// |e^{2 pi i phase} - 1| = 2 |sin(pi phase)| computed from the exact phase.
double chord_to_one(Phase phase);
// e^{2 pi i phase}
cplx unit(Phase phase);

}  // namespace apz
