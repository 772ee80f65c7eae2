#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apz/diophantine.hpp"
#include "apz/kernels.hpp"
#include "apz/periodic.hpp"

namespace apz {

// One retained partial sum S_k = sum_{n<=k} g(n alpha).
struct WalkPoint {
  std::int64_t k = 0;
  double S = 0;
  double term = 0;         // the k-th summand
  double running_max = 0;  // max_{j<=k} |S_j|
};

// max |S_j| over the dyadic window (k_lo, k_hi] (the first window is {1}).
struct WindowMax {
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
  double max_abs = 0;
};

struct WalkTrace {
  std::int64_t K = 0;
  std::vector<WalkPoint> checkpoints;  // dyadic k, K, and the requested special indices
  std::vector<WindowMax> windows;
  std::string source;

  std::optional<WalkPoint> at(std::int64_t k) const;
  double final_max() const { return checkpoints.empty() ? 0.0 : checkpoints.back().running_max; }
};

// S_k for g(n alpha), n = 1..K, with integer-exact phase accumulation.
WalkTrace walk(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t K,
               const std::vector<std::int64_t>& special = {});

// S_k = sum sin(2 pi n^2 gamma), phases from the second-difference recurrence.
WalkTrace quadratic_walk(const AlphaSpec& gamma, std::int64_t K, const std::vector<std::int64_t>& special = {});

// Partial sums of iid +-1 signs. The generator is std::mt19937_64 seeded with
// `seed`; each draw contributes +1 when its top bit is set and -1 otherwise.
WalkTrace rademacher_walk(std::uint64_t seed, std::int64_t K);

struct DKCheck {
  std::int64_t q = 0;
  double S_q = 0;
  double bound = 0;
  bool pass = false;
};

struct DKViolation {
  std::int64_t k = 0;
  double S_k = 0;
  double bound = 0;
};

struct DKReport {
  std::vector<DKCheck> q_checks;
  bool all_q_pass = true;
  // global bound |S_k| <= C k^{1-1/r} log(k) Var at every checkpoint k >= 2
  bool global_checked = false;
  double C = 0;
  double r = 0;
  std::vector<DKViolation> global_violations;
  bool global_pass = true;
};

// The type estimate is rebuilt from the convergent denominators. Convergents
// with q > trace.K are skipped; smaller ones must be checkpoints.
DKReport denjoy_koksma_certificate(const WalkTrace& trace, const std::vector<Convergent>& convergents,
                                   double var_g);
DKReport denjoy_koksma_certificate(const WalkTrace& trace, const std::vector<Convergent>& convergents,
                                   double var_g, const DiophantineEstimate& est);

struct AbscissaEstimate {
  double sigma_hat = 0;    // least-squares slope over the dyadic windows
  double sigma_ratio = 0;  // max log(max|S| v 1)/log k over the top half of the range
  std::vector<std::pair<double, double>> window_slopes;  // (log k_hi, log(max|S| v 1))
  std::string method = "dyadic-regression";
  bool degenerate = false;  // every S_k was zero
};

AbscissaEstimate cahen_abscissa(const WalkTrace& trace);

// Independent Rademacher walks, one per seed; serial and OpenMP paths agree bitwise.
std::vector<AbscissaEstimate> rademacher_sweep(const std::vector<std::uint64_t>& seeds, std::int64_t K,
                                               Exec exec = Exec::parallel);

struct LogWalkResult {
  WalkTrace trace;
  bool truncation_active = false;
  std::int64_t first_truncated_n = 0;  // 0 when never active
  double fitted_C = 0;                 // max over checkpoints k >= 3 of running_max / log(k)^2
};

// g(x) = log|2 - 2 cos 2 pi x| summed with the logarithm floored at -M,
// M = 3 log q for the first convergent denominator q exceeding n.
LogWalkResult log_singular_walk(const AlphaSpec& alpha, std::int64_t K);

// sum_{j=1}^{q-1} log|e^{2 pi i j/q} - 1|, which is log q.
double root_product_log_sum(std::int64_t q);

}  // namespace apz
