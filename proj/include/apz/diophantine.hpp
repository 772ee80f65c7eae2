#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apz/phase.hpp"

namespace apz {

// Exact description of a rotation number alpha.
//
//   rational  p/q in lowest terms, q >= 1
//   surd      (A + B sqrt(D)) / Q with D > 0 non-square, Q > 0, gcd(A,B,Q) = 1
//   decimal   a digit string whose value is certified to `places` decimals,
//             i.e. alpha lies in [v - 10^-places, v + 10^-places]
class AlphaSpec {
 public:
  enum class Kind { rational, surd, decimal };

  static AlphaSpec rational(std::int64_t p, std::int64_t q);
  static AlphaSpec surd(std::int64_t A, std::int64_t B, std::int64_t D, std::int64_t Q);
  static AlphaSpec decimal(std::string digits, int places);

  // Frequently used: (sqrt(5) - 1) / 2 and sqrt(2) - 1.
  static AlphaSpec golden() { return surd(-1, 1, 5, 2); }
  static AlphaSpec silver() { return surd(-1, 1, 2, 1); }

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::rational; }

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  std::int64_t A() const { return A_; }
  std::int64_t B() const { return B_; }
  std::int64_t D() const { return D_; }
  std::int64_t Q() const { return Q_; }
  const std::string& digits() const { return digits_; }
  int places() const { return places_; }

  // Nearest double (long double intermediate for surds).
  double value() const;
  // alpha mod 1 as a 128-bit fixed-point phase, floor-rounded from the exact value.
  Phase phase() const;
  // Round-trippable text in the CLI grammar: rat:p/q | surd:A,B,D,Q | dec:digits@places
  std::string describe() const;

 private:
  Kind kind_ = Kind::rational;
  std::int64_t p_ = 0, q_ = 1;
  std::int64_t A_ = 0, B_ = 0, D_ = 0, Q_ = 1;
  std::string digits_;
  int places_ = 0;
};

// Parses `rat:p/q`, `surd:A,B,D,Q` or `dec:<digits>@<places>`.
AlphaSpec parse_alpha(const std::string& text);

struct ContinuedFraction {
  std::int64_t a0 = 0;
  std::vector<std::int64_t> partial;  // a_1, a_2, ...
  bool exact = false;
  bool terminated = false;  // rational expansion ended before the requested depth
  // (start, length) in a_i indexing (i >= 1) for periodic surd expansions.
  std::optional<std::pair<std::size_t, std::size_t>> period;
  // Bounds on the complete quotient x_{n+1} following the last partial
  // quotient; [1, inf) when unknown. Unused when terminated.
  double tail_lo = 1.0;
  double tail_hi = HUGE_VAL;

  std::size_t size() const { return partial.size() + 1; }
  std::int64_t quotient(std::size_t i) const { return i == 0 ? a0 : partial[i - 1]; }

  // Synthetic expansion from explicit quotients (exact = false, tail unknown).
  static ContinuedFraction from_quotients(std::int64_t a0, std::vector<std::int64_t> partial);
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::size_t index = 0;
  double distance = 0;     // |alpha - p/q|, best estimate
  double distance_lo = 0;  // certified bracket
  double distance_hi = 0;
  int sign = 0;  // sign of alpha - p/q (0 when exact)
};

struct DiophantineEstimate {
  double r_hat = 1;      // type exponent: |alpha - p/q| >= C/q^{1+r}
  double C_hat = 0;      // constant in that normalization
  double c_dk = 0;       // q_{m+1} <= q_m^r / c normalization
  double r_running = 1;  // running max of log q_{m+1} / log q_m
  bool constant_type = false;
  std::vector<std::pair<std::int64_t, std::int64_t>> witnesses;  // (q_m, q_{m+1})

  // Lower bound ||k alpha|| >= C_hat / |k|^r_hat implied by the estimate.
  double norm_floor(std::int64_t k) const;
};

ContinuedFraction cf_expand(const AlphaSpec& alpha, std::size_t depth);
// As cf_expand, but for decimal input stops at the last certified quotient
// instead of failing.
ContinuedFraction cf_expand_available(const AlphaSpec& alpha, std::size_t max_depth);

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t m);

DiophantineEstimate diophantine_type_estimate(const ContinuedFraction& cf);

// Convenience: expansion deep enough that q exceeds `q_limit` (or the
// certified depth is exhausted), then its estimate.
DiophantineEstimate estimate_for(const AlphaSpec& alpha, std::int64_t q_limit = 1'000'000'000);

}  // namespace apz
