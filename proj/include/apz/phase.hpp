#pragma once

#include <cmath>
#include <cstdint>

namespace apz {

using u128 = unsigned __int128;
using i128 = __int128;

// A point of the circle R/Z stored as a 128-bit binary fraction of a turn.
// Addition wraps modulo 1 exactly, so orbit phases n*alpha mod 1 accumulate
// only the representation error of alpha (n * 2^-128), never rounding drift.
class Phase {
 public:
  constexpr Phase() = default;
  static constexpr Phase from_raw(u128 raw) { return Phase(raw); }

  // x mod 1 for a finite double. Exact: every double fraction fits in 128 bits
  // once the integer part is removed (low-order bits beyond 2^-128 dropped).
  static Phase from_double(double x) {
    double frac = x - std::floor(x);
    if (frac >= 1.0) frac = 0.0;
    // split into two 64-bit halves to keep every mantissa bit
    double hi = std::ldexp(frac, 64);
    double hi_int = std::floor(hi);
    double lo = std::ldexp(hi - hi_int, 64);
    u128 raw = (static_cast<u128>(static_cast<std::uint64_t>(hi_int)) << 64) |
               static_cast<u128>(static_cast<std::uint64_t>(std::floor(lo)));
    return Phase(raw);
  }

  constexpr u128 raw() const { return raw_; }
  constexpr bool is_zero() const { return raw_ == 0; }

  // Representative in [0, 1).
  double turns() const {
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(raw_ >> 64)), -64) +
           std::ldexp(static_cast<double>(static_cast<std::uint64_t>(raw_)), -128);
  }

  // Representative in [-1/2, 1/2). Accurate to relative precision even next
  // to the integers, which matters for functions singular at 0.
  double centered() const {
    if ((raw_ >> 127) == 0) return turns();
    u128 neg = ~raw_ + 1;
    return -Phase(neg).turns();
  }

  // Distance to the nearest integer, ||x||.
  double distance_to_integer() const { return std::fabs(centered()); }

  constexpr Phase operator+(Phase o) const { return Phase(raw_ + o.raw_); }
  constexpr Phase operator-(Phase o) const { return Phase(raw_ - o.raw_); }
  constexpr Phase operator-() const { return Phase(~raw_ + 1); }
  constexpr Phase& operator+=(Phase o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Phase times(std::uint64_t n) const { return Phase(raw_ * static_cast<u128>(n)); }
  constexpr Phase times(std::int64_t n) const {
    return n >= 0 ? times(static_cast<std::uint64_t>(n))
                  : -times(static_cast<std::uint64_t>(-(n + 1)) + 1u);
  }
  constexpr bool operator==(const Phase&) const = default;

 private:
  constexpr explicit Phase(u128 raw) : raw_(raw) {}
  u128 raw_ = 0;
};

}  // namespace apz
