#pragma once

// Summation kernels shared by the series modules. Every parallel kernel has a
// serial twin and both reduce through the same fixed pairwise tree, so the
// OpenMP result is bit-identical to the serial reference for any thread count.

#include <complex>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace apz {

enum class Exec { serial, parallel };

// Neumaier's variant of Kahan summation.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (magnitude(sum_) >= magnitude(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double magnitude(double v) { return v < 0 ? -v : v; }
  static double magnitude(const std::complex<double>& v) {
    return std::abs(v.real()) + std::abs(v.imag());
  }
  T sum_{};
  T comp_{};
};

// Fixed-shape pairwise reduction: split at the largest power of two below n.
template <class T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() <= 8) {
    T s{};
    for (const T& x : xs) s += x;
    return s;
  }
  std::size_t half = 1;
  while (half * 2 < xs.size()) half *= 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

// out[i] = f(i) for i in [0, n). Work items are independent; the parallel
// version only changes who computes each slot, never the slot's value. An
// exception from the lowest failing index is rethrown after the loop, which is
// the one the serial loop would have raised.
template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f, Exec exec) {
  std::vector<T> out(n);
  if (exec == Exec::parallel) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      auto u = static_cast<std::size_t>(i);
      try {
        out[u] = f(u);
      } catch (...) {
        errors[u] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  }
  return out;
}

template <class T, class F>
T map_reduce(std::size_t n, F&& f, Exec exec) {
  return pairwise_sum(map_indices<T>(n, std::forward<F>(f), exec));
}

// Sets the OpenMP team size for later parallel kernels (0 keeps the default).
void set_thread_count(int threads);
int thread_count();

}  // namespace apz
