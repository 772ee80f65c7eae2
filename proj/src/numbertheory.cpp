#include "apz/numbertheory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "apz/error.hpp"

namespace apz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::uint64_t kPrimeLimit = 1'000'000;
constexpr std::int64_t kBlock = 4096;

const std::vector<std::uint32_t>& primes() {
  static const std::vector<std::uint32_t> table = [] {
    std::vector<bool> composite(kPrimeLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t p = 2; p <= kPrimeLimit; ++p) {
      if (composite[p]) continue;
      out.push_back(static_cast<std::uint32_t>(p));
      for (std::uint64_t m = p * p; m <= kPrimeLimit; m += p) composite[m] = true;
    }
    return out;
  }();
  return table;
}

// d^t; integer powers of integers stay exact
cplx power(double d, cplx t) {
  if (t.imag() == 0.0) return std::pow(d, t.real());
  return std::exp(t * std::log(d));
}

// sum_{n > N} n^{-sigma} <= N^{1-sigma} / (sigma - 1)
double zeta_tail(double sigma, std::int64_t N) { return std::pow(double(N), 1.0 - sigma) / (sigma - 1.0); }
// zeta(sigma) <= sigma / (sigma - 1)
double zeta_bound(double sigma) { return sigma / (sigma - 1.0); }

// min over eps of C_eps sum_{k > M} k^{expo + eps}; +inf when no eps makes it converge
double divisor_tail(double expo, int divisor_power, std::int64_t M) {
  double best = std::numeric_limits<double>::infinity();
  for (double eps = 0.06; eps <= 0.5001; eps += 0.04) {
    double e = expo + divisor_power * eps;
    if (e >= -1.0) continue;
    double c = std::pow(divisor_bound_constant(eps), divisor_power);
    best = std::min(best, c * std::pow(double(M), e + 1.0) / (-1.0 - e));
  }
  return best;
}

void require_half_plane(cplx x, const char* name) {
  if (!(x.real() > 1.0))
    throw Error(ErrorCode::DomainError, std::string("needs Re ") + name + " > 1",
                std::string(name) + "=" + std::to_string(x.real()) + "," + std::to_string(x.imag()));
}

// sum_{k=1}^{M} term(k) in fixed blocks, blocks reduced pairwise
template <class F>
cplx block_sum(std::int64_t M, F&& term, Exec exec) {
  std::size_t blocks = static_cast<std::size_t>((M + kBlock - 1) / kBlock);
  return map_reduce<cplx>(
      blocks,
      [&](std::size_t b) {
        CompensatedSum<cplx> acc;
        std::int64_t lo = std::int64_t(b) * kBlock + 1;
        std::int64_t hi = std::min(M, lo + kBlock - 1);
        for (std::int64_t k = lo; k <= hi; ++k) acc.add(term(k));
        return acc.value();
      },
      exec);
}

// sin(2 pi j / grid), folded into [0, pi/2] so the table is exactly odd and symmetric
std::vector<double> sine_table(std::int64_t grid) {
  std::vector<double> out(grid, 0.0);
  for (std::int64_t j = 1; 2 * j < grid; ++j) {
    std::int64_t num = 4 * j <= grid ? 2 * j : grid - 2 * j;
    out[j] = std::sin(M_PI * double(num) / double(grid));
    out[grid - j] = -out[j];
  }
  return out;
}

}  // namespace

FactoredInteger factorize(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::DomainError, "cannot factor 0", "n=0");
  if (n > 1'000'000'000'000ULL)
    throw Error(ErrorCode::DomainError, "trial division limited to n <= 10^12", "n=" + std::to_string(n));
  FactoredInteger f;
  f.n = n;
  std::uint64_t m = n;
  for (std::uint64_t p : primes()) {
    if (p * p > m) break;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e > 0) f.factors.emplace_back(p, e);
  }
  if (m > 1) f.factors.emplace_back(m, 1);
  return f;
}

cplx divisor_sigma(cplx t, std::uint64_t k) {
  if (k == 0) throw Error(ErrorCode::DomainError, "divisor sum needs k >= 1", "k=0");
  cplx prod = 1.0;
  for (auto [p, e] : factorize(k).factors) {
    cplx pt = power(double(p), t);
    cplx term = 1.0, sum = 1.0;
    for (int i = 0; i < e; ++i) {
      term *= pt;
      sum += term;
    }
    prod *= sum;
  }
  return prod;
}

std::vector<cplx> divisor_sigma_table(cplx t, std::int64_t M) {
  std::vector<cplx> out(static_cast<std::size_t>(M + 1), 0.0);
  for (std::int64_t d = 1; d <= M; ++d) {
    cplx dt = power(double(d), t);
    for (std::int64_t m = d; m <= M; m += d) out[m] += dt;
  }
  return out;
}

double divisor_bound_constant(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::DomainError, "eps must lie in (0, 1]", std::to_string(eps));
  // only primes with p^eps < 2 can push (e+1)/p^{e eps} above 1
  double limit = std::pow(2.0, 1.0 / eps);
  if (limit > double(kPrimeLimit)) throw Error(ErrorCode::DomainError, "eps too small", std::to_string(eps));
  double c = 1.0;
  for (std::uint64_t p : primes()) {
    if (double(p) >= limit) break;
    double pe = std::pow(double(p), eps), best = 1.0, cur = 1.0;
    for (int e = 1; e < 200; ++e) {
      cur = double(e + 1) / std::pow(pe, e);
      if (cur <= best && e > 1 && cur < 1.0) break;
      best = std::max(best, cur);
    }
    c *= best;
  }
  return c;
}

SeriesValue nested_T(const PeriodicFunction& g, const AlphaSpec& alpha, cplx s, cplx t, std::int64_t N, Exec exec) {
  require_half_plane(s, "s");
  require_half_plane(t, "t");
  if (N < 1) throw Error(ErrorCode::DomainError, "N must be positive", std::to_string(N));
  double sup = g.sup_bound();
  if (!std::isfinite(sup)) throw Error(ErrorCode::DomainError, "nested_T needs bounded g", g.describe());

  std::vector<cplx> ns(N + 1), mt(N + 1);
  for (std::int64_t n = 1; n <= N; ++n) {
    ns[n] = power(double(n), -s);
    mt[n] = power(double(n), -t);
  }
  Phase a = alpha.phase();
  const double eval_tol = 1e-14;
  auto rows = map_indices<cplx>(
      static_cast<std::size_t>(N),
      [&](std::size_t i) {
        std::int64_t m = std::int64_t(i) + 1;
        Phase step = a.times(m), x;
        CompensatedSum<cplx> acc;
        for (std::int64_t n = 1; n <= N; ++n) {
          x += step;
          acc.add(g.evaluate(x, eval_tol) * ns[n]);
        }
        return acc.value() * mt[m];
      },
      exec);

  SeriesValue out;
  out.value = pairwise_sum(rows);
  out.terms = N * N;
  out.method = "nested_square";
  double zs = zeta_bound(s.real()), zt = zeta_bound(t.real());
  out.err = sup * (zeta_tail(s.real(), N) * zt + zs * zeta_tail(t.real(), N)) + (eval_tol + 8 * kEps * sup) * zs * zt;
  return out;
}

SeriesValue nested_single_sum(const PeriodicFunction& g, const AlphaSpec& alpha, cplx s, cplx t, std::int64_t M,
                              Exec exec) {
  require_half_plane(s, "s");
  require_half_plane(t, "t");
  if (M < 1) throw Error(ErrorCode::DomainError, "M must be positive", std::to_string(M));
  double sup = g.sup_bound();
  if (!std::isfinite(sup)) throw Error(ErrorCode::DomainError, "nested_single_sum needs bounded g", g.describe());

  auto sigma = divisor_sigma_table(t - s, M);
  Phase a = alpha.phase();
  const double eval_tol = 1e-14;
  cplx total = block_sum(
      M, [&](std::int64_t k) { return sigma[k] * power(double(k), -t) * g.evaluate(a.times(k), eval_tol); }, exec);

  SeriesValue out;
  out.value = total;
  out.terms = M;
  out.method = "divisor_single";
  // |sigma_{t-s}(k)| <= k^{max(0, Re(t-s))} d(k)
  double expo = std::max(0.0, (t - s).real()) - t.real();
  double zs = zeta_bound(s.real()), zt = zeta_bound(t.real());
  out.err = sup * divisor_tail(expo, 1, M) + (eval_tol + 8 * kEps * sup) * zs * zt;
  return out;
}

cplx parseval_quadrature(cplx s, cplx t, cplx u, cplx v, std::int64_t K, std::int64_t grid) {
  if (K < 1 || grid < 1) throw Error(ErrorCode::DomainError, "K and grid must be positive", "");
  auto s1 = divisor_sigma_table(t - s, K), s2 = divisor_sigma_table(v - u, K);
  std::vector<cplx> a(K + 1), b(K + 1);
  for (std::int64_t k = 1; k <= K; ++k) {
    a[k] = s1[k] * power(double(k), -t);
    b[k] = s2[k] * power(double(k), -v);
  }
  auto sines = sine_table(grid);
  auto products = map_indices<cplx>(
      static_cast<std::size_t>(grid),
      [&](std::size_t i) {
        CompensatedSum<cplx> f, h;
        for (std::int64_t k = 1; k <= K; ++k) {
          double sn = sines[(std::int64_t(i) * k) % grid];
          f.add(a[k] * sn);
          h.add(b[k] * sn);
        }
        return f.value() * h.value();
      },
      Exec::parallel);
  return pairwise_sum(products) / double(grid);
}

double convention_factor() {
  static const double factor = [] {
    const std::int64_t K = 4096;
    // grid > 2K makes the rule exact on the truncated product
    cplx integral = parseval_quadrature(2.0, 2.0, 2.0, 2.0, K, 4 * K);
    auto sig = divisor_sigma_table(0.0, K);
    CompensatedSum<double> acc;
    for (std::int64_t k = 1; k <= K; ++k) acc.add(std::norm(sig[k]) / std::pow(double(k), 4.0));
    return integral.real() / acc.value();
  }();
  return factor;
}

ParsevalReport parseval_ratio(cplx s, cplx t, cplx u, cplx v, std::int64_t K, Exec exec) {
  require_half_plane(s + u, "s+u");
  require_half_plane(s + v, "s+v");
  require_half_plane(t + u, "t+u");
  require_half_plane(t + v, "t+v");
  require_half_plane(s + t + u + v, "s+t+u+v");
  if (K < 1) throw Error(ErrorCode::DomainError, "K must be positive", std::to_string(K));

  auto s1 = divisor_sigma_table(t - s, K), s2 = divisor_sigma_table(v - u, K);
  cplx w = t + v;
  ParsevalReport rep;
  rep.K = K;
  rep.coefficient_sum = block_sum(K, [&](std::int64_t k) { return s1[k] * s2[k] * power(double(k), -w); }, exec);
  rep.convention_factor = convention_factor();
  rep.integral = rep.convention_factor * rep.coefficient_sum;
  auto z = [](cplx x) { return hurwitz_zeta(x, 1.0).value; };
  rep.zeta_ratio = z(s + u) * z(s + v) * z(t + u) * z(t + v) / z(s + t + u + v);
  rep.ratio = rep.integral / rep.zeta_ratio;
  double expo = std::max(0.0, (t - s).real()) + std::max(0.0, (v - u).real()) - w.real();
  rep.tail = divisor_tail(expo, 2, K);
  return rep;
}

HSampleSet h_alpha_sample(cplx s, cplx t, std::int64_t grid, std::int64_t M, Exec exec) {
  if (grid < 1 || M < 1) throw Error(ErrorCode::DomainError, "grid and M must be positive", "");
  HSampleSet out;
  out.M = M;
  out.heuristic = !(s.real() > 1.0 && t.real() > 1.0);

  auto sig = divisor_sigma_table(t - s, M);
  std::vector<cplx> a(M + 1);
  double mag = 0;
  for (std::int64_t k = 1; k <= M; ++k) {
    a[k] = sig[k] * power(double(k), -t);
    if (out.heuristic) a[k] *= 1.0 - double(k) / double(M + 1);
    mag += std::abs(a[k]);
  }
  double err = std::numeric_limits<double>::quiet_NaN();
  if (!out.heuristic) err = divisor_tail(std::max(0.0, (t - s).real()) - t.real(), 1, M) + 8 * kEps * mag;

  auto sines = sine_table(grid);
  auto values = map_indices<cplx>(
      static_cast<std::size_t>(grid),
      [&](std::size_t i) {
        if (i == 0) return cplx(0.0);
        CompensatedSum<cplx> acc;
        std::int64_t j = 0;
        for (std::int64_t k = 1; k <= M; ++k) {
          j += std::int64_t(i);
          if (j >= grid) j -= grid;
          acc.add(a[k] * sines[j]);
        }
        return acc.value();
      },
      exec);
  for (std::int64_t i = 0; i < grid; ++i)
    out.samples.push_back({double(i) / double(grid), values[i], err});
  return out;
}

}  // namespace apz
