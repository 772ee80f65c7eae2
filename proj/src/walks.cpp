#include "apz/walks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "apz/error.hpp"

namespace apz {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::vector<std::int64_t> checkpoint_set(std::int64_t K, const std::vector<std::int64_t>& special) {
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 1; k <= K; k *= 2) ks.push_back(k);
  ks.push_back(K);
  for (auto k : special) {
    if (k >= 1 && k <= K) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

// Streams S_k = sum_{n<=k} term(n). Term is called exactly once per n, in order.
template <class Term>
WalkTrace run_walk(std::int64_t K, const std::vector<std::int64_t>& special, Term&& term, std::string source) {
  if (K < 1) throw Error(ErrorCode::DomainError, "walk horizon must be positive", "K=" + std::to_string(K));
  WalkTrace tr;
  tr.K = K;
  tr.source = std::move(source);
  auto ks = checkpoint_set(K, special);
  std::size_t next = 0;

  CompensatedSum<double> S;
  double running = 0;
  WindowMax win{0, 1, 0};
  for (std::int64_t n = 1; n <= K; ++n) {
    double t = term(n);
    S.add(t);
    double s = S.value();
    double a = std::fabs(s);
    running = std::max(running, a);
    win.max_abs = std::max(win.max_abs, a);
    if (n == win.k_hi || n == K) {
      tr.windows.push_back({win.k_lo, n, win.max_abs});
      win = {n, 2 * n, 0};
    }
    if (next < ks.size() && ks[next] == n) {
      tr.checkpoints.push_back({n, s, t, running});
      ++next;
    }
  }
  return tr;
}

}  // namespace

std::optional<WalkPoint> WalkTrace::at(std::int64_t k) const {
  auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), k,
                             [](const WalkPoint& p, std::int64_t v) { return p.k < v; });
  if (it == checkpoints.end() || it->k != k) return std::nullopt;
  return *it;
}

WalkTrace walk(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t K,
               const std::vector<std::int64_t>& special) {
  Phase step = alpha.phase();
  Phase x;
  auto term = [&](std::int64_t n) {
    x += step;
    try {
      return g.evaluate_real(x);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), "n=" + std::to_string(n));
    }
  };
  return run_walk(K, special, term, "g=" + g.describe() + ";alpha=" + alpha.describe());
}

WalkTrace quadratic_walk(const AlphaSpec& gamma, std::int64_t K, const std::vector<std::int64_t>& special) {
  Phase g = gamma.phase();
  Phase two_g = g + g;
  Phase x;       // n^2 gamma
  Phase odd = g; // (2n + 1) gamma
  auto term = [&](std::int64_t) {
    x += odd;
    odd += two_g;
    return std::sin(kTwoPi * x.centered());
  };
  return run_walk(K, special, term, "quadratic;gamma=" + gamma.describe());
}

WalkTrace rademacher_walk(std::uint64_t seed, std::int64_t K) {
  std::mt19937_64 rng(seed);
  auto term = [&](std::int64_t) { return (rng() >> 63) ? 1.0 : -1.0; };
  return run_walk(K, {}, term, "rademacher;seed=" + std::to_string(seed));
}

DKReport denjoy_koksma_certificate(const WalkTrace& trace, const std::vector<Convergent>& convergents,
                                   double var_g) {
  // a_m = (q_m - q_{m-2}) / q_{m-1}, q_{-1} = 0
  std::vector<std::int64_t> partial;
  for (std::size_t m = 1; m < convergents.size(); ++m) {
    std::int64_t prev2 = m >= 2 ? convergents[m - 2].q : 0;
    partial.push_back((convergents[m].q - prev2) / convergents[m - 1].q);
  }
  if (partial.size() < 3) {
    DiophantineEstimate none;
    none.c_dk = 0;
    return denjoy_koksma_certificate(trace, convergents, var_g, none);
  }
  auto cf = ContinuedFraction::from_quotients(convergents.empty() ? 0 : convergents[0].p, partial);
  return denjoy_koksma_certificate(trace, convergents, var_g, diophantine_type_estimate(cf));
}

DKReport denjoy_koksma_certificate(const WalkTrace& trace, const std::vector<Convergent>& convergents,
                                   double var_g, const DiophantineEstimate& est) {
  DKReport rep;
  for (const auto& c : convergents) {
    if (c.q > trace.K) continue;
    auto pt = trace.at(c.q);
    if (!pt) throw Error(ErrorCode::MissingCheckpoints, "no checkpoint at convergent denominator",
                         "q=" + std::to_string(c.q));
    DKCheck chk{c.q, pt->S, var_g, std::fabs(pt->S) <= var_g};
    rep.all_q_pass = rep.all_q_pass && chk.pass;
    rep.q_checks.push_back(chk);
  }

  // Ostrowski: k = sum b_m q_m with b_m <= min(q_{m+1}/q_m, k/q_m) <= c^{-1/r} k^{1-1/r},
  // and at most 2 log2(k) + 2 <= 4 log(k)/log(2) digits for k >= 2.
  if (est.c_dk > 0 && std::isfinite(est.r_hat)) {
    rep.global_checked = true;
    rep.r = est.r_hat;
    rep.C = 4 * std::pow(est.c_dk, -1 / rep.r) / std::numbers::ln2;
    for (const auto& p : trace.checkpoints) {
      if (p.k < 2) continue;
      double k = static_cast<double>(p.k);
      double bound = rep.C * std::pow(k, 1 - 1 / rep.r) * std::log(k) * var_g;
      if (std::fabs(p.S) > bound) rep.global_violations.push_back({p.k, p.S, bound});
    }
    rep.global_pass = rep.global_violations.empty();
  }
  return rep;
}

AbscissaEstimate cahen_abscissa(const WalkTrace& trace) {
  std::size_t dyadic = 0;
  for (const auto& p : trace.checkpoints) dyadic += std::has_single_bit(static_cast<std::uint64_t>(p.k));
  if (dyadic < 8) throw Error(ErrorCode::DegenerateTrace, "need at least 8 dyadic checkpoints",
                              "dyadic=" + std::to_string(dyadic));
  AbscissaEstimate est;
  bool all_zero = true;
  for (const auto& w : trace.windows) {
    all_zero = all_zero && w.max_abs == 0;
    est.window_slopes.emplace_back(std::log(static_cast<double>(w.k_hi)), std::log(std::max(w.max_abs, 1.0)));
  }
  if (all_zero) {
    est.degenerate = true;
    return est;
  }

  double n = static_cast<double>(est.window_slopes.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : est.window_slopes) {
    sx += x;
    sy += y;
  }
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
  for (auto [x, y] : est.window_slopes) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  est.sigma_hat = sxx > 0 ? sxy / sxx : 0;

  double half = 0.5 * std::log(static_cast<double>(trace.K));
  for (auto [x, y] : est.window_slopes) {
    if (x >= half && x > 0) est.sigma_ratio = std::max(est.sigma_ratio, y / x);
  }
  return est;
}

std::vector<AbscissaEstimate> rademacher_sweep(const std::vector<std::uint64_t>& seeds, std::int64_t K,
                                               Exec exec) {
  return map_indices<AbscissaEstimate>(
      seeds.size(), [&](std::size_t i) { return cahen_abscissa(rademacher_walk(seeds[i], K)); }, exec);
}

LogWalkResult log_singular_walk(const AlphaSpec& alpha, std::int64_t K) {
  if (alpha.is_rational()) throw Error(ErrorCode::RationalAlpha, "log-singular walk needs irrational alpha",
                                       alpha.describe());
  // denominators until one exceeds K
  std::vector<std::int64_t> qs;
  for (std::size_t depth = 16;; depth *= 2) {
    auto cf = cf_expand_available(alpha, depth);
    auto conv = convergents(cf, cf.size());
    qs.clear();
    for (const auto& c : conv) qs.push_back(c.q);
    if (qs.back() > K) break;
    if (cf.size() < depth) throw Error(ErrorCode::PrecisionExhausted, "convergents do not reach K",
                                       "q_max=" + std::to_string(qs.back()));
  }

  LogWalkResult res;
  Phase step = alpha.phase();
  Phase x;
  std::size_t qi = 0;
  auto term = [&](std::int64_t n) {
    x += step;
    while (qs[qi] <= n) ++qi;
    double M = 3 * std::log(static_cast<double>(qs[qi]));
    double chord = chord_to_one(x);
    double lg = chord > 0 ? std::log(chord) : -HUGE_VAL;
    if (lg < -M) {
      if (!res.truncation_active) res.first_truncated_n = n;
      res.truncation_active = true;
      lg = -M;
    }
    return 2 * lg;
  };
  res.trace = run_walk(K, qs, term, "g=logsin;alpha=" + alpha.describe());
  for (const auto& p : res.trace.checkpoints) {
    if (p.k < 3) continue;
    double L = std::log(static_cast<double>(p.k));
    res.fitted_C = std::max(res.fitted_C, p.running_max / (L * L));
  }
  return res;
}

double root_product_log_sum(std::int64_t q) {
  if (q < 1) throw Error(ErrorCode::DomainError, "q must be positive", "q=" + std::to_string(q));
  CompensatedSum<double> s;
  for (std::int64_t j = 1; j < q; ++j) {
    s.add(std::log(chord_to_one(AlphaSpec::rational(j, q).phase())));
  }
  return s.value();
}

}  // namespace apz
