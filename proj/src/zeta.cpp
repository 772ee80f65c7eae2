#include "apz/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "apz/error.hpp"

namespace apz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;
constexpr double kEvalTol = 1e-14;
constexpr std::int64_t kDefaultNCap = 10'000'000;
constexpr int kMaxRounds = 6;

std::string fmt_s(cplx s) { return "s=" + std::to_string(s.real()) + "," + std::to_string(s.imag()); }

// e^{2 pi i x} - 1 = 2i sin(pi x) e^{pi i x}
cplx unit_minus_one(Phase x) {
  double h = kPi * x.centered();
  return cplx(0, 2 * std::sin(h)) * std::polar(1.0, h);
}

bool has_zero_mean(const PeriodicFunction& g) { return std::abs(g.mean()) <= 1e-15; }

// Fourier tables of the iterated transfers h_1 .. h_J of g, truncated at |k| <= K.
struct Tower {
  std::vector<std::int64_t> ks;
  std::vector<std::vector<cplx>> h;  // h[j][i]: coefficient of h_j at ks[i]; h[0] is g itself
  std::vector<double> sup;           // sup[j] >= sup |h_j|
  std::vector<double> tail;          // tail[j] >= sup of the dropped part of h_j

  int rounds() const { return static_cast<int>(sup.size()) - 1; }

  cplx eval(int j, Phase x) const {
    cplx s{};
    for (std::size_t i = 0; i < ks.size(); ++i) s += h[j][i] * unit(x.times(ks[i]));
    return s;
  }
};

Tower build_tower(const PeriodicFunction& g, const AlphaSpec& alpha, const DiophantineEstimate& est,
                  std::int64_t K) {
  Tower t;
  std::vector<cplx> c;
  if (g.decay_class() == DecayClass::finite) {
    for (const auto& [k, ck] : g.table()) {
      if (k == 0) continue;
      t.ks.push_back(k);
      c.push_back(ck);
    }
  } else {
    for (std::int64_t k = -K; k <= K; ++k) {
      if (k == 0) continue;
      cplx ck = g.coeff(k);
      if (ck == cplx{}) continue;
      t.ks.push_back(k);
      c.push_back(ck);
    }
  }
  std::vector<cplx> denom(t.ks.size());
  Phase a = alpha.phase();
  for (std::size_t i = 0; i < t.ks.size(); ++i) denom[i] = unit_minus_one(a.times(t.ks[i]));

  t.h.push_back(c);
  t.sup.push_back(g.sup_bound());
  t.tail.push_back(g.decay_class() == DecayClass::finite ? 0.0 : g.weighted_tail(K, 0, est));
  for (int j = 1; j <= kMaxRounds; ++j) {
    double tail = g.decay_class() == DecayClass::finite ? 0.0 : g.weighted_tail(K, j, est);
    if (!std::isfinite(tail)) break;
    std::vector<cplx> next(t.ks.size());
    double s = 0;
    for (std::size_t i = 0; i < t.ks.size(); ++i) {
      next[i] = t.h.back()[i] / denom[i];
      s += std::abs(next[i]);
    }
    t.h.push_back(std::move(next));
    t.sup.push_back(s + tail);
    t.tail.push_back(tail);
  }
  return t;
}

double pochhammer_abs(cplx s, int J) {
  double p = 1;
  for (int i = 0; i < J; ++i) p *= std::abs(s + static_cast<double>(i));
  return p;
}

// j-th backward difference of n^{-s} at m
cplx backward_difference(cplx s, int j, std::int64_t m) {
  cplx sum{};
  double binom = 1;
  for (int i = 0; i <= j; ++i) {
    double sign = i % 2 == 0 ? 1.0 : -1.0;
    sum += sign * binom * std::exp(-s * std::log(static_cast<double>(m - i)));
    binom = binom * (j - i) / (i + 1);
  }
  return sum;
}

struct Plan {
  int J = -1;
  std::int64_t N = 0;
  double remainder = HUGE_VAL;
};

Plan choose_plan(const Tower* tower, double sup_g, cplx s, double tol, std::int64_t cap, bool allow_rounds) {
  const double sigma = s.real();
  Plan best;
  double best_rem = HUGE_VAL;
  int Jmax = allow_rounds && tower ? tower->rounds() : 0;
  for (int J = 0; J <= Jmax; ++J) {
    if (sigma + J - 1 <= 0) continue;
    double sup = J == 0 ? sup_g : tower->sup[J];
    if (!std::isfinite(sup)) break;
    double c = sup * pochhammer_abs(s, J);
    auto rem = [&](double N) { return c * (std::pow(N, -sigma - J) + std::pow(N, 1 - sigma - J) / (sigma + J - 1)); };
    double N = 16;
    while (rem(N) > 0.5 * tol && N < static_cast<double>(cap)) N = std::ceil(N * 1.1);
    N = std::min(N, static_cast<double>(cap));
    best_rem = std::min(best_rem, rem(N));
    if (rem(N) <= 0.5 * tol && (best.J < 0 || N < static_cast<double>(best.N))) {
      best = {J, static_cast<std::int64_t>(N), rem(N)};
    }
  }
  if (best.J < 0) {
    throw Error(ErrorCode::ConvergenceTooSlow, "tail bound above tolerance at the term cap",
                fmt_s(s) + " best_bound=" + std::to_string(best_rem));
  }
  return best;
}

struct HeadBlock {
  cplx value;
  double abs_terms;
  double weights;
};

// sum_{n=1}^{N-1} g(n alpha) n^{-s} in fixed blocks, reduced pairwise.
HeadBlock head_sum(const PeriodicFunction& g, Phase step, cplx s, std::int64_t N, Exec exec) {
  constexpr std::int64_t B = 4096;
  const std::int64_t last = N - 1;
  const auto blocks = static_cast<std::size_t>((last + B - 1) / B);
  auto parts = map_indices<HeadBlock>(
      blocks,
      [&](std::size_t b) {
        std::int64_t lo = 1 + static_cast<std::int64_t>(b) * B, hi = std::min(last, lo + B - 1);
        CompensatedSum<cplx> acc;
        double abs_terms = 0, weights = 0;
        Phase x = step.times(lo);
        for (std::int64_t n = lo; n <= hi; ++n, x += step) {
          cplx w = std::exp(-s * std::log(static_cast<double>(n)));
          cplx t;
          try {
            t = g.evaluate(x, kEvalTol) * w;
          } catch (const Error& e) {
            throw Error(e.code(), e.what(), "n=" + std::to_string(n));
          }
          acc.add(t);
          abs_terms += std::abs(t);
          weights += std::abs(w);
        }
        return HeadBlock{acc.value(), abs_terms, weights};
      },
      exec);
  std::vector<cplx> vals;
  HeadBlock out{{}, 0, 0};
  for (const auto& p : parts) {
    vals.push_back(p.value);
    out.abs_terms += p.abs_terms;
    out.weights += p.weights;
  }
  out.value = pairwise_sum(vals);
  return out;
}

}  // namespace

SeriesValue zeta_direct(const ZetaRequest& req) {
  const cplx s = req.s;
  const double sigma = s.real();
  if (!(req.tol > 0)) throw Error(ErrorCode::DomainError, "tol must be positive", std::to_string(req.tol));
  if (sigma <= 0) throw Error(ErrorCode::DomainError, "direct summation needs Re s > 0", fmt_s(s));
  const bool zero_mean = has_zero_mean(req.g);
  if (sigma <= 1) {
    if (!zero_mean) throw Error(ErrorCode::NonzeroMean, "partial sums grow linearly; need Re s > 1", fmt_s(s));
    if (req.alpha.is_rational()) {
      throw Error(ErrorCode::RationalAlpha, "no transfer for rational alpha; need Re s > 1", req.alpha.describe());
    }
  }
  const std::int64_t cap = req.N_direct > 0 ? req.N_direct : kDefaultNCap;
  const bool rounds = zero_mean && !req.alpha.is_rational();
  Phase step = req.alpha.phase();

  DiophantineEstimate est;
  if (rounds) est = estimate_for(req.alpha);

  Tower tower;
  Plan plan;
  double boundary_tail = 0;
  for (std::int64_t K = 64;; K *= 4) {
    if (rounds) tower = build_tower(req.g, req.alpha, est, K);
    plan = choose_plan(rounds ? &tower : nullptr, req.g.sup_bound(), s, req.tol, cap, rounds);
    boundary_tail = 0;
    for (int j = 1; j <= plan.J; ++j) {
      boundary_tail += tower.tail[j] * std::abs(backward_difference(s, j - 1, plan.N + j - 1));
    }
    if (boundary_tail <= req.tol / 8 || req.g.decay_class() == DecayClass::finite || K >= (1 << 20)) break;
  }

  HeadBlock head = head_sum(req.g, step, s, plan.N, req.exec);
  // boundary terms (-1)^j h_j((N+j-1) alpha) w_{j-1}(N+j-1)
  cplx boundary{};
  for (int j = 1; j <= plan.J; ++j) {
    std::int64_t m = plan.N + j - 1;
    cplx term = tower.eval(j, step.times(m)) * backward_difference(s, j - 1, m);
    boundary += (j % 2 == 0 ? 1.0 : -1.0) * term;
  }

  SeriesValue out;
  out.value = head.value + boundary;
  out.err = plan.remainder + boundary_tail + kEvalTol * head.weights + 4 * kEps * head.abs_terms;
  out.terms = plan.N;
  out.depth = plan.J;
  out.method = "direct_abel(" + std::to_string(plan.J) + ")";
  return out;
}

SeriesValue zeta_polylog(const ZetaRequest& req) {
  const auto& g = req.g;
  if (req.alpha.is_rational()) {
    throw Error(ErrorCode::RationalAlpha, "polylog expansion needs irrational alpha", req.alpha.describe());
  }
  if (!has_zero_mean(g)) throw Error(ErrorCode::NonzeroMean, "polylog expansion needs c_0 = 0", g.describe());
  if (g.decay_class() != DecayClass::finite && g.decay_class() != DecayClass::analytic) {
    throw Error(ErrorCode::DomainError, "polylog expansion needs finite or analytic Fourier decay", g.describe());
  }
  if (!(req.tol > 0)) throw Error(ErrorCode::DomainError, "tol must be positive", std::to_string(req.tol));
  const cplx s = req.s;
  const auto est = estimate_for(req.alpha);
  const auto B = lerch_majorant_coefficients(s, 1.0);
  // |Li_s(z)| <= sum_j B_j lb^{-j-1} with lb >= |z - 1|/2 >= 2 C / k^r
  auto tail = [&](std::int64_t K) {
    double t = 0;
    for (std::size_t j = 0; j < B.size(); ++j) {
      t += B[j] * std::pow(2.0, static_cast<double>(j + 1)) * g.weighted_tail(K, static_cast<int>(j + 1), est);
    }
    return t;
  };

  std::int64_t K = req.K_fourier;
  if (g.decay_class() == DecayClass::finite) {
    if (K <= 0) K = g.degree();
  } else if (K <= 0) {
    const double delta = g.decay_parameter();
    K = 1;
    while (std::exp(-delta * K) * std::pow(static_cast<double>(K), est.r_hat + 1) >= req.tol / 10) ++K;
    while (tail(K) > req.tol / 2) {
      K += std::max<std::int64_t>(1, K / 8);
      if (K > 4096) throw Error(ErrorCode::ConvergenceTooSlow, "Fourier cutoff above 4096", g.describe());
    }
  }
  const double tail_bound = tail(K);

  std::vector<std::int64_t> ks;
  std::vector<cplx> cs;
  for (std::int64_t k = -K; k <= K; ++k) {
    if (k == 0) continue;
    cplx c = g.coeff(k);
    if (c == cplx{}) continue;
    ks.push_back(k);
    cs.push_back(c);
  }
  Phase a = req.alpha.phase();
  for (auto k : ks) {
    double chord = chord_to_one(a.times(k));
    double floor = 4 * est.norm_floor(k);
    if (chord < floor) {
      throw Error(ErrorCode::SmallDivisorOverflow, "|e(k alpha) - 1| below the Diophantine floor",
                  "k=" + std::to_string(k) + " chord=" + std::to_string(chord) + " floor=" + std::to_string(floor));
    }
  }

  const double n_terms = static_cast<double>(std::max<std::size_t>(ks.size(), 1));
  auto parts = map_indices<std::pair<cplx, double>>(
      ks.size(),
      [&](std::size_t i) {
        double tol_k = std::min(1e-3, req.tol / (4 * n_terms * std::abs(cs[i])));
        auto v = polylog(a.times(ks[i]), s, tol_k);
        return std::make_pair(cs[i] * v.value, std::abs(cs[i]) * v.err);
      },
      req.exec);
  std::vector<cplx> vals;
  double err = tail_bound;
  for (const auto& [v, e] : parts) {
    vals.push_back(v);
    err += e;
  }

  SeriesValue out;
  out.value = pairwise_sum(vals);
  out.err = err;
  out.terms = K;
  out.depth = LerchParams(0.5, s).continuation_depth();
  out.method = "polylog";
  return out;
}

SeriesValue zeta_rational(const PeriodicFunction& g, std::int64_t p, std::int64_t q, cplx s, double tol) {
  if (q < 1) throw Error(ErrorCode::DomainError, "q must be positive", std::to_string(q));
  std::vector<cplx> gl(static_cast<std::size_t>(q));
  cplx total{};
  for (std::int64_t l = 1; l <= q; ++l) {
    std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(l) * p) % q);
    if (r < 0) r += q;
    gl[static_cast<std::size_t>(l - 1)] = g.evaluate(AlphaSpec::rational(r, q).phase(), kEvalTol);
    total += gl[static_cast<std::size_t>(l - 1)];
  }
  if (std::abs(total) > 1e-10) {
    throw Error(ErrorCode::NonOddResidue, "sum of g over the residues is nonzero; the series has a pole at s = 1",
                "sum=" + std::to_string(std::abs(total)));
  }
  const cplx scale = std::exp(-s * std::log(static_cast<double>(q)));
  CompensatedSum<cplx> acc;
  double err = 0;
  for (std::int64_t l = 1; l <= q; ++l) {
    const cplx gv = gl[static_cast<std::size_t>(l - 1)];
    if (gv == cplx{}) continue;
    auto z = hurwitz_zeta_regularized(s, static_cast<double>(l) / static_cast<double>(q), tol);
    acc.add(gv * z.value);
    err += std::abs(gv) * z.err + kEvalTol * std::abs(z.value);
  }
  SeriesValue out;
  out.value = scale * acc.value();
  out.err = std::abs(scale) * err;
  if (s != cplx(1.0)) out.err += std::abs(scale) * std::abs(total) / std::abs(s - 1.0);
  out.terms = q;
  out.method = "rational";
  return out;
}

SeriesValue zeta_auto(const ZetaRequest& req) {
  if (req.alpha.is_rational()) return zeta_rational(req.g, req.alpha.p(), req.alpha.q(), req.s);
  auto dc = req.g.decay_class();
  if ((dc == DecayClass::finite || dc == DecayClass::analytic) && has_zero_mean(req.g)) return zeta_polylog(req);
  return zeta_direct(req);
}

SeriesValue zeta_by_method(const ZetaRequest& req, const std::string& method) {
  if (method == "direct") return zeta_direct(req);
  if (method == "polylog") return zeta_polylog(req);
  if (method == "rational") {
    if (!req.alpha.is_rational()) {
      throw Error(ErrorCode::DomainError, "rational method needs rational alpha", req.alpha.describe());
    }
    return zeta_rational(req.g, req.alpha.p(), req.alpha.q(), req.s);
  }
  if (method == "auto") return zeta_auto(req);
  throw Error(ErrorCode::ParseError, "unknown zeta method", method);
}

}  // namespace apz
