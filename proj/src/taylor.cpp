#include "apz/taylor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "apz/error.hpp"

namespace apz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNearPole = 1e-8;
constexpr std::int64_t kMaxK = 1'000'000;

bool finite_g(const PeriodicFunction& g) { return g.decay_class() == DecayClass::finite; }

}  // namespace

SeriesValue taylor_eval(const PeriodicFunction& g, const AlphaSpec& alpha, cplx z, double tol) {
  double r = std::abs(z);
  if (!(r < 1.0)) throw Error(ErrorCode::DomainError, "taylor series needs |z| < 1", "abs_z=" + std::to_string(r));
  double sup = g.sup_bound();
  if (!std::isfinite(sup)) throw Error(ErrorCode::DomainError, "taylor_eval needs bounded g", g.describe());

  SeriesValue out;
  out.method = "taylor";
  if (r == 0.0 || sup == 0.0) return out;

  // smallest N with sup r^{N+1} / (1 - r) <= tol / 2
  double target = 0.5 * tol * (1.0 - r) / sup;
  std::int64_t N = 0;
  if (target < 1.0) N = static_cast<std::int64_t>(std::ceil(std::log(target) / std::log(r))) - 1;
  N = std::max<std::int64_t>(N, 1);
  if (N > 100'000'000)
    throw Error(ErrorCode::ToleranceUnreachable, "taylor series too close to the circle", "N=" + std::to_string(N));

  Phase step = alpha.phase();
  Phase x;
  cplx zn = 1.0;
  CompensatedSum<cplx> acc;
  double mag = 0;
  double eval_tol = 0.25 * tol * (1.0 - r);
  for (std::int64_t n = 1; n <= N; ++n) {
    x += step;
    zn *= z;
    cplx term = g.evaluate(x, eval_tol) * zn;
    acc.add(term);
    mag += std::abs(term);
  }
  out.value = acc.value();
  out.terms = N;
  out.err = sup * std::pow(r, double(N + 1)) / (1.0 - r) + eval_tol * r / (1.0 - r) + 4 * kEps * mag;
  return out;
}

SeriesValue pole_sum_polar(const PeriodicFunction& g, const AlphaSpec& alpha, double radius, Phase angle,
                           std::int64_t K, double tol) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::DomainError, "radius must be finite and nonnegative", std::to_string(radius));
  auto dc = g.decay_class();
  if (dc != DecayClass::finite && dc != DecayClass::analytic)
    throw Error(ErrorCode::DomainError, "pole sum needs finite or analytic-decay coefficients", g.describe());

  SeriesValue out;
  out.method = "pole_sum";
  if (radius == 0.0) return out;

  // |1 - e_k z| >= | |z| - 1 | for every k
  double floor_dist = std::fabs(radius - 1.0);
  double tail = 0;
  if (finite_g(g)) {
    K = g.degree();
  } else {
    if (floor_dist == 0.0)
      throw Error(ErrorCode::DomainError, "analytic tail unbounded on the unit circle", "abs_z=1");
    auto tail_at = [&](std::int64_t k) { return g.coefficient_tail(k) * radius / floor_dist; };
    if (K <= 0) {
      K = 1;
      while (tail_at(K) > 0.5 * tol && K < kMaxK) K *= 2;
      std::int64_t lo = K / 2;
      while (lo + 1 < K) {
        std::int64_t mid = lo + (K - lo) / 2;
        (tail_at(mid) > 0.5 * tol ? lo : K) = mid;
      }
    }
    tail = tail_at(K);
  }

  Phase step = alpha.phase();
  CompensatedSum<cplx> acc;
  double round = 0;
  for (std::int64_t k = -K; k <= K; ++k) {
    cplx c = g.coeff(k);
    if (c == cplx(0.0)) continue;
    Phase ph = step.times(k) + angle;
    cplx w = radius * unit(ph);  // e_k z
    // 1 - t e(x) = (1 - t) + t (1 - e(x)); the second part from the exact phase
    double half = std::sin(M_PI * ph.centered());
    cplx one_minus = (1.0 - radius) + radius * cplx(2 * half * half, -std::sin(2 * M_PI * ph.centered()));
    double d = std::abs(one_minus);
    if (d < kNearPole)
      throw Error(ErrorCode::NearPole, "evaluation point within 1e-8 of a retained pole",
                  "k=" + std::to_string(k) + ",dist=" + std::to_string(d));
    cplx term = c * w / one_minus;
    acc.add(term);
    round += std::abs(term) * (8 * kEps + 4 * kEps / d);
  }
  out.value = acc.value();
  out.terms = K;
  out.err = tail + round;
  return out;
}

SeriesValue pole_sum_eval(const PeriodicFunction& g, const AlphaSpec& alpha, cplx z, std::int64_t K, double tol) {
  double r = std::abs(z);
  Phase angle = r == 0.0 ? Phase() : Phase::from_double(std::arg(z) / (2 * M_PI));
  return pole_sum_polar(g, alpha, r, angle, K, tol);
}

ProbeReport radial_probe(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t j, int m_max) {
  if (alpha.is_rational())
    throw Error(ErrorCode::RationalAlpha, "radial probe needs irrational alpha", alpha.describe());
  if (m_max < 4) throw Error(ErrorCode::DomainError, "m_max must be at least 4", std::to_string(m_max));
  ProbeReport rep;
  rep.j = j;
  rep.target = g.coeff(j);
  if (rep.target == cplx(0.0))
    throw Error(ErrorCode::ZeroTargetCoefficient, "target coefficient vanishes", "j=" + std::to_string(j));

  Phase angle = -alpha.phase().times(j);
  for (int m = 4; m <= m_max; ++m) {
    double gap = std::ldexp(1.0, -m);
    double t = 1.0 - gap;
    // scaled value needs absolute accuracy ~1e-12, so f needs 1e-12 / gap
    auto f = pole_sum_polar(g, alpha, t, angle, 0, 1e-12 / gap);
    rep.t_values.push_back(t);
    rep.values.push_back(f.value);
    rep.scaled.push_back(gap * f.value);
  }
  for (std::size_t i = 1; i < rep.scaled.size(); ++i)
    rep.cauchy_diffs.push_back(std::abs(rep.scaled[i] - rep.scaled[i - 1]));
  rep.limit_estimate = rep.scaled.back();
  rep.deviation = std::abs(rep.limit_estimate - rep.target);
  return rep;
}

std::vector<ProbeReport> radial_probes(const PeriodicFunction& g, const AlphaSpec& alpha,
                                       const std::vector<std::int64_t>& js, int m_max, Exec exec) {
  return map_indices<ProbeReport>(
      js.size(), [&](std::size_t i) { return radial_probe(g, alpha, js[i], m_max); }, exec);
}

SeriesValue rational_taylor(const PeriodicFunction& g, std::int64_t p, std::int64_t q, cplx z) {
  if (q <= 0) throw Error(ErrorCode::DomainError, "q must be positive", std::to_string(q));
  std::vector<cplx> vals(q);
  for (std::int64_t n = 1; n <= q; ++n) {
    std::int64_t r = ((n * p) % q + q) % q;
    vals[n - 1] = g.evaluate(double(r) / double(q));
  }
  // h and h' by Horner
  cplx h = 0, dh = 0;
  double mag = 0;
  for (std::int64_t n = q; n >= 1; --n) {
    dh = dh * z + h;
    h = h * z + vals[n - 1];
    mag = mag * std::abs(z) + std::abs(vals[n - 1]);
  }
  dh = dh * z + h;
  h *= z;
  mag *= std::abs(z);
  cplx zq = std::pow(z, double(q));
  cplx root = std::polar(1.0, 2 * M_PI * std::round(std::arg(z) * double(q) / (2 * M_PI)) / double(q));
  if (std::abs(z - root) < 1e-12) {
    if (std::abs(h) > 1e-10 * std::max(1.0, mag))
      throw Error(ErrorCode::PoleAtRootOfUnity, "z^q = 1 and h(z) != 0",
                  "z=" + std::to_string(z.real()) + "," + std::to_string(z.imag()));
    // removable: h'(z) / (-q z^{q-1})
    SeriesValue out;
    out.value = dh / (-double(q) * std::pow(z, double(q - 1)));
    out.err = 1e-10 * std::max(1.0, std::abs(out.value));
    out.terms = q;
    out.method = "rational_removable";
    return out;
  }
  SeriesValue out;
  out.value = h / (1.0 - zq);
  out.terms = q;
  out.method = "rational";
  out.err = 4 * kEps * double(q) * (mag + std::abs(h)) / std::abs(1.0 - zq) * (1.0 + std::abs(zq));
  return out;
}

Arc Arc::from_turns(double start, double length) {
  Arc a;
  a.start = Phase::from_double(start);
  if (!(length >= 0.0)) throw Error(ErrorCode::DomainError, "arc length must be nonnegative", std::to_string(length));
  if (length >= 1.0) {
    a.full = true;
  } else {
    a.length = Phase::from_double(length).raw();
  }
  return a;
}

PeriodicFunction masked_series(const AlphaSpec& alpha, const std::vector<Arc>& arcs, std::int64_t K) {
  if (K < 0) throw Error(ErrorCode::DomainError, "K must be nonnegative", std::to_string(K));
  if (alpha.is_rational())
    throw Error(ErrorCode::RationalAlpha, "masked series needs irrational alpha", alpha.describe());
  std::map<std::int64_t, cplx> table;
  Phase step = alpha.phase();
  double fact = 1.0;
  for (std::int64_t k = 0; k <= K; ++k) {
    if (k > 0) fact *= double(k);
    for (std::int64_t sk : {k, -k}) {
      if (k == 0 && sk != 0) continue;
      Phase pole = -step.times(sk);
      bool masked = false;
      for (const auto& a : arcs) masked = masked || a.contains(pole);
      if (!masked) table[sk] = 1.0 / fact;
    }
  }
  if (table.empty()) throw Error(ErrorCode::EmptyMask, "every coefficient is masked", "K=" + std::to_string(K));
  return make_trig_poly(std::move(table));
}

}  // namespace apz
