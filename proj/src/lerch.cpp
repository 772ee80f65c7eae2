#include "apz/lerch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "apz/error.hpp"
#include "apz/kernels.hpp"

namespace apz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_2, B_4, ..., B_20
constexpr double kBernoulliEven[] = {1.0 / 6,         -1.0 / 30,         1.0 / 42,    -1.0 / 30,
                                     5.0 / 66,        -691.0 / 2730,     7.0 / 6,     -3617.0 / 510,
                                     43867.0 / 798,   -174611.0 / 330};

std::string fmt_cplx(cplx s) {
  return std::to_string(s.real()) + (s.imag() < 0 ? "" : "+") + std::to_string(s.imag()) + "i";
}

// log Gamma(z) for |z| >= 12, Re z > 0.
cplx stirling(cplx z) {
  cplx r = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * kPi);
  cplx zinv = 1.0 / z, z2 = zinv * zinv, pw = zinv;
  for (int k = 1; k <= 10; ++k) {
    r += kBernoulliEven[k - 1] / (2.0 * k * (2.0 * k - 1)) * pw;
    pw *= z2;
  }
  return r;
}

int shift_for(cplx s) {
  int n = 0;
  while (std::abs(s + static_cast<double>(n)) < 12) ++n;
  return n;
}

bool is_nonpositive_integer(cplx s) {
  return s.imag() == 0 && s.real() <= 0 && s.real() == std::floor(s.real());
}

// 7-point Gauss / 15-point Kronrod (QUADPACK qk15 constants).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double err;
  double absval;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const std::function<cplx(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx k = kWgk[7] * fc, g = kWg[3] * fc;
  double absval = kWgk[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    cplx f1 = f(c - h * kXgk[i]), f2 = f(c + h * kXgk[i]);
    k += kWgk[i] * (f1 + f2);
    absval += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) g += kWg[i / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h), absval * std::fabs(h)};
}

// 1 - z e^{-t} without cancellation near t = 0.
struct Denominator {
  cplx z, one_minus_z;
  cplx operator()(double t) const { return one_minus_z - z * std::expm1(-t); }
};

double tail_bound(double T, double sigma, double b, double lb, int j) {
  double beta = b - std::max(0.0, sigma - 1) / T;
  if (beta <= 0) return HUGE_VAL;
  return std::pow(T, sigma - 1) * std::exp(-b * T) / (beta * std::pow(lb, j + 1));
}

double factorial(int j) {
  double f = 1;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

SeriesValue lerch_core(const LerchParams& p, int j, double tol) {
  const cplx s = p.s();
  const double sigma = s.real();
  if (sigma <= 1) throw Error(ErrorCode::DomainError, "integral representation needs Re s > 1", fmt_cplx(s));
  if (j < 0) throw Error(ErrorCode::DomainError, "derivative order must be nonnegative", std::to_string(j));
  const double cond = p.conditioning();
  if (cond < 1e-8) throw Error(ErrorCode::IllConditioned, "|z - 1| below 1e-8", std::to_string(cond));

  const cplx z = p.z();
  const double x = 2 * kPi * p.z_phase().centered();
  Denominator den{z, cplx(0, -2 * std::sin(x / 2)) * std::polar(1.0, x / 2)};
  const double b = p.a() + j;
  // min over t >= 0 of |1 - z e^{-t}|: distance from 1 to the segment [0, z]
  const double lb = z.real() > 0 ? std::fabs(z.imag()) : 1.0;

  const cplx fac = factorial(j) / gamma_complex(s);
  const double scale = std::abs(fac);
  const double quad_tol = 0.5 * tol / scale;

  double T = 4;
  while (tail_bound(T, sigma, b, lb, j) * scale > 0.5 * tol) {
    T *= 1.25;
    if (T > 1e6) throw Error(ErrorCode::QuadratureFailure, "integral tail does not decay", fmt_cplx(s));
  }

  const int pw = j + 1;
  auto F = [&](double t) {
    cplx num = std::exp((s - 1.0) * std::log(t) - b * t);
    return num / std::pow(den(t), pw);
  };
  QuadResult head;
  if (sigma < 2) {
    // t = u^2 softens the t^{s-1} endpoint
    auto G = [&](double u) {
      double t = u * u;
      cplx num = 2.0 * std::exp((2.0 * s - 1.0) * std::log(u) - b * t);
      return num / std::pow(den(t), pw);
    };
    head = integrate_gk(G, 0, 1, 0.5 * quad_tol);
  } else {
    head = integrate_gk(F, 0, 1, 0.5 * quad_tol);
  }
  QuadResult body = integrate_gk(F, 1, T, 0.5 * quad_tol);
  if (!head.converged || !body.converged) {
    throw Error(ErrorCode::QuadratureFailure, "tolerance not met at node cap",
                "s=" + fmt_cplx(s) + " j=" + std::to_string(j));
  }
  SeriesValue out;
  out.value = fac * (head.value + body.value);
  out.err = scale * (head.err + body.err) + scale * tail_bound(T, sigma, b, lb, j);
  out.terms = head.nodes + body.nodes;
  out.method = "integral";
  return out;
}

cplx expm1_over(cplx w) {
  if (std::abs(w) < 1e-4) return 1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0;
  return expm1_complex(w) / w;
}

SeriesValue hurwitz_core(cplx s, double u, double tol, bool regularized) {
  if (!(u > 0)) throw Error(ErrorCode::DomainError, "Hurwitz parameter must be positive", std::to_string(u));
  constexpr int M = 9;  // Bernoulli terms B_2 .. B_18
  const double sigma = s.real();
  if (sigma + 2 * M - 1 <= 0.5) {
    throw Error(ErrorCode::DomainError, "Re s too negative for the Euler-Maclaurin remainder", fmt_cplx(s));
  }
  // |R| <= 4 |(s)_{2M}| / ((2 pi)^{2M} (sigma + 2M - 1)) (N + u)^{1 - sigma - 2M}
  double poch = 1;
  for (int i = 0; i < 2 * M; ++i) poch *= std::abs(s + static_cast<double>(i));
  const double rem_c = 4 * poch / (std::pow(2 * kPi, 2 * M) * (sigma + 2 * M - 1));
  auto remainder = [&](double N) { return rem_c * std::pow(N + u, 1 - sigma - 2 * M); };
  std::int64_t N = 8;
  while (remainder(static_cast<double>(N)) > 0.5 * tol) {
    N = N + N / 2;
    if (N > 10'000'000) throw Error(ErrorCode::ConvergenceTooSlow, "Euler-Maclaurin cutoff too large", fmt_cplx(s));
  }

  CompensatedSum<cplx> head;
  double absum = 0;
  for (std::int64_t k = 0; k < N; ++k) {
    cplx t = std::exp(-s * std::log(static_cast<double>(k) + u));
    head.add(t);
    absum += std::abs(t);
  }
  const double Nu = static_cast<double>(N) + u;
  const double L = std::log(Nu);
  cplx v = head.value();
  if (regularized) {
    v += -L * expm1_over((1.0 - s) * L);
  } else {
    v += std::exp((1.0 - s) * L) / (s - 1.0);
  }
  v += 0.5 * std::exp(-s * L);
  // B_{2k}/(2k)! (s)_{2k-1} (N+u)^{-s-2k+1}
  cplx poch_c = s;  // (s)_1
  cplx pw = std::exp(-(s + 1.0) * L);
  double fact = 2;  // (2k)!
  for (int k = 1; k <= M; ++k) {
    v += kBernoulliEven[k - 1] / fact * poch_c * pw;
    poch_c *= (s + (2.0 * k - 1)) * (s + 2.0 * k);
    pw /= Nu * Nu;
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
  }
  SeriesValue out;
  out.value = v;
  out.err = remainder(static_cast<double>(N)) + 8 * kEps * (absum + std::abs(v));
  out.terms = N;
  out.method = "euler_maclaurin";
  return out;
}

}  // namespace

cplx expm1_complex(cplx w) {
  double x = w.real(), y = w.imag();
  double sh = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2 * sh * sh, std::exp(x) * std::sin(y)};
}

cplx lgamma_complex(cplx s) {
  if (s.real() <= 0) throw Error(ErrorCode::DomainError, "lgamma_complex needs Re s > 0", fmt_cplx(s));
  int n = shift_for(s);
  cplx r = stirling(s + static_cast<double>(n));
  for (int k = 0; k < n; ++k) r -= std::log(s + static_cast<double>(k));
  return r;
}

cplx gamma_complex(cplx s) {
  if (is_nonpositive_integer(s)) throw Error(ErrorCode::PoleError, "Gamma has a pole here", fmt_cplx(s));
  if (s.real() < 0.5) return kPi / (std::sin(kPi * s) * gamma_complex(1.0 - s));
  int n = shift_for(s);
  cplx g = std::exp(stirling(s + static_cast<double>(n)));
  cplx prod = 1;
  for (int k = 0; k < n; ++k) prod *= s + static_cast<double>(k);
  return g / prod;
}

QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                        std::int64_t node_cap) {
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  heap.push(first);
  QuadResult r;
  r.nodes = 15;
  double err = first.err, absval = first.absval;
  // the roundoff floor: no rule resolves below a few ulps of int |f|
  auto target = [&] { return std::max(abs_tol, 50 * kEps * absval); };
  while (err > target() && r.nodes + 30 <= node_cap) {
    Segment worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Segment left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    r.nodes += 30;
    err += left.err + right.err - worst.err;
    absval += left.absval + right.absval - worst.absval;
    heap.push(left);
    heap.push(right);
  }
  // re-add from scratch to shed drift in the running totals
  std::vector<cplx> parts;
  double err_sum = 0;
  absval = 0;
  while (!heap.empty()) {
    parts.push_back(heap.top().value);
    err_sum += heap.top().err;
    absval += heap.top().absval;
    heap.pop();
  }
  CompensatedSum<cplx> total;
  for (const auto& v : parts) total.add(v);
  r.value = total.value();
  r.err = err_sum + 50 * kEps * absval;
  r.converged = err_sum <= target();
  return r;
}

LerchParams::LerchParams(Phase z_phase, cplx s, double a) : phase_(z_phase), s_(s), a_(a) {
  if (!(a > 0)) throw Error(ErrorCode::DomainError, "Lerch parameter a must be positive", std::to_string(a));
  if (z_phase.is_zero()) throw Error(ErrorCode::IllConditioned, "z = 1 is not admissible", "phase=0");
}

cplx LerchParams::z() const { return std::polar(1.0, 2 * kPi * phase_.centered()); }

double LerchParams::conditioning() const { return 2 * std::fabs(std::sin(kPi * phase_.centered())); }

int LerchParams::continuation_depth() const {
  double sigma = s_.real();
  if (sigma > 1) return 0;
  return static_cast<int>(std::floor(1 - sigma)) + 1;
}

SeriesValue lerch_integral(const LerchParams& p, double tol) { return lerch_core(p, 0, tol); }

SeriesValue lerch_derivative(const LerchParams& p, int j, double tol) {
  auto v = lerch_core(p, j, tol);
  v.method = "integral(d" + std::to_string(j) + ")";
  return v;
}

std::vector<double> operator_coefficients(int m, double a) {
  std::vector<double> A{1.0};
  for (int step = 0; step < m; ++step) {
    std::vector<double> next(A.size() + 1, 0.0);
    for (std::size_t j = 0; j < next.size(); ++j) {
      if (j < A.size()) next[j] += (a + static_cast<double>(j)) * A[j];
      if (j >= 1) next[j] += A[j - 1];
    }
    A = std::move(next);
  }
  return A;
}

SeriesValue lerch_continued(Phase z_phase, cplx s, double a, double tol) {
  LerchParams p(z_phase, s, a);
  int m = p.continuation_depth();
  if (m > 12) throw Error(ErrorCode::DepthCap, "continuation depth above 12", "m=" + std::to_string(m));
  if (m == 0) return lerch_integral(p, tol);

  LerchParams shifted(z_phase, s + static_cast<double>(m), a);
  auto A = operator_coefficients(m, a);
  cplx z = p.z(), zj = 1;
  SeriesValue out;
  for (int j = 0; j <= m; ++j) {
    double tol_j = tol / ((m + 1) * A[j]);
    auto d = lerch_core(shifted, j, tol_j);
    out.value += A[j] * zj * d.value;
    out.err += A[j] * d.err;
    out.terms += d.terms;
    zj *= z;
  }
  out.method = "recursion(" + std::to_string(m) + ")";
  out.depth = m;
  return out;
}

SeriesValue lerch_continued(double z_phase, cplx s, double a, double tol) {
  return lerch_continued(Phase::from_double(z_phase), s, a, tol);
}

std::vector<double> lerch_majorant_coefficients(cplx s, double a) {
  int m = LerchParams(0.5, s, a).continuation_depth();
  cplx sp = s + static_cast<double>(m);
  double sig = sp.real();
  // |d^j L(z, s')| <= j! Gamma(sigma') / (|Gamma(s')| (a+j)^sigma' lb^{j+1})
  double base = std::tgamma(sig) / std::abs(gamma_complex(sp));
  auto A = operator_coefficients(m, a);
  std::vector<double> B(A.size());
  for (std::size_t j = 0; j < A.size(); ++j) {
    B[j] = A[j] * factorial(static_cast<int>(j)) * base / std::pow(a + static_cast<double>(j), sig);
  }
  return B;
}

SeriesValue polylog(Phase z_phase, cplx s, double tol) {
  if (z_phase.is_zero()) throw Error(ErrorCode::IllConditioned, "polylog at z = 1 is not admissible", "phase=0");
  auto v = lerch_continued(z_phase, s, 1.0, tol);
  v.value *= std::polar(1.0, 2 * kPi * z_phase.centered());
  return v;
}

SeriesValue polylog(double z_phase, cplx s, double tol) { return polylog(Phase::from_double(z_phase), s, tol); }

SeriesValue hurwitz_zeta(cplx s, double u, double tol) {
  if (s == cplx(1.0)) throw Error(ErrorCode::PoleError, "Hurwitz zeta has a pole at s = 1", "s=1");
  return hurwitz_core(s, u, tol, false);
}

SeriesValue hurwitz_zeta_regularized(cplx s, double u, double tol) { return hurwitz_core(s, u, tol, true); }

}  // namespace apz
