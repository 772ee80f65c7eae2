#include "apz/diophantine.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "apz/error.hpp"

namespace apz {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;
using BigRational = mp::cpp_rational;

namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(std::int64_t n) {
  if (n < 0) return false;
  std::int64_t r = isqrt(n);
  return r * r == n;
}

std::int64_t narrow(i128 v, const char* what) {
  if (v > kInt64Max || v < -kInt64Max) {
    throw Error(ErrorCode::DomainError, std::string("integer overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

// Exact decimal value of the digit string as a rational.
BigRational decimal_value(const std::string& digits) {
  std::string s = digits;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  auto dot = s.find('.');
  std::string int_part = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw Error(ErrorCode::ParseError, "empty decimal", digits);
  }
  for (char c : int_part + frac_part) {
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad decimal digit", digits);
  }
  BigInt num(int_part.empty() ? std::string("0") : int_part);
  BigInt scale = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    scale *= 10;
  }
  if (negative) num = -num;
  return BigRational(num, scale);
}

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

BigInt big_floor(const BigRational& x) {
  BigInt n = mp::numerator(x), d = mp::denominator(x);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

Phase phase_from_big(const BigInt& scaled) {
  // scaled = floor(alpha * 2^128); reduce mod 2^128 into [0, 2^128)
  BigInt modulus = BigInt(1) << 128;
  BigInt r = scaled % modulus;
  if (r < 0) r += modulus;
  u128 raw = 0;
  for (int limb = 3; limb >= 0; --limb) {
    std::uint32_t part = static_cast<std::uint32_t>((r >> (32 * limb)) & 0xffffffffu);
    raw = (raw << 32) | part;
  }
  return Phase::from_raw(raw);
}

// State of the surd expansion: x = (P + sqrt(N)) / Q with Q | N - P^2.
struct SurdState {
  i128 P, N, Q;
  std::int64_t root;  // floor(sqrt(N))
};

SurdState surd_initial(const AlphaSpec& a) {
  i128 N = static_cast<i128>(a.B()) * a.B() * a.D();
  i128 P = a.B() > 0 ? a.A() : -static_cast<i128>(a.A());
  i128 Q = a.B() > 0 ? a.Q() : -static_cast<i128>(a.Q());
  if ((N - P * P) % Q != 0) {
    i128 absQ = Q < 0 ? -Q : Q;
    P *= absQ;
    N *= Q * Q;
    Q *= absQ;
  }
  SurdState s{P, N, Q, 0};
  s.root = isqrt(narrow(N, "surd radicand"));
  return s;
}

i128 surd_floor(const SurdState& s) {
  if (s.Q > 0) return floor_div(s.P + s.root, s.Q);
  return floor_div(-s.P - s.root - 1, -s.Q);
}

void surd_advance(SurdState& s, i128 a) {
  i128 P1 = a * s.Q - s.P;
  i128 Q1 = (s.N - P1 * P1) / s.Q;
  s.P = P1;
  s.Q = Q1;
}

long double surd_value(const SurdState& s) {
  return (static_cast<long double>(s.P) + std::sqrt(static_cast<long double>(s.N))) /
         static_cast<long double>(s.Q);
}

// Tracks q_m alongside the expansion so callers can stop before overflow.
struct DenominatorTracker {
  i128 q_prev = 0, q = 1;
  bool push(std::int64_t a) {
    i128 next = static_cast<i128>(a) * q + q_prev;
    if (next > kInt64Max) return false;
    q_prev = q;
    q = next;
    return true;
  }
};

struct ExpandOptions {
  std::size_t depth;
  bool fail_on_exhaustion;
  std::int64_t q_limit;  // stop once q exceeds this (0 = no limit)
};

ContinuedFraction expand(const AlphaSpec& alpha, const ExpandOptions& opt) {
  ContinuedFraction cf;
  DenominatorTracker tracker;
  auto want_more = [&](std::size_t have) {
    if (have >= opt.depth) return false;
    if (opt.q_limit > 0 && tracker.q > opt.q_limit) return false;
    return true;
  };

  switch (alpha.kind()) {
    case AlphaSpec::Kind::rational: {
      cf.exact = true;
      i128 num = alpha.p(), den = alpha.q();
      i128 a = floor_div(num, den);
      cf.a0 = static_cast<std::int64_t>(a);
      i128 rem = num - a * den;
      num = den;
      den = rem;
      while (den != 0 && want_more(cf.partial.size())) {
        a = num / den;
        if (!tracker.push(static_cast<std::int64_t>(a))) break;
        cf.partial.push_back(static_cast<std::int64_t>(a));
        rem = num - a * den;
        num = den;
        den = rem;
      }
      if (den == 0) {
        cf.terminated = cf.partial.size() < opt.depth;
        cf.tail_lo = cf.tail_hi = HUGE_VAL;
      } else {
        cf.tail_lo = cf.tail_hi = static_cast<double>(num) / static_cast<double>(den);
      }
      return cf;
    }
    case AlphaSpec::Kind::surd: {
      cf.exact = true;
      SurdState s = surd_initial(alpha);
      i128 a = surd_floor(s);
      cf.a0 = narrow(a, "a0");
      surd_advance(s, a);
      std::map<std::pair<i128, i128>, std::size_t> seen;
      while (want_more(cf.partial.size())) {
        auto key = std::make_pair(s.P, s.Q);
        std::size_t index = cf.partial.size() + 1;
        if (!cf.period) {
          auto [it, inserted] = seen.emplace(key, index);
          if (!inserted) cf.period = std::make_pair(it->second, index - it->second);
        }
        a = surd_floor(s);
        if (!tracker.push(static_cast<std::int64_t>(a))) break;
        cf.partial.push_back(static_cast<std::int64_t>(a));
        surd_advance(s, a);
      }
      long double tail = surd_value(s);
      cf.tail_lo = static_cast<double>(tail * (1 - 1e-15L));
      cf.tail_hi = static_cast<double>(tail * (1 + 1e-15L));
      return cf;
    }
    case AlphaSpec::Kind::decimal: {
      cf.exact = false;
      BigRational v = decimal_value(alpha.digits());
      BigRational eps(BigInt(1), pow10(alpha.places()));
      BigRational lo = v - eps, hi = v + eps;
      bool hi_infinite = false;
      auto exhausted = [&](std::size_t certified) {
        if (opt.fail_on_exhaustion) {
          throw Error(ErrorCode::PrecisionExhausted,
                      "decimal digits cannot certify the next partial quotient",
                      "certified=" + std::to_string(certified));
        }
      };
      BigInt a = big_floor(lo);
      if (big_floor(hi) != a) {
        exhausted(0);
        throw Error(ErrorCode::PrecisionExhausted, "decimal digits cannot certify a0", "certified=0");
      }
      cf.a0 = static_cast<std::int64_t>(a);
      auto reciprocal_step = [&](const BigInt& q) {
        BigRational flo = lo - BigRational(q);
        BigRational new_lo = hi_infinite ? BigRational(0) : BigRational(1) / (hi - BigRational(q));
        if (flo == 0) {
          hi_infinite = true;
        } else {
          hi = BigRational(1) / flo;
        }
        lo = new_lo;
      };
      reciprocal_step(a);
      bool ok = true;
      while (want_more(cf.partial.size())) {
        if (hi_infinite) {
          ok = false;
          break;
        }
        BigInt next = big_floor(lo);
        if (big_floor(hi) != next || next > kInt64Max) {
          ok = false;
          break;
        }
        auto an = static_cast<std::int64_t>(next);
        if (!tracker.push(an)) break;
        cf.partial.push_back(an);
        reciprocal_step(next);
      }
      if (!ok) exhausted(cf.partial.size());
      if (!ok || hi_infinite) {
        cf.tail_lo = 1.0;
        cf.tail_hi = HUGE_VAL;
      } else {
        cf.tail_lo = static_cast<double>(lo);
        cf.tail_hi = static_cast<double>(hi);
      }
      return cf;
    }
  }
  return cf;
}

}  // namespace

AlphaSpec AlphaSpec::rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw Error(ErrorCode::DomainError, "rational alpha with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  if (g == 0) g = 1;
  AlphaSpec a;
  a.kind_ = Kind::rational;
  a.p_ = p / g;
  a.q_ = q / g;
  return a;
}

AlphaSpec AlphaSpec::surd(std::int64_t A, std::int64_t B, std::int64_t D, std::int64_t Q) {
  if (D <= 0 || is_square(D)) {
    throw Error(ErrorCode::DomainError, "surd radicand must be a positive non-square",
                "D=" + std::to_string(D));
  }
  if (Q == 0) throw Error(ErrorCode::DomainError, "surd denominator is zero");
  if (B == 0) throw Error(ErrorCode::DomainError, "surd with B = 0 is rational; use rat:");
  if (Q < 0) {
    A = -A;
    B = -B;
    Q = -Q;
  }
  std::int64_t g = std::gcd(std::gcd(A < 0 ? -A : A, B < 0 ? -B : B), Q);
  AlphaSpec a;
  a.kind_ = Kind::surd;
  a.A_ = A / g;
  a.B_ = B / g;
  a.D_ = D;
  a.Q_ = Q / g;
  return a;
}

AlphaSpec AlphaSpec::decimal(std::string digits, int places) {
  if (places <= 0) throw Error(ErrorCode::DomainError, "decimal needs guaranteed_places >= 1");
  BigRational v = decimal_value(digits);
  if (mp::abs(v) >= BigRational(1000000000)) {
    throw Error(ErrorCode::DomainError, "decimal alpha out of range (-1e9, 1e9)", digits);
  }
  AlphaSpec a;
  a.kind_ = Kind::decimal;
  a.digits_ = std::move(digits);
  a.places_ = places;
  return a;
}

double AlphaSpec::value() const {
  switch (kind_) {
    case Kind::rational: return static_cast<double>(p_) / static_cast<double>(q_);
    case Kind::surd:
      return static_cast<double>((static_cast<long double>(A_) +
                                  static_cast<long double>(B_) * std::sqrt(static_cast<long double>(D_))) /
                                 static_cast<long double>(Q_));
    case Kind::decimal: return static_cast<double>(decimal_value(digits_));
  }
  return 0;
}

Phase AlphaSpec::phase() const {
  const BigInt two128 = BigInt(1) << 128;
  switch (kind_) {
    case Kind::rational: {
      BigInt n = BigInt(p_) * two128;
      BigInt d = BigInt(q_);
      BigInt f = n / d;
      if (n % d != 0 && n < 0) f -= 1;
      return phase_from_big(f);
    }
    case Kind::surd: {
      // floor(B sqrt(D) 2^128) from an exact integer square root
      BigInt absB = BigInt(B_ < 0 ? -B_ : B_);
      BigInt root = mp::sqrt(absB * absB * BigInt(D_) * two128 * two128);
      BigInt bterm = B_ > 0 ? root : BigInt(-root - 1);
      BigInt num = BigInt(A_) * two128 + bterm;
      BigInt f = num / Q_;
      if (num % Q_ != 0 && num < 0) f -= 1;
      return phase_from_big(f);
    }
    case Kind::decimal: {
      BigRational v = decimal_value(digits_) * BigRational(two128);
      return phase_from_big(big_floor(v));
    }
  }
  return {};
}

std::string AlphaSpec::describe() const {
  switch (kind_) {
    case Kind::rational: return "rat:" + std::to_string(p_) + "/" + std::to_string(q_);
    case Kind::surd:
      return "surd:" + std::to_string(A_) + "," + std::to_string(B_) + "," + std::to_string(D_) +
             "," + std::to_string(Q_);
    case Kind::decimal: return "dec:" + digits_ + "@" + std::to_string(places_);
  }
  return {};
}

AlphaSpec parse_alpha(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "alpha spec needs a kind prefix", text);
  std::string kind = text.substr(0, colon), body = text.substr(colon + 1);
  auto to_i64 = [&](const std::string& s) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad integer in alpha spec", text);
    }
    if (used != s.size()) throw Error(ErrorCode::ParseError, "bad integer in alpha spec", text);
    return v;
  };
  if (kind == "rat") {
    auto slash = body.find('/');
    if (slash == std::string::npos) throw Error(ErrorCode::ParseError, "rat:p/q expected", text);
    return AlphaSpec::rational(to_i64(body.substr(0, slash)), to_i64(body.substr(slash + 1)));
  }
  if (kind == "surd") {
    std::vector<std::int64_t> parts;
    std::size_t start = 0;
    while (true) {
      auto comma = body.find(',', start);
      parts.push_back(to_i64(body.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (parts.size() != 4) throw Error(ErrorCode::ParseError, "surd:A,B,D,Q expected", text);
    return AlphaSpec::surd(parts[0], parts[1], parts[2], parts[3]);
  }
  if (kind == "dec") {
    auto at = body.find('@');
    if (at == std::string::npos) throw Error(ErrorCode::ParseError, "dec:<digits>@<places> expected", text);
    return AlphaSpec::decimal(body.substr(0, at), static_cast<int>(to_i64(body.substr(at + 1))));
  }
  throw Error(ErrorCode::ParseError, "unknown alpha kind", kind);
}

ContinuedFraction ContinuedFraction::from_quotients(std::int64_t a0, std::vector<std::int64_t> partial) {
  for (auto a : partial) {
    if (a < 1) throw Error(ErrorCode::DomainError, "partial quotients must be >= 1");
  }
  ContinuedFraction cf;
  cf.a0 = a0;
  cf.partial = std::move(partial);
  cf.exact = false;
  return cf;
}

ContinuedFraction cf_expand(const AlphaSpec& alpha, std::size_t depth) {
  if (depth < 1) throw Error(ErrorCode::DomainError, "depth must be >= 1");
  ContinuedFraction cf = expand(alpha, {depth, true, 0});
  if (cf.partial.size() < depth && !cf.terminated) {
    throw Error(ErrorCode::DepthExceeded, "convergent denominators overflow 64 bits",
                "depth=" + std::to_string(cf.partial.size()));
  }
  return cf;
}

ContinuedFraction cf_expand_available(const AlphaSpec& alpha, std::size_t max_depth) {
  return expand(alpha, {max_depth, false, 0});
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t m) {
  if (m < 1 || m > cf.size()) {
    throw Error(ErrorCode::DepthExceeded, "not enough partial quotients",
                "requested=" + std::to_string(m) + " available=" + std::to_string(cf.size()));
  }
  const std::size_t L = cf.size();

  // Complete quotients x_i, i = 1..L, as brackets, propagated back from the tail.
  std::vector<long double> x_lo(L + 1), x_hi(L + 1), x_mid(L + 1);
  x_lo[L] = cf.tail_lo;
  x_hi[L] = cf.tail_hi;
  x_mid[L] = std::isinf(cf.tail_hi) ? static_cast<long double>(cf.tail_lo)
                                    : 0.5L * (static_cast<long double>(cf.tail_lo) + cf.tail_hi);
  if (cf.terminated) x_mid[L] = HUGE_VALL;
  for (std::size_t i = L - 1; i >= 1; --i) {
    auto a = static_cast<long double>(cf.quotient(i));
    x_lo[i] = a + 1.0L / x_hi[i + 1];
    x_hi[i] = a + 1.0L / x_lo[i + 1];
    x_mid[i] = a + 1.0L / x_mid[i + 1];
  }

  std::vector<Convergent> out;
  out.reserve(m);
  i128 p_prev = 1, q_prev = 0, p = cf.a0, q = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      i128 a = cf.quotient(i);
      i128 pn = a * p + p_prev, qn = a * q + q_prev;
      if (pn > kInt64Max || pn < -kInt64Max || qn > kInt64Max) {
        throw Error(ErrorCode::DepthExceeded, "convergent overflows 64 bits", "index=" + std::to_string(i));
      }
      p_prev = p;
      q_prev = q;
      p = pn;
      q = qn;
    }
    Convergent c;
    c.p = static_cast<std::int64_t>(p);
    c.q = static_cast<std::int64_t>(q);
    c.index = i;
    auto qd = static_cast<long double>(q), qp = static_cast<long double>(q_prev);
    auto dist = [&](long double x) { return std::isinf(x) ? 0.0L : 1.0L / (qd * (x * qd + qp)); };
    c.distance_lo = static_cast<double>(dist(x_hi[i + 1]));
    c.distance_hi = static_cast<double>(dist(x_lo[i + 1]));
    c.distance = static_cast<double>(dist(x_mid[i + 1]));
    c.sign = c.distance == 0 ? 0 : (i % 2 == 0 ? 1 : -1);
    out.push_back(c);
  }
  return out;
}

double DiophantineEstimate::norm_floor(std::int64_t k) const {
  double ak = std::fabs(static_cast<double>(k));
  return C_hat / std::pow(ak, r_hat);
}

DiophantineEstimate diophantine_type_estimate(const ContinuedFraction& cf) {
  if (cf.size() < 3) {
    throw Error(ErrorCode::DepthExceeded, "type estimate needs at least 3 quotients");
  }
  const std::size_t L = cf.size();
  auto conv = convergents(cf, L);
  DiophantineEstimate est;
  double r_extra = 0, r_running = 1;
  for (std::size_t m = 0; m + 1 < L; ++m) {
    est.witnesses.emplace_back(conv[m].q, conv[m + 1].q);
    if (conv[m].q < 2) continue;
    double lq = std::log(static_cast<double>(conv[m].q));
    r_extra = std::max(r_extra, std::log(static_cast<double>(cf.quotient(m + 1))) / lq);
    r_running = std::max(r_running, std::log(static_cast<double>(conv[m + 1].q)) / lq);
  }
  est.r_hat = 1 + r_extra;
  est.r_running = r_running;

  double C = HUGE_VAL, c_dk = HUGE_VAL;
  for (std::size_t m = 0; m < L; ++m) {
    const auto& c = conv[m];
    double qd = static_cast<double>(c.q);
    if (c.distance > 0) C = std::min(C, std::pow(qd, 1 + est.r_hat) * c.distance);
    if (m + 1 < L) c_dk = std::min(c_dk, std::pow(qd, est.r_hat) / static_cast<double>(conv[m + 1].q));
  }
  est.C_hat = std::isinf(C) ? 0.0 : C;
  est.c_dk = std::isinf(c_dk) ? 0.0 : c_dk;

  if (cf.period) {
    est.constant_type = true;
  } else if (cf.partial.size() >= 2) {
    std::size_t half = cf.partial.size() / 2;
    auto first = *std::max_element(cf.partial.begin(), cf.partial.begin() + half);
    auto second = *std::max_element(cf.partial.begin() + half, cf.partial.end());
    est.constant_type = second <= first;
  }
  return est;
}

DiophantineEstimate estimate_for(const AlphaSpec& alpha, std::int64_t q_limit) {
  ContinuedFraction cf = expand(alpha, {200, false, q_limit});
  if (cf.size() < 3) {
    throw Error(ErrorCode::DepthExceeded, "alpha expansion too short for a type estimate",
                alpha.describe());
  }
  return diophantine_type_estimate(cf);
}

}  // namespace apz
