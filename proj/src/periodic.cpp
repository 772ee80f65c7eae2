#include "apz/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "apz/error.hpp"

namespace apz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

// B_0 .. B_10; odd-index entries beyond B_1 vanish.
constexpr double kBernoulli[] = {1.0, -0.5, 1.0 / 6, 0, -1.0 / 30, 0, 1.0 / 42, 0, -1.0 / 30, 0, 5.0 / 66};
constexpr int kMaxClosedFormPower = 9;

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double bernoulli_poly(int n, double x) {
  double sum = 0;
  for (int j = 0; j <= n; ++j) {
    if (kBernoulli[j] == 0) continue;
    sum += binomial(n, j) * kBernoulli[j] * std::pow(x, n - j);
  }
  return sum;
}

bool is_small_odd_integer(double t) {
  return t == std::floor(t) && static_cast<int>(t) % 2 == 1 && t <= kMaxClosedFormPower;
}

}  // namespace

double chord_to_one(Phase phase) { return 2 * std::fabs(std::sin(kPi * phase.centered())); }

cplx unit(Phase phase) {
  double x = kTwoPi * phase.centered();
  return {std::cos(x), std::sin(x)};
}

DecayClass PeriodicFunction::decay_class() const {
  switch (family_) {
    case Family::trig: return DecayClass::finite;
    case Family::power:
    case Family::sawtooth: return DecayClass::power;
    case Family::analytic: return DecayClass::analytic;
    case Family::log_singular: return DecayClass::log_singular;
  }
  return DecayClass::finite;
}

cplx PeriodicFunction::coeff(std::int64_t k) const {
  const double ak = std::fabs(static_cast<double>(k));
  switch (family_) {
    case Family::trig: {
      auto it = table_.find(k);
      return it == table_.end() ? cplx{} : it->second;
    }
    case Family::power:
      if (k == 0) return {};
      return {0.0, (k > 0 ? -0.5 : 0.5) / std::pow(ak, param_)};
    case Family::analytic:
      if (k == 0) return {};
      return {std::exp(-param_ * ak), 0.0};
    case Family::log_singular:
      if (k == 0) return {};
      return {-1.0 / ak, 0.0};
    case Family::sawtooth:
      if (k == 0) return {};
      return {0.0, (k % 2 == 0 ? 1.0 : -1.0) / (kTwoPi * static_cast<double>(k))};
  }
  return {};
}

std::int64_t PeriodicFunction::degree() const {
  if (family_ != Family::trig) return -1;
  std::int64_t d = 0;
  for (const auto& [k, c] : table_) {
    if (c != cplx{}) d = std::max(d, k < 0 ? -k : k);
  }
  return d;
}

double PeriodicFunction::sup_bound() const {
  switch (family_) {
    case Family::trig: {
      double s = 0;
      for (const auto& [k, c] : table_) s += std::abs(c);
      return s;
    }
    case Family::power: return 1 + 1 / (param_ - 1);
    case Family::analytic: {
      double r = std::exp(-param_);
      return 2 * r / (1 - r);
    }
    case Family::log_singular: return HUGE_VAL;
    case Family::sawtooth: return 0.5;
  }
  return HUGE_VAL;
}

double PeriodicFunction::coefficient_tail(std::int64_t K) const {
  return weighted_tail(K, 0, DiophantineEstimate{});
}

double PeriodicFunction::weighted_tail(std::int64_t K, int J, const DiophantineEstimate& est) const {
  if (J > 0 && est.C_hat <= 0) return HUGE_VAL;
  const double r = est.r_hat;
  auto weight = [&](double k) { return J == 0 ? 1.0 : std::pow(std::pow(k, r) / (4 * est.C_hat), J); };

  switch (family_) {
    case Family::trig: {
      double s = 0;
      for (const auto& [k, c] : table_) {
        if ((k < 0 ? -k : k) > K) s += std::abs(c) * weight(std::fabs(static_cast<double>(k)));
      }
      return s;
    }
    case Family::analytic: {
      // Both signs of k, summed explicitly past the peak of the weighted terms.
      double sum = 0;
      const double peak = J == 0 ? 0 : r * J / param_;
      for (std::int64_t k = K + 1; k < K + 10'000'000; ++k) {
        double kd = static_cast<double>(k);
        double term = 2 * std::exp(-param_ * kd) * weight(kd);
        sum += term;
        if (kd > peak && (term < 1e-20 * sum || term < 1e-300)) break;
      }
      return sum;
    }
    case Family::power:
    case Family::sawtooth:
    case Family::log_singular: {
      double amp = family_ == Family::power ? 0.5 : family_ == Family::sawtooth ? 1 / kTwoPi : 1.0;
      double p = family_ == Family::power ? param_ : 1.0;
      double q = p - r * J;
      if (q <= 1) return HUGE_VAL;
      double scale = J == 0 ? 1.0 : std::pow(4 * est.C_hat, -J);
      double Kd = static_cast<double>(std::max<std::int64_t>(K, 0));
      double integral = K >= 1 ? std::pow(Kd, 1 - q) / (q - 1) : 1 + 1 / (q - 1);
      return 2 * amp * scale * integral;
    }
  }
  return HUGE_VAL;
}

cplx PeriodicFunction::eval_trig(Phase x) const {
  if (real_) {
    cplx sum = coeff(0);
    for (auto it = table_.upper_bound(0); it != table_.end(); ++it) {
      sum += 2.0 * (it->second * unit(x.times(it->first))).real();
    }
    return {sum.real(), 0.0};
  }
  cplx sum{};
  for (const auto& [k, c] : table_) sum += c * unit(x.times(k));
  return sum;
}

double PeriodicFunction::eval_power(Phase x, double tol) const {
  const double t = param_;
  if (is_small_odd_integer(t)) {
    int n = static_cast<int>(t);
    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    double sign = ((n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::pow(kTwoPi, n) * bernoulli_poly(n, x.turns()) / (2 * fact);
  }
  // Summation by parts bounds the tail by (K+1)^-t / |sin(pi x)|; the absolute
  // bound K^{1-t}/(t-1) covers x near the integers.
  double s = std::fabs(std::sin(kPi * x.centered()));
  double k_osc = s > 0 ? std::pow(1 / (tol * s), 1 / t) : HUGE_VAL;
  double k_abs = std::pow(1 / (tol * (t - 1)), 1 / (t - 1));
  double kmax = std::ceil(std::min(k_osc, k_abs));
  if (kmax > 5e7) {
    throw Error(ErrorCode::ToleranceUnreachable, "power-decay series needs too many terms",
                "terms=" + std::to_string(kmax));
  }
  auto K = static_cast<std::int64_t>(kmax);
  double sum = 0;
  for (std::int64_t k = K; k >= 1; --k) {
    sum += std::sin(kTwoPi * x.times(k).centered()) / std::pow(static_cast<double>(k), t);
  }
  return sum;
}

cplx PeriodicFunction::evaluate(Phase x, double tol) const {
  if (!(tol > 0)) throw Error(ErrorCode::DomainError, "tolerance must be positive");
  switch (family_) {
    case Family::trig: return eval_trig(x);
    case Family::power: return {eval_power(x, tol), 0.0};
    case Family::analytic: {
      double r = std::exp(-param_);
      double c = std::cos(kTwoPi * x.centered());
      return {(1 - r * r) / (1 - 2 * r * c + r * r) - 1, 0.0};
    }
    case Family::log_singular: {
      // orbit phases carry up to n * 2^-128 error, so anything this close to 0 is unresolved
      if (x.distance_to_integer() < 0x1p-64) {
        throw Error(ErrorCode::EvaluationAtSingularity, "log|2 - 2cos(2 pi x)| is singular at x = 0");
      }
      return {2 * std::log(2 * std::fabs(std::sin(kPi * x.centered()))), 0.0};
    }
    case Family::sawtooth: return {x.centered(), 0.0};
  }
  return {};
}

std::string PeriodicFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::trig: {
      if (table_.size() == 2 && coeff(1) == cplx(0, -0.5) && coeff(-1) == cplx(0, 0.5)) return "sin";
      os << "trig:{";
      bool first = true;
      for (const auto& [k, c] : table_) {
        if (!first) os << ',';
        first = false;
        os << k << '=' << c.real();
        if (c.imag() != 0) os << ':' << c.imag();
      }
      os << '}';
      return os.str();
    }
    case Family::power: os << "power:" << param_; return os.str();
    case Family::analytic: os << "analytic:" << param_; return os.str();
    case Family::log_singular: return "logsin";
    case Family::sawtooth: return "sawtooth";
  }
  return {};
}

PeriodicFunction make_trig_poly(std::map<std::int64_t, cplx> coeffs) {
  std::erase_if(coeffs, [](const auto& kv) { return kv.second == cplx{}; });
  if (coeffs.empty()) throw Error(ErrorCode::EmptyCoefficients, "trigonometric polynomial has no coefficients");
  PeriodicFunction g;
  g.family_ = PeriodicFunction::Family::trig;
  g.table_ = std::move(coeffs);
  g.real_ = true;
  for (const auto& [k, c] : g.table_) {
    if (std::abs(c - std::conj(g.coeff(-k))) > 1e-15 * (1 + std::abs(c))) g.real_ = false;
  }
  if (g.real_) {
    const PeriodicFunction& ref = g;
    g.variation_ = estimate_variation([&ref](double x) { return ref.evaluate(x).real(); });
  }
  return g;
}

PeriodicFunction make_sine() { return make_trig_poly({{1, cplx(0, -0.5)}, {-1, cplx(0, 0.5)}}); }

PeriodicFunction make_power_decay(double t) {
  if (!(t > 1)) throw Error(ErrorCode::DomainError, "power decay needs t > 1", "t=" + std::to_string(t));
  PeriodicFunction g;
  g.family_ = PeriodicFunction::Family::power;
  g.param_ = t;
  return g;
}

PeriodicFunction make_analytic_decay(double delta) {
  if (!(delta > 0)) throw Error(ErrorCode::DomainError, "analytic decay needs delta > 0");
  PeriodicFunction g;
  g.family_ = PeriodicFunction::Family::analytic;
  g.param_ = delta;
  // even, decreasing on [0, 1/2]: Var = 2 (g(0) - g(1/2))
  double r = std::exp(-delta);
  g.variation_ = 2 * (2 * r / (1 - r) + 2 * r / (1 + r));
  return g;
}

PeriodicFunction make_log_singular() {
  PeriodicFunction g;
  g.family_ = PeriodicFunction::Family::log_singular;
  return g;
}

PeriodicFunction make_sawtooth() {
  PeriodicFunction g;
  g.family_ = PeriodicFunction::Family::sawtooth;
  g.param_ = 1;
  g.variation_ = 2;
  return g;
}

PeriodicFunction parse_function(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad number in function spec", text);
    }
    if (used != s.size()) throw Error(ErrorCode::ParseError, "bad number in function spec", text);
    return v;
  };
  if (text == "sin") return make_sine();
  if (text == "sawtooth") return make_sawtooth();
  if (text == "logsin") return make_log_singular();
  if (text.rfind("power:", 0) == 0) return make_power_decay(number(text.substr(6)));
  if (text.rfind("analytic:", 0) == 0) return make_analytic_decay(number(text.substr(9)));
  if (text.rfind("trig:", 0) == 0) {
    std::string body = text.substr(5);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}') {
      throw Error(ErrorCode::ParseError, "trig:{k=re[:im],...} expected", text);
    }
    body = body.substr(1, body.size() - 2);
    std::map<std::int64_t, cplx> table;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "trig entry needs k=c", text);
      auto k = static_cast<std::int64_t>(number(item.substr(0, eq)));
      std::string val = item.substr(eq + 1);
      auto colon = val.find(':');
      cplx c = colon == std::string::npos ? cplx(number(val), 0)
                                          : cplx(number(val.substr(0, colon)), number(val.substr(colon + 1)));
      table[k] += c;
    }
    return make_trig_poly(std::move(table));
  }
  throw Error(ErrorCode::ParseError, "unknown function spec", text);
}

double estimate_variation(const std::function<double(double)>& f, double rel_tol, std::size_t max_points) {
  auto sampled = [&](std::size_t n) {
    double total = 0, prev = f(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
      double cur = f(static_cast<double>(i) / static_cast<double>(n));
      total += std::fabs(cur - prev);
      prev = cur;
    }
    return total;
  };
  std::size_t n = 64;
  double prev = sampled(n);
  while (n < max_points) {
    n *= 2;
    double cur = sampled(n);
    if (std::fabs(cur - prev) < rel_tol * std::max(1.0, cur)) return cur;
    prev = cur;
  }
  return prev;
}

cplx CoboundaryTransfer::evaluate(Phase x) const {
  cplx sum{};
  for (const auto& [k, h] : coeffs) sum += h * unit(x.times(k));
  return sum;
}

CoboundaryTransfer coboundary_transfer(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t K) {
  if (alpha.is_rational()) throw Error(ErrorCode::RationalAlpha, "coboundary transfer needs irrational alpha");
  return coboundary_transfer(g, alpha, K, estimate_for(alpha));
}

CoboundaryTransfer coboundary_transfer(const PeriodicFunction& g, const AlphaSpec& alpha, std::int64_t K,
                                       const DiophantineEstimate& est) {
  if (K < 1) throw Error(ErrorCode::DomainError, "transfer order K must be >= 1");
  if (std::abs(g.mean()) > 1e-15) {
    throw Error(ErrorCode::NonzeroMean, "coboundary transfer needs c_0 = 0", g.describe());
  }
  if (alpha.is_rational()) throw Error(ErrorCode::RationalAlpha, "coboundary transfer needs irrational alpha");
  CoboundaryTransfer out{g, alpha, K, {}, 0, 0};
  const Phase a = alpha.phase();
  double sum = 0;
  for (std::int64_t k = -K; k <= K; ++k) {
    if (k == 0) continue;
    cplx c = g.coeff(k);
    if (c == cplx{}) continue;
    Phase ka = a.times(k);
    if (chord_to_one(ka) < 1e-13) {
      throw Error(ErrorCode::SmallDivisorOverflow, "e^{2 pi i k alpha} - 1 below resolvable size",
                  "k=" + std::to_string(k));
    }
    cplx h = c / (unit(ka) - 1.0);
    out.coeffs.emplace(k, h);
    sum += std::abs(h);
  }
  out.sup_bound = sum + g.weighted_tail(K, 1, est);
  out.residual_bound = g.coefficient_tail(K);
  return out;
}

}  // namespace apz
