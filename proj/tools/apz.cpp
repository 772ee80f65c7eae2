// apz: batch driver for the almost-periodic Dirichlet series library.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "apz/diophantine.hpp"
#include "apz/error.hpp"
#include "apz/kernels.hpp"
#include "apz/lerch.hpp"
#include "apz/numbertheory.hpp"
#include "apz/periodic.hpp"
#include "apz/taylor.hpp"
#include "apz/version.hpp"
#include "apz/walks.hpp"
#include "apz/zeta.hpp"

using json = nlohmann::ordered_json;
using namespace apz;

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

cplx parse_complex(const std::string& text) {
  auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return re;
    }
    std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "complex number expected as re or re,im", text);
  }
}

// "start:length,start:length" in turns
std::vector<Arc> parse_arcs(const std::string& text) {
  std::vector<Arc> arcs;
  if (text.empty() || text == "none") return arcs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "arc expected as start:length", item);
    try {
      arcs.push_back(Arc::from_turns(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "bad number in arc", item);
    }
  }
  return arcs;
}

Phase parse_phase(const std::string& text) {
  if (text.find(':') != std::string::npos) return parse_alpha(text).phase();
  try {
    std::size_t used = 0;
    double x = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return Phase::from_double(x);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "phase expected as a number or alpha spec", text);
  }
}

struct Global {
  std::string out;
  std::string format = "auto";
  double tol = 1e-10;
  int threads = 0;
};

struct Result {
  std::string body;
  std::string format;
};

std::string fmt_of(const Global& g, const char* fallback) { return g.format == "auto" ? fallback : g.format; }

// ---- cf

struct CfArgs {
  std::string alpha = "surd:-1,1,5,2";
  std::size_t depth = 10;
};

Result run_cf(const Global& gl, const CfArgs& a) {
  auto alpha = parse_alpha(a.alpha);
  auto cf = alpha.kind() == AlphaSpec::Kind::decimal ? cf_expand_available(alpha, a.depth) : cf_expand(alpha, a.depth);
  auto convs = convergents(cf, cf.size());
  auto est = diophantine_type_estimate(cf);
  std::string f = fmt_of(gl, "json");
  if (f == "csv") {
    std::string s = "index,quotient,p,q,distance\n";
    for (std::size_t i = 0; i < convs.size(); ++i)
      s += std::to_string(i) + "," + std::to_string(cf.quotient(i)) + "," + std::to_string(convs[i].p) + "," +
           std::to_string(convs[i].q) + "," + num(convs[i].distance) + "\n";
    return {s, f};
  }
  json j;
  j["quotients"] = json::array();
  for (std::size_t i = 0; i < cf.size(); ++i) j["quotients"].push_back(cf.quotient(i));
  j["convergents"] = json::array();
  for (auto& c : convs) j["convergents"].push_back({{"p", c.p}, {"q", c.q}, {"distance", c.distance}});
  j["r_hat"] = est.r_hat;
  j["C_hat"] = est.C_hat;
  j["constant_type"] = est.constant_type;
  return {j.dump(2) + "\n", f};
}

// ---- walk

struct WalkArgs {
  std::string g = "sin";
  std::string alpha = "surd:-1,1,5,2";
  std::int64_t K = 1'000'000;
  bool quadratic = false;
  std::optional<std::uint64_t> rademacher;
  std::string special = "none";
};

Result run_walk(const Global& gl, const WalkArgs& a) {
  if (a.special != "none" && a.special != "q-convergents")
    throw Error(ErrorCode::ParseError, "--special takes none or q-convergents", a.special);
  std::string f = fmt_of(gl, "csv");
  WalkTrace trace;
  std::optional<DKReport> dk;
  if (a.rademacher) {
    trace = rademacher_walk(*a.rademacher, a.K);
  } else {
    auto alpha = parse_alpha(a.alpha);
    std::vector<Convergent> convs;
    std::vector<std::int64_t> special;
    if (a.special == "q-convergents") {
      auto cf = cf_expand_available(alpha, 90);
      for (auto& c : convergents(cf, cf.size()))
        if (c.q >= 1 && c.q <= a.K) {
          convs.push_back(c);
          special.push_back(c.q);
        }
    }
    if (a.quadratic) {
      trace = quadratic_walk(alpha, a.K, special);
    } else {
      auto g = parse_function(a.g);
      if (g.family() == PeriodicFunction::Family::log_singular) {
        trace = log_singular_walk(alpha, a.K).trace;
      } else {
        trace = walk(g, alpha, a.K, special);
        if (!convs.empty() && g.variation()) dk = denjoy_koksma_certificate(trace, convs, *g.variation());
      }
    }
  }
  if (f == "csv") {
    std::string s = "k,S_k,running_max\n";
    for (auto& p : trace.checkpoints) s += std::to_string(p.k) + "," + num(p.S) + "," + num(p.running_max) + "\n";
    return {s, f};
  }
  json j;
  j["K"] = trace.K;
  j["source"] = trace.source;
  j["final_max"] = trace.final_max();
  auto ab = cahen_abscissa(trace);
  j["sigma_hat"] = ab.sigma_hat;
  j["sigma_ratio"] = ab.sigma_ratio;
  j["degenerate"] = ab.degenerate;
  if (dk) {
    json d;
    d["all_q_pass"] = dk->all_q_pass;
    d["global_checked"] = dk->global_checked;
    d["global_pass"] = dk->global_pass;
    d["C"] = dk->C;
    d["r"] = dk->r;
    d["q_checks"] = json::array();
    for (auto& c : dk->q_checks)
      d["q_checks"].push_back({{"q", c.q}, {"S_q", c.S_q}, {"bound", c.bound}, {"pass", c.pass}});
    j["dk_report"] = d;
  } else {
    j["dk_report"] = nullptr;
  }
  return {j.dump(2) + "\n", f};
}

// ---- lerch

struct LerchArgs {
  std::string phase = "0.5";
  std::string s = "2";
  double a = 1.0;
};

Result series_result(const SeriesValue& v, const std::string& f, json extra = json::object()) {
  if (f == "csv") {
    std::string s = "value_re,value_im,err,method,terms,depth\n";
    s += num(v.value.real()) + "," + num(v.value.imag()) + "," + num(v.err) + "," + v.method + "," +
         std::to_string(v.terms) + "," + std::to_string(v.depth) + "\n";
    return {s, f};
  }
  json j;
  j["value"] = cjson(v.value);
  j["err"] = v.err;
  j["method"] = v.method;
  j["terms"] = v.terms;
  j["depth"] = v.depth;
  for (auto& [k, x] : extra.items()) j[k] = x;
  return {j.dump(2) + "\n", f};
}

Result run_lerch(const Global& gl, const LerchArgs& a) {
  auto v = lerch_continued(parse_phase(a.phase), parse_complex(a.s), a.a, gl.tol);
  return series_result(v, fmt_of(gl, "json"));
}

// ---- zeta

struct ZetaArgs {
  std::string g = "sin";
  std::string alpha = "surd:-1,1,5,2";
  std::string s = "2";
  std::string method = "auto";
  std::int64_t K = 0;
  std::int64_t N = 0;
};

Result run_zeta(const Global& gl, const ZetaArgs& a) {
  ZetaRequest req;
  req.g = parse_function(a.g);
  req.alpha = parse_alpha(a.alpha);
  req.s = parse_complex(a.s);
  req.tol = gl.tol;
  req.K_fourier = a.K;
  req.N_direct = a.N;
  auto v = zeta_by_method(req, a.method);
  bool direct = v.method.rfind("direct", 0) == 0;
  json extra;
  extra["K"] = v.method == "polylog" ? v.terms : 0;
  extra["N"] = direct ? v.terms : 0;
  return series_result(v, fmt_of(gl, "json"), extra);
}

// ---- taylor

struct TaylorArgs {
  std::string g = "analytic:1";
  std::string alpha = "surd:-1,1,5,2";
  std::string z;
  std::optional<std::int64_t> probe;
  int mmax = 20;
  std::string mask;
  std::int64_t K = 30;
};

Result run_taylor(const Global& gl, const TaylorArgs& a) {
  auto alpha = parse_alpha(a.alpha);
  std::string f = fmt_of(gl, "csv");
  if (a.probe) {
    auto rep = radial_probe(parse_function(a.g), alpha, *a.probe, a.mmax);
    if (f == "csv") {
      std::string s = "t,f_re,f_im,scaled_re,scaled_im\n";
      for (std::size_t i = 0; i < rep.t_values.size(); ++i)
        s += num(rep.t_values[i]) + "," + num(rep.values[i].real()) + "," + num(rep.values[i].imag()) + "," +
             num(rep.scaled[i].real()) + "," + num(rep.scaled[i].imag()) + "\n";
      return {s, f};
    }
    json j;
    j["j"] = rep.j;
    j["target"] = cjson(rep.target);
    j["limit_estimate"] = cjson(rep.limit_estimate);
    j["deviation"] = rep.deviation;
    j["t_values"] = rep.t_values;
    j["scaled"] = json::array();
    for (auto& x : rep.scaled) j["scaled"].push_back(cjson(x));
    return {j.dump(2) + "\n", f};
  }

  bool masked = !a.mask.empty();
  PeriodicFunction g = masked ? masked_series(alpha, parse_arcs(a.mask), a.K) : parse_function(a.g);
  if (a.z.empty()) {
    if (!masked) throw Error(ErrorCode::ParseError, "taylor needs --z, --probe or --mask", "");
    std::string s = "k,c_re,c_im\n";
    for (auto& [k, c] : g.table()) s += std::to_string(k) + "," + num(c.real()) + "," + num(c.imag()) + "\n";
    return {s, "csv"};
  }
  cplx z = parse_complex(a.z);
  std::vector<SeriesValue> rows;
  if (std::abs(z) < 1.0) rows.push_back(taylor_eval(g, alpha, z, gl.tol));
  auto dc = g.decay_class();
  if (dc == DecayClass::finite || dc == DecayClass::analytic) rows.push_back(pole_sum_eval(g, alpha, z, 0, gl.tol));
  if (rows.empty()) throw Error(ErrorCode::DomainError, "no representation valid at this z", a.z);
  if (f == "csv") {
    std::string s = "method,value_re,value_im,err,terms\n";
    for (auto& v : rows)
      s += v.method + "," + num(v.value.real()) + "," + num(v.value.imag()) + "," + num(v.err) + "," +
           std::to_string(v.terms) + "\n";
    return {s, f};
  }
  json j = json::array();
  for (auto& v : rows) j.push_back({{"method", v.method}, {"value", cjson(v.value)}, {"err", v.err}, {"terms", v.terms}});
  return {j.dump(2) + "\n", f};
}

// ---- commute

struct CommuteArgs {
  std::string g = "sin";
  std::string alpha = "surd:-1,1,5,2";
  std::string s = "3";
  std::string t = "2";
  std::int64_t N = 10000;
  std::int64_t M = 10000;
  std::int64_t h_grid = 0;
};

std::string table_csv(const std::vector<std::pair<std::string, SeriesValue>>& rows) {
  std::string s = "quantity,re,im,err\n";
  for (auto& [name, v] : rows)
    s += name + "," + num(v.value.real()) + "," + num(v.value.imag()) + "," + num(v.err) + "\n";
  return s;
}

Result run_commute(const Global& gl, const CommuteArgs& a) {
  cplx s = parse_complex(a.s), t = parse_complex(a.t);
  std::string f = fmt_of(gl, "csv");
  if (a.h_grid > 0) {
    auto set = h_alpha_sample(s, t, a.h_grid, a.M);
    std::string out = "alpha,re,im,err,heuristic\n";
    for (auto& p : set.samples)
      out += num(p.alpha) + "," + num(p.value.real()) + "," + num(p.value.imag()) + "," + num(p.err) + "," +
             (set.heuristic ? "1" : "0") + "\n";
    return {out, "csv"};
  }
  auto g = parse_function(a.g);
  auto alpha = parse_alpha(a.alpha);
  auto st = nested_T(g, alpha, s, t, a.N);
  auto ts = nested_T(g, alpha, t, s, a.N);
  auto single = nested_single_sum(g, alpha, s, t, a.M);
  SeriesValue d1{st.value - ts.value, st.err + ts.err, 0, "difference", 0};
  SeriesValue d2{st.value - single.value, st.err + single.err, 0, "difference", 0};
  std::vector<std::pair<std::string, SeriesValue>> rows = {
      {"T(s,t)", st}, {"T(t,s)", ts}, {"single(s,t)", single}, {"T(s,t)-T(t,s)", d1}, {"T(s,t)-single", d2}};
  if (f == "csv") return {table_csv(rows), f};
  json j;
  for (auto& [name, v] : rows) j[name] = {{"value", cjson(v.value)}, {"err", v.err}};
  return {j.dump(2) + "\n", f};
}

// ---- parseval

struct ParsevalArgs {
  std::string s = "2", t = "2", u = "2", v = "2";
  std::int64_t K = 100000;
};

Result run_parseval(const Global& gl, const ParsevalArgs& a) {
  auto r = parseval_ratio(parse_complex(a.s), parse_complex(a.t), parse_complex(a.u), parse_complex(a.v), a.K);
  std::string f = fmt_of(gl, "csv");
  std::vector<std::pair<std::string, cplx>> rows = {{"coefficient_sum", r.coefficient_sum},
                                                    {"integral", r.integral},
                                                    {"zeta_ratio", r.zeta_ratio},
                                                    {"integral-zeta_ratio*factor",
                                                     r.integral - r.convention_factor * r.zeta_ratio},
                                                    {"ratio", r.ratio},
                                                    {"convention_factor", r.convention_factor},
                                                    {"tail", r.tail}};
  if (f == "csv") {
    std::string s = "quantity,re,im\n";
    for (auto& [name, z] : rows) s += name + "," + num(z.real()) + "," + num(z.imag()) + "\n";
    return {s, f};
  }
  json j;
  for (auto& [name, z] : rows) j[name] = cjson(z);
  j["K"] = r.K;
  return {j.dump(2) + "\n", f};
}

json error_json(const std::string& code, const std::string& message, const std::string& context) {
  return {{"code", code}, {"message", message}, {"context", context}};
}

json echo_options(const CLI::App* app) {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_single_name() == "help" || opt->get_single_name() == "version") continue;
    std::string name = opt->get_single_name();
    bool flag = opt->get_expected_max() == 0;
    std::string value = opt->count() > 0 ? (flag ? "true" : opt->as<std::string>()) : opt->get_default_str();
    if (value.empty()) value = flag ? "false" : "none";
    j[name] = value;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"apz: Dirichlet series with almost periodic coefficients"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Global gl;
  app.add_option("--out", gl.out, "write results here (manifest to <out>.manifest.json); stdout when empty");
  app.add_option("--format", gl.format, "csv | json | auto")->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--tol", gl.tol, "target absolute error");
  app.add_option("--threads", gl.threads, "OpenMP threads (0 = runtime default)");

  CfArgs cf;
  auto* c_cf = app.add_subcommand("cf", "continued fraction, convergents and Diophantine type");
  c_cf->add_option("--alpha", cf.alpha);
  c_cf->add_option("--depth", cf.depth);

  WalkArgs wk;
  auto* c_walk = app.add_subcommand("walk", "partial sums S_k of g(n alpha)");
  c_walk->add_option("--g", wk.g);
  c_walk->add_option("--alpha", wk.alpha);
  c_walk->add_option("--K", wk.K);
  c_walk->add_flag("--quadratic", wk.quadratic, "sum sin(2 pi n^2 alpha)");
  c_walk->add_option("--rademacher", wk.rademacher, "random signs with this seed");
  c_walk->add_option("--special", wk.special, "none | q-convergents");

  LerchArgs lr;
  auto* c_lerch = app.add_subcommand("lerch", "Lerch transcendent on the unit circle");
  c_lerch->add_option("--phase", lr.phase, "theta in z = e^{2 pi i theta}, number or alpha spec");
  c_lerch->add_option("--s", lr.s, "re[,im]");
  c_lerch->add_option("--a", lr.a);

  ZetaArgs zt;
  auto* c_zeta = app.add_subcommand("zeta", "zeta_{g,alpha}(s)");
  c_zeta->add_option("--g", zt.g);
  c_zeta->add_option("--alpha", zt.alpha);
  c_zeta->add_option("--s", zt.s, "re[,im]");
  c_zeta->add_option("--method", zt.method)->check(CLI::IsMember({"auto", "direct", "polylog", "rational"}));
  c_zeta->add_option("--K", zt.K, "Fourier cutoff (0 = automatic)");
  c_zeta->add_option("--N", zt.N, "direct term cap (0 = default)");

  TaylorArgs ty;
  auto* c_taylor = app.add_subcommand("taylor", "f(z) = sum g(n alpha) z^n");
  c_taylor->add_option("--g", ty.g);
  c_taylor->add_option("--alpha", ty.alpha);
  c_taylor->add_option("--z", ty.z, "re[,im]");
  c_taylor->add_option("--probe", ty.probe, "radial probe at frequency j");
  c_taylor->add_option("--mmax", ty.mmax);
  c_taylor->add_option("--mask", ty.mask, "arcs start:length,... in turns");
  c_taylor->add_option("--K", ty.K, "coefficient range of the masked series");

  CommuteArgs cm;
  auto* c_commute = app.add_subcommand("commute", "nested double sum vs divisor single sum");
  c_commute->add_option("--g", cm.g);
  c_commute->add_option("--alpha", cm.alpha);
  c_commute->add_option("--s", cm.s);
  c_commute->add_option("--t", cm.t);
  c_commute->add_option("--N", cm.N);
  c_commute->add_option("--M", cm.M);
  c_commute->add_option("--h-grid", cm.h_grid, "sample f_{s,t} on this many alpha points instead");

  ParsevalArgs pv;
  auto* c_parseval = app.add_subcommand("parseval", "Parseval / Ramanujan identity");
  c_parseval->add_option("--s", pv.s);
  c_parseval->add_option("--t", pv.t);
  c_parseval->add_option("--u", pv.u);
  c_parseval->add_option("--v", pv.v);
  c_parseval->add_option("--K", pv.K);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json("ParseError", e.what(), e.get_name()).dump() << "\n";
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto t0 = std::chrono::steady_clock::now();
  Result res;
  try {
    set_thread_count(gl.threads);
    std::string name = sub->get_name();
    if (name == "cf") res = run_cf(gl, cf);
    else if (name == "walk") res = run_walk(gl, wk);
    else if (name == "lerch") res = run_lerch(gl, lr);
    else if (name == "zeta") res = run_zeta(gl, zt);
    else if (name == "taylor") res = run_taylor(gl, ty);
    else if (name == "commute") res = run_commute(gl, cm);
    else res = run_parseval(gl, pv);
  } catch (const Error& e) {
    std::cout << error_json(std::string(to_string(e.code())), e.what(), e.context()).dump() << "\n";
    return e.code() == ErrorCode::ParseError ? 1 : 2;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json manifest;
  manifest["tool"] = "apz";
  manifest["version"] = kVersion;
  manifest["subcommand"] = sub->get_name();
  manifest["global"] = echo_options(&app);
  manifest["options"] = echo_options(sub);
  manifest["format"] = res.format;
  manifest["threads"] = thread_count();
  manifest["wall_time_s"] = wall;

  if (gl.out.empty()) {
    std::cout << res.body;
    std::cerr << manifest.dump() << "\n";
  } else {
    std::ofstream(gl.out, std::ios::binary) << res.body;
    std::ofstream(gl.out + ".manifest.json", std::ios::binary) << manifest.dump(2) << "\n";
  }
  return 0;
}
