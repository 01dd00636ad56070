#include "bslab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bslab/errors.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/orbit_finder.hpp"
#include "bslab/rotation.hpp"
#include "bslab/semiconjugacy.hpp"
#include "bslab/synthetic.hpp"
#include "bslab/version.hpp"

namespace bslab {

namespace {

[[noreturn]] void config_error(const std::string& pointer, const std::string& message) {
  throw ConfigError((pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }
std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

void require_object(const Json& j, const std::string& pointer) {
  if (!j.is_object()) config_error(pointer, "expected an object");
}

void check_keys(const Json& j, const std::string& pointer, std::initializer_list<const char*> allowed) {
  require_object(j, pointer);
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) config_error(child(pointer, item.key()), "unknown key");
  }
}

const Json& required(const Json& j, const std::string& pointer, const char* key) {
  if (!j.contains(key)) config_error(child(pointer, key), "missing required key");
  return j.at(key);
}

Rational rational_of(const Json& v, const std::string& pointer) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) return from_double(v.get<double>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
      config_error(pointer, std::string("not a rational: ") + e.what());
    }
  }
  config_error(pointer, "expected a number or a \"p/q\" string");
}

Scalar scalar_of(const Json& v, const std::string& pointer) {
  if (v.is_number_float()) return Scalar(v.get<double>());
  return Scalar(rational_of(v, pointer));
}

long integer_of(const Json& v, const std::string& pointer, long lo, long hi) {
  if (!v.is_number_integer()) config_error(pointer, "expected an integer");
  long x = v.get<long>();
  if (x < lo || x > hi) {
    config_error(pointer, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                              std::to_string(x));
  }
  return x;
}

double real_of(const Json& v, const std::string& pointer, double lo) {
  if (!v.is_number()) config_error(pointer, "expected a number");
  double x = v.get<double>();
  if (!(x > lo)) config_error(pointer, "must be greater than " + std::to_string(lo));
  return x;
}

std::uint64_t seed_of(const Json& v, const std::string& pointer) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0)) {
    config_error(pointer, "expected a nonnegative integer seed");
  }
  return v.get<std::uint64_t>();
}

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const OracleDomainError*>(&e)) return "OracleDomainError";
  if (dynamic_cast<const BreakpointError*>(&e)) return "BreakpointError";
  if (dynamic_cast<const EmptyIntersection*>(&e)) return "EmptyIntersection";
  if (dynamic_cast<const EnclosureTooWide*>(&e)) return "EnclosureTooWide";
  if (dynamic_cast<const NoAdmissibleL*>(&e)) return "NoAdmissibleL";
  if (dynamic_cast<const NoFixedPoint*>(&e)) return "NoFixedPoint";
  if (dynamic_cast<const NotConverged*>(&e)) return "NotConverged";
  if (dynamic_cast<const DepthLimit*>(&e)) return "DepthLimit";
  if (dynamic_cast<const DecompositionError*>(&e)) return "DecompositionError";
  if (dynamic_cast<const ConstructionFailed*>(&e)) return "ConstructionFailed";
  if (dynamic_cast<const OrderViolation*>(&e)) return "OrderViolation";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

Json error_json(const std::exception& e) { return {{"error", error_name(e)}, {"message", e.what()}}; }

std::string print17(double d) {
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

// ------------------------------------------------------------ validation

const std::set<std::string> kExperimentTypes{"rotation", "orbit", "obstruction", "semiconjugacy"};

Json validate_experiment(const Json& e, const std::string& pointer) {
  require_object(e, pointer);
  std::string type = required(e, pointer, "type").is_string() ? e.at("type").get<std::string>() : "";
  if (!kExperimentTypes.count(type)) config_error(child(pointer, "type"), "unknown experiment type");
  Json p = e;
  auto opt = [&](const char* key, Json def) {
    if (!p.contains(key)) p[key] = std::move(def);
  };
  if (type == "rotation") {
    check_keys(e, pointer, {"type", "N", "basepoints", "qmax", "tol", "defect_grid"});
    opt("N", 1000);
    opt("basepoints", Json::array({"0", "1/3", "2/3"}));
    opt("qmax", 64);
    opt("tol", 1e-9);
    opt("defect_grid", 1000);
    integer_of(p["N"], child(pointer, "N"), 1, 100000000);
    if (!p["basepoints"].is_array() || p["basepoints"].empty())
      config_error(child(pointer, "basepoints"), "expected a nonempty array");
    for (std::size_t i = 0; i < p["basepoints"].size(); ++i)
      rational_of(p["basepoints"][i], child(child(pointer, "basepoints"), i));
    integer_of(p["qmax"], child(pointer, "qmax"), 1, 100000);
    real_of(p["tol"], child(pointer, "tol"), 0.0);
    integer_of(p["defect_grid"], child(pointer, "defect_grid"), 1, 10000000);
  } else if (type == "orbit") {
    check_keys(e, pointer, {"type", "grid", "tol", "mmax", "iters"});
    opt("grid", 2048);
    opt("tol", 1e-10);
    opt("mmax", 20);
    opt("iters", 10000);
    integer_of(p["grid"], child(pointer, "grid"), 2, 100000000);
    real_of(p["tol"], child(pointer, "tol"), 0.0);
    integer_of(p["mmax"], child(pointer, "mmax"), 1, 100000);
    integer_of(p["iters"], child(pointer, "iters"), 1, 1000000000);
  } else if (type == "obstruction") {
    check_keys(e, pointer, {"type", "epsilon", "J", "I", "m_max", "s_max", "grid", "ledger_m"});
    if (p.contains("epsilon")) scalar_of(p["epsilon"], child(pointer, "epsilon"));
    if (p.contains("J")) parse_arc(p["J"], child(pointer, "J"));
    if (p.contains("I")) parse_arc(p["I"], child(pointer, "I"));
    if (p.contains("m_max")) integer_of(p["m_max"], child(pointer, "m_max"), 1, 40);
    if (p.contains("s_max")) integer_of(p["s_max"], child(pointer, "s_max"), 1, 100000);
    if (p.contains("grid")) integer_of(p["grid"], child(pointer, "grid"), 1, 1000000);
    if (p.contains("ledger_m")) integer_of(p["ledger_m"], child(pointer, "ledger_m"), 0, 20);
  } else {
    check_keys(e, pointer, {"type", "depth", "grid", "interpolation", "base", "fixed_point", "m"});
    opt("depth", 10);
    opt("grid", 10000);
    opt("interpolation", "linear");
    integer_of(p["depth"], child(pointer, "depth"), 0, 24);
    integer_of(p["grid"], child(pointer, "grid"), 1, 10000000);
    if (p["interpolation"] != "linear" && p["interpolation"] != "step")
      config_error(child(pointer, "interpolation"), "expected \"linear\" or \"step\"");
    if (p.contains("base")) parse_point(p["base"], child(pointer, "base"));
    if (p.contains("fixed_point")) parse_point(p["fixed_point"], child(pointer, "fixed_point"));
    if (p.contains("m")) integer_of(p["m"], child(pointer, "m"), 1, 64);
  }
  return p;
}

void validate_action(const Json& a, const std::string& pointer) {
  require_object(a, pointer);
  if (a.contains("generator")) {
    const Json& g = a.at("generator");
    if (!g.is_string()) config_error(child(pointer, "generator"), "expected a string");
    std::string name = g.get<std::string>();
    if (name == "standard") {
      check_keys(a, pointer, {"generator"});
    } else if (name == "pl_conjugated") {
      check_keys(a, pointer, {"generator", "seed"});
      if (a.contains("seed")) seed_of(a["seed"], child(pointer, "seed"));
    } else if (name == "synthetic_denjoy") {
      check_keys(a, pointer, {"generator", "depth", "seed"});
      integer_of(required(a, pointer, "depth"), child(pointer, "depth"), 1, 20);
      if (a.contains("seed")) seed_of(a["seed"], child(pointer, "seed"));
    } else {
      config_error(child(pointer, "generator"), "unknown generator \"" + name + "\"");
    }
    return;
  }
  check_keys(a, pointer, {"f", "h", "fixed_point", "base"});
  parse_map(required(a, pointer, "f"), child(pointer, "f"));
  parse_map(required(a, pointer, "h"), child(pointer, "h"));
  if (a.contains("fixed_point")) parse_point(a["fixed_point"], child(pointer, "fixed_point"));
  if (a.contains("base")) parse_point(a["base"], child(pointer, "base"));
}

// --------------------------------------------------------- experiments

// exact strings beyond this many bits are dropped from reports
constexpr std::size_t kMaxExactBits = 512;

bool printable_exact(const Scalar& s) { return s.is_exact() && bit_size(s.exact()) <= kMaxExactBits; }

Json enclosure_json(const RotationEnclosure& e) {
  Json j{{"lo", decimal_down(e.lo)}, {"hi", decimal_up(e.hi)}, {"N", e.iterations}, {"width", decimal_up(e.width())}};
  if (printable_exact(e.lo) && printable_exact(e.hi)) {
    j["lo_exact"] = exact_string(e.lo);
    j["hi_exact"] = exact_string(e.hi);
  }
  Json bp = Json::array();
  for (const auto& b : e.basepoints) bp.push_back(to_string(b));
  j["basepoints"] = bp;
  return j;
}

Json optional_rational(const std::optional<Rational>& q) {
  if (!q) return nullptr;
  return to_string(*q);
}

Json scalar_json(const Scalar& s) {
  Json j{{"value", decimal(s)}};
  if (printable_exact(s)) j["exact"] = exact_string(s);
  return j;
}

struct Context {
  std::optional<int> m;
  std::optional<CirclePoint> common_fixed_point;
};

Json run_rotation(const Action& act, int n, const Json& p) {
  long N = p["N"].get<long>();
  std::vector<Rational> basepoints;
  for (const auto& b : p["basepoints"]) basepoints.push_back(rational_of(b, ""));
  int qmax = p["qmax"].get<int>();
  double tol = p["tol"].get<double>();
  Json r;
  r["rho_f"] = enclosure_json(rotation_enclosure(act.f, N, basepoints));
  r["rho_h"] = enclosure_json(rotation_enclosure(act.h, N, basepoints));
  r["rational_f"] = optional_rational(rational_rotation_detect(act.f, qmax, tol, N));
  r["rational_h"] = optional_rational(rational_rotation_detect(act.h, qmax, tol, N));
  try {
    RhoForm form = rho_rational_form(act.f, n, N);
    r["rho_form"] = {{"l", form.l}, {"raw_l", to_string(form.raw_l)}, {"rho", to_string(Rational(form.l, n - 1))}};
  } catch (const Error& e) {
    r["rho_form"] = error_json(e);
  }
  ConjugacyReport c = conjugacy_invariance_check(act.f, act.h, n, N);
  r["conjugacy"] = {{"rho_f", enclosure_json(c.rho_f)},
                    {"rho_conj", enclosure_json(c.rho_conj)},
                    {"rho_power", enclosure_json(c.rho_power)},
                    {"conj_meets_f", c.conj_meets_f},
                    {"power_meets_scaled", c.power_meets_scaled},
                    {"conj_meets_power", c.conj_meets_power},
                    {"consistent", c.consistent}};
  int grid = p["defect_grid"].get<int>();
  r["relation_defect"] = scalar_json(relation_defect(act.f, act.h, n, grid));
  if (!act.relation_domain.empty()) {
    r["relation_defect_on_domain"] = scalar_json(relation_defect(act.f, act.h, n, 64, act.relation_domain));
  }
  return r;
}

Json run_orbit(const Action& act, int n, const Json& p, Context& ctx) {
  int grid = p["grid"].get<int>();
  double tol = p["tol"].get<double>();
  int mmax = p["mmax"].get<int>();
  long iters = p["iters"].get<long>();
  Json r;
  auto m = minimal_power_m(act.h, mmax);
  r["m"] = m ? Json(*m) : Json(nullptr);
  ctx.m = m;

  CircleMap F = power(act.f, n - 1);
  try {
    FixedPointSet fixset = fixed_point_enclosures(F, grid, tol);
    Json list = Json::array();
    for (const auto& fp : fixset.intervals) {
      Json e{{"lo", print17(fp.lo)}, {"hi", print17(fp.hi)}, {"whole_arc", fp.whole_arc}};
      if (fp.exact) e["exact"] = point_json(*fp.exact);
      list.push_back(e);
    }
    r["fixed_points"] = list;
    InvarianceReport inv = fix_invariance_check(act.f, act.h, n, fixset, tol, n - 1);
    Json entries = Json::array();
    for (const auto& e : inv.entries) {
      entries.push_back({{"q", point_json(e.q)}, {"hq", point_json(e.hq)}, {"distance", scalar_json(e.distance)},
                         {"pass", e.pass}});
    }
    r["fix_invariance"] = {{"pass", inv.pass}, {"entries", entries}};
  } catch (const NoFixedPoint& e) {
    r["fixed_points"] = error_json(e);
  }

  if (m) {
    try {
      CommonFixedPoint u = common_fixed_point(act.f, act.h, n, *m, iters, tol);
      r["common_fixed_point"] = {{"point", point_json(u.point)},
                                 {"start", point_json(u.start)},
                                 {"iterations", u.iterations},
                                 {"f_distance", scalar_json(u.f_distance)},
                                 {"h_distance", scalar_json(u.h_distance)}};
      if (act.fixed_point) {
        r["common_fixed_point"]["distance_to_known"] = scalar_json(angular_distance(u.point, *act.fixed_point));
      }
      ctx.common_fixed_point = u.point;
    } catch (const Error& e) {
      r["common_fixed_point"] = error_json(e);
    } catch (const std::invalid_argument& e) {
      r["common_fixed_point"] = error_json(e);
    }
  } else {
    r["common_fixed_point"] = nullptr;
  }
  return r;
}

ObstructionConfig obstruction_config(const Action& act, const Json& p) {
  ObstructionConfig cfg;
  if (act.obstruction) {
    cfg = *act.obstruction;
  } else {
    cfg.epsilon = Scalar(Rational(1, 10));
    cfg.J = Arc{CirclePoint::projective(Rational(0)), CirclePoint::projective(Rational(64))};
    cfg.I = Arc{CirclePoint::projective(Rational(0)), CirclePoint::projective(Rational(1))};
  }
  if (p.contains("epsilon")) cfg.epsilon = scalar_of(p["epsilon"], "");
  if (p.contains("J")) cfg.J = parse_arc(p["J"]);
  if (p.contains("I")) cfg.I = parse_arc(p["I"]);
  if (p.contains("m_max")) cfg.m_max = p["m_max"].get<int>();
  if (p.contains("s_max")) cfg.s_max = p["s_max"].get<int>();
  if (p.contains("grid")) cfg.grid = p["grid"].get<int>();
  return cfg;
}

Json run_obstruction(const Action& act, const Json& p) {
  ObstructionConfig cfg = obstruction_config(act, p);
  Certificate cert = growth_certificate(act.f, act.h, cfg);
  Json r{{"verdict", to_string(cert.verdict)},
         {"summary", cert.str()},
         {"epsilon", scalar_json(cfg.epsilon)},
         {"epsilon_admissible", epsilon_admissible(cfg.epsilon)},
         {"J", cfg.J.str()},
         {"I", cfg.I.str()},
         {"m_max", cfg.m_max},
         {"s_max", cfg.s_max}};
  if (cert.verdict == Verdict::ContradictionAt) r["m"] = cert.m;
  if (!cert.reason.empty()) r["reason"] = cert.reason;
  if (cert.relation_depth) r["relation_depth"] = *cert.relation_depth;
  std::optional<Rational> I_len;
  try {
    Scalar len = arc_length(cfg.I);
    I_len = len.is_exact() ? len.exact() : from_double(len.approx());
    r["I_length"] = scalar_json(len);
    r["J_length"] = scalar_json(arc_length(cfg.J));
  } catch (const std::exception&) {
  }
  Json rows = Json::array();
  for (const auto& row : cert.rows) {
    rows.push_back({{"m", row.m},
                    {"count", row.count},
                    {"total_length", decimal(row.total_length)},
                    {"theoretical_bound", print17(row.theoretical_d)},
                    {"J_length", decimal(row.J_length)},
                    {"exceeds_J", row.total_length > row.J_length},
                    {"disjoint", row.disjoint},
                    {"contained", row.contained}});
  }
  r["rows"] = rows;
  if (I_len) {
    Json series = Json::array();
    for (int m = 1; m <= cfg.m_max; ++m) {
      Rational b = theoretical_bound(m, *I_len);
      series.push_back({{"m", m}, {"count", std::to_string(1ULL << (m + 1))}, {"bound", print17(to_double(b))}});
    }
    r["theoretical_series"] = series;
  }
  if (p.contains("ledger_m")) {
    int lm = p["ledger_m"].get<int>();
    LengthLedger ledger = length_ledger(act.f, act.h, cfg.I, lm, cfg.epsilon);
    bool all_above = true;
    int max_r = 0, max_k = 0;
    for (const auto& e : ledger.entries) {
      all_above = all_above && e.above_bound;
      max_r = std::max(max_r, e.decomposition.r);
      max_k = std::max(max_k, e.decomposition.k);
    }
    r["ledger"] = {{"m", lm},
                   {"entries", ledger.entries.size()},
                   {"bound", scalar_json(ledger.bound)},
                   {"floor_bound", scalar_json(ledger.floor_bound)},
                   {"all_above_bound", all_above},
                   {"max_r", max_r},
                   {"max_k", max_k},
                   {"disjoint", disjointness_check([&] {
                      std::vector<Arc> arcs;
                      for (const auto& e : ledger.entries) arcs.push_back(e.image);
                      return arcs;
                    }())}};
  }
  return r;
}

Json run_semiconjugacy(const Action& act, int n, const Json& p, const Context& ctx) {
  int depth = p["depth"].get<int>();
  int grid = p["grid"].get<int>();
  Interpolation mode = p["interpolation"] == "step" ? Interpolation::Step : Interpolation::Linear;
  CirclePoint u = p.contains("fixed_point")       ? parse_point(p["fixed_point"])
                  : act.fixed_point                ? *act.fixed_point
                  : ctx.common_fixed_point         ? *ctx.common_fixed_point
                                                   : CirclePoint::infinity();
  CirclePoint base = p.contains("base") ? parse_point(p["base"])
                     : act.base         ? *act.base
                                        : CirclePoint::projective(Rational(0));
  int m = p.contains("m") ? p["m"].get<int>() : ctx.m.value_or(1);
  auto attempts = semiconjugacy_with_fallback(act.f, act.h, n, m, base, depth, u, mode);
  Json r{{"depth", depth},      {"grid", grid},     {"interpolation", to_string(mode)},
         {"base", point_json(base)}, {"fixed_point", point_json(u)}, {"m", m}};
  Json list = Json::array();
  for (const auto& a : attempts) {
    Json j{{"generators", a.generators}, {"modulus", a.modulus}, {"ok", a.table.has_value()}};
    if (!a.error.empty()) j["error"] = a.error;
    list.push_back(j);
  }
  r["attempts"] = list;
  const SemiconjugacyAttempt& last = attempts.back();
  if (!last.table) {
    r["result"] = nullptr;
    return r;
  }
  const MonotoneMapTable& table = *last.table;
  bool fallback = attempts.size() > 1;
  CircleMap F = fallback ? power(act.f, n - 1) : act.f;
  CircleMap H = fallback ? power(act.h, m) : act.h;
  AffineModel model = standard_model(last.modulus);
  Json res{{"generators", last.generators},
           {"modulus", last.modulus},
           {"samples", table.samples.size()},
           {"monotone", monotone_check(table)},
           {"defect_f", scalar_json(semiconjugacy_defect(table, F, model.f0, grid))},
           {"defect_h", scalar_json(semiconjugacy_defect(table, H, model.h0, grid))}};
  Json samples = Json::array();
  for (const auto& s : table.samples) {
    const Scalar& x = s.source.value();
    samples.push_back({printable_exact(x) ? exact_string(x) : decimal(x), exact_string(s.target.value()), decimal(x),
                       decimal(s.target.value())});
  }
  res["table"] = samples;
  r["result"] = res;
  return r;
}

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// ------------------------------------------------------------- literals

CircleMap parse_map(const Json& literal, const std::string& pointer) {
  require_object(literal, pointer);
  if (literal.size() != 1) config_error(pointer, "a map literal has exactly one key");
  try {
    if (literal.contains("moebius")) {
      const Json& m = literal["moebius"];
      std::string mp = child(pointer, "moebius");
      if (!m.is_array() || m.size() != 4) config_error(mp, "expected four entries [a, b, c, d]");
      Rational a = rational_of(m[0], child(mp, 0)), b = rational_of(m[1], child(mp, 1));
      Rational c = rational_of(m[2], child(mp, 2)), d = rational_of(m[3], child(mp, 3));
      if (Rational(a * d - b * c) <= 0) config_error(mp, "determinant must be positive");
      return CircleMap::moebius(a, b, c, d);
    }
    if (literal.contains("pl")) {
      const Json& pl = literal["pl"];
      std::string pp = child(pointer, "pl");
      check_keys(pl, pp, {"breakpoints", "slopes", "offset"});
      std::vector<Rational> bps, slopes;
      const Json& jb = required(pl, pp, "breakpoints");
      const Json& js = required(pl, pp, "slopes");
      if (!jb.is_array() || !js.is_array()) config_error(pp, "breakpoints and slopes must be arrays");
      for (std::size_t i = 0; i < jb.size(); ++i) bps.push_back(rational_of(jb[i], child(child(pp, "breakpoints"), i)));
      for (std::size_t i = 0; i < js.size(); ++i) slopes.push_back(rational_of(js[i], child(child(pp, "slopes"), i)));
      Rational offset = pl.contains("offset") ? rational_of(pl["offset"], child(pp, "offset")) : Rational(0);
      return CircleMap::pl(std::move(bps), std::move(slopes), offset);
    }
    if (literal.contains("rotation")) {
      return CircleMap::rotation(scalar_of(literal["rotation"], child(pointer, "rotation")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    config_error(pointer, std::string("invalid map: ") + e.what());
  }
  config_error(pointer, "unknown map literal (expected moebius, pl or rotation)");
}

CirclePoint parse_point(const Json& literal, const std::string& pointer) {
  if (literal.is_string() && literal.get<std::string>() == "inf") return CirclePoint::infinity();
  require_object(literal, pointer);
  if (literal.size() != 1) config_error(pointer, "a point literal has exactly one key");
  if (literal.contains("angular")) return CirclePoint::angular(scalar_of(literal["angular"], child(pointer, "angular")));
  if (literal.contains("projective")) {
    const Json& v = literal["projective"];
    if (v.is_string() && v.get<std::string>() == "inf") return CirclePoint::infinity();
    return CirclePoint::projective(scalar_of(v, child(pointer, "projective")));
  }
  config_error(pointer, "expected \"inf\", {\"angular\": x} or {\"projective\": x}");
}

Arc parse_arc(const Json& literal, const std::string& pointer) {
  require_object(literal, pointer);
  if (literal.size() != 1) config_error(pointer, "an arc literal has exactly one key");
  for (const char* chart : {"angular", "projective"}) {
    if (!literal.contains(chart)) continue;
    const Json& ends = literal[chart];
    std::string cp = child(pointer, chart);
    if (!ends.is_array() || ends.size() != 2) config_error(cp, "expected [lo, hi]");
    Json lo{{chart, ends[0]}}, hi{{chart, ends[1]}};
    return Arc{parse_point(lo, child(cp, 0)), parse_point(hi, child(cp, 1))};
  }
  config_error(pointer, "expected {\"angular\": [lo, hi]} or {\"projective\": [lo, hi]}");
}

// ------------------------------------------------------------- scenario

Scenario parse_scenario(const Json& config) {
  check_keys(config, "", {"name", "n", "seed", "action", "experiments", "output"});
  Scenario s;
  const Json& name = required(config, "", "name");
  if (!name.is_string() || name.get<std::string>().empty()) config_error("/name", "expected a nonempty string");
  s.name = name.get<std::string>();
  s.n = static_cast<int>(integer_of(required(config, "", "n"), "/n", 2, 64));
  if (config.contains("seed")) s.seed = seed_of(config["seed"], "/seed");
  s.action = required(config, "", "action");
  validate_action(s.action, "/action");
  if (config.contains("experiments")) {
    const Json& ex = config["experiments"];
    if (!ex.is_array()) config_error("/experiments", "expected an array");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      std::string ptr = child(std::string("/experiments"), i);
      Json params = validate_experiment(ex[i], ptr);
      s.experiments.push_back({params["type"].get<std::string>(), params, ptr});
    }
  }
  if (config.contains("output")) {
    const Json& out = config["output"];
    check_keys(out, "/output", {"dir", "formats"});
    if (out.contains("dir")) {
      if (!out["dir"].is_string()) config_error("/output/dir", "expected a string");
      s.output_dir = out["dir"].get<std::string>();
    }
    if (out.contains("formats")) {
      if (!out["formats"].is_array()) config_error("/output/formats", "expected an array");
      for (std::size_t i = 0; i < out["formats"].size(); ++i) {
        const Json& f = out["formats"][i];
        if (!f.is_string() || (f != "json" && f != "csv" && f != "plotdata"))
          config_error(child(std::string("/output/formats"), i), "expected json, csv or plotdata");
        s.formats.push_back(f.get<std::string>());
      }
    }
  }
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text.begin(), text.begin() + static_cast<long>(std::min(e.byte, text.size())), '\n'));
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

Action build_action(const Scenario& s) {
  const Json& a = s.action;
  Action act;
  if (a.contains("generator")) {
    std::string g = a["generator"].get<std::string>();
    std::uint64_t seed = a.contains("seed") ? a["seed"].get<std::uint64_t>() : s.seed;
    if (g == "standard") {
      AffineModel m = standard_model(s.n);
      act.f = m.f0;
      act.h = m.h0;
      act.origin = "standard";
      act.fixed_point = CirclePoint::infinity();
      act.base = CirclePoint::projective(Rational(0));
    } else if (g == "pl_conjugated") {
      ConjugatedAction c = pl_conjugated(s.n, seed);
      act.f = c.f;
      act.h = c.h;
      act.origin = "pl_conjugated(seed=" + std::to_string(seed) + ")";
      act.fixed_point = c.fixed_point;
      act.base = c.base;
    } else {
      int depth = a["depth"].get<int>();
      SyntheticPair p = synthetic_denjoy_pair(s.n, depth, seed);
      act.f = p.f;
      act.h = p.h;
      act.origin = "synthetic_denjoy(depth=" + std::to_string(depth) + ", seed=" + std::to_string(seed) + ")";
      act.obstruction = p.cfg;
      act.relation_domain = p.relation_domain;
    }
    return act;
  }
  act.f = parse_map(a["f"], "/action/f");
  act.h = parse_map(a["h"], "/action/h");
  act.origin = "literal";
  if (a.contains("fixed_point")) act.fixed_point = parse_point(a["fixed_point"], "/action/fixed_point");
  if (a.contains("base")) act.base = parse_point(a["base"], "/action/base");
  return act;
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  Scenario s = scenario;
  if (options.seed) s.seed = *options.seed;
  RunResult out;
  Json& r = out.report;
  r["schema"] = kReportSchema;
  r["version"] = kVersion;
  r["scenario"] = s.name;
  r["n"] = s.n;
  r["seed"] = s.seed;
  if (options.timestamp) r["generated_at"] = utc_timestamp();
  r["experiments"] = Json::array();

  Action act;
  try {
    act = build_action(s);
  } catch (const std::exception& e) {
    r["action"] = error_json(e);
    r["ok"] = false;
    out.ok = false;
    return out;
  }
  r["action"] = {{"origin", act.origin}, {"f", act.f.str()}, {"h", act.h.str()},
                 {"f_kind", act.f.kind()}, {"h_kind", act.h.kind()}};
  if (act.fixed_point) r["action"]["fixed_point"] = point_json(*act.fixed_point);

  Context ctx;
  for (const auto& e : s.experiments) {
    Json entry{{"type", e.type}, {"params", e.params}};
    try {
      if (e.type == "rotation") {
        entry["result"] = run_rotation(act, s.n, e.params);
      } else if (e.type == "orbit") {
        entry["result"] = run_orbit(act, s.n, e.params, ctx);
      } else if (e.type == "obstruction") {
        entry["result"] = run_obstruction(act, e.params);
      } else {
        entry["result"] = run_semiconjugacy(act, s.n, e.params, ctx);
      }
      entry["status"] = "ok";
    } catch (const std::exception& ex) {
      entry["status"] = "error";
      entry["error"] = error_json(ex);
      out.ok = false;
    }
    r["experiments"].push_back(entry);
  }
  r["ok"] = out.ok;
  return out;
}

// ---------------------------------------------------------------- demos

std::vector<std::string> demo_names() { return {"standard-n2", "pl-conjugated-n2", "synthetic-denjoy-depth8"}; }

Json demo_config(const std::string& name) {
  Json all = Json::array({Json{{"type", "rotation"}}, Json{{"type", "orbit"}}, Json{{"type", "obstruction"}},
                          Json{{"type", "semiconjugacy"}}});
  if (name == "standard-n2") {
    return {{"name", name}, {"n", 2}, {"seed", 1}, {"action", {{"generator", "standard"}}}, {"experiments", all}};
  }
  if (name == "pl-conjugated-n2") {
    return {{"name", name}, {"n", 2}, {"seed", 7}, {"action", {{"generator", "pl_conjugated"}}}, {"experiments", all}};
  }
  if (name == "synthetic-denjoy-depth8") {
    return {{"name", name},
            {"n", 2},
            {"seed", 42},
            {"action", {{"generator", "synthetic_denjoy"}, {"depth", 8}}},
            {"experiments", Json::array({Json{{"type", "rotation"}, {"N", 200}}, Json{{"type", "obstruction"}}})}};
  }
  throw ConfigError("unknown demo \"" + name + "\"");
}

// ------------------------------------------------------------- numbers

std::string exact_string(const Scalar& s) {
  if (s.is_exact()) return to_string(s.exact());
  return print17(s.approx());
}

std::string decimal(const Scalar& s) { return print17(s.approx()); }

std::string decimal_down(const Scalar& s) {
  if (!s.is_exact()) return print17(s.approx());
  double d = to_double(s.exact());
  if (from_double(d) > s.exact()) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return print17(d);
}

std::string decimal_up(const Scalar& s) {
  if (!s.is_exact()) return print17(s.approx());
  double d = to_double(s.exact());
  if (from_double(d) < s.exact()) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return print17(d);
}

Json point_json(const CirclePoint& p) {
  Json j{{"chart", to_string(p.chart())}, {"angular", print17(p.angle())}};
  if (p.is_infinity()) {
    j["projective"] = "inf";
  } else {
    j["projective"] = print17(p.line());
  }
  if (p.is_exact()) j["exact"] = p.str();
  CirclePoint a = p.to(Chart::Angular);
  if (a.is_exact()) j["angular_exact"] = to_string(a.value().exact());
  return j;
}

}  // namespace bslab
