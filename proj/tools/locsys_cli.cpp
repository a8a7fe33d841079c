// locsys-cli: censuses, traces, motivic formulas and Siegel eigenvalue tables.

#include "locsys/siegel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace locsys;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 2;
constexpr int kExitMissing = 3;
constexpr int kExitUsage = 4;

struct RunConfig {
  std::string cache_dir;
  unsigned threads = 1;
  std::string strategy = "auto";
  std::string format = "text";
  bool compute = false;
  bool convention_s2 = false;
  bool no_banner = false;
  std::uint32_t g1_max_q = CensusBounds{}.g1_max_q;
  std::uint32_t g2_max_q = CensusBounds{}.g2_max_q;
};

struct Params {
  std::uint32_t q = 0;
  int l = -1, m = -1, j = -1, k = -1;
  std::uint32_t p = 0, pmax = 0;
  int n = -1, g = -1;
  int n1 = 0, n2 = 0, n3 = 0, nu = -1;
  std::string lambda, lambda2;
  std::string suite = "all";
  bool optional_tier = false;
};

struct Check {
  std::string name, expected, actual;
  bool pass = false;
};

struct Report {
  std::string command;
  Json inputs = Json::object();
  std::vector<Json> rows;
  std::vector<Check> checks;

  void check(std::string name, const std::string& expected, const std::string& actual) {
    checks.push_back({std::move(name), expected, actual, expected == actual});
  }
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

std::string str(const BigInt& v) { return v.str(); }
std::string str(const BigRational& v) { return to_string(v); }

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit(const Report& r, const RunConfig& cfg) {
  if (cfg.format == "json") {
    Json out;
    out["command"] = r.command;
    out["inputs"] = r.inputs;
    out["rows"] = r.rows;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
    }
    out["checks"] = checks;
    std::cout << out.dump(2) << "\n";
    return;
  }
  if (!cfg.no_banner) std::cout << "# locsys-cli " << r.command << " " << timestamp() << "\n";
  std::cout << r.command;
  for (const auto& [key, v] : r.inputs.items()) std::cout << " " << key << "=" << scalar_text(v);
  std::cout << "\n";
  for (const auto& row : r.rows) {
    for (const auto& [key, v] : row.items()) std::cout << "  " << key << "=" << scalar_text(v);
    std::cout << "\n";
  }
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": expected " << c.expected << ", got " << c.actual << "\n";
    failed += c.pass ? 0 : 1;
  }
  if (!r.checks.empty()) {
    std::cout << (failed == 0 ? "PASS" : "FAIL") << " " << r.checks.size() - failed << "/" << r.checks.size()
              << " checks\n";
  }
}

// ---- published eigenvalues ----

struct Factored {
  int sign;
  std::vector<std::pair<int, int>> factors;  // prime, exponent

  BigInt value() const {
    BigInt v = sign;
    for (auto [pr, e] : factors) v *= ipow(BigInt(pr), static_cast<unsigned>(e));
    return v;
  }
  std::string str() const {
    std::string s = sign < 0 ? "-" : "";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) s += "*";
      s += std::to_string(factors[i].first);
      if (factors[i].second != 1) s += "^" + std::to_string(factors[i].second);
    }
    return s;
  }
};

const std::map<std::uint32_t, Factored>& table_s88() {
  static const std::map<std::uint32_t, Factored> t = {
      {2, {1, {{2, 6}, {3, 1}, {7, 1}}}},
      {3, {-1, {{2, 3}, {3, 2}, {89, 1}}}},
      {5, {-1, {{2, 2}, {3, 1}, {5, 2}, {13, 2}, {607, 1}}}},
      {7, {1, {{2, 4}, {7, 1}, {109, 1}, {36973, 1}}}},
      {11, {1, {{2, 3}, {3, 1}, {4759, 1}, {114089, 1}}}},
      {13, {-1, {{2, 2}, {13, 1}, {17, 1}, {109, 1}, {3404113, 1}}}},
      {17, {1, {{2, 2}, {3, 2}, {17, 1}, {41, 1}, {1307, 1}, {168331, 1}}}},
      {19, {-1, {{2, 3}, {5, 1}, {74707, 1}, {9443867, 1}}}},
  };
  return t;
}

const std::map<std::uint32_t, Factored>& table_s126() {
  static const std::map<std::uint32_t, Factored> t = {
      {2, {-1, {{2, 4}, {3, 1}, {5, 1}}}},
      {3, {1, {{2, 3}, {3, 5}, {5, 1}, {7, 1}}}},
      {5, {1, {{2, 2}, {3, 1}, {5, 2}, {7, 1}, {79, 1}, {89, 1}}}},
      {7, {-1, {{2, 4}, {5, 2}, {7, 1}, {119633, 1}}}},
      {11, {1, {{2, 3}, {3, 1}, {23, 1}, {2267, 1}, {2861, 1}}}},
      {13, {1, {{2, 2}, {5, 1}, {7, 1}, {13, 1}, {50083049, 1}}}},
      {17, {-1, {{2, 2}, {3, 2}, {5, 1}, {7, 1}, {13, 1}, {47, 1}, {14320807, 1}}}},
      {19, {-1, {{2, 3}, {5, 1}, {7, 3}, {19, 1}, {2377, 1}, {35603, 1}}}},
  };
  return t;
}

struct S68Row {
  std::uint32_t p;
  BigInt lambda, lambda_sq;
  std::vector<BigRational> slopes;
};

const std::vector<S68Row>& table_s68() {
  static const std::vector<S68Row> t = {
      {2, 0, -57344, {BigRational(13, 2), BigRational(25, 2)}},
      {3, -27000, 143765361, {3, 7, 12, 16}},
      {5, 2843100, BigInt("-7734928874375"), {2, 7, 12, 17}},
      {7, -107822000, BigInt("4057621173384801"), {0, 6, 13, 19}},
  };
  return t;
}

std::optional<BigInt> known_lambda(SiegelWeight s, std::uint32_t p) {
  if (s == SiegelWeight{6, 8}) {
    for (const auto& r : table_s68()) {
      if (r.p == p) return r.lambda;
    }
  }
  const std::map<std::uint32_t, Factored>* t = nullptr;
  if (s == SiegelWeight{8, 8}) t = &table_s88();
  if (s == SiegelWeight{12, 6}) t = &table_s126();
  if (t) {
    if (auto it = t->find(p); it != t->end()) return it->second.value();
  }
  return std::nullopt;
}

std::string slopes_text(const std::vector<BigRational>& v, bool distinct) {
  std::string s;
  std::optional<BigRational> last;
  for (const auto& x : v) {
    if (distinct && last && *last == x) continue;
    if (!s.empty()) s += ",";
    s += to_string(x);
    last = x;
  }
  return s;
}

// ---- command context ----

class Session {
 public:
  explicit Session(const RunConfig& cfg)
      : cfg_(cfg),
        store_(options(cfg), cache_path(cfg), cfg.compute),
        traces_(store_),
        siegel_(traces_, motive_options(cfg)) {}

  const RunConfig& config() const { return cfg_; }
  CensusStore& store() { return store_; }
  Traces& traces() { return traces_; }
  SiegelTraces& siegel() { return siegel_; }
  MotiveOptions motive() const { return motive_options(cfg_); }

 private:
  static CensusOptions options(const RunConfig& cfg) {
    CensusOptions o;
    o.strategy = parse_strategy(cfg.strategy);
    o.threads = cfg.threads;
    o.bounds.g1_max_q = cfg.g1_max_q;
    o.bounds.g2_max_q = cfg.g2_max_q;
    return o;
  }
  static std::optional<std::filesystem::path> cache_path(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return std::filesystem::path(cfg.cache_dir);
    if (const char* env = std::getenv("LOCSYS_CACHE_DIR"); env && *env) return std::filesystem::path(env);
    return std::filesystem::path("locsys-cache");
  }
  static MotiveOptions motive_options(const RunConfig& cfg) {
    MotiveOptions o;
    o.weight_two_convention = cfg.convention_s2;
    o.warn = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
    return o;
  }

  RunConfig cfg_;
  CensusStore store_;
  Traces traces_;
  SiegelTraces siegel_;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// ---- commands ----

void field_checks(Report& r, std::uint32_t q) {
  const FieldDesc F = field_for_q(q);
  const std::string tag = "q=" + std::to_string(q) + " ";
  std::string modulus;
  for (auto c : F.modulus()) modulus += (modulus.empty() ? "" : ",") + std::to_string(c);
  r.rows.push_back({{"q", q}, {"p", F.p()}, {"e", F.e()}, {"modulus", modulus},
                    {"backend", F.has_square_tables() ? "tables" : F.table_backed() ? "log" : "poly"}});
  const Elem g = F.generator();
  bool primitive = F.pow(g, q - 1) == F.one();
  for (auto f : detail::prime_factors(q - 1)) primitive = primitive && F.pow(g, (q - 1) / f) != F.one();
  r.check(tag + "generator order", std::to_string(q - 1), primitive ? std::to_string(q - 1) : "smaller");
  std::size_t bad_inverse = 0, bad_order = 0, bad_character = 0;
  for (Elem x = 1; x < q; ++x) {
    if (F.mul(x, F.inv(x)) != F.one()) ++bad_inverse;
    if (F.pow(x, q - 1) != F.one()) ++bad_order;
    if (F.p() != 2) {
      const Elem h = F.pow(x, (q - 1) / 2);
      const int expect = h == F.one() ? 1 : -1;
      if (F.quadratic_character(x) != expect) ++bad_character;
    } else {
      Elem t = x, s = 0;
      for (unsigned i = 0; i < F.e(); ++i) {
        s = F.add(s, t);
        t = F.mul(t, t);
      }
      if (static_cast<Elem>(F.absolute_trace(x)) != s) ++bad_character;
    }
  }
  r.check(tag + "inverses", "0", std::to_string(bad_inverse));
  r.check(tag + "x^(q-1)=1", "0", std::to_string(bad_order));
  r.check(tag + (F.p() == 2 ? "absolute trace" : "quadratic character"), "0", std::to_string(bad_character));
  std::mt19937 rng(q);
  std::uniform_int_distribution<Elem> pick(0, q - 1);
  const FieldDesc big = F.extension(2);
  const auto emb = F.embedding_into(big);
  std::size_t bad_ring = 0, bad_embed = 0;
  for (int i = 0; i < 2000; ++i) {
    const Elem a = pick(rng), b = pick(rng), c = pick(rng);
    if (F.mul(a, F.add(b, c)) != F.add(F.mul(a, b), F.mul(a, c))) ++bad_ring;
    if (F.mul(F.mul(a, b), c) != F.mul(a, F.mul(b, c))) ++bad_ring;
    if (emb[F.add(a, b)] != big.add(emb[a], emb[b]) || emb[F.mul(a, b)] != big.mul(emb[a], emb[b])) ++bad_embed;
  }
  r.check(tag + "ring axioms (sampled)", "0", std::to_string(bad_ring));
  r.check(tag + "embedding into F_q^2", "0", std::to_string(bad_embed));
}

Report cmd_field_selftest(Session&, const Params& a) {
  Report r{"field-selftest"};
  std::vector<std::uint32_t> qs = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256, 729, 1024};
  if (a.q) qs = {a.q};
  r.inputs["q"] = a.q ? Json(a.q) : Json("default set");
  for (auto q : qs) field_checks(r, q);
  return r;
}

Report cmd_census_g1(Session& s, const Params& a) {
  require(a.q >= 2, "census-g1 needs --q");
  Report r{"census-g1"};
  r.inputs["q"] = a.q;
  const auto& h = s.store().elliptic(a.q);
  for (const auto& [t, w] : h.numerators()) r.rows.push_back({{"a", t}, {"weight", str(h.weight(t))}});
  r.check("mass", std::to_string(a.q), str(h.total_mass()));
  bool symmetric = true;
  for (const auto& [t, w] : h.numerators()) symmetric = symmetric && h.weight(-t) == h.weight(t);
  r.check("twist symmetry", "true", symmetric ? "true" : "false");
  return r;
}

Report cmd_census_g2(Session& s, const Params& a) {
  require(a.q >= 2, "census-g2 needs --q");
  Report r{"census-g2"};
  r.inputs["q"] = a.q;
  const auto& h = s.store().genus2(a.q);
  for (const auto& [k, w] : h.numerators()) {
    r.rows.push_back({{"a1", k.a1}, {"a2", k.a2}, {"weight", str(h.weight(k))}});
  }
  r.check("mass", str(ipow(BigInt(a.q), 3)), str(h.total_mass()));
  bool symmetric = true;
  for (const auto& [k, w] : h.numerators()) symmetric = symmetric && h.weight({-k.a1, k.a2}) == h.weight(k);
  r.check("twist symmetry", "true", symmetric ? "true" : "false");
  return r;
}

HighestWeight weight_arg(const Params& a) {
  require(a.l >= 0 && a.m >= 0, "this command needs --l and --m");
  require(a.l >= a.m, "need l >= m");
  return HighestWeight{a.l, a.m};
}

SiegelWeight siegel_arg(const Params& a) {
  require(a.j >= 0 && a.k >= 0, "this command needs --j and --k");
  return SiegelWeight{a.j, a.k};
}

Report cmd_trace(Session& s, const Params& a) {
  const HighestWeight w = weight_arg(a);
  require(a.q >= 2, "trace needs --q");
  Report r{"trace"};
  r.inputs["l"] = w.l;
  r.inputs["m"] = w.m;
  r.inputs["q"] = a.q;
  for (Space sp : {Space::M2, Space::A11, Space::A2}) {
    TraceValue v = sp == Space::M2 ? s.traces().t_m2(w, a.q) : sp == Space::A11 ? s.traces().t_a11(w, a.q) : s.traces().t_a2(w, a.q);
    r.rows.push_back({{"space", to_string(sp)}, {"trace", str(v.value)}});
    r.check("integral " + to_string(sp), "true", is_integral(v.value) ? "true" : "false");
  }
  return r;
}

Report cmd_formula(Session& s, const Params& a, bool eisenstein) {
  const HighestWeight w = weight_arg(a);
  Report r{eisenstein ? "eis" : "endo"};
  r.inputs["l"] = w.l;
  r.inputs["m"] = w.m;
  const MotiveExpr e = eisenstein ? eisenstein_ec(w.l, w.m, s.motive()) : endoscopic_ec(w.l, w.m, s.motive());
  Json row = {{"expr", e.str()}};
  if (a.q) {
    r.inputs["q"] = a.q;
    row["value"] = str(specialize(e, a.q, s.siegel().provider()));
  }
  r.rows.push_back(row);
  return r;
}

std::vector<std::uint32_t> primes_for(const Params& a) {
  std::vector<std::uint32_t> ps;
  if (a.p) {
    require(is_prime(a.p), std::to_string(a.p) + " is not prime");
    ps.push_back(a.p);
  } else {
    require(a.pmax >= 2, "needs --p or --pmax");
    for (std::uint32_t p = 2; p <= a.pmax; ++p) {
      if (is_prime(p)) ps.push_back(p);
    }
  }
  return ps;
}

Report cmd_hecke(Session& s, const Params& a) {
  const SiegelWeight sw = siegel_arg(a);
  Report r{"hecke"};
  r.inputs["j"] = sw.j;
  r.inputs["k"] = sw.k;
  if (a.p) r.inputs["p"] = a.p;
  if (a.pmax) r.inputs["pmax"] = a.pmax;
  for (auto p : primes_for(a)) {
    const BigInt lp = s.siegel().lambda(sw, p);
    r.rows.push_back({{"p", p}, {"lambda", str(lp)}});
    if (auto known = known_lambda(sw, p)) r.check("lambda(" + std::to_string(p) + ")", str(*known), str(lp));
  }
  return r;
}

std::pair<BigInt, BigInt> lambdas(Session& s, const Params& a, SiegelWeight sw) {
  const BigInt lp = a.lambda.empty() ? s.siegel().lambda(sw, a.p) : BigInt(a.lambda);
  const BigInt lp2 = a.lambda2.empty() ? s.siegel().lambda_sq(sw, a.p) : BigInt(a.lambda2);
  return {lp, lp2};
}

Report cmd_charpoly(Session& s, const Params& a) {
  const SiegelWeight sw = siegel_arg(a);
  require(a.p && is_prime(a.p), "charpoly needs a prime --p");
  Report r{"charpoly"};
  r.inputs["j"] = sw.j;
  r.inputs["k"] = sw.k;
  r.inputs["p"] = a.p;
  const auto [lp, lp2] = lambdas(s, a, sw);
  const SpinQuartic Q = spin_charpoly(sw, a.p, lp, lp2);
  r.rows.push_back({{"lambda(p)", str(lp)}, {"lambda(p^2)", str(lp2)}});
  for (std::size_t i = 0; i < 5; ++i) r.rows.push_back({{"degree", i}, {"coefficient", str(Q.c[i])}});
  r.check("functional equation", str(Q.c[1] * ipow(BigInt(a.p), static_cast<unsigned>(Q.motivic_weight()))), str(Q.c[3]));
  r.check("roots of absolute value p^(w/2)", "true", Q.roots_on_circle() ? "true" : "false");
  return r;
}

Report cmd_slopes(Session& s, const Params& a) {
  const SiegelWeight sw = siegel_arg(a);
  require(a.p && is_prime(a.p), "slopes needs a prime --p");
  Report r{"slopes"};
  r.inputs["j"] = sw.j;
  r.inputs["k"] = sw.k;
  r.inputs["p"] = a.p;
  const auto [lp, lp2] = lambdas(s, a, sw);
  const NewtonPolygon np = newton_slopes(spin_charpoly(sw, a.p, lp, lp2));
  r.rows.push_back({{"slopes", slopes_text(np.slopes, false)}});
  r.check("slope pairing", "true", np.symmetric(sw.j + 2 * sw.k - 3) ? "true" : "false");
  if (sw == SiegelWeight{6, 8}) {
    for (const auto& row : table_s68()) {
      if (row.p == a.p && row.lambda == lp && row.lambda_sq == lp2) {
        r.check("slopes at p=" + std::to_string(a.p), slopes_text(row.slopes, false), slopes_text(np.slopes, true));
      }
    }
  }
  return r;
}

Report cmd_mgn(Session& s, const Params& a) {
  require(a.g == 1 || a.g == 2, "mgn needs --g 1 or --g 2");
  require(a.n >= 0 && a.q >= 2, "mgn needs --n and --q");
  Report r{"mgn"};
  r.inputs["g"] = a.g;
  r.inputs["n"] = a.n;
  r.inputs["q"] = a.q;
  const BigRational c = s.traces().count_mgn(a.g, a.n, a.q);
  r.rows.push_back({{"count", str(c)}});
  if (a.g == 2) {
    const std::uint32_t serre = a.q + 1 + 2 * static_cast<std::uint32_t>(std::floor(2 * std::sqrt(double(a.q)) + 1e-9));
    if (static_cast<std::uint32_t>(a.n) > serre) r.check("Serre bound", "0", str(c));
  }
  return r;
}

Report cmd_getzler(Session& s, const Params& a) {
  require(a.n >= 1, "getzler needs --n >= 1");
  Report r{"getzler"};
  r.inputs["n"] = a.n;
  const MotiveExpr e = getzler_ec_m1(a.n, s.motive());
  Json row = {{"expr", e.str()}};
  if (a.q) {
    r.inputs["q"] = a.q;
    const BigInt v = specialize(e, a.q, s.siegel().provider());
    row["value"] = str(v);
    r.check("count of M_1," + std::to_string(a.n), str(s.traces().count_mgn(1, a.n, a.q)), str(v));
  }
  r.rows.push_back(row);
  return r;
}

Report cmd_theta(Session& s, const Params& a) {
  Report r{"theta"};
  r.inputs["n1"] = a.n1;
  r.inputs["n2"] = a.n2;
  r.inputs["n3"] = a.n3;
  for (int nu = 0; nu <= 6; ++nu) {
    if (a.nu >= 0 && nu != a.nu) continue;
    const auto [re, im] = theta_coefficient(a.n1, a.n2, a.n3, nu, s.config().threads);
    r.rows.push_back({{"nu", nu}, {"re", str(re)}, {"im", str(im)}});
  }
  return r;
}

// ---- verification suites ----

void suite_s6(Session& s, Report& r, bool optional_tier) {
  const SiegelWeight sw{6, 8};
  for (const auto& row : table_s68()) {
    const std::string p = std::to_string(row.p);
    r.check("S[6,8] lambda(" + p + ")", str(row.lambda), str(s.siegel().lambda(sw, row.p)));
    const bool sq_required = row.p <= 3;
    if (sq_required || (optional_tier && row.p == 5)) {
      r.check("S[6,8] lambda(" + p + "^2)", str(row.lambda_sq), str(s.siegel().lambda_sq(sw, row.p)));
    }
    const NewtonPolygon np = newton_slopes(spin_charpoly(sw, row.p, row.lambda, row.lambda_sq));
    r.check("S[6,8] slopes p=" + p, slopes_text(row.slopes, false), slopes_text(np.slopes, true));
  }
}

void suite_s78(Session& s, Report& r, std::uint32_t pmax) {
  for (const auto& [sw, table] : {std::pair{SiegelWeight{8, 8}, &table_s88()}, std::pair{SiegelWeight{12, 6}, &table_s126()}}) {
    for (const auto& [p, f] : *table) {
      if (p > pmax) continue;
      const BigInt v = s.siegel().lambda(sw, p);
      r.rows.push_back({{"space", "S[" + std::to_string(sw.j) + "," + std::to_string(sw.k) + "]"},
                        {"p", p},
                        {"lambda", str(v)},
                        {"factored", f.str()}});
      r.check("S[" + std::to_string(sw.j) + "," + std::to_string(sw.k) + "] lambda(" + std::to_string(p) + ")",
              str(f.value()), str(v));
    }
  }
}

void suite_s8(Session& s, Report& r) {
  auto tp = s.siegel().provider();
  const MotiveExpr v115 = reference_polynomial(ReferencePolynomial::EcM2_V115);
  const MotiveExpr a2 = -MotiveExpr::siegel(6, 8) - MotiveExpr::L(6);
  const MotiveExpr m10 = reference_polynomial(ReferencePolynomial::EcM2_10);
  const MotiveExpr m16 = reference_polynomial(ReferencePolynomial::EcM2_16);
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u}) {
    const std::string qs = std::to_string(q);
    r.check("t_m2(11,5," + qs + ")", str(specialize(v115, q, tp)), str(s.traces().t_m2({11, 5}, q).value));
    r.check("t_a2(11,5," + qs + ")", str(specialize(a2, q, tp)), str(s.traces().t_a2({11, 5}, q).value));
    r.check("#M_2,10(F_" + qs + ")", str(specialize(m10, q, tp)), str(s.traces().count_mgn(2, 10, q)));
    r.check("#M_2,16(F_" + qs + ")", str(specialize(m16, q, tp)), str(s.traces().count_mgn(2, 16, q)));
  }
}

void suite_getzler(Session& s, Report& r) {
  for (int n = 1; n <= 6; ++n) {
    const MotiveExpr e = getzler_ec_m1(n, s.motive());
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 9u}) {
      r.check("#M_1," + std::to_string(n) + "(F_" + std::to_string(q) + ")", str(s.traces().count_mgn(1, n, q)),
              str(specialize(e, q, s.siegel().provider())));
    }
  }
}

Report cmd_verify(Session& s, const Params& a) {
  static const std::vector<std::string> suites = {"s6", "s78", "s8", "getzler", "all"};
  require(std::find(suites.begin(), suites.end(), a.suite) != suites.end(),
          "unknown suite '" + a.suite + "' (s6, s78, s8, getzler, all)");
  Report r{"verify-paper"};
  r.inputs["suite"] = a.suite;
  const std::uint32_t pmax = a.pmax ? a.pmax : 13;
  if (a.suite == "s78" || a.suite == "all") r.inputs["pmax"] = pmax;
  const bool all = a.suite == "all";
  if (all || a.suite == "s6") suite_s6(s, r, a.optional_tier);
  if (all || a.suite == "s78") suite_s78(s, r, pmax);
  if (all || a.suite == "s8") suite_s8(s, r);
  if (all || a.suite == "getzler") suite_getzler(s, r);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locsys-cli: point counts of genus 1 and 2 curves, local system traces and Siegel eigenvalues"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  Params a;
  app.add_option("--cache-dir", cfg.cache_dir, "census cache directory (default $LOCSYS_CACHE_DIR or ./locsys-cache)");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--strategy", cfg.strategy, "census strategy")->check(CLI::IsMember({"auto", "full", "reduced"}));
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--compute", cfg.compute, "compute censuses missing from the cache");
  app.add_flag("--convention-s2", cfg.convention_s2, "read S[2] as -L-1 and s_2 as -1");
  app.add_flag("--no-banner", cfg.no_banner, "omit the timestamp line");
  app.add_option("--g1-max-q", cfg.g1_max_q, "largest q for genus-1 censuses")->check(CLI::PositiveNumber);
  app.add_option("--g2-max-q", cfg.g2_max_q, "largest q for genus-2 censuses")->check(CLI::PositiveNumber);

  using Fn = Report (*)(Session&, const Params&);
  std::map<std::string, Fn> handlers;
  auto sub = [&](const std::string& name, const std::string& help, Fn fn) {
    handlers[name] = fn;
    return app.add_subcommand(name, help);
  };
  auto* c = sub("field-selftest", "check finite field arithmetic", cmd_field_selftest);
  c->add_option("--q", a.q, "field size (default: a fixed set)");
  c = sub("census-g1", "weighted census of elliptic curves", cmd_census_g1);
  c->add_option("--q", a.q)->required();
  c = sub("census-g2", "weighted census of genus-2 curves", cmd_census_g2);
  c->add_option("--q", a.q)->required();
  c = sub("trace", "traces of Frobenius on V_{l,m} over M_2, A_1,1 and A_2", cmd_trace);
  c->add_option("--l", a.l)->required();
  c->add_option("--m", a.m)->required();
  c->add_option("--q", a.q)->required();
  c = sub("eis", "Eisenstein Euler characteristic", [](Session& s, const Params& p) { return cmd_formula(s, p, true); });
  c->add_option("--l", a.l)->required();
  c->add_option("--m", a.m)->required();
  c->add_option("--q", a.q, "also specialize at q");
  c = sub("endo", "endoscopic Euler characteristic", [](Session& s, const Params& p) { return cmd_formula(s, p, false); });
  c->add_option("--l", a.l)->required();
  c->add_option("--m", a.m)->required();
  c->add_option("--q", a.q, "also specialize at q");
  c = sub("hecke", "Hecke eigenvalues lambda(p) on a one-dimensional S_{j,k}", cmd_hecke);
  c->add_option("--j", a.j)->required();
  c->add_option("--k", a.k)->required();
  c->add_option("--p", a.p);
  c->add_option("--pmax", a.pmax);
  for (const char* name : {"charpoly", "slopes"}) {
    c = sub(name, std::string(name) == "charpoly" ? "spin characteristic polynomial" : "Newton slopes of the spin polynomial",
            std::string(name) == "charpoly" ? cmd_charpoly : cmd_slopes);
    c->add_option("--j", a.j)->required();
    c->add_option("--k", a.k)->required();
    c->add_option("--p", a.p)->required();
    c->add_option("--lambda", a.lambda, "use this lambda(p) instead of extracting it");
    c->add_option("--lambda2", a.lambda2, "use this lambda(p^2) instead of extracting it");
  }
  c = sub("mgn", "point count of M_{g,n}", cmd_mgn);
  c->add_option("--g", a.g)->required();
  c->add_option("--n", a.n)->required();
  c->add_option("--q", a.q)->required();
  c = sub("getzler", "e_c(M_{1,n}) from the residue formula", cmd_getzler);
  c->add_option("--n", a.n)->required();
  c->add_option("--q", a.q, "also specialize and compare with the census");
  c = sub("theta", "theta coefficients of the form in S_{6,8}", cmd_theta);
  c->add_option("--n1", a.n1)->required();
  c->add_option("--n2", a.n2)->required();
  c->add_option("--n3", a.n3)->required();
  c->add_option("--nu", a.nu);
  c = sub("verify-paper", "reproduce the published eigenvalue, slope and point-count tables", cmd_verify);
  c->add_option("--suite", a.suite)->check(CLI::IsMember({"s6", "s78", "s8", "getzler", "all"}));
  c->add_option("--pmax", a.pmax, "largest p for the s78 tables (default 13)");
  c->add_flag("--optional", a.optional_tier, "include lambda(25) in s6");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Session session(cfg);
    const Report r = handlers.at(name)(session, a);
    emit(r, cfg);
    return r.ok() ? kExitOk : kExitMismatch;
  } catch (const MissingDataError& e) {
    std::cerr << "missing data: " << e.what() << "\n";
    return kExitMissing;
  } catch (const MissingTraceError& e) {
    std::cerr << "missing data: " << e.what() << "\n";
    return kExitMissing;
  } catch (const CensusError& e) {
    std::cerr << "missing data: " << e.what() << "\n";
    return kExitMissing;
  } catch (const ConjectureViolation& e) {
    std::cerr << "mismatch: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const CacheError& e) {
    std::cerr << "cache: " << e.what() << "\n";
    return kExitMissing;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FieldError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
