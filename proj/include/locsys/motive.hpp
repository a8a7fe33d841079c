#pragma once

// Formal Grothendieck-ring expressions: linear combinations of the basis
// motives 1, S[k], S[j,k] with coefficients polynomial in the Tate motive L.
// Includes the Eisenstein and endoscopic Euler characteristics of V_{l,m} on
// A_2, the genus-1 residue formula for M_{1,n}, and specialization at q.

#include "locsys/bigint.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace locsys {

struct MotiveSymbol {
  enum class Kind { One, Cusp, Siegel, WeightTwoDim };
  Kind kind = Kind::One;
  int j = 0;  // Siegel: Sym^j
  int k = 0;  // Cusp, Siegel: weight

  static MotiveSymbol one() { return {}; }
  static MotiveSymbol cusp(int k) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("S[k] needs even k >= 2, got " + std::to_string(k));
    return {Kind::Cusp, 0, k};
  }
  static MotiveSymbol siegel(int j, int k) {
    if (j < 0 || j % 2 != 0 || k < 3) {
      throw std::invalid_argument("S[j,k] needs even j >= 0 and k >= 3, got " + std::to_string(j) + "," +
                                  std::to_string(k));
    }
    return {Kind::Siegel, j, k};
  }
  // s_2 kept as an unknown integer when the weight-2 convention is off
  static MotiveSymbol weight_two_dim() { return {Kind::WeightTwoDim, 0, 0}; }

  auto operator<=>(const MotiveSymbol&) const = default;

  std::string str() const {
    switch (kind) {
      case Kind::One: return "1";
      case Kind::Cusp: return "S[" + std::to_string(k) + "]";
      case Kind::Siegel: return "S[" + std::to_string(j) + "," + std::to_string(k) + "]";
      case Kind::WeightTwoDim: return "s2";
    }
    return "?";
  }
};

/// Laurent polynomial in L: exponent -> coefficient, zero coefficients absent.
using LPoly = std::map<int, BigInt>;

namespace lpoly {

inline void add_term(LPoly& p, int e, const BigInt& c) {
  if (c == 0) return;
  auto [it, fresh] = p.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

inline LPoly mul(const LPoly& a, const LPoly& b) {
  LPoly r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) add_term(r, ea + eb, ca * cb);
  }
  return r;
}

inline BigRational eval(const LPoly& p, std::int64_t q) {
  BigRational r = 0;
  for (const auto& [e, c] : p) {
    r += e >= 0 ? BigRational(c * ipow(q, static_cast<unsigned>(e)))
                : BigRational(c, ipow(q, static_cast<unsigned>(-e)));
  }
  return r;
}

/// Descending powers, e.g. "L^5 - 2L^4 + L - 2".
inline std::string str(const LPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    const auto& [e, c] = *it;
    const BigInt mag = c < 0 ? BigInt(-c) : c;
    if (c < 0) {
      out += first ? "-" : " - ";
    } else if (!first) {
      out += " + ";
    }
    if (e == 0) {
      out += mag.str();
    } else {
      if (mag != 1) out += mag.str();
      out += "L";
      if (e != 1) out += "^" + std::to_string(e);
    }
    first = false;
  }
  return out;
}

}  // namespace lpoly

class MotiveExpr {
 public:
  MotiveExpr() = default;
  MotiveExpr(std::int64_t c) { add(MotiveSymbol::one(), 0, c); }  // NOLINT(google-explicit-constructor)

  static MotiveExpr L(int power = 1) {
    MotiveExpr e;
    e.add(MotiveSymbol::one(), power, 1);
    return e;
  }
  static MotiveExpr symbol(const MotiveSymbol& s) {
    MotiveExpr e;
    e.add(s, 0, 1);
    return e;
  }
  static MotiveExpr cusp(int k) { return symbol(MotiveSymbol::cusp(k)); }
  static MotiveExpr siegel(int j, int k) { return symbol(MotiveSymbol::siegel(j, k)); }
  /// Polynomial coefficients in ascending powers of L, attached to `s`.
  static MotiveExpr poly(std::initializer_list<std::int64_t> ascending, const MotiveSymbol& s = MotiveSymbol::one()) {
    MotiveExpr e;
    int power = 0;
    for (auto c : ascending) e.add(s, power++, c);
    return e;
  }

  void add(const MotiveSymbol& s, int power, const BigInt& c) {
    if (c == 0) return;
    auto& p = terms_[s];
    lpoly::add_term(p, power, c);
    if (p.empty()) terms_.erase(s);
  }

  const std::map<MotiveSymbol, LPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  LPoly coefficient(const MotiveSymbol& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? LPoly{} : it->second;
  }

  bool is_polynomial() const {
    for (const auto& [s, p] : terms_) {
      if (!p.empty() && p.begin()->first < 0) return false;
    }
    return true;
  }

  MotiveExpr& operator+=(const MotiveExpr& o) {
    for (const auto& [s, p] : o.terms_) {
      for (const auto& [e, c] : p) add(s, e, c);
    }
    return *this;
  }
  MotiveExpr& operator-=(const MotiveExpr& o) { return *this += o * MotiveExpr(-1); }

  friend MotiveExpr operator+(MotiveExpr a, const MotiveExpr& b) { return a += b; }
  friend MotiveExpr operator-(MotiveExpr a, const MotiveExpr& b) { return a -= b; }
  friend MotiveExpr operator-(const MotiveExpr& a) { return a * MotiveExpr(-1); }

  friend MotiveExpr operator*(const MotiveExpr& a, const MotiveExpr& b) {
    MotiveExpr r;
    for (const auto& [sa, pa] : a.terms_) {
      for (const auto& [sb, pb] : b.terms_) {
        const bool a_one = sa.kind == MotiveSymbol::Kind::One;
        const bool b_one = sb.kind == MotiveSymbol::Kind::One;
        if (!a_one && !b_one) {
          throw std::logic_error("product of two non-unit motives " + sa.str() + " * " + sb.str());
        }
        const MotiveSymbol& s = a_one ? sb : sa;
        for (const auto& [e, c] : lpoly::mul(pa, pb)) r.add(s, e, c);
      }
    }
    return r;
  }
  MotiveExpr& operator*=(const MotiveExpr& o) { return *this = *this * o; }

  bool operator==(const MotiveExpr&) const = default;

  /// Siegel motives, then S[k] by descending weight, then the scalar part,
  /// e.g. "-S[6,8] - (L + 1)S[12] - L^5 - 2".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<MotiveSymbol, LPoly>> order;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (it->first.kind != MotiveSymbol::Kind::One) order.emplace_back(*it);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      auto rank = [](MotiveSymbol::Kind k) {
        return k == MotiveSymbol::Kind::Siegel ? 0 : k == MotiveSymbol::Kind::Cusp ? 1 : 2;
      };
      return rank(x.first.kind) < rank(y.first.kind);
    });
    std::string out;
    bool first = true;
    for (const auto& [s, p] : order) {
      LPoly c = p;
      bool negative = c.rbegin()->second < 0;
      if (negative) {
        for (auto& [e, v] : c) v = -v;
      }
      out += negative ? (first ? "-" : " - ") : (first ? "" : " + ");
      if (!(c.size() == 1 && c.begin()->first == 0 && c.begin()->second == 1)) out += "(" + lpoly::str(c) + ")";
      out += s.str();
      first = false;
    }
    if (auto it = terms_.find(MotiveSymbol::one()); it != terms_.end()) {
      const std::string scalar = lpoly::str(it->second);
      if (first) {
        out += scalar;
      } else if (scalar.front() == '-') {
        out += " - " + scalar.substr(1);
      } else {
        out += " + " + scalar;
      }
    }
    return out;
  }

 private:
  std::map<MotiveSymbol, LPoly> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const MotiveExpr& e) { return os << e.str(); }

struct MotiveOptions {
  /// Read S[2] as -L-1 and s_2 as -1.
  bool weight_two_convention = false;
  /// Receives diagnostics for pairs outside the regular range.
  std::function<void(const std::string&)> warn = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
  int getzler_max_n = 20;
};

/// Dimension of weight-n cusp forms for SL(2, Z); -1 at n = 2 under the convention.
inline int dim_cusp_sl2(int n, bool weight_two_convention = false) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("dim_cusp_sl2 needs even n >= 2, got " + std::to_string(n));
  if (n == 2) return weight_two_convention ? -1 : 0;
  return n % 12 == 2 ? n / 12 - 1 : n / 12;
}

/// Drops S[k] for vanishing cusp spaces and applies the weight-two convention.
inline MotiveExpr simplify(const MotiveExpr& e, const MotiveOptions& opt = {}) {
  MotiveExpr r;
  for (const auto& [s, p] : e.terms()) {
    MotiveExpr coeff;
    for (const auto& [pow, c] : p) coeff.add(MotiveSymbol::one(), pow, c);
    if (s.kind == MotiveSymbol::Kind::Cusp) {
      if (s.k == 2) {
        r += opt.weight_two_convention ? coeff * MotiveExpr::poly({-1, -1}) : coeff * MotiveExpr::symbol(s);
      } else if (dim_cusp_sl2(s.k) != 0) {
        r += coeff * MotiveExpr::symbol(s);
      }
    } else if (s.kind == MotiveSymbol::Kind::WeightTwoDim) {
      r += opt.weight_two_convention ? coeff * MotiveExpr(-1) : coeff * MotiveExpr::symbol(s);
    } else {
      r += coeff * MotiveExpr::symbol(s);
    }
  }
  return r;
}

namespace detail {

/// s_n as an expression, symbolic at n = 2 unless the convention is on.
inline MotiveExpr cusp_dim_expr(int n, const MotiveOptions& opt) {
  if (n == 2 && !opt.weight_two_convention) return MotiveExpr::symbol(MotiveSymbol::weight_two_dim());
  return MotiveExpr(dim_cusp_sl2(n, opt.weight_two_convention));
}

inline void check_weight(int l, int m, const MotiveOptions& opt, const char* what) {
  if (l < m || m < 0) throw std::invalid_argument(std::string(what) + ": need l >= m >= 0");
  if ((l + m) % 2 != 0) throw std::invalid_argument(std::string(what) + ": l + m must be even");
  if (l > m && m > 0) return;
  if (l == m && m > 0 && m % 2 == 0) {
    opt.warn(std::string(what) + "(" + std::to_string(l) + "," + std::to_string(m) +
             "): l = m even, L-function vanishing may invalidate the formula");
  } else {
    opt.warn(std::string(what) + "(" + std::to_string(l) + "," + std::to_string(m) +
             "): pair is not regular, formula read with the weight-two convention");
  }
}

}  // namespace detail

/// Euler characteristic of Eisenstein cohomology of V_{l,m} on A_2.
inline MotiveExpr eisenstein_ec(int l, int m, const MotiveOptions& opt = {}) {
  detail::check_weight(l, m, opt, "eisenstein_ec");
  MotiveExpr e = detail::cusp_dim_expr(l - m + 2, opt) - detail::cusp_dim_expr(l + m + 4, opt) * MotiveExpr::L(m + 1);
  if (l % 2 == 0) {
    e += MotiveExpr::cusp(m + 2) + MotiveExpr(1);
  } else {
    e -= MotiveExpr::cusp(l + 3);
  }
  return simplify(e, opt);
}

/// Conjectural endoscopic contribution -s_{l+m+4} S[l-m+2] L^{m+1}.
inline MotiveExpr endoscopic_ec(int l, int m, const MotiveOptions& opt = {}) {
  detail::check_weight(l, m, opt, "endoscopic_ec");
  const MotiveExpr e = -(detail::cusp_dim_expr(l + m + 4, opt) * MotiveExpr::cusp(l - m + 2) * MotiveExpr::L(m + 1));
  return simplify(e, opt);
}

/// e_c(A_2, V_{l,m}) = -S[l-m, m+3] + endoscopic + Eisenstein.
inline MotiveExpr conjectural_ec_a2(int l, int m, const MotiveOptions& opt = {}) {
  MotiveOptions quiet = opt;
  detail::check_weight(l, m, opt, "conjectural_ec_a2");
  quiet.warn = [](const std::string&) {};
  return -MotiveExpr::siegel(l - m, m + 3) + endoscopic_ec(l, m, quiet) + eisenstein_ec(l, m, quiet);
}

/// e_c(M_{1,n}) as the omega^{-1} residue of
///   (Z)_{n-1} (sum_{k>=1} (S[2k+2]+1) L^{-2k-1} w^{2k} - 1) (w - L/w),  Z = L - w - L/w.
inline MotiveExpr getzler_ec_m1(int n, const MotiveOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("getzler_ec_m1 needs n >= 1");
  if (n > opt.getzler_max_n) {
    throw std::invalid_argument("getzler_ec_m1: n = " + std::to_string(n) + " exceeds bound " +
                                std::to_string(opt.getzler_max_n));
  }
  using Series = std::map<int, MotiveExpr>;  // power of omega -> coefficient
  auto mul = [](const Series& a, const Series& b) {
    Series r;
    for (const auto& [ea, ca] : a) {
      for (const auto& [eb, cb] : b) {
        MotiveExpr t = ca * cb;
        if (t.is_zero()) continue;
        auto& slot = r[ea + eb];
        slot += t;
        if (slot.is_zero()) r.erase(ea + eb);
      }
    }
    return r;
  };
  Series falling{{0, MotiveExpr(1)}};
  for (int i = 0; i < n - 1; ++i) {
    const Series factor{{-1, -MotiveExpr::L()}, {0, MotiveExpr::L() - MotiveExpr(i)}, {1, MotiveExpr(-1)}};
    falling = mul(falling, factor);
  }
  Series bracket{{0, MotiveExpr(-1)}};
  for (int k = 1; 2 * k <= n + 1; ++k) {
    bracket[2 * k] = (MotiveExpr::cusp(2 * k + 2) + MotiveExpr(1)) * MotiveExpr::L(-2 * k - 1);
  }
  const Series tail{{1, MotiveExpr(1)}, {-1, -MotiveExpr::L()}};
  const Series full = mul(mul(falling, bracket), tail);
  auto it = full.find(-1);
  MotiveExpr res = it == full.end() ? MotiveExpr() : simplify(it->second, opt);
  if (!res.is_polynomial()) {
    throw std::logic_error("getzler_ec_m1(" + std::to_string(n) + "): negative powers of L survive: " + res.str());
  }
  return res;
}

enum class ReferencePolynomial { EcM2_10, EcM2_16, EcM2_V115 };

inline ReferencePolynomial parse_reference_polynomial(std::string_view name) {
  if (name == "EC_M2_10") return ReferencePolynomial::EcM2_10;
  if (name == "EC_M2_16") return ReferencePolynomial::EcM2_16;
  if (name == "EC_M2_V115") return ReferencePolynomial::EcM2_V115;
  throw std::invalid_argument("unknown reference polynomial '" + std::string(name) + "'");
}

/// e_c(M_{2,10}), e_c(M_{2,16}) and e_c(M_2, V_{11,5}).
inline MotiveExpr reference_polynomial(ReferencePolynomial which) {
  const auto S12 = MotiveSymbol::cusp(12);
  const auto S16 = MotiveSymbol::cusp(16);
  const auto S18 = MotiveSymbol::cusp(18);
  const MotiveExpr v115 = -MotiveExpr::siegel(6, 8) - MotiveExpr::poly({1, 1}, S12) -
                          MotiveExpr::poly({2, 2, 2, 2, 2, 1});
  switch (which) {
    case ReferencePolynomial::EcM2_V115:
      return v115;
    case ReferencePolynomial::EcM2_10:
      return MotiveExpr::poly({-302400, -233280, 604236, -166663, -189334, 212730, -156313, 95927, -38931, 8253, -420,
                               -120, 10, 1}) +
             MotiveExpr::poly({-9, 1}, S12);
    case ReferencePolynomial::EcM2_16: {
      const MotiveExpr a = MotiveExpr::poly({-1743565818904, -2584542638104, 3250035688136, 1168650933424,
                                             -2508087212954, 1000400749388, 109307474312, -279604866542,
                                             144755642044, -43836908908, 8143511948, -635722737, -109303012,
                                             41896790, -6084744, 441714, -9828, -560, 16, 1});
      const MotiveExpr b = MotiveExpr::poly({-2102115, 649792, -51480}, S18);
      const MotiveExpr c = MotiveExpr::poly({-64260, 19175, -1560}, S16);
      const MotiveExpr d = MotiveExpr::poly(
          {-3563125592, 2979292862, -1125323276, 256866324, -39326716, 4086368, -264264, 8008}, S12);
      return a + b + c + d + MotiveExpr(2548) * v115;
    }
  }
  throw std::invalid_argument("unknown reference polynomial");
}

inline MotiveExpr reference_polynomial(std::string_view name) {
  return reference_polynomial(parse_reference_polynomial(name));
}

/// Frobenius trace of a basis motive at q; nullopt when unknown.
using TraceProvider = std::function<std::optional<BigInt>(const MotiveSymbol&, std::uint32_t q)>;

class MissingTraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Substitutes L -> q and every basis motive by its trace.
inline BigInt specialize(const MotiveExpr& e, std::uint32_t q, const TraceProvider& tp) {
  BigRational total = 0;
  for (const auto& [s, p] : e.terms()) {
    BigInt value = 1;
    if (s.kind != MotiveSymbol::Kind::One) {
      auto v = tp ? tp(s, q) : std::nullopt;
      if (!v) throw MissingTraceError("no trace for " + s.str() + " at q = " + std::to_string(q));
      value = *v;
    }
    total += lpoly::eval(p, q) * value;
  }
  return require_integer(total, "specialization of " + e.str() + " at q = " + std::to_string(q));
}

}  // namespace locsys
