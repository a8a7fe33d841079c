#pragma once

// Characters of Sp(4) as universal polynomials in the Weil coefficients.
//
// For a Frobenius with eigenvalues {a, q/a, b, q/b} on H^1, write e1, e2 for the
// first two elementary symmetric functions. The trace on V_{l,m} (l + m even)
// is an integer polynomial P_{l,m}(e1, e2, q), homogeneous of weight l + m when
// e1 has degree 1 and e2, q have degree 2.

#include "locsys/bigint.hpp"

#include <array>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace locsys {

struct HighestWeight {
  int l = 0;
  int m = 0;

  HighestWeight() = default;
  HighestWeight(int l_, int m_) : l(l_), m(m_) {
    if (!(l >= m && m >= 0)) {
      throw std::invalid_argument("highest weight requires l >= m >= 0, got (" + std::to_string(l) + "," +
                                  std::to_string(m) + ")");
    }
  }

  bool regular() const { return l > m && m > 0; }
  int weight() const { return l + m; }
  auto operator<=>(const HighestWeight&) const = default;
};

/// Laurent polynomial in two variables x, y; key (i, j) is x^i y^j.
using Laurent2 = std::map<std::pair<int, int>, BigInt>;

namespace laurent {

inline void add_term(Laurent2& a, std::pair<int, int> k, const BigInt& c) {
  if (c == 0) return;
  auto [it, inserted] = a.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) a.erase(it);
  }
}

inline Laurent2 mul(const Laurent2& a, const Laurent2& b) {
  Laurent2 r;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) add_term(r, {ka.first + kb.first, ka.second + kb.second}, ca * cb);
  }
  return r;
}

inline Laurent2 sub(Laurent2 a, const Laurent2& b) {
  for (const auto& [k, c] : b) add_term(a, k, -c);
  return a;
}

/// Exact quotient in the Laurent ring, by leading-term elimination in lex order.
inline Laurent2 divide_exact(Laurent2 num, const Laurent2& den, std::size_t max_terms) {
  if (den.empty()) throw std::domain_error("division by zero Laurent polynomial");
  const auto& [dk, dc] = *den.rbegin();
  Laurent2 quot;
  while (!num.empty()) {
    const auto [nk, nc] = *num.rbegin();
    if (nc % dc != 0) throw std::runtime_error("Weyl quotient: non-integral coefficient");
    const std::pair<int, int> qk{nk.first - dk.first, nk.second - dk.second};
    const BigInt qc = nc / dc;
    add_term(quot, qk, qc);
    for (const auto& [k, c] : den) add_term(num, {k.first + qk.first, k.second + qk.second}, -qc * c);
    if (quot.size() > max_terms) throw std::runtime_error("Weyl quotient: nonzero remainder");
  }
  return quot;
}

}  // namespace laurent

/// Sparse integer polynomial in e1, e2, q; key (i, j, k) is e1^i e2^j q^k.
class CharPoly3 {
 public:
  using Key = std::array<int, 3>;

  void add(Key k, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<Key, BigInt>& terms() const { return terms_; }

  BigInt coefficient(Key k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  BigInt eval(const BigInt& e1, const BigInt& e2, const BigInt& q) const {
    BigInt acc = 0;
    for (const auto& [k, c] : terms_) {
      acc += c * ipow(e1, static_cast<unsigned>(k[0])) * ipow(e2, static_cast<unsigned>(k[1])) *
             ipow(q, static_cast<unsigned>(k[2]));
    }
    return acc;
  }

  /// True iff every term has weight i + 2j + 2k == w.
  bool homogeneous_of_weight(int w) const {
    for (const auto& [k, c] : terms_) {
      if (k[0] + 2 * k[1] + 2 * k[2] != w) return false;
    }
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [k, c] = *it;
      std::string mono;
      const char* names[3] = {"e1", "e2", "q"};
      for (int v = 0; v < 3; ++v) {
        if (k[v] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[v];
        if (k[v] > 1) mono += "^" + std::to_string(k[v]);
      }
      BigInt a = c < 0 ? BigInt(-c) : c;
      std::string coef = (a == 1 && !mono.empty()) ? "" : a.str() + (mono.empty() ? "" : "*");
      if (out.empty()) {
        out += (c < 0 ? "-" : "") + coef + mono;
      } else {
        out += (c < 0 ? " - " : " + ") + coef + mono;
      }
    }
    return out;
  }

  friend bool operator==(const CharPoly3&, const CharPoly3&) = default;

 private:
  std::map<Key, BigInt> terms_;
};

inline BigInt weyl_dim(HighestWeight w) {
  const BigInt n = BigInt(w.l - w.m + 1) * (w.m + 1) * (w.l + 2) * (w.l + w.m + 3);
  return n / 6;
}

/// Character of V_{l,m} on the torus diag(x, 1/x, y, 1/y) of Sp(4), by the Weyl
/// character formula with rho = (2, 1).
inline Laurent2 weyl_character(HighestWeight w) {
  auto alternant = [](int a, int b) {
    // det [[x^a - x^-a, x^b - x^-b], [y^a - y^-a, y^b - y^-b]]
    Laurent2 r;
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        const int sign = sa * sb;
        laurent::add_term(r, {sa * a, sb * b}, BigInt(sign));
        laurent::add_term(r, {sb * b, sa * a}, BigInt(-sign));
      }
    }
    return r;
  };
  const Laurent2 num = alternant(w.l + 2, w.m + 1);
  const Laurent2 den = alternant(2, 1);
  const auto bound = static_cast<std::size_t>((2 * w.l + 5) * (2 * w.l + 5));
  return laurent::divide_exact(num, den, bound);
}

namespace detail {

inline std::vector<BigInt> binomial_row(int n) {
  std::vector<BigInt> row(static_cast<std::size_t>(n) + 1, 1);
  for (int k = 1; k < n; ++k) {
    row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k) - 1] * (n - k + 1) / k;
  }
  return row;
}

// Rewrites a character invariant under x -> 1/x, y -> 1/y and x <-> y as a
// polynomial in s = u + v and t = uv, where u = x + 1/x, v = y + 1/y.
inline std::map<std::pair<int, int>, BigInt> to_st(Laurent2 chi) {
  // Step 1: polynomial in (u, v).
  std::map<std::pair<int, int>, BigInt> uv;
  while (!chi.empty()) {
    const auto [k, c] = *chi.rbegin();
    const auto [i, j] = k;
    if (i < 0 || j < 0) throw std::runtime_error("character is not Weyl-invariant");
    uv[{i, j}] += c;
    const auto bi = binomial_row(i), bj = binomial_row(j);
    for (int r = 0; r <= i; ++r) {
      for (int s = 0; s <= j; ++s) {
        laurent::add_term(chi, {i - 2 * r, j - 2 * s}, -c * bi[static_cast<std::size_t>(r)] * bj[static_cast<std::size_t>(s)]);
      }
    }
  }
  // Step 2: symmetric polynomial in (u, v) -> polynomial in (s, t).
  std::map<std::pair<int, int>, BigInt> st;
  while (!uv.empty()) {
    const auto [k, c] = *uv.rbegin();
    const auto [a, b] = k;
    if (a < b) throw std::runtime_error("character is not symmetric in the two factors");
    st[{a - b, b}] += c;
    // subtract c (u + v)^{a-b} (uv)^b
    const auto bin = binomial_row(a - b);
    for (int r = 0; r <= a - b; ++r) {
      const std::pair<int, int> key{b + (a - b - r), b + r};
      auto it = uv.find(key);
      BigInt val = (it == uv.end() ? BigInt(0) : it->second) - c * bin[static_cast<std::size_t>(r)];
      if (val == 0) {
        if (it != uv.end()) uv.erase(it);
      } else {
        uv[key] = val;
      }
    }
  }
  return st;
}

}  // namespace detail

/// The universal polynomial P_{l,m}(e1, e2, q). Requires l + m even.
inline CharPoly3 sp4_char(HighestWeight w) {
  if (w.weight() % 2 != 0) throw std::invalid_argument("sp4_char requires l + m even");
  static std::mutex mu;
  static std::map<HighestWeight, CharPoly3> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(w); it != memo.end()) return it->second;
  }
  const auto st = detail::to_st(weyl_character(w));
  // q^{n/2} s^A t^B with s = e1 / sqrt(q), t = e2 / q - 2
  //   = e1^A (e2 - 2q)^B q^{(n - A - 2B)/2}
  const int n = w.weight();
  CharPoly3 P;
  for (const auto& [k, c] : st) {
    const auto [A, B] = k;
    const int rest = n - A - 2 * B;
    if (rest < 0 || rest % 2 != 0) throw std::runtime_error("character has a term of wrong weight");
    const auto bin = detail::binomial_row(B);
    for (int r = 0; r <= B; ++r) {
      // e2^{B-r} (-2q)^r
      BigInt coef = c * bin[static_cast<std::size_t>(r)] * ipow(-2, static_cast<unsigned>(r));
      P.add({A, B - r, rest / 2 + r}, coef);
    }
  }
  std::lock_guard lock(mu);
  memo.emplace(w, P);
  return P;
}

inline BigInt sp4_char_eval(HighestWeight w, std::int64_t a1, std::int64_t a2, std::int64_t q) {
  return sp4_char(w).eval(BigInt(a1), BigInt(a2), BigInt(q));
}

/// Trace of Frobenius on Sym^k of a rank-2 module with trace a and determinant q.
inline BigInt sl2_sym_char(int k, std::int64_t a, std::int64_t q) {
  if (k < 0) throw std::invalid_argument("negative symmetric power");
  BigInt prev = 1, cur = a;
  if (k == 0) return prev;
  for (int i = 2; i <= k; ++i) {
    BigInt next = BigInt(a) * cur - BigInt(q) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace locsys
