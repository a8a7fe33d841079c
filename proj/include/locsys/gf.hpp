#pragma once

// Small finite fields F_{p^e}.
//
// Elements are canonical integers: the coefficient vector (d_0, ..., d_{e-1})
// of d_0 + d_1 x + ... relative to the field modulus, packed base p. The
// prime subfield is therefore {0, ..., p-1} in every field of characteristic p.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace locsys {

using Elem = std::uint32_t;

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldLimits {
  std::uint64_t max_q = std::uint64_t{1} << 20;
  // log/antilog tables up to this size, polynomial arithmetic above
  std::uint32_t table_cap = 1u << 16;
  // full q x q addition and multiplication tables up to this size
  std::uint32_t square_table_cap = 1024;
};

namespace detail {

// Polynomials over F_p, lowest coefficient first, no trailing zeros.
using PpPoly = std::vector<int>;

inline void trim(PpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  int r = 1, b = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = static_cast<int>(static_cast<long long>(r) * b % p);
    b = static_cast<int>(static_cast<long long>(b) * b % p);
    e >>= 1;
  }
  return r;
}

inline PpPoly rem(PpPoly a, const PpPoly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = inv_mod(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int c = static_cast<int>(static_cast<long long>(a.back()) * lead_inv % p);
    for (int i = 0; i <= dm; ++i) {
      a[shift + i] = static_cast<int>(((a[shift + i] - static_cast<long long>(c) * m[i]) % p + p) % p);
    }
    trim(a);
  }
  return a;
}

inline PpPoly mul(const PpPoly& a, const PpPoly& b, int p) {
  if (a.empty() || b.empty()) return {};
  PpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<int>((r[i + j] + static_cast<long long>(a[i]) * b[j]) % p);
    }
  }
  trim(r);
  return r;
}

inline PpPoly mulmod(const PpPoly& a, const PpPoly& b, const PpPoly& m, int p) {
  return rem(mul(a, b, p), m, p);
}

inline PpPoly sub(PpPoly a, const PpPoly& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  trim(a);
  return a;
}

inline PpPoly gcd(PpPoly a, PpPoly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PpPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline PpPoly powmod(PpPoly base, std::uint64_t e, const PpPoly& m, int p) {
  PpPoly r{1};
  base = rem(base, m, p);
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, m, p);
    base = mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

// Ben-Or: f of degree n is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= n/2.
inline bool is_irreducible(const PpPoly& f, int p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  PpPoly xp{0, 1};
  const PpPoly x{0, 1};
  for (int i = 1; i <= n / 2; ++i) {
    xp = powmod(xp, static_cast<std::uint64_t>(p), f, p);
    const PpPoly g = gcd(f, sub(xp, x, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

/// Immutable description of F_{p^e} with its arithmetic. Copies share tables.
class FieldDesc {
 public:
  static FieldDesc make(unsigned p, unsigned e, FieldLimits limits = {}) {
    check_size(p, e, limits);
    if (e == 1) return FieldDesc(p, 1, {0, 1}, limits);
    // Canonical modulus: least monic irreducible, ordered by the packed
    // integer of its lower coefficients.
    std::uint64_t count = 1;
    for (unsigned i = 0; i < e; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      detail::PpPoly f(e + 1, 0);
      std::uint64_t v = idx;
      for (unsigned i = 0; i < e; ++i) {
        f[i] = static_cast<int>(v % p);
        v /= p;
      }
      f[e] = 1;
      if (f[0] != 0 && detail::is_irreducible(f, static_cast<int>(p))) {
        return FieldDesc(p, e, std::move(f), limits);
      }
    }
    throw FieldError("internal error: no irreducible modulus of degree " + std::to_string(e));
  }

  /// Field with an explicit monic modulus (low coefficient first).
  static FieldDesc with_modulus(unsigned p, std::vector<int> modulus, FieldLimits limits = {}) {
    detail::trim(modulus);
    if (modulus.size() < 2) throw FieldError("modulus must have degree >= 1");
    const auto e = static_cast<unsigned>(modulus.size() - 1);
    check_size(p, e, limits);
    for (auto& c : modulus) c = ((c % static_cast<int>(p)) + static_cast<int>(p)) % static_cast<int>(p);
    if (modulus.back() != 1) throw FieldError("modulus must be monic");
    if (!detail::is_irreducible(modulus, static_cast<int>(p))) {
      throw FieldError("modulus is reducible over F_" + std::to_string(p));
    }
    return FieldDesc(p, e, std::move(modulus), limits);
  }

  unsigned p() const { return p_; }
  unsigned e() const { return e_; }
  std::uint32_t q() const { return q_; }
  const std::vector<int>& modulus() const { return t_->modulus; }
  bool table_backed() const { return !t_->exp.empty(); }
  bool has_square_tables() const { return !t_->add.empty(); }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  /// Image of an integer in the prime field.
  Elem from_int(long long n) const {
    const auto pp = static_cast<long long>(p_);
    return static_cast<Elem>(((n % pp) + pp) % pp);
  }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (e_ == 1) {
      const Elem s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (!t_->add.empty()) return t_->add[static_cast<std::size_t>(a) * q_ + b];
    return digitwise(a, b, +1);
  }

  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    if (e_ == 1) return a == 0 ? 0 : p_ - a;
    if (!t_->neg.empty()) return t_->neg[a];
    return digitwise(0, a, -1);
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (!t_->mul.empty()) return t_->mul[static_cast<std::size_t>(a) * q_ + b];
    if (a == 0 || b == 0) return 0;
    if (!t_->exp.empty()) {
      std::uint32_t s = t_->log[a] + t_->log[b];
      if (s >= q_ - 1) s -= q_ - 1;
      return t_->exp[s];
    }
    return poly_mul(a, b);
  }

  Elem inv(Elem a) const {
    if (a == 0) throw FieldError("inverse of zero");
    if (!t_->inv.empty()) return t_->inv[a];
    return pow(a, q_ - 2);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t n) const {
    Elem r = 1;
    while (n > 0) {
      if (n & 1) r = mul(r, a);
      a = mul(a, a);
      n >>= 1;
    }
    return r;
  }

  /// Least primitive element.
  Elem generator() const {
    if (!t_->exp.empty()) return t_->exp[1 % (q_ - 1)];
    return find_generator();
  }

  /// Legendre-type symbol: 0 at zero, +1 on nonzero squares, -1 otherwise.
  int quadratic_character(Elem x) const {
    if (p_ == 2) throw FieldError("quadratic_character requires odd characteristic");
    if (!t_->chi.empty()) return t_->chi[x];
    return chi_by_pow(x);
  }

  /// Tr_{F_q/F_2}(x) as 0 or 1.
  int absolute_trace(Elem x) const {
    if (p_ != 2) throw FieldError("absolute_trace requires characteristic 2");
    if (!t_->tr.empty()) return t_->tr[x];
    return trace_by_frobenius(x);
  }

  // Raw tables for enumeration hot loops; empty when not built.
  std::span<const std::uint16_t> add_table() const { return t_->add; }
  std::span<const std::uint16_t> mul_table() const { return t_->mul; }
  std::span<const std::int8_t> chi_table() const { return t_->chi; }
  std::span<const std::int8_t> trace_table() const { return t_->tr; }

  std::vector<int> digits(Elem a) const {
    std::vector<int> d(e_, 0);
    for (unsigned i = 0; i < e_; ++i) {
      d[i] = static_cast<int>(a % p_);
      a /= p_;
    }
    return d;
  }

  Elem from_digits(const std::vector<int>& d) const {
    Elem v = 0;
    for (std::size_t i = d.size(); i-- > 0;) {
      if (i >= e_) {
        if (d[i] % static_cast<int>(p_) != 0) throw FieldError("digit vector longer than field degree");
        continue;
      }
      v = v * p_ + static_cast<Elem>(((d[i] % static_cast<int>(p_)) + static_cast<int>(p_)) % static_cast<int>(p_));
    }
    return v;
  }

  /// The canonical degree-k extension F_{q^k}.
  FieldDesc extension(unsigned k, FieldLimits limits = {}) const { return make(p_, e_ * k, limits); }

  /// Images of all elements of this field under an embedding into `big`.
  std::vector<Elem> embedding_into(const FieldDesc& big) const {
    if (big.p() != p_ || big.e() % e_ != 0) throw FieldError("no embedding between these fields");
    std::vector<Elem> image(q_);
    if (e_ == 1) {
      std::iota(image.begin(), image.end(), Elem{0});
      return image;
    }
    // A root of our modulus in the big field.
    std::optional<Elem> beta;
    for (Elem b = 0; b < big.q() && !beta; ++b) {
      Elem acc = 0;
      for (std::size_t i = t_->modulus.size(); i-- > 0;) {
        acc = big.add(big.mul(acc, b), static_cast<Elem>(t_->modulus[i]));
      }
      if (acc == 0) beta = b;
    }
    if (!beta) throw FieldError("internal error: modulus has no root in extension");
    for (Elem v = 0; v < q_; ++v) {
      const auto d = digits(v);
      Elem acc = 0;
      for (std::size_t i = d.size(); i-- > 0;) acc = big.add(big.mul(acc, *beta), static_cast<Elem>(d[i]));
      image[v] = acc;
    }
    return image;
  }

  friend bool operator==(const FieldDesc& a, const FieldDesc& b) {
    return a.p_ == b.p_ && a.e_ == b.e_ && a.t_->modulus == b.t_->modulus;
  }

 private:
  struct Tables {
    std::vector<int> modulus;
    std::vector<std::uint32_t> exp, log, inv, neg;
    std::vector<std::uint16_t> add, mul;
    std::vector<std::int8_t> chi, tr;
  };

  FieldDesc(unsigned p, unsigned e, std::vector<int> modulus, FieldLimits limits)
      : p_(p), e_(e), q_(1) {
    for (unsigned i = 0; i < e; ++i) q_ *= p;
    auto t = std::make_shared<Tables>();
    t->modulus = std::move(modulus);
    t_ = t;
    if (q_ <= limits.table_cap) build_tables(*t, limits);
  }

  static void check_size(unsigned p, unsigned e, const FieldLimits& limits) {
    if (!detail::is_prime(p)) throw FieldError(std::to_string(p) + " is not prime");
    if (e == 0) throw FieldError("exponent must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < e; ++i) {
      q *= p;
      if (q > limits.max_q) throw FieldError("field size exceeds configured bound");
    }
  }

  detail::PpPoly to_poly(Elem a) const {
    auto d = digits(a);
    detail::trim(d);
    return d;
  }

  Elem from_poly(const detail::PpPoly& f) const {
    Elem v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = v * p_ + static_cast<Elem>(f[i]);
    return v;
  }

  Elem poly_mul(Elem a, Elem b) const {
    return from_poly(detail::mulmod(to_poly(a), to_poly(b), t_->modulus, static_cast<int>(p_)));
  }

  Elem digitwise(Elem a, Elem b, int sign) const {
    Elem r = 0, scale = 1;
    for (unsigned i = 0; i < e_; ++i) {
      const int da = static_cast<int>(a % p_), db = static_cast<int>(b % p_);
      a /= p_;
      b /= p_;
      const int s = ((da + sign * db) % static_cast<int>(p_) + static_cast<int>(p_)) % static_cast<int>(p_);
      r += static_cast<Elem>(s) * scale;
      scale *= p_;
    }
    return r;
  }

  Elem pow_poly(Elem a, std::uint64_t n) const {
    Elem r = 1;
    while (n > 0) {
      if (n & 1) r = poly_mul(r, a);
      a = poly_mul(a, a);
      n >>= 1;
    }
    return r;
  }

  Elem find_generator() const {
    const auto primes = detail::prime_factors(q_ - 1);
    for (Elem g = 1; g < q_; ++g) {
      bool ok = true;
      for (auto r : primes) {
        if (pow_poly(g, (q_ - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    throw FieldError("internal error: no primitive element");
  }

  int chi_by_pow(Elem x) const {
    if (x == 0) return 0;
    return pow(x, (q_ - 1) / 2) == 1 ? 1 : -1;
  }

  int trace_by_frobenius(Elem x) const {
    Elem acc = 0, y = x;
    for (unsigned i = 0; i < e_; ++i) {
      acc ^= y;
      y = mul(y, y);
    }
    return static_cast<int>(acc);
  }

  void build_tables(Tables& t, const FieldLimits& limits) {
    const Elem g = q_ == 2 ? 1 : find_generator();
    t.exp.assign(q_ - 1, 0);
    t.log.assign(q_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i + 1 < q_; ++i) {
      t.exp[i] = x;
      t.log[x] = i;
      x = poly_mul(x, g);
    }
    if (x != 1) throw FieldError("internal error: generator order mismatch");
    t.inv.assign(q_, 0);
    for (Elem a = 1; a < q_; ++a) t.inv[a] = t.exp[(q_ - 1 - t.log[a]) % (q_ - 1)];
    t.neg.assign(q_, 0);
    for (Elem a = 0; a < q_; ++a) t.neg[a] = digitwise(0, a, -1);
    if (p_ == 2) {
      t.tr.assign(q_, 0);
      for (Elem a = 0; a < q_; ++a) t.tr[a] = static_cast<std::int8_t>(trace_by_frobenius(a));
    } else {
      t.chi.assign(q_, -1);
      t.chi[0] = 0;
      for (std::uint32_t i = 0; i + 1 < q_; i += 2) t.chi[t.exp[i]] = 1;
    }
    if (q_ <= limits.square_table_cap) {
      t.add.assign(static_cast<std::size_t>(q_) * q_, 0);
      t.mul.assign(static_cast<std::size_t>(q_) * q_, 0);
      for (Elem a = 0; a < q_; ++a) {
        for (Elem b = 0; b < q_; ++b) {
          t.add[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(digitwise(a, b, +1));
          if (a != 0 && b != 0) {
            std::uint32_t s = t.log[a] + t.log[b];
            if (s >= q_ - 1) s -= q_ - 1;
            t.mul[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(t.exp[s]);
          }
        }
      }
    }
  }

  unsigned p_;
  unsigned e_;
  std::uint32_t q_;
  std::shared_ptr<const Tables> t_;
};

inline FieldDesc make_field(unsigned p, unsigned e, FieldLimits limits = {}) {
  return FieldDesc::make(p, e, limits);
}

// ---------------------------------------------------------------------------
// Polynomials over F_q (lowest coefficient first) and binary forms.

using FqPoly = std::vector<Elem>;

namespace poly {

inline void trim(FqPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const FqPoly& a) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

inline Elem eval(const FqPoly& a, Elem x, const FieldDesc& F) {
  Elem acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a[i]);
  return acc;
}

inline FqPoly derivative(const FqPoly& a, const FieldDesc& F) {
  FqPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(F.mul(F.from_int(static_cast<long long>(i)), a[i]));
  trim(d);
  return d;
}

inline FqPoly rem(FqPoly a, const FqPoly& b, const FieldDesc& F) {
  trim(a);
  const int db = degree(b);
  if (db < 0) throw FieldError("polynomial division by zero");
  const Elem lead_inv = F.inv(b[static_cast<std::size_t>(db)]);
  while (degree(a) >= db) {
    const int da = degree(a);
    const Elem c = F.mul(a[static_cast<std::size_t>(da)], lead_inv);
    const int shift = da - db;
    for (int i = 0; i <= db; ++i) {
      auto& slot = a[static_cast<std::size_t>(shift + i)];
      slot = F.sub(slot, F.mul(c, b[static_cast<std::size_t>(i)]));
    }
    trim(a);
  }
  return a;
}

inline FqPoly gcd(FqPoly a, FqPoly b, const FieldDesc& F) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FqPoly r = rem(a, b, F);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline FqPoly mul(const FqPoly& a, const FqPoly& b, const FieldDesc& F) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

inline FqPoly add(FqPoly a, const FqPoly& b, const FieldDesc& F) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i]);
  trim(a);
  return a;
}

}  // namespace poly

/// Binary form sum_i c_i x^i z^{d-i}; coeffs.size() == d + 1.
struct BinaryForm {
  std::vector<Elem> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](Elem c) { return c == 0; });
  }

  Elem eval(Elem x, Elem z, const FieldDesc& F) const {
    const int d = degree();
    std::vector<Elem> zp(static_cast<std::size_t>(d) + 1, 1);
    for (int i = 1; i <= d; ++i) zp[static_cast<std::size_t>(i)] = F.mul(zp[static_cast<std::size_t>(i) - 1], z);
    Elem acc = 0;
    for (int i = d; i >= 0; --i) {
      acc = F.add(F.mul(acc, x), F.mul(coeffs[static_cast<std::size_t>(i)], zp[static_cast<std::size_t>(d - i)]));
    }
    return acc;
  }

  /// f(x, 1) as a polynomial in x.
  FqPoly dehomogenize_z() const {
    FqPoly a(coeffs.begin(), coeffs.end());
    poly::trim(a);
    return a;
  }

  /// f(1, t) as a polynomial in t = z / x.
  FqPoly dehomogenize_x() const {
    FqPoly a(coeffs.rbegin(), coeffs.rend());
    poly::trim(a);
    return a;
  }
};

/// True iff the form has no repeated root on P^1 over the algebraic closure.
/// Uses gcd(g, g') = 1 for the affine part g = f(x, 1), which is valid in every
/// characteristic over a perfect field, plus the multiplicity at (1:0).
inline bool binary_form_squarefree(const BinaryForm& f, const FieldDesc& F) {
  if (f.degree() < 1) throw FieldError("binary form of degree >= 1 required");
  if (f.is_zero()) throw FieldError("zero binary form");
  const int d = f.degree();
  int mult_inf = 0;
  while (mult_inf <= d && f.coeffs[static_cast<std::size_t>(d - mult_inf)] == 0) ++mult_inf;
  if (mult_inf >= 2) return false;
  const FqPoly g = f.dehomogenize_z();
  if (poly::degree(g) <= 0) return true;
  const FqPoly dg = poly::derivative(g, F);
  if (dg.empty()) return false;
  return poly::degree(poly::gcd(g, dg, F)) == 0;
}

}  // namespace locsys
