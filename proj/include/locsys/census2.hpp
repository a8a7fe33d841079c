#pragma once

// Weighted census of genus-2 curves over F_q.
//
// Odd q: curves y^2 = f(x, z) with f a squarefree binary sextic. The group
// GL(2) x G_m acts on sextics with a kernel of order q - 1 and stabilizer
// (q - 1) #Aut(C), so every model carries weight 1 / #GL(2, F_q).
//
// Even q: curves y^2 + h y = f with h a cubic and f a sextic form. The shifts
// y -> y + j(x, z) enlarge the group by q^4, so every smooth model carries
// weight 1 / (#GL(2, F_q) q^4).

#include "locsys/bigint.hpp"
#include "locsys/census_common.hpp"
#include "locsys/gf.hpp"
#include "locsys/histogram.hpp"
#include "locsys/parallel.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace locsys {

struct G2OddModel {
  BinaryForm f;  // degree-6 form
};

struct G2EvenModel {
  BinaryForm h;  // degree-3 form
  BinaryForm f;  // degree-6 form
};

using G2Model = std::variant<G2OddModel, G2EvenModel>;

/// Weil coefficients from the point counts over F_q and F_{q^2}.
inline WeilKey weil_from_counts(std::int64_t N1, std::int64_t N2, std::int64_t q) {
  const std::int64_t a1 = q + 1 - N1;
  const std::int64_t twice = a1 * a1 - (q * q + 1 - N2);
  if (twice % 2 != 0) {
    throw CensusError("parity violation: N1=" + std::to_string(N1) + " N2=" + std::to_string(N2) +
                      " q=" + std::to_string(q));
  }
  return {static_cast<int>(a1), static_cast<int>(twice / 2)};
}

/// True iff every root of x^4 - a1 x^3 + a2 x^2 - q a1 x + q^2 has absolute
/// value sqrt(q), i.e. both roots of y^2 - a1 y + a2 - 2q are real and lie in
/// [-2 sqrt(q), 2 sqrt(q)].
inline bool weil_key_valid(WeilKey k, std::uint32_t q) {
  const double a1 = k.a1, b = k.a2 - 2.0 * q, s = 2.0 * std::sqrt(static_cast<double>(q));
  const double disc = a1 * a1 - 4 * b;
  const double tol = 1e-9 * std::max(1.0, a1 * a1);
  if (disc < -tol) return false;
  const double r = std::sqrt(std::max(0.0, disc));
  const double y1 = (a1 - r) / 2, y2 = (a1 + r) / 2;
  return y1 >= -s - 1e-9 && y2 <= s + 1e-9;
}

namespace detail {

// Dense polynomials of degree < 12 over F_q, for hot-loop gcds.
struct SmallPoly {
  std::array<Elem, 12> c{};
  int deg = -1;

  void normalize() {
    deg = -1;
    for (int i = 11; i >= 0; --i) {
      if (c[static_cast<std::size_t>(i)] != 0) {
        deg = i;
        break;
      }
    }
  }
};

inline void small_rem(SmallPoly& a, const SmallPoly& b, Elem lead_inv, const FieldDesc& F) {
  while (a.deg >= b.deg) {
    const Elem k = F.mul(a.c[static_cast<std::size_t>(a.deg)], lead_inv);
    const int shift = a.deg - b.deg;
    for (int i = 0; i <= b.deg; ++i) {
      auto& slot = a.c[static_cast<std::size_t>(shift + i)];
      slot = F.sub(slot, F.mul(k, b.c[static_cast<std::size_t>(i)]));
    }
    a.normalize();
  }
}

// Degree of gcd(a, b); -1 when both vanish.
inline int small_gcd_degree(SmallPoly a, SmallPoly b, const FieldDesc& F) {
  while (b.deg >= 0) {
    small_rem(a, b, F.inv(b.c[static_cast<std::size_t>(b.deg)]), F);
    std::swap(a, b);
  }
  return a.deg;
}

// Squarefreeness of a sextic form from its coefficient array.
inline bool sextic_squarefree(const std::array<Elem, 7>& c, const FieldDesc& F) {
  SmallPoly g;
  for (int i = 0; i < 7; ++i) g.c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
  g.normalize();
  if (g.deg < 5) return false;  // root of multiplicity >= 2 at infinity, or zero form
  SmallPoly d;
  for (int i = 1; i <= g.deg; ++i) {
    d.c[static_cast<std::size_t>(i - 1)] = F.mul(F.from_int(i), g.c[static_cast<std::size_t>(i)]);
  }
  d.normalize();
  if (d.deg < 0) return false;
  return small_gcd_degree(g, d, F) == 0;
}

// For one affine chart of y^2 + h y = f in characteristic 2: singular points
// lie over common roots of h and h'^2 f + f'^2.
inline bool char2_chart_smooth(const std::array<Elem, 4>& h, const std::array<Elem, 7>& f, const FieldDesc& F) {
  SmallPoly H;
  for (int i = 0; i < 4; ++i) H.c[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(i)];
  H.normalize();
  if (H.deg < 0) return false;
  if (H.deg == 0) return true;
  // h' has coefficients h1, 0, h3 (odd powers survive); f' = f1 + f3 x^2 + f5 x^4.
  SmallPoly B;
  const Elem d0 = h[1], d2 = h[3];
  const Elem s0 = F.mul(d0, d0), s4 = F.mul(d2, d2);  // h'^2 = s0 + s4 x^4
  for (int i = 0; i < 7; ++i) {
    const Elem fi = f[static_cast<std::size_t>(i)];
    if (fi == 0) continue;
    B.c[static_cast<std::size_t>(i)] = F.add(B.c[static_cast<std::size_t>(i)], F.mul(s0, fi));
    B.c[static_cast<std::size_t>(i + 4)] = F.add(B.c[static_cast<std::size_t>(i + 4)], F.mul(s4, fi));
  }
  for (int i : {1, 3, 5}) {
    const Elem fi = f[static_cast<std::size_t>(i)];
    B.c[static_cast<std::size_t>(2 * (i - 1))] = F.add(B.c[static_cast<std::size_t>(2 * (i - 1))], F.mul(fi, fi));
  }
  B.normalize();
  if (B.deg < 0) return false;  // every root of h is singular
  small_rem(B, H, F.inv(H.c[static_cast<std::size_t>(H.deg)]), F);
  return small_gcd_degree(H, B, F) == 0;
}

inline bool char2_smooth(const std::array<Elem, 4>& h, const std::array<Elem, 7>& f, const FieldDesc& F) {
  if (!char2_chart_smooth(h, f, F)) return false;
  const std::array<Elem, 4> hr{h[3], h[2], h[1], h[0]};
  const std::array<Elem, 7> fr{f[6], f[5], f[4], f[3], f[2], f[1], f[0]};
  return char2_chart_smooth(hr, fr, F);
}

// Points of P^1 over F_q and one representative per conjugate pair of
// F_{q^2} \ F_q, with powers 0..6 precomputed.
struct ProjectiveLine {
  FieldDesc base;
  FieldDesc ext;
  std::vector<Elem> embed;                 // F_q -> F_{q^2}
  std::vector<std::array<Elem, 7>> rpow;   // powers of x in F_q, x = 0..q-1
  std::vector<std::array<Elem, 7>> ppow;   // powers of pair representatives in F_{q^2}

  explicit ProjectiveLine(const FieldDesc& F) : base(F), ext(F.extension(2)), embed(F.embedding_into(ext)) {
    const Elem q = F.q();
    rpow.resize(q);
    for (Elem x = 0; x < q; ++x) {
      rpow[x][0] = 1;
      for (int i = 1; i < 7; ++i) rpow[x][static_cast<std::size_t>(i)] = F.mul(rpow[x][static_cast<std::size_t>(i - 1)], x);
    }
    std::vector<bool> in_base(ext.q(), false);
    for (Elem v : embed) in_base[v] = true;
    for (Elem a = 0; a < ext.q(); ++a) {
      if (in_base[a]) continue;
      const Elem conj = ext.pow(a, q);
      if (conj < a) continue;
      std::array<Elem, 7> pw{};
      pw[0] = 1;
      for (int i = 1; i < 7; ++i) pw[static_cast<std::size_t>(i)] = ext.mul(pw[static_cast<std::size_t>(i - 1)], a);
      ppow.push_back(pw);
    }
  }

  template <std::size_t N>
  Elem eval_rational(const std::array<Elem, N>& c, Elem x) const {
    Elem acc = 0;
    for (std::size_t i = 0; i < N; ++i) acc = base.add(acc, base.mul(c[i], rpow[x][i]));
    return acc;
  }

  template <std::size_t N>
  Elem eval_pair(const std::array<Elem, N>& c, std::size_t k) const {
    Elem acc = 0;
    for (std::size_t i = 0; i < N; ++i) acc = ext.add(acc, ext.mul(embed[c[i]], ppow[k][i]));
    return acc;
  }
};

// Raw (N1, N2) counts per multiplicity class.
struct CountTally {
  std::int64_t n1_size = 0, n2_size = 0;
  std::vector<std::vector<std::int64_t>> counts;

  CountTally(std::uint32_t q, std::size_t classes) {
    n1_size = 2 * static_cast<std::int64_t>(q) + 3;
    n2_size = 2 * static_cast<std::int64_t>(q) * q + 2 * q + 3;
    counts.assign(classes, std::vector<std::int64_t>(static_cast<std::size_t>(n1_size * n2_size), 0));
  }

  void add(std::size_t cls, int N1, int N2) {
    if (N1 < 0 || N1 >= n1_size || N2 < 0 || N2 >= n2_size) {
      throw CensusError("point count out of range: N1=" + std::to_string(N1) + " N2=" + std::to_string(N2));
    }
    ++counts[cls][static_cast<std::size_t>(N1 * n2_size + N2)];
  }

  void merge(const CountTally& o) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
      for (std::size_t i = 0; i < counts[c].size(); ++i) counts[c][i] += o.counts[c][i];
    }
  }
};

inline WeilHistogram finish_g2(std::uint32_t q, const BigInt& den, const std::vector<CountTally>& parts,
                               const std::vector<BigInt>& multiplicity) {
  CountTally total = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) total.merge(parts[i]);
  WeilHistogram h(q, den);
  for (std::size_t c = 0; c < multiplicity.size(); ++c) {
    for (std::size_t i = 0; i < total.counts[c].size(); ++i) {
      const std::int64_t n = total.counts[c][i];
      if (n == 0) continue;
      const auto N1 = static_cast<std::int64_t>(i) / total.n2_size, N2 = static_cast<std::int64_t>(i) % total.n2_size;
      const WeilKey key = weil_from_counts(N1, N2, q);
      if (!weil_key_valid(key, q)) {
        throw CensusError("Weil bound violated at (" + std::to_string(key.a1) + "," + std::to_string(key.a2) + ")");
      }
      h.add(key, multiplicity[c] * n);
    }
  }
  return h;
}

inline BigInt gl2_order(std::uint32_t q) {
  const BigInt Q = q;
  return (Q * Q - 1) * (Q * Q - Q);
}

// Allowed values of the coefficients c1..c6 (c0 always runs over F_q).
struct OddSlice {
  std::array<std::vector<Elem>, 7> allowed;  // index 0 unused
  BigInt multiplicity;

  std::uint64_t prefix_count() const {
    std::uint64_t n = 1;
    for (int i = 1; i < 7; ++i) n *= allowed[static_cast<std::size_t>(i)].size();
    return n;
  }
};

inline WeilHistogram census_odd(const FieldDesc& F, const std::vector<OddSlice>& slices, unsigned threads) {
  const ProjectiveLine line(F);
  const Elem q = F.q();
  const FieldDesc& E = line.ext;
  // items: (slice, prefix) pairs flattened
  std::vector<std::uint64_t> offsets{0};
  for (const auto& s : slices) offsets.push_back(offsets.back() + s.prefix_count());
  const std::size_t npairs = line.ppow.size();
  auto parts = parallel_items(offsets.back(), threads, CountTally(q, slices.size()), [&](CountTally& t, std::size_t item) {
    std::size_t cls = 0;
    while (item >= offsets[cls + 1]) ++cls;
    std::uint64_t idx = item - offsets[cls];
    std::array<Elem, 7> c{};
    for (int i = 1; i < 7; ++i) {
      const auto& al = slices[cls].allowed[static_cast<std::size_t>(i)];
      c[static_cast<std::size_t>(i)] = al[idx % al.size()];
      idx /= al.size();
    }
    // values without c0
    std::vector<Elem> v1(q), v2(npairs);
    for (Elem x = 0; x < q; ++x) v1[x] = line.eval_rational(c, x);
    for (std::size_t k = 0; k < npairs; ++k) v2[k] = line.eval_pair(c, k);
    const Elem top = c[6];
    for (Elem c0 = 0; c0 < q; ++c0) {
      c[0] = c0;
      if (!sextic_squarefree(c, F)) continue;
      int N1 = 1 + F.quadratic_character(top);
      int N2 = 1 + (top != 0);
      for (Elem x = 0; x < q; ++x) {
        const Elem val = F.add(v1[x], c0);
        N1 += 1 + F.quadratic_character(val);
        N2 += 1 + (val != 0);
      }
      const Elem c0e = line.embed[c0];
      for (std::size_t k = 0; k < npairs; ++k) N2 += 2 * (1 + E.quadratic_character(E.add(v2[k], c0e)));
      t.add(cls, N1, N2);
    }
  });
  std::vector<BigInt> mult;
  for (const auto& s : slices) mult.push_back(s.multiplicity);
  return finish_g2(q, gl2_order(q), parts, mult);
}

inline Elem least_nonsquare(const FieldDesc& F) {
  for (Elem v = 1; v < F.q(); ++v) {
    if (F.quadratic_character(v) == -1) return v;
  }
  throw CensusError("internal error: no non-square");
}

inline std::vector<Elem> all_elements(const FieldDesc& F) {
  std::vector<Elem> v(F.q());
  for (Elem i = 0; i < F.q(); ++i) v[i] = i;
  return v;
}

inline WeilHistogram census_odd_full(const FieldDesc& F, unsigned threads) {
  OddSlice s;
  for (int i = 1; i < 7; ++i) s.allowed[static_cast<std::size_t>(i)] = all_elements(F);
  s.multiplicity = 1;
  return census_odd(F, {s}, threads);
}

// Representatives under y -> sqrt(s) y (s a nonzero square) and x -> x + b z.
// Scaling by squares is free on nonzero forms, so it contributes (q - 1)/2;
// a translation that kills the subleading coefficient contributes q.
inline WeilHistogram census_odd_reduced(const FieldDesc& F, unsigned threads) {
  const Elem q = F.q();
  const Elem nu = least_nonsquare(F);
  const BigInt half = BigInt(q - 1) / 2;
  std::vector<OddSlice> slices;
  // c6 != 0: c6 in {1, nu}; 6 c6 b shifts c5
  {
    OddSlice s;
    for (int i = 1; i <= 4; ++i) s.allowed[static_cast<std::size_t>(i)] = all_elements(F);
    s.allowed[6] = {1, nu};
    if (F.p() != 3) {
      s.allowed[5] = {0};
      s.multiplicity = half * q;
    } else {
      s.allowed[5] = all_elements(F);
      s.multiplicity = half;
    }
    slices.push_back(s);
  }
  // c6 == 0, then c5 != 0: c5 in {1, nu}; 5 c5 b shifts c4
  {
    OddSlice s;
    for (int i = 1; i <= 3; ++i) s.allowed[static_cast<std::size_t>(i)] = all_elements(F);
    s.allowed[6] = {0};
    s.allowed[5] = {1, nu};
    if (F.p() != 5) {
      s.allowed[4] = {0};
      s.multiplicity = half * q;
    } else {
      s.allowed[4] = all_elements(F);
      s.multiplicity = half;
    }
    slices.push_back(s);
  }
  return census_odd(F, slices, threads);
}

// Char-2 point data for a fixed h.
struct Char2Fiber {
  const ProjectiveLine* line = nullptr;
  std::array<Elem, 4> h{};
  std::vector<Elem> ih2_r;  // 1/h(x)^2 in F_q, or 0 where h(x) = 0
  std::vector<bool> hzero_r;
  std::vector<Elem> ih2_p;  // same at pair representatives, in F_{q^2}
  std::vector<bool> hzero_p;
  Elem ih2_inf = 0;
  bool hzero_inf = false;

  Char2Fiber(const ProjectiveLine& L, const std::array<Elem, 4>& hh) : line(&L), h(hh) {
    const FieldDesc& F = L.base;
    const FieldDesc& E = L.ext;
    const Elem q = F.q();
    ih2_r.resize(q);
    hzero_r.resize(q);
    for (Elem x = 0; x < q; ++x) {
      const Elem v = L.eval_rational(h, x);
      hzero_r[x] = v == 0;
      ih2_r[x] = v == 0 ? 0 : F.inv(F.mul(v, v));
    }
    ih2_p.resize(L.ppow.size());
    hzero_p.resize(L.ppow.size());
    for (std::size_t k = 0; k < L.ppow.size(); ++k) {
      const Elem v = L.eval_pair(h, k);
      hzero_p[k] = v == 0;
      ih2_p[k] = v == 0 ? 0 : E.inv(E.mul(v, v));
    }
    hzero_inf = h[3] == 0;
    ih2_inf = h[3] == 0 ? 0 : F.inv(F.mul(h[3], h[3]));
  }

  std::pair<int, int> counts(const std::array<Elem, 7>& f) const {
    const FieldDesc& F = line->base;
    const FieldDesc& E = line->ext;
    int N1 = 0, N2 = 0;
    auto rational = [&](bool hz, Elem fv, Elem ih2) {
      if (hz) {
        N1 += 1;
        N2 += 1;
      } else {
        N1 += F.absolute_trace(F.mul(fv, ih2)) == 0 ? 2 : 0;
        N2 += 2;
      }
    };
    rational(hzero_inf, f[6], ih2_inf);
    for (Elem x = 0; x < F.q(); ++x) rational(hzero_r[x], line->eval_rational(f, x), ih2_r[x]);
    for (std::size_t k = 0; k < ih2_p.size(); ++k) {
      if (hzero_p[k]) {
        N2 += 2;
      } else {
        N2 += E.absolute_trace(E.mul(line->eval_pair(f, k), ih2_p[k])) == 0 ? 4 : 0;
      }
    }
    return {N1, N2};
  }
};

inline std::array<Elem, 4> unpack_cubic(std::uint32_t idx, Elem q) {
  std::array<Elem, 4> h{};
  for (auto& c : h) {
    c = idx % q;
    idx /= q;
  }
  return h;
}

inline std::uint32_t pack_cubic(const std::array<Elem, 4>& h, Elem q) {
  std::uint32_t v = 0;
  for (std::size_t i = 4; i-- > 0;) v = v * q + h[i];
  return v;
}

inline WeilHistogram census_char2_full(const FieldDesc& F, unsigned threads) {
  const ProjectiveLine line(F);
  const Elem q = F.q();
  const std::uint64_t nf = std::uint64_t{q} * q * q * q * q * q * q;
  auto parts = parallel_items(static_cast<std::size_t>(q) * q * q * q, threads, CountTally(q, 1),
                              [&](CountTally& t, std::size_t item) {
    if (item == 0) return;
    const auto h = unpack_cubic(static_cast<std::uint32_t>(item), q);
    const Char2Fiber fiber(line, h);
    for (std::uint64_t fi = 0; fi < nf; ++fi) {
      std::array<Elem, 7> f{};
      std::uint64_t v = fi;
      for (auto& c : f) {
        c = static_cast<Elem>(v % q);
        v /= q;
      }
      if (!char2_smooth(h, f, F)) continue;
      const auto [N1, N2] = fiber.counts(f);
      t.add(0, N1, N2);
    }
  });
  return finish_g2(q, gl2_order(q) * ipow(BigInt(q), 4), parts, {BigInt(1)});
}

// Coefficients of the form c(a x + b z, c x + d z) of degree n = coeffs.size() - 1.
template <std::size_t N>
std::array<Elem, N> substitute(const std::array<Elem, N>& f, Elem a, Elem b, Elem c, Elem d, const FieldDesc& F) {
  constexpr int n = static_cast<int>(N) - 1;
  // powers of (a x + b z) and (c x + d z) as coefficient arrays in x
  std::array<std::array<Elem, N>, N> P{}, Q{};
  P[0][0] = 1;
  Q[0][0] = 1;
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i <= k; ++i) {
      Elem vp = 0, vq = 0;
      if (i >= 1) {
        vp = F.mul(a, P[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)]);
        vq = F.mul(c, Q[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)]);
      }
      if (i <= k - 1) {
        vp = F.add(vp, F.mul(b, P[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)]));
        vq = F.add(vq, F.mul(d, Q[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)]));
      }
      P[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = vp;
      Q[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = vq;
    }
  }
  std::array<Elem, N> out{};
  for (int i = 0; i <= n; ++i) {
    const Elem fi = f[static_cast<std::size_t>(i)];
    if (fi == 0) continue;
    const auto& pa = P[static_cast<std::size_t>(i)];
    const auto& qa = Q[static_cast<std::size_t>(n - i)];
    for (int r = 0; r <= i; ++r) {
      if (pa[static_cast<std::size_t>(r)] == 0) continue;
      const Elem pr = F.mul(fi, pa[static_cast<std::size_t>(r)]);
      for (int s = 0; s <= n - i; ++s) {
        auto& slot = out[static_cast<std::size_t>(r + s)];
        slot = F.add(slot, F.mul(pr, qa[static_cast<std::size_t>(s)]));
      }
    }
  }
  return out;
}

struct CubicOrbit {
  std::array<Elem, 4> rep{};
  std::uint64_t size = 0;
};

// Orbits of nonzero binary cubics under h -> lambda h(g (x, z)), found by
// closing under generators of GL(2) x G_m.
inline std::vector<CubicOrbit> cubic_orbits(const FieldDesc& F) {
  const Elem q = F.q();
  const Elem g = F.generator();
  const std::uint32_t n = q * q * q * q;
  std::vector<bool> seen(n, false);
  std::vector<CubicOrbit> out;
  for (std::uint32_t start = 1; start < n; ++start) {
    if (seen[start]) continue;
    CubicOrbit orb;
    orb.rep = unpack_cubic(start, q);
    std::vector<std::uint32_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      const auto h = unpack_cubic(stack.back(), q);
      stack.pop_back();
      ++orb.size;
      std::array<std::array<Elem, 4>, 5> next{
          substitute(h, g, 0, 0, 1, F),  // x -> g x
          substitute(h, 1, 0, 0, g, F),  // z -> g z
          substitute(h, 1, 1, 0, 1, F),  // x -> x + z
          substitute(h, 0, 1, 1, 0, F),  // swap
          h};
      for (auto& c : next[4]) c = F.mul(c, g);
      for (const auto& m : next) {
        const auto id = pack_cubic(m, q);
        if (!seen[id]) {
          seen[id] = true;
          stack.push_back(id);
        }
      }
    }
    out.push_back(orb);
  }
  return out;
}

// Every f decomposes uniquely as s + (j^2 + h j) with s in the slice and j
// modulo the kernel {0, h}, so each slice model stands for q^4 / 2 models.
inline F2Slice artin_schreier_slice(const std::array<Elem, 4>& h, const FieldDesc& F) {
  const unsigned e = F.e();
  std::vector<std::uint64_t> gens;
  for (int i = 0; i < 4; ++i) {
    for (unsigned bit = 0; bit < e; ++bit) {
      std::array<Elem, 4> j{};
      j[static_cast<std::size_t>(i)] = Elem{1} << bit;
      std::array<Elem, 7> img{};
      for (int r = 0; r < 4; ++r) {
        const Elem jr = j[static_cast<std::size_t>(r)];
        if (jr == 0) continue;
        img[static_cast<std::size_t>(2 * r)] = F.add(img[static_cast<std::size_t>(2 * r)], F.mul(jr, jr));
        for (int s = 0; s < 4; ++s) {
          img[static_cast<std::size_t>(r + s)] = F.add(img[static_cast<std::size_t>(r + s)], F.mul(jr, h[static_cast<std::size_t>(s)]));
        }
      }
      std::uint64_t packed = 0;
      for (int k = 0; k < 7; ++k) packed |= std::uint64_t{img[static_cast<std::size_t>(k)]} << (k * e);
      gens.push_back(packed);
    }
  }
  F2Slice slice(7 * e, gens);
  if (slice.rank() != 4 * e - 1) throw CensusError("internal error: Artin-Schreier kernel is not {0, h}");
  return slice;
}

inline WeilHistogram census_char2_reduced(const FieldDesc& F, unsigned threads) {
  const ProjectiveLine line(F);
  const Elem q = F.q();
  const unsigned e = F.e();
  const auto orbits = cubic_orbits(F);
  std::vector<F2Slice> slices;
  std::vector<Char2Fiber> fibers;
  for (const auto& o : orbits) {
    slices.push_back(artin_schreier_slice(o.rep, F));
    fibers.emplace_back(line, o.rep);
  }
  constexpr std::uint64_t block = 256;
  std::vector<std::uint64_t> offsets{0};
  for (const auto& s : slices) offsets.push_back(offsets.back() + (s.size() + block - 1) / block);
  auto parts = parallel_items(offsets.back(), threads, CountTally(q, orbits.size()), [&](CountTally& t, std::size_t item) {
    std::size_t cls = 0;
    while (item >= offsets[cls + 1]) ++cls;
    const auto& h = orbits[cls].rep;
    const std::uint64_t lo = (item - offsets[cls]) * block;
    const std::uint64_t hi = std::min<std::uint64_t>(lo + block, slices[cls].size());
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      const std::uint64_t v = slices[cls].element(idx);
      std::array<Elem, 7> f{};
      for (int k = 0; k < 7; ++k) f[static_cast<std::size_t>(k)] = static_cast<Elem>((v >> (k * e)) & (q - 1));
      if (!char2_smooth(h, f, F)) continue;
      const auto [N1, N2] = fibers[cls].counts(f);
      t.add(cls, N1, N2);
    }
  });
  const BigInt image = ipow(BigInt(q), 4) / 2;
  std::vector<BigInt> mult;
  for (const auto& o : orbits) mult.push_back(image * o.size);
  return finish_g2(q, gl2_order(q) * ipow(BigInt(q), 4), parts, mult);
}

}  // namespace detail

/// Smoothness of y^2 + h y = f in characteristic 2 (both affine charts).
inline bool smoothness_check_char2(const BinaryForm& h, const BinaryForm& f, const FieldDesc& F) {
  if (F.p() != 2) throw FieldError("smoothness_check_char2 requires characteristic 2");
  if (h.degree() != 3 || f.degree() != 6) throw std::invalid_argument("expected a cubic h and a sextic f");
  if (h.is_zero()) return false;
  std::array<Elem, 4> ha{};
  std::array<Elem, 7> fa{};
  std::copy(h.coeffs.begin(), h.coeffs.end(), ha.begin());
  std::copy(f.coeffs.begin(), f.coeffs.end(), fa.begin());
  return detail::char2_smooth(ha, fa, F);
}

/// Number of points of the curve over F_{q^i}, i in {1, 2}.
inline int genus2_pointcount(const G2Model& model, const FieldDesc& F, int i) {
  if (i != 1 && i != 2) throw std::invalid_argument("genus2_pointcount: i must be 1 or 2");
  const FieldDesc K = i == 1 ? F : F.extension(2);
  const auto img = F.embedding_into(K);
  auto lift = [&](const BinaryForm& b) {
    BinaryForm out = b;
    for (auto& c : out.coeffs) c = img[c];
    return out;
  };
  int n = 0;
  if (const auto* odd = std::get_if<G2OddModel>(&model)) {
    if (F.p() == 2) throw FieldError("odd model over a field of characteristic 2");
    if (odd->f.degree() != 6 || !binary_form_squarefree(odd->f, F)) throw CensusError("singular genus-2 model");
    const BinaryForm f = lift(odd->f);
    n += 1 + K.quadratic_character(f.eval(1, 0, K));
    for (Elem x = 0; x < K.q(); ++x) n += 1 + K.quadratic_character(f.eval(x, 1, K));
    return n;
  }
  const auto& even = std::get<G2EvenModel>(model);
  if (F.p() != 2) throw FieldError("characteristic-2 model over a field of odd characteristic");
  if (!smoothness_check_char2(even.h, even.f, F)) throw CensusError("singular genus-2 model");
  const BinaryForm h = lift(even.h), f = lift(even.f);
  auto fiber = [&](Elem x, Elem z) {
    const Elem hv = h.eval(x, z, K);
    if (hv == 0) return 1;
    const Elem fv = f.eval(x, z, K);
    return K.absolute_trace(K.div(fv, K.mul(hv, hv))) == 0 ? 2 : 0;
  };
  n += fiber(1, 0);
  for (Elem x = 0; x < K.q(); ++x) n += fiber(x, 1);
  return n;
}

inline Strategy resolve_g2_strategy(std::uint32_t q, const CensusOptions& opt) {
  const auto& b = opt.bounds;
  if (q > b.g2_max_q) {
    throw CensusError("genus-2 census: q = " + std::to_string(q) + " exceeds bound " + std::to_string(b.g2_max_q));
  }
  Strategy s = opt.strategy;
  if (s == Strategy::Auto) s = q <= b.g2_auto_full_max_q ? Strategy::Full : Strategy::Reduced;
  if (s == Strategy::Full && q > b.g2_full_max_q) {
    throw CensusError("genus-2 full census: q = " + std::to_string(q) + " exceeds bound " +
                      std::to_string(b.g2_full_max_q));
  }
  return s;
}

inline WeilHistogram census_genus2(const FieldDesc& F, const CensusOptions& opt = {}) {
  const Strategy s = resolve_g2_strategy(F.q(), opt);
  if (F.p() == 2) {
    if (7 * F.e() > 63) throw CensusError("characteristic-2 census supports q <= 2^9");
    return s == Strategy::Full ? detail::census_char2_full(F, opt.threads) : detail::census_char2_reduced(F, opt.threads);
  }
  return s == Strategy::Full ? detail::census_odd_full(F, opt.threads) : detail::census_odd_reduced(F, opt.threads);
}

}  // namespace locsys
