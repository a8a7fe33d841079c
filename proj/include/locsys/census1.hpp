#pragma once

// Weighted census of elliptic curves over F_q. Every long Weierstrass model
// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with nonzero discriminant
// carries weight 1/(q^3 (q-1)), the inverse order of the substitution group,
// so the weights of a trace class sum to its groupoid cardinality.

#include "locsys/bigint.hpp"
#include "locsys/census_common.hpp"
#include "locsys/gf.hpp"
#include "locsys/histogram.hpp"
#include "locsys/parallel.hpp"
#include "locsys/spchar.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace locsys {

struct WeierstrassModel {
  // a1, a2, a3, a4, a6
  std::array<Elem, 5> a{};
  Elem a1() const { return a[0]; }
  Elem a2() const { return a[1]; }
  Elem a3() const { return a[2]; }
  Elem a4() const { return a[3]; }
  Elem a6() const { return a[4]; }
};

inline Elem weierstrass_discriminant(const WeierstrassModel& E, const FieldDesc& F) {
  auto c = [&](long long n) { return F.from_int(n); };
  const Elem a1 = E.a1(), a2 = E.a2(), a3 = E.a3(), a4 = E.a4(), a6 = E.a6();
  const Elem b2 = F.add(F.mul(a1, a1), F.mul(c(4), a2));
  const Elem b4 = F.add(F.mul(c(2), a4), F.mul(a1, a3));
  const Elem b6 = F.add(F.mul(a3, a3), F.mul(c(4), a6));
  Elem b8 = F.mul(F.mul(a1, a1), a6);
  b8 = F.add(b8, F.mul(c(4), F.mul(a2, a6)));
  b8 = F.sub(b8, F.mul(a1, F.mul(a3, a4)));
  b8 = F.add(b8, F.mul(a2, F.mul(a3, a3)));
  b8 = F.sub(b8, F.mul(a4, a4));
  Elem d = F.neg(F.mul(F.mul(b2, b2), b8));
  d = F.sub(d, F.mul(c(8), F.mul(b4, F.mul(b4, b4))));
  d = F.sub(d, F.mul(c(27), F.mul(b6, b6)));
  d = F.add(d, F.mul(c(9), F.mul(b2, F.mul(b4, b6))));
  return d;
}

namespace detail {

// Point counts of the models sharing (a1, a2, a3, a4), as a function of a6.
class EllipticFiberCounter {
 public:
  EllipticFiberCounter(const FieldDesc& F, Elem a1, Elem a2, Elem a3, Elem a4) : F_(F) {
    const Elem q = F.q();
    if (F.p() != 2) {
      const Elem four = F.from_int(4);
      four_ = four;
      base_.resize(q);
      for (Elem x = 0; x < q; ++x) {
        const Elem h = F.add(F.mul(a1, x), a3);
        const Elem cubic = F.mul(x, F.add(F.mul(x, F.add(x, a2)), a4));
        base_[x] = F.add(F.mul(h, h), F.mul(four, cubic));
      }
    } else {
      for (Elem x = 0; x < q; ++x) {
        const Elem h = F.add(F.mul(a1, x), a3);
        if (h == 0) {
          ++ramified_;
          continue;
        }
        const Elem ih2 = F.inv(F.mul(h, h));
        const Elem cubic = F.mul(x, F.add(F.mul(x, F.add(x, a2)), a4));
        inv_h2_.push_back(ih2);
        trace0_.push_back(static_cast<std::int8_t>(F.absolute_trace(F.mul(cubic, ih2))));
      }
    }
  }

  /// Frobenius trace a = q + 1 - #E(F_q) of the model with the given a6.
  int trace(Elem a6) const {
    const int q = static_cast<int>(F_.q());
    if (F_.p() != 2) {
      const Elem shift = F_.mul(four_, a6);
      int s = 0;
      for (Elem v : base_) s += F_.quadratic_character(F_.add(v, shift));
      return -s;
    }
    int n = 1 + ramified_;
    for (std::size_t i = 0; i < inv_h2_.size(); ++i) {
      if ((trace0_[i] ^ F_.absolute_trace(F_.mul(a6, inv_h2_[i]))) == 0) n += 2;
    }
    return q + 1 - n;
  }

 private:
  const FieldDesc& F_;
  Elem four_ = 0;
  std::vector<Elem> base_;
  int ramified_ = 0;
  std::vector<Elem> inv_h2_;
  std::vector<std::int8_t> trace0_;
};

inline int hasse_radius(std::uint32_t q) {
  int r = static_cast<int>(std::floor(2.0 * std::sqrt(static_cast<double>(q))));
  while (static_cast<std::int64_t>(r + 1) * (r + 1) <= 4 * static_cast<std::int64_t>(q)) ++r;
  while (static_cast<std::int64_t>(r) * r > 4 * static_cast<std::int64_t>(q)) --r;
  return r;
}

// Raw counts per multiplicity class, indexed by a + radius.
struct TraceTally {
  int radius = 0;
  std::vector<std::vector<std::int64_t>> counts;  // [class][a + radius]

  TraceTally(int r, std::size_t classes)
      : radius(r), counts(classes, std::vector<std::int64_t>(static_cast<std::size_t>(2 * r + 1), 0)) {}

  void add(std::size_t cls, int a) {
    if (a < -radius || a > radius) throw CensusError("Hasse bound violated: a = " + std::to_string(a));
    ++counts[cls][static_cast<std::size_t>(a + radius)];
  }

  void merge(const TraceTally& o) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
      for (std::size_t i = 0; i < counts[c].size(); ++i) counts[c][i] += o.counts[c][i];
    }
  }
};

inline TraceHistogram finish(std::uint32_t q, const std::vector<TraceTally>& parts, const std::vector<BigInt>& multiplicity) {
  TraceTally total = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) total.merge(parts[i]);
  TraceHistogram h(q, ipow(BigInt(q), 3) * (q - 1));
  for (std::size_t c = 0; c < multiplicity.size(); ++c) {
    for (std::size_t i = 0; i < total.counts[c].size(); ++i) {
      if (total.counts[c][i] != 0) h.add(static_cast<int>(i) - total.radius, multiplicity[c] * total.counts[c][i]);
    }
  }
  return h;
}

inline TraceHistogram census_elliptic_full(const FieldDesc& F, unsigned threads) {
  const Elem q = F.q();
  const TraceTally init(hasse_radius(q), 1);
  auto parts = parallel_items(static_cast<std::size_t>(q) * q, threads, init, [&](TraceTally& t, std::size_t item) {
    const Elem a1 = static_cast<Elem>(item / q), a2 = static_cast<Elem>(item % q);
    for (Elem a3 = 0; a3 < q; ++a3) {
      for (Elem a4 = 0; a4 < q; ++a4) {
        const EllipticFiberCounter fiber(F, a1, a2, a3, a4);
        for (Elem a6 = 0; a6 < q; ++a6) {
          if (weierstrass_discriminant({{a1, a2, a3, a4, a6}}, F) == 0) continue;
          t.add(0, fiber.trace(a6));
        }
      }
    }
  });
  return finish(q, parts, {BigInt(1)});
}

// Orbit slices of the substitution group; each slice model stands for
// `multiplicity` models of the full family, all with the same trace.
inline TraceHistogram census_elliptic_reduced(const FieldDesc& F, unsigned threads) {
  const Elem q = F.q();
  const BigInt Q = q;
  const int radius = hasse_radius(q);
  if (F.p() >= 5) {
    // complete the square and the cube: a1 = a3 = a2 = 0
    auto parts = parallel_items(q, threads, TraceTally(radius, 1), [&](TraceTally& t, std::size_t item) {
      const Elem a4 = static_cast<Elem>(item);
      const EllipticFiberCounter fiber(F, 0, 0, 0, a4);
      for (Elem a6 = 0; a6 < q; ++a6) {
        if (weierstrass_discriminant({{0, 0, 0, a4, a6}}, F) == 0) continue;
        t.add(0, fiber.trace(a6));
      }
    });
    return finish(q, parts, {Q * Q * Q});
  }
  if (F.p() == 3) {
    // a1 = a3 = 0; if a2 != 0, translate x to kill a4
    auto parts = parallel_items(q, threads, TraceTally(radius, 2), [&](TraceTally& t, std::size_t item) {
      const Elem v = static_cast<Elem>(item);
      if (v != 0) {
        const EllipticFiberCounter fiber(F, 0, v, 0, 0);
        for (Elem a6 = 0; a6 < q; ++a6) {
          if (weierstrass_discriminant({{0, v, 0, 0, a6}}, F) == 0) continue;
          t.add(0, fiber.trace(a6));
        }
      }
      const EllipticFiberCounter fiber(F, 0, 0, 0, v);
      for (Elem a6 = 0; a6 < q; ++a6) {
        if (weierstrass_discriminant({{0, 0, 0, v, a6}}, F) == 0) continue;
        t.add(1, fiber.trace(a6));
      }
    });
    return finish(q, parts, {Q * Q * Q, Q * Q});
  }
  // Characteristic 2. If a1 != 0 translate x to kill a3. The shifts
  // y -> y + s x + t act on (a2, a4, a6) by the F_2-linear map
  // (s, t) -> (s^2 + a1 s, a1 t + a3 s, t^2 + a3 t), whose kernel has order 2.
  const unsigned e = F.e();
  auto parts = parallel_items(static_cast<std::size_t>(q) * q, threads, TraceTally(radius, 2),
                              [&](TraceTally& t, std::size_t item) {
    const Elem a1 = static_cast<Elem>(item / q), a3 = static_cast<Elem>(item % q);
    if (a1 != 0 && a3 != 0) return;
    if (a1 == 0 && a3 == 0) return;  // y^2 = cubic is singular in characteristic 2
    auto pack = [&](Elem u, Elem v, Elem w) {
      return std::uint64_t{u} | (std::uint64_t{v} << e) | (std::uint64_t{w} << (2 * e));
    };
    std::vector<std::uint64_t> gens;
    for (unsigned i = 0; i < e; ++i) {
      const Elem s = Elem{1} << i;
      gens.push_back(pack(F.add(F.mul(s, s), F.mul(a1, s)), F.mul(a3, s), 0));
      const Elem tt = Elem{1} << i;
      gens.push_back(pack(0, F.mul(a1, tt), F.add(F.mul(tt, tt), F.mul(a3, tt))));
    }
    const F2Slice slice(3 * e, gens);
    if (slice.rank() != 2 * e - 1) throw CensusError("internal error: unexpected shift kernel");
    const Elem mask = q - 1;
    for (std::uint64_t idx = 0; idx < slice.size(); ++idx) {
      const std::uint64_t v = slice.element(idx);
      const Elem a2 = static_cast<Elem>(v & mask), a4 = static_cast<Elem>((v >> e) & mask),
                 a6 = static_cast<Elem>((v >> (2 * e)) & mask);
      if (weierstrass_discriminant({{a1, a2, a3, a4, a6}}, F) == 0) continue;
      t.add(a1 != 0 ? 0 : 1, EllipticFiberCounter(F, a1, a2, a3, a4).trace(a6));
    }
  });
  const BigInt image = ipow(Q, 2) / 2;
  return finish(q, parts, {Q * image, image});
}

}  // namespace detail

/// Number of points (including the origin) on a nonsingular model.
inline int elliptic_point_count(const WeierstrassModel& E, const FieldDesc& F) {
  if (weierstrass_discriminant(E, F) == 0) throw CensusError("singular Weierstrass model");
  const detail::EllipticFiberCounter fiber(F, E.a1(), E.a2(), E.a3(), E.a4());
  return static_cast<int>(F.q()) + 1 - fiber.trace(E.a6());
}

inline Strategy resolve_g1_strategy(std::uint32_t q, const CensusOptions& opt) {
  const auto& b = opt.bounds;
  if (q > b.g1_max_q) {
    throw CensusError("genus-1 census: q = " + std::to_string(q) + " exceeds bound " + std::to_string(b.g1_max_q));
  }
  Strategy s = opt.strategy;
  if (s == Strategy::Auto) s = q <= b.g1_auto_full_max_q ? Strategy::Full : Strategy::Reduced;
  if (s == Strategy::Full && q > b.g1_full_max_q) {
    throw CensusError("genus-1 full census: q = " + std::to_string(q) + " exceeds bound " +
                      std::to_string(b.g1_full_max_q));
  }
  return s;
}

inline TraceHistogram census_elliptic(const FieldDesc& F, const CensusOptions& opt = {}) {
  const Strategy s = resolve_g1_strategy(F.q(), opt);
  return s == Strategy::Full ? detail::census_elliptic_full(F, opt.threads)
                             : detail::census_elliptic_reduced(F, opt.threads);
}

/// Trace of Frobenius on the motive of weight-k cusp forms for SL(2, Z):
/// -1 - sum_a weight(a) c_{k-2}(a, q). For q = p^e this is the e-th power sum
/// of the Hecke eigenvalues' Frobenius roots.
inline BigInt hecke_trace_elliptic(int k, const TraceHistogram& h) {
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("hecke_trace_elliptic requires even k >= 4");
  const std::int64_t q = h.q();
  const BigRational s = h.weighted_sum([&](const int& a) { return sl2_sym_char(k - 2, a, q); });
  return require_integer(BigRational(-1) - s, "elliptic Hecke trace");
}

/// q-expansion coefficients a_1..a_nmax of the normalized cusp eigenform of
/// weight k in {12, 16, 18, 20, 22, 26}.
inline std::vector<BigInt> cusp_oracle(int k, int nmax) {
  int e4 = 0, e6 = 0;
  switch (k) {
    case 12: break;
    case 16: e4 = 1; break;
    case 18: e6 = 1; break;
    case 20: e4 = 2; break;
    case 22: e4 = 1; e6 = 1; break;
    case 26: e4 = 2; e6 = 1; break;
    default: throw std::invalid_argument("cusp_oracle: weight " + std::to_string(k) + " is not one-dimensional");
  }
  if (nmax < 0) throw std::invalid_argument("cusp_oracle: negative length");
  const auto n = static_cast<std::size_t>(nmax) + 1;  // series in q^0..q^nmax
  using Series = std::vector<BigInt>;
  auto mul = [n](const Series& a, const Series& b) {
    Series r(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  };
  auto eisenstein = [n](int c, unsigned power) {
    Series r(n, 0);
    r[0] = 1;
    for (std::size_t m = 1; m < n; ++m) {
      BigInt sigma = 0;
      for (std::size_t d = 1; d <= m; ++d) {
        if (m % d == 0) sigma += ipow(BigInt(d), power);
      }
      r[m] = c * sigma;
    }
    return r;
  };
  // Delta = q prod (1 - q^j)^24
  Series eta(n, 0);
  eta[0] = 1;
  for (std::size_t j = 1; j < n; ++j) {
    for (int rep = 0; rep < 24; ++rep) {
      for (std::size_t i = n; i-- > j;) eta[i] -= eta[i - j];
    }
  }
  Series f(n, 0);
  for (std::size_t i = 1; i < n; ++i) f[i] = eta[i - 1];
  for (int i = 0; i < e4; ++i) f = mul(f, eisenstein(240, 3));
  for (int i = 0; i < e6; ++i) f = mul(f, eisenstein(-504, 5));
  return Series(f.begin() + 1, f.end());
}

}  // namespace locsys
