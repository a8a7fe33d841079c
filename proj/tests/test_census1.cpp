#include "locsys/census1.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace locsys {
namespace {

const std::vector<std::pair<unsigned, unsigned>> kSmallFields = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}};

// Affine points by brute force over (x, y), plus the origin.
int brute_point_count(const WeierstrassModel& E, const FieldDesc& F) {
  int n = 1;
  for (Elem x = 0; x < F.q(); ++x) {
    for (Elem y = 0; y < F.q(); ++y) {
      const Elem lhs = F.add(F.mul(y, y), F.add(F.mul(E.a1(), F.mul(x, y)), F.mul(E.a3(), y)));
      Elem rhs = F.mul(x, F.mul(x, x));
      rhs = F.add(rhs, F.mul(E.a2(), F.mul(x, x)));
      rhs = F.add(rhs, F.mul(E.a4(), x));
      rhs = F.add(rhs, E.a6());
      n += lhs == rhs;
    }
  }
  return n;
}

// Singularity by brute force: a point of the affine curve where both partials vanish
// over F_{q^2} (the singular point of a singular cubic is rational, but this
// does not rely on that).
bool brute_singular(const WeierstrassModel& E, const FieldDesc& F) {
  const auto big = F.extension(2);
  const auto img = F.embedding_into(big);
  const Elem a1 = img[E.a1()], a2 = img[E.a2()], a3 = img[E.a3()], a4 = img[E.a4()], a6 = img[E.a6()];
  auto c = [&](int n) { return big.from_int(n); };
  for (Elem x = 0; x < big.q(); ++x) {
    for (Elem y = 0; y < big.q(); ++y) {
      const Elem eq = big.sub(big.add(big.mul(y, y), big.add(big.mul(a1, big.mul(x, y)), big.mul(a3, y))),
                              big.add(big.add(big.mul(x, big.mul(x, x)), big.mul(a2, big.mul(x, x))),
                                      big.add(big.mul(a4, x), a6)));
      if (eq != 0) continue;
      const Elem fx = big.sub(big.mul(a1, y), big.add(big.add(big.mul(c(3), big.mul(x, x)), big.mul(c(2), big.mul(a2, x))), a4));
      const Elem fy = big.add(big.add(big.mul(c(2), y), big.mul(a1, x)), a3);
      if (fx == 0 && fy == 0) return true;
    }
  }
  return false;
}

TEST(Weierstrass, DiscriminantAndPointCountAgreeWithBruteForce) {
  for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
    const auto F = make_field(p, e);
    const Elem q = F.q();
    for (std::uint32_t idx = 0; idx < q * q * q * q * q; ++idx) {
      std::uint32_t v = idx;
      WeierstrassModel E;
      for (auto& c : E.a) {
        c = v % q;
        v /= q;
      }
      const bool singular = weierstrass_discriminant(E, F) == 0;
      ASSERT_EQ(singular, brute_singular(E, F)) << "q=" << q << " idx=" << idx;
      if (!singular) ASSERT_EQ(elliptic_point_count(E, F), brute_point_count(E, F));
    }
  }
  const auto F5 = make_field(5, 1);
  // y^2 = x^3 + x over F_5: x=0 -> 1, x=1 (2) -> 0, x=2 (0) -> 1, x=3 (0) -> 1, x=4 (3) -> 0
  EXPECT_EQ(elliptic_point_count({{0, 0, 0, 1, 0}}, F5), 4);
  EXPECT_THROW(elliptic_point_count({{0, 0, 0, 0, 0}}, F5), CensusError);
}

// Independent classification: orbits of the substitution group
// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t acting on all models; each orbit
// contributes 1/#Stab = 1/#Aut at its trace.
std::map<int, BigRational> classify_by_orbits(const FieldDesc& F) {
  const Elem q = F.q();
  auto c = [&](int n) { return F.from_int(n); };
  auto act = [&](const WeierstrassModel& E, Elem u, Elem r, Elem s, Elem t) {
    const Elem a1 = E.a1(), a2 = E.a2(), a3 = E.a3(), a4 = E.a4(), a6 = E.a6();
    const Elem ui = F.inv(u);
    const Elem u2 = F.mul(ui, ui), u3 = F.mul(u2, ui), u4 = F.mul(u2, u2), u6 = F.mul(u4, u2);
    WeierstrassModel out;
    out.a[0] = F.mul(ui, F.add(a1, F.mul(c(2), s)));
    out.a[1] = F.mul(u2, F.sub(F.add(F.sub(a2, F.mul(s, a1)), F.mul(c(3), r)), F.mul(s, s)));
    out.a[2] = F.mul(u3, F.add(F.add(a3, F.mul(r, a1)), F.mul(c(2), t)));
    Elem b = F.sub(a4, F.mul(s, a3));
    b = F.add(b, F.mul(c(2), F.mul(r, a2)));
    b = F.sub(b, F.mul(F.add(t, F.mul(r, s)), a1));
    b = F.add(b, F.mul(c(3), F.mul(r, r)));
    b = F.sub(b, F.mul(c(2), F.mul(s, t)));
    out.a[3] = F.mul(u4, b);
    Elem d = F.add(a6, F.mul(r, a4));
    d = F.add(d, F.mul(F.mul(r, r), a2));
    d = F.add(d, F.mul(r, F.mul(r, r)));
    d = F.sub(d, F.mul(t, a3));
    d = F.sub(d, F.mul(t, t));
    d = F.sub(d, F.mul(r, F.mul(t, a1)));
    out.a[4] = F.mul(u6, d);
    return out;
  };
  auto index = [&](const WeierstrassModel& E) {
    std::uint64_t v = 0;
    for (std::size_t i = 5; i-- > 0;) v = v * q + E.a[i];
    return v;
  };
  const std::uint64_t total = std::uint64_t{q} * q * q * q * q;
  const std::uint64_t group = std::uint64_t{q - 1} * q * q * q;
  std::vector<bool> seen(total, false);
  std::map<int, BigRational> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (seen[idx]) continue;
    WeierstrassModel E;
    std::uint64_t v = idx;
    for (auto& a : E.a) {
      a = static_cast<Elem>(v % q);
      v /= q;
    }
    std::set<std::uint64_t> orbit;
    for (Elem u = 1; u < q; ++u) {
      for (Elem r = 0; r < q; ++r) {
        for (Elem s = 0; s < q; ++s) {
          for (Elem t = 0; t < q; ++t) orbit.insert(index(act(E, u, r, s, t)));
        }
      }
    }
    for (auto o : orbit) seen[o] = true;
    if (weierstrass_discriminant(E, F) == 0) continue;
    const int a = static_cast<int>(q) + 1 - brute_point_count(E, F);
    out[a] += BigRational(orbit.size(), group);
  }
  return out;
}

TEST(CensusElliptic, MatchesOrbitClassification) {
  for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const auto F = make_field(p, e);
    const auto oracle = classify_by_orbits(F);
    for (Strategy s : {Strategy::Full, Strategy::Reduced}) {
      const auto h = census_elliptic(F, {s, 1, {}});
      std::map<int, BigRational> got;
      for (const auto& [a, n] : h.numerators()) got[a] = h.weight(a);
      EXPECT_EQ(got, oracle) << "q=" << F.q() << " " << to_string(s);
    }
  }
}

TEST(CensusElliptic, MassSymmetryAndStrategyEquivalence) {
  for (auto [p, e] : kSmallFields) {
    const auto F = make_field(p, e);
    const auto full = census_elliptic(F, {Strategy::Full, 1, {}});
    const auto reduced = census_elliptic(F, {Strategy::Reduced, 1, {}});
    EXPECT_EQ(full, reduced) << "q=" << F.q();
    EXPECT_EQ(full.total_mass(), BigRational(F.q()));
    EXPECT_EQ(full.weighted_sum([](const int& a) { return BigInt(a); }), 0);
    for (const auto& [a, n] : full.numerators()) {
      EXPECT_EQ(full.weight(a), full.weight(-a));
      EXPECT_LE(a * a, 4 * static_cast<int>(F.q()));
      EXPECT_GT(n, 0);
    }
  }
  EXPECT_EQ(census_elliptic(make_field(2, 1)).total_mass(), 2);
}

TEST(CensusElliptic, ReducedMassLargerFields) {
  for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{{2, 5}, {3, 3}, {5, 2}, {31, 1}, {2, 6}}) {
    const auto F = make_field(p, e);
    const auto h = census_elliptic(F, {Strategy::Reduced, 1, {}});
    EXPECT_EQ(h.total_mass(), BigRational(F.q()));
    for (const auto& [a, n] : h.numerators()) EXPECT_EQ(h.weight(a), h.weight(-a));
  }
}

TEST(CensusElliptic, ThreadCountDoesNotMatter) {
  const auto F = make_field(3, 2);
  EXPECT_EQ(census_elliptic(F, {Strategy::Full, 1, {}}), census_elliptic(F, {Strategy::Full, 3, {}}));
  const auto F16 = make_field(2, 4);
  EXPECT_EQ(census_elliptic(F16, {Strategy::Reduced, 1, {}}), census_elliptic(F16, {Strategy::Reduced, 4, {}}));
}

TEST(CensusElliptic, Bounds) {
  CensusOptions opt;
  opt.bounds.g1_max_q = 8;
  EXPECT_THROW(census_elliptic(make_field(3, 2), opt), CensusError);
  opt = {};
  opt.strategy = Strategy::Full;
  opt.bounds.g1_full_max_q = 4;
  EXPECT_THROW(census_elliptic(make_field(5, 1), opt), CensusError);
}

TEST(CuspOracle, Examples) {
  EXPECT_EQ(cusp_oracle(12, 3), (std::vector<BigInt>{1, -24, 252}));
  EXPECT_EQ(cusp_oracle(16, 2), (std::vector<BigInt>{1, 216}));
  EXPECT_EQ(cusp_oracle(12, 1), (std::vector<BigInt>{1}));
  EXPECT_THROW(cusp_oracle(14, 3), std::invalid_argument);
  // Hecke multiplicativity and the prime-power relation hold for every eigenform.
  for (int k : {12, 16, 18, 20, 22, 26}) {
    const auto a = cusp_oracle(k, 30);
    EXPECT_EQ(a[5], a[1] * a[2]);                              // a6 = a2 a3
    EXPECT_EQ(a[3], a[1] * a[1] - ipow(2, static_cast<unsigned>(k - 1)));  // a4 = a2^2 - 2^{k-1}
    EXPECT_EQ(a[8], a[2] * a[2] - ipow(3, static_cast<unsigned>(k - 1)));  // a9
  }
}

TEST(HeckeTraceElliptic, Examples) {
  const auto h2 = census_elliptic(make_field(2, 1));
  EXPECT_EQ(hecke_trace_elliptic(12, h2), -24);
  EXPECT_EQ(hecke_trace_elliptic(16, h2), 216);
  EXPECT_EQ(hecke_trace_elliptic(8, census_elliptic(make_field(11, 1))), 0);
  EXPECT_THROW(hecke_trace_elliptic(7, h2), std::invalid_argument);
  EXPECT_THROW(hecke_trace_elliptic(2, h2), std::invalid_argument);
}

TEST(HeckeTraceElliptic, RamanujanTauUpTo37) {
  const auto tau = cusp_oracle(12, 37);
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    const auto h = census_elliptic(make_field(p, 1));
    EXPECT_EQ(hecke_trace_elliptic(12, h), tau[p - 1]) << "p=" << p;
  }
}

TEST(HeckeTraceElliptic, OtherOneDimensionalWeights) {
  for (int k : {16, 18, 20, 22, 26}) {
    const auto a = cusp_oracle(k, 13);
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u}) {
      EXPECT_EQ(hecke_trace_elliptic(k, census_elliptic(make_field(p, 1))), a[p - 1]) << k << " " << p;
    }
  }
}

TEST(HeckeTraceElliptic, PowerSumAtPrimeSquares) {
  const auto tau = cusp_oracle(12, 5);
  for (unsigned p : {2u, 3u, 5u}) {
    const auto h = census_elliptic(make_field(p, 2));
    EXPECT_EQ(hecke_trace_elliptic(12, h), tau[p - 1] * tau[p - 1] - 2 * ipow(BigInt(p), 11)) << p;
  }
  EXPECT_EQ(hecke_trace_elliptic(12, census_elliptic(make_field(2, 2))), -3520);
}

TEST(HeckeTraceElliptic, VanishingBattery) {
  for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{
           {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}, {2, 4},
           {17, 1}, {19, 1}, {23, 1}, {5, 2}, {3, 3}, {29, 1}, {31, 1}, {2, 5}}) {
    const auto h = census_elliptic(make_field(p, e));
    for (int k : {4, 6, 8, 10}) EXPECT_EQ(hecke_trace_elliptic(k, h), 0) << "k=" << k << " q=" << h.q();
  }
}

TEST(F2SliceTest, ComplementOfImage) {
  // image spanned by 0b011 and 0b110 inside F_2^4
  const F2Slice s(4, {0b011, 0b110, 0b101});
  EXPECT_EQ(s.rank(), 2u);
  EXPECT_EQ(s.size(), 4u);
  const std::set<std::uint64_t> image = {0, 0b011, 0b110, 0b101};
  std::set<std::uint64_t> sums;
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    for (auto w : image) sums.insert(s.element(i) ^ w);
  }
  EXPECT_EQ(sums.size(), 16u);
}

}  // namespace
}  // namespace locsys
