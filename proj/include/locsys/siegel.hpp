#pragma once

// Vector-valued Siegel cusp forms of degree 2: dimensions, Frobenius traces
// on S[j,k] recovered from the A_2 point counts, Hecke eigenvalues, spin
// polynomials and their Newton slopes, and theta coefficients of a form in
// S_{6,8} built from the even unimodular lattice D16+.

#include "locsys/motive.hpp"
#include "locsys/parallel.hpp"
#include "locsys/traces.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace locsys {

/// Sym^j (x) det^k.
struct SiegelWeight {
  int j = 0;
  int k = 0;

  /// V_{l,m} whose interior cohomology carries S_{j,k}: l = j + k - 3, m = k - 3.
  HighestWeight local_system() const { return HighestWeight{j + k - 3, k - 3}; }
  static SiegelWeight of(HighestWeight w) { return {w.l - w.m, w.m + 3}; }

  auto operator<=>(const SiegelWeight&) const = default;
};

class DimensionOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The extracted trace contradicts the dimension table or is not integral.
class ConjectureViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// dim M_{0,k} from the generating series (1 + t^35) / ((1-t^4)(1-t^6)(1-t^10)(1-t^12)).
inline int scalar_siegel_dim(int k) {
  auto count = [](int n) {
    if (n < 0) return 0;
    int c = 0;
    for (int d = 0; 12 * d <= n; ++d) {
      for (int cc = 0; 12 * d + 10 * cc <= n; ++cc) {
        for (int b = 0; 12 * d + 10 * cc + 6 * b <= n; ++b) {
          if ((n - 12 * d - 10 * cc - 6 * b) % 4 == 0) ++c;
        }
      }
    }
    return c;
  };
  return count(k) + count(k - 35);
}

// Nonzero dim S_{j,k} for even j > 0 with j + 2k <= kVectorTableMax; every
// other pair in that range has no cusp forms.
inline constexpr int kVectorTableMax = 26;
inline const std::map<std::pair<int, int>, int>& vector_dim_table() {
  static const std::map<std::pair<int, int>, int> t = {
      {{6, 8}, 1},
      {{4, 10}, 1},
      {{8, 8}, 1},
      {{12, 6}, 1},
      {{6, 10}, 1},
      {{8, 9}, 1},
      {{12, 7}, 1},
  };
  return t;
}

}  // namespace detail

/// dim S_{j,k}; scalar weights by formula, vector weights from embedded data.
inline int dim_siegel_cusp(int j, int k) {
  if (j < 0) throw std::invalid_argument("dim_siegel_cusp: negative j");
  if (j % 2 != 0) return 0;
  if (k < 4) throw DimensionOutOfRange("dim_siegel_cusp: k = " + std::to_string(k) + " < 4 is not supported");
  if (j == 0) {
    const int full = detail::scalar_siegel_dim(k);
    return k % 2 == 0 ? full - (dim_cusp_sl2(k) + 1) : full;
  }
  if (j + 2 * k > detail::kVectorTableMax) {
    throw DimensionOutOfRange("dim_siegel_cusp: (" + std::to_string(j) + "," + std::to_string(k) +
                              ") lies outside the embedded table j + 2k <= " +
                              std::to_string(detail::kVectorTableMax));
  }
  const auto& t = detail::vector_dim_table();
  auto it = t.find({j, k});
  return it == t.end() ? 0 : it->second;
}

inline std::optional<int> try_dim_siegel_cusp(int j, int k) {
  try {
    return dim_siegel_cusp(j, k);
  } catch (const DimensionOutOfRange&) {
    return std::nullopt;
  }
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Frobenius traces on S[k] and S[j,k] recovered from census data.
class SiegelTraces {
 public:
  explicit SiegelTraces(Traces& traces, MotiveOptions opt = {}) : traces_(traces), opt_(std::move(opt)) {}

  Traces& traces() { return traces_; }
  const MotiveOptions& options() const { return opt_; }

  BigInt cusp_trace(int k, std::uint32_t q) {
    return hecke_trace_elliptic(k, traces_.store().elliptic(q));
  }

  /// Tr(Frob_q | S[l-m, m+3]) = Eisenstein + endoscopic - t_a2(l, m, q).
  BigInt extract(HighestWeight w, std::uint32_t q) {
    if (!w.regular()) throw std::invalid_argument("extract_siegel_trace needs a regular pair l > m > 0");
    if (w.weight() % 2 != 0) throw std::invalid_argument("extract_siegel_trace needs l + m even");
    const MotiveExpr known = eisenstein_ec(w.l, w.m, opt_) + endoscopic_ec(w.l, w.m, opt_);
    const BigRational t = traces_.t_a2(w, q).value;
    const BigRational tr = BigRational(specialize(known, q, elliptic_provider())) - t;
    const std::string where = "S[" + std::to_string(w.l - w.m) + "," + std::to_string(w.m + 3) + "] at q = " +
                              std::to_string(q);
    if (!is_integral(tr)) throw ConjectureViolation("non-integral trace " + to_string(tr) + " on " + where);
    const BigInt v = numerator(tr);
    const SiegelWeight s = SiegelWeight::of(w);
    if (auto d = try_dim_siegel_cusp(s.j, s.k); d && *d == 0 && v != 0) {
      throw ConjectureViolation("trace " + v.str() + " on " + where + ", which has no cusp forms");
    }
    return v;
  }

  /// S[k] from the elliptic census; S[j,k] by extraction.
  TraceProvider provider() {
    return [this](const MotiveSymbol& s, std::uint32_t q) -> std::optional<BigInt> {
      switch (s.kind) {
        case MotiveSymbol::Kind::Cusp:
          if (s.k < 4) return std::nullopt;
          return cusp_trace(s.k, q);
        case MotiveSymbol::Kind::Siegel: {
          const SiegelWeight sw{s.j, s.k};
          const HighestWeight w = sw.local_system();
          if (!w.regular()) return std::nullopt;
          return extract(w, q);
        }
        default:
          return std::nullopt;
      }
    };
  }

  TraceProvider elliptic_provider() {
    return [this](const MotiveSymbol& s, std::uint32_t q) -> std::optional<BigInt> {
      if (s.kind != MotiveSymbol::Kind::Cusp || s.k < 4) return std::nullopt;
      return cusp_trace(s.k, q);
    };
  }

  /// Hecke eigenvalue lambda(p) on a one-dimensional S_{j,k}.
  BigInt lambda(SiegelWeight s, std::uint32_t p) {
    require_eigenform(s, p);
    return extract(s.local_system(), p);
  }

  /// lambda(p^2) = (Tr(Frob_{p^2}) + lambda(p)^2 - 2 p^{l+m+2}) / 2.
  BigInt lambda_sq(SiegelWeight s, std::uint32_t p) {
    require_eigenform(s, p);
    const HighestWeight w = s.local_system();
    const BigInt lp = extract(w, p);
    const BigInt tr2 = extract(w, p * p);
    const BigInt num = tr2 + lp * lp - 2 * ipow(BigInt(p), static_cast<unsigned>(w.l + w.m + 2));
    if (num % 2 != 0) throw ConjectureViolation("lambda(p^2): odd numerator " + num.str());
    return num / 2;
  }

 private:
  static void require_eigenform(SiegelWeight s, std::uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    const int d = dim_siegel_cusp(s.j, s.k);
    if (d != 1) {
      throw std::invalid_argument("S_{" + std::to_string(s.j) + "," + std::to_string(s.k) + "} has dimension " +
                                  std::to_string(d) + ", eigenvalues need dimension 1");
    }
  }

  Traces& traces_;
  MotiveOptions opt_;
};

/// 1 - lambda(p) X + (lambda(p)^2 - lambda(p^2) - p^{l+m+2}) X^2
///   - lambda(p) p^{l+m+3} X^3 + p^{2l+2m+6} X^4.
struct SpinQuartic {
  std::uint32_t p = 0;
  HighestWeight w;
  std::array<BigInt, 5> c;

  int motivic_weight() const { return w.l + w.m + 3; }

  /// Roots of X^4 c(1/X) have absolute value p^{(l+m+3)/2} within `tol` (relative).
  bool roots_on_circle(double tol = 1e-6) const {
    using C = std::complex<long double>;
    const long double radius = std::pow(static_cast<long double>(p), motivic_weight() / 2.0L);
    // monic in Y = X / radius: coefficients c_i / radius^i
    std::array<long double, 5> a;
    for (int i = 0; i < 5; ++i) {
      a[static_cast<std::size_t>(i)] =
          static_cast<long double>(c[static_cast<std::size_t>(i)]) / std::pow(radius, static_cast<long double>(i));
    }
    // X^4 c(1/X) rescaled: y^4 + a1 y^3 + a2 y^2 + a3 y + a4
    auto g = [&](C y) { return (((y + a[1]) * y + a[2]) * y + a[3]) * y + a[4]; };
    std::array<C, 4> z;
    for (int i = 0; i < 4; ++i) z[static_cast<std::size_t>(i)] = std::pow(C(0.4L, 0.9L), i);
    for (int it = 0; it < 500; ++it) {
      for (std::size_t i = 0; i < 4; ++i) {
        C den = 1;
        for (std::size_t jj = 0; jj < 4; ++jj) {
          if (jj != i) den *= z[i] - z[jj];
        }
        z[i] -= g(z[i]) / den;
      }
    }
    for (const auto& r : z) {
      if (std::abs(std::abs(r) - 1.0L) > tol) return false;
    }
    return true;
  }
};

inline SpinQuartic spin_charpoly(SiegelWeight s, std::uint32_t p, const BigInt& lp, const BigInt& lp2) {
  const HighestWeight w = s.local_system();
  const BigInt P = p;
  const unsigned n = static_cast<unsigned>(w.l + w.m);
  SpinQuartic q{p, w, {}};
  q.c = {BigInt(1), BigInt(-lp), lp * lp - lp2 - ipow(P, n + 2), BigInt(-lp * ipow(P, n + 3)), ipow(P, 2 * n + 6)};
  return q;
}

struct NewtonPolygon {
  std::vector<BigRational> slopes;  // nondecreasing, with multiplicity

  /// Matched slopes s_i + s_{n-1-i} all equal `weight`.
  bool symmetric(int weight) const {
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      if (slopes[i] + slopes[slopes.size() - 1 - i] != weight) return false;
    }
    return true;
  }
};

/// Lower convex hull of (i, v_p(c_i)), skipping zero coefficients.
inline NewtonPolygon newton_slopes(const SpinQuartic& P) {
  std::vector<std::pair<int, int>> pts;
  for (int i = 0; i < 5; ++i) {
    const BigInt& ci = P.c[static_cast<std::size_t>(i)];
    if (ci != 0) pts.emplace_back(i, valuation(ci, P.p));
  }
  if (pts.front().first != 0 || pts.back().first != 4) throw std::invalid_argument("newton_slopes: end coefficients vanish");
  NewtonPolygon np;
  std::size_t at = 0;
  while (at + 1 < pts.size()) {
    // steepest descent: the next hull vertex minimizes the slope from `at`
    std::size_t best = at + 1;
    BigRational best_slope(pts[best].second - pts[at].second, pts[best].first - pts[at].first);
    for (std::size_t n = at + 2; n < pts.size(); ++n) {
      BigRational s(pts[n].second - pts[at].second, pts[n].first - pts[at].first);
      if (s <= best_slope) {
        best = n;
        best_slope = s;
      }
    }
    for (int r = pts[at].first; r < pts[best].first; ++r) np.slopes.push_back(best_slope);
    at = best;
  }
  return np;
}

// ---- the lattice D16+ ----

/// A vector of D16+ stored as 2x, so every coordinate is an integer.
struct LatticeVector {
  std::array<std::int8_t, 16> twice{};

  /// (x, x), exact: coordinates of 2x squared sum to 4 (x, x).
  int norm() const {
    int s = 0;
    for (auto v : twice) s += v * v;
    return s / 4;
  }
  friend int inner(const LatticeVector& x, const LatticeVector& y) {
    int s = 0;
    for (std::size_t i = 0; i < 16; ++i) s += x.twice[i] * y.twice[i];
    return s / 4;
  }
  auto operator<=>(const LatticeVector&) const = default;
};

inline constexpr int kLatticeMaxNorm = 8;

namespace detail {

inline void enumerate_coset(int max_norm, bool half, std::vector<LatticeVector>& out) {
  // coordinates of 2x: even (integer coset) or odd (half-integer coset)
  const int budget = 4 * max_norm;
  LatticeVector cur;
  const int start = half ? 1 : 0;
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int used, int sum2) {
    if (i == 16) {
      if (sum2 % 4 == 0) out.push_back(cur);  // sum of x_i even
      return;
    }
    // every remaining coordinate costs at least start^2
    const int reserve = static_cast<int>(15 - i) * start * start;
    for (int v = start; v * v + used + reserve <= budget; v += 2) {
      cur.twice[i] = static_cast<std::int8_t>(v);
      rec(i + 1, used + v * v, sum2 + v);
      if (v != 0) {
        cur.twice[i] = static_cast<std::int8_t>(-v);
        rec(i + 1, used + v * v, sum2 - v);
      }
    }
    cur.twice[i] = 0;
  };
  rec(0, 0, 0);
}

}  // namespace detail

/// Every vector of D16+ = {x in Q^16 : 2x_i in Z, x_i - x_j in Z, sum x_i in 2Z} with (x, x) <= max_norm.
inline std::vector<LatticeVector> lattice_vectors_d16(int max_norm) {
  if (max_norm < 0) throw std::invalid_argument("lattice_vectors_d16: negative norm");
  if (max_norm > kLatticeMaxNorm) {
    throw std::invalid_argument("lattice_vectors_d16: norm " + std::to_string(max_norm) + " exceeds bound " +
                                std::to_string(kLatticeMaxNorm));
  }
  std::vector<LatticeVector> out;
  detail::enumerate_coset(max_norm, false, out);
  detail::enumerate_coset(max_norm, true, out);
  std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) {
    const int na = a.norm(), nb = b.norm();
    return na != nb ? na < nb : a < b;
  });
  return out;
}

namespace detail {

// (x, a) with a = (2, i, i, i, i, 0, ..., 0): real part 2 x_1, imaginary part x_2 + ... + x_5.
inline std::pair<std::int64_t, std::int64_t> pair_with_a(const LatticeVector& x) {
  const std::int64_t re = x.twice[0];
  const std::int64_t im2 = x.twice[1] + x.twice[2] + x.twice[3] + x.twice[4];
  return {re, im2 / 2};
}

// |(x, a)| <= 6 for (x, x) <= 4, so sixth powers and their shell sums fit in 64 bits.
struct GaussPow {
  std::int64_t re = 1, im = 0;
  void times(std::int64_t a, std::int64_t b) {
    const std::int64_t r = re * a - im * b;
    im = re * b + im * a;
    re = r;
  }
};

inline GaussPow gauss_pow(std::int64_t a, std::int64_t b, int e) {
  GaussPow g;
  for (int i = 0; i < e; ++i) g.times(a, b);
  return g;
}

inline const std::vector<LatticeVector>& lattice_shell(int norm) {
  static std::mutex mu;
  static std::map<int, std::vector<LatticeVector>> memo;
  std::lock_guard lock(mu);
  if (auto it = memo.find(norm); it != memo.end()) return it->second;
  std::vector<LatticeVector> shell;
  for (const auto& v : lattice_vectors_d16(norm)) {
    if (v.norm() == norm) shell.push_back(v);
  }
  return memo.emplace(norm, std::move(shell)).first->second;
}

}  // namespace detail

inline constexpr int kThetaMaxNorm = 4;

/// Coefficients of the theta series for fixed (x,x) = n1, (y,y) = n3, indexed
/// by (x,y) + kThetaMaxNorm and nu; each entry is (real, imaginary).
using ThetaTable = std::array<std::array<std::pair<BigInt, BigInt>, 7>, 2 * kThetaMaxNorm + 1>;

namespace detail {

inline ThetaTable compute_theta_table(int n1, int n3, unsigned threads) {
  const auto& xs = lattice_shell(n1);
  const auto& ys = lattice_shell(n3);
  constexpr std::size_t kSlots = 2 * kThetaMaxNorm + 1;
  std::vector<std::array<GaussPow, 7>> ypow(ys.size());
  for (std::size_t t = 0; t < ys.size(); ++t) {
    const auto [a, b] = pair_with_a(ys[t]);
    for (int nu = 0; nu <= 6; ++nu) ypow[t][static_cast<std::size_t>(nu)] = gauss_pow(a, b, nu);
  }
  struct Acc {
    std::array<std::array<BigInt, 7>, kSlots> re{}, im{};
  };
  auto parts = parallel_items<Acc>(xs.size(), threads, Acc{}, [&](Acc& acc, std::size_t i) {
    std::array<std::array<std::int64_t, 7>, kSlots> sre{}, sim{};
    for (std::size_t t = 0; t < ys.size(); ++t) {
      const auto slot = static_cast<std::size_t>(inner(xs[i], ys[t]) + kThetaMaxNorm);
      for (std::size_t nu = 0; nu < 7; ++nu) {
        sre[slot][nu] += ypow[t][nu].re;
        sim[slot][nu] += ypow[t][nu].im;
      }
    }
    const auto [a, b] = pair_with_a(xs[i]);
    for (std::size_t nu = 0; nu < 7; ++nu) {
      const GaussPow xp = gauss_pow(a, b, 6 - static_cast<int>(nu));
      for (std::size_t slot = 0; slot < kSlots; ++slot) {
        acc.re[slot][nu] += BigInt(xp.re) * sre[slot][nu] - BigInt(xp.im) * sim[slot][nu];
        acc.im[slot][nu] += BigInt(xp.re) * sim[slot][nu] + BigInt(xp.im) * sre[slot][nu];
      }
    }
  });
  ThetaTable table;
  for (std::size_t slot = 0; slot < kSlots; ++slot) {
    for (std::size_t nu = 0; nu < 7; ++nu) {
      table[slot][nu] = {0, 0};
      for (const auto& p : parts) {
        table[slot][nu].first += p.re[slot][nu];
        table[slot][nu].second += p.im[slot][nu];
      }
    }
  }
  return table;
}

inline const ThetaTable& theta_table(int n1, int n3, unsigned threads) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ThetaTable> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find({n1, n3}); it != memo.end()) return it->second;
  }
  ThetaTable t = compute_theta_table(n1, n3, threads);
  std::lock_guard lock(mu);
  return memo.emplace(std::make_pair(n1, n3), std::move(t)).first->second;
}

}  // namespace detail

/// Sum over x, y in D16+ with (x,x) = n1, (x,y) = n2, (y,y) = n3 of (x,a)^{6-nu} (y,a)^nu,
/// returned as (real, imaginary).
inline std::pair<BigInt, BigInt> theta_coefficient(int n1, int n2, int n3, int nu, unsigned threads = 1) {
  if (nu < 0 || nu > 6) throw std::invalid_argument("theta_coefficient: nu must lie in 0..6");
  if (n1 < 0 || n3 < 0) throw std::invalid_argument("theta_coefficient: negative norm");
  if (n1 > kThetaMaxNorm || n3 > kThetaMaxNorm) {
    throw std::invalid_argument("theta_coefficient: norms above " + std::to_string(kThetaMaxNorm) +
                                " are not supported");
  }
  if (static_cast<std::int64_t>(n2) * n2 > static_cast<std::int64_t>(n1) * n3) {
    throw std::invalid_argument("theta_coefficient: (x,y)^2 > (x,x)(y,y) violates Cauchy-Schwarz");
  }
  if (n1 % 2 != 0 || n3 % 2 != 0) return {0, 0};  // the lattice is even
  return detail::theta_table(n1, n3, threads)[static_cast<std::size_t>(n2 + kThetaMaxNorm)][static_cast<std::size_t>(nu)];
}

}  // namespace locsys
