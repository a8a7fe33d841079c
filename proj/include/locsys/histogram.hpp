#pragma once

// Weighted histograms of Frobenius data: integer numerators over one common
// denominator, so that weights stay exact without rational arithmetic in the
// enumeration loops.

#include "locsys/bigint.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>

namespace locsys {

/// Key of a genus-2 Weil polynomial x^4 - a1 x^3 + a2 x^2 - q a1 x + q^2.
struct WeilKey {
  int a1 = 0;
  int a2 = 0;
  auto operator<=>(const WeilKey&) const = default;
};

template <class Key>
class Histogram {
 public:
  Histogram() = default;
  Histogram(std::uint32_t q, BigInt denominator) : q_(q), den_(std::move(denominator)) {
    if (den_ <= 0) throw std::invalid_argument("histogram denominator must be positive");
  }

  std::uint32_t q() const { return q_; }
  const BigInt& denominator() const { return den_; }
  const std::map<Key, BigInt>& numerators() const { return num_; }
  bool empty() const { return num_.empty(); }

  void add(const Key& k, const BigInt& numerator) {
    if (numerator == 0) return;
    auto [it, inserted] = num_.try_emplace(k, numerator);
    if (!inserted) {
      it->second += numerator;
      if (it->second == 0) num_.erase(it);
    }
  }

  BigRational weight(const Key& k) const {
    auto it = num_.find(k);
    if (it == num_.end()) return 0;
    return BigRational(it->second, den_);
  }

  BigRational total_mass() const {
    BigInt s = 0;
    for (const auto& [k, n] : num_) s += n;
    return BigRational(s, den_);
  }

  /// Exact value of sum over keys of weight(key) * f(key).
  BigRational weighted_sum(const std::function<BigInt(const Key&)>& f) const {
    BigInt s = 0;
    for (const auto& [k, n] : num_) s += n * f(k);
    return BigRational(s, den_);
  }

  /// Same histogram with every weight unchanged but written over `den`.
  Histogram rescaled(const BigInt& den) const {
    Histogram out(q_, den);
    for (const auto& [k, n] : num_) {
      const BigInt scaled = n * den;
      if (scaled % den_ != 0) throw std::invalid_argument("rescale: denominator does not clear");
      out.num_.emplace(k, scaled / den_);
    }
    return out;
  }

  /// Equality of weights (not of representation).
  friend bool operator==(const Histogram& a, const Histogram& b) {
    if (a.q_ != b.q_ || a.num_.size() != b.num_.size()) return false;
    auto ib = b.num_.begin();
    for (const auto& [k, n] : a.num_) {
      if (k != ib->first || n * b.den_ != ib->second * a.den_) return false;
      ++ib;
    }
    return true;
  }

 private:
  std::uint32_t q_ = 0;
  BigInt den_ = 1;
  std::map<Key, BigInt> num_;
};

/// Histogram of elliptic Frobenius traces a = q + 1 - #E(F_q).
using TraceHistogram = Histogram<int>;
/// Histogram of genus-2 Weil coefficients.
using WeilHistogram = Histogram<WeilKey>;

}  // namespace locsys
