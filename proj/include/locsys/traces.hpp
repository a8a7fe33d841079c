#pragma once

// Frobenius traces on the compactly supported Euler characteristics of
// V_{l,m} over M_2, A_{1,1} and A_2 = M_2 + A_{1,1}, and point counts of
// M_{g,n}.

#include "locsys/cache.hpp"
#include "locsys/histogram.hpp"
#include "locsys/spchar.hpp"

#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace locsys {

enum class Space { M2, A11, A2 };

inline std::string to_string(Space s) {
  switch (s) {
    case Space::M2: return "M2";
    case Space::A11: return "A11";
    case Space::A2: return "A2";
  }
  return "?";
}

struct TraceValue {
  HighestWeight w;
  std::uint32_t q = 0;
  Space space = Space::M2;
  BigRational value;

  BigInt integer() const {
    return require_integer(value, "trace " + to_string(space) + "(" + std::to_string(w.l) + "," + std::to_string(w.m) +
                                      "," + std::to_string(q) + ")");
  }
};

/// sum over Weil keys of weight * P_{l,m}(a1, a2, q).
inline BigRational trace_m2(HighestWeight w, const WeilHistogram& h) {
  if (w.weight() % 2 != 0) return 0;
  const auto P = sp4_char(w);
  const BigInt q = h.q();
  return h.weighted_sum([&](const WeilKey& k) { return P.eval(k.a1, k.a2, q); });
}

/// Unordered pairs of elliptic curves over F_q, split and swapped by Frobenius.
inline BigRational trace_a11(HighestWeight w, const TraceHistogram& hq, const TraceHistogram& hq2) {
  if (w.weight() % 2 != 0) return 0;
  if (static_cast<std::uint64_t>(hq2.q()) != static_cast<std::uint64_t>(hq.q()) * hq.q()) {
    throw std::invalid_argument("trace_a11: second histogram must be over F_{q^2}");
  }
  const auto P = sp4_char(w);
  const BigInt q = hq.q();
  BigInt split = 0;
  for (const auto& [a, na] : hq.numerators()) {
    for (const auto& [b, nb] : hq.numerators()) split += na * nb * P.eval(a + b, BigInt(a) * b + 2 * q, q);
  }
  BigInt swapped = 0;
  for (const auto& [a, n] : hq2.numerators()) swapped += n * P.eval(0, -a, q);
  return (BigRational(split, hq.denominator() * hq.denominator()) + BigRational(swapped, hq2.denominator())) / 2;
}

/// Falling factorial x (x - 1) ... (x - n + 1).
inline BigInt falling(std::int64_t x, int n) {
  BigInt r = 1;
  for (int i = 0; i < n; ++i) r *= x - i;
  return r;
}

/// Trace engine over a census store, memoized per (l, m, q, space).
class Traces {
 public:
  explicit Traces(CensusStore& store) : store_(store) {}

  CensusStore& store() { return store_; }

  TraceValue t_m2(HighestWeight w, std::uint32_t q) { return memo(w, q, Space::M2); }
  TraceValue t_a11(HighestWeight w, std::uint32_t q) { return memo(w, q, Space::A11); }
  TraceValue t_a2(HighestWeight w, std::uint32_t q) { return memo(w, q, Space::A2); }

  /// #M_{g,n}(F_q) for g in {1, 2}; ordered distinct marked points.
  BigRational count_mgn(int g, int n, std::uint32_t q) {
    if (n < 0) throw std::invalid_argument("count_mgn: negative n");
    if (g == 2) {
      return store_.genus2(q).weighted_sum(
          [&](const WeilKey& k) { return falling(static_cast<std::int64_t>(q) + 1 - k.a1, n); });
    }
    if (g == 1) {
      if (n < 1) throw std::invalid_argument("count_mgn: genus 1 needs n >= 1");
      return store_.elliptic(q).weighted_sum(
          [&](const int& a) { return falling(static_cast<std::int64_t>(q) - a, n - 1); });
    }
    throw std::invalid_argument("count_mgn: genus must be 1 or 2");
  }

 private:
  TraceValue memo(HighestWeight w, std::uint32_t q, Space s) {
    const auto key = std::make_tuple(w, q, s);
    {
      std::lock_guard lock(mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    TraceValue v{w, q, s, 0};
    switch (s) {
      case Space::M2:
        if (w.weight() % 2 == 0) v.value = trace_m2(w, store_.genus2(q));
        break;
      case Space::A11:
        if (w.weight() % 2 == 0) v.value = trace_a11(w, store_.elliptic(q), store_.elliptic(q * q));
        break;
      case Space::A2:
        v.value = t_m2(w, q).value + t_a11(w, q).value;
        break;
    }
    std::lock_guard lock(mu_);
    memo_.emplace(key, v);
    return v;
  }

  CensusStore& store_;
  std::mutex mu_;
  std::map<std::tuple<HighestWeight, std::uint32_t, Space>, TraceValue> memo_;
};

}  // namespace locsys
