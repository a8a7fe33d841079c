#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace locsys {

class CensusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { Auto, Full, Reduced };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Full: return "full";
    case Strategy::Reduced: return "reduced";
    case Strategy::Auto: break;
  }
  return "auto";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "full") return Strategy::Full;
  if (s == "reduced") return Strategy::Reduced;
  if (s == "auto") return Strategy::Auto;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

struct CensusBounds {
  // genus 1: full enumeration of q^5 models; the reduced path is ~q^3
  std::uint32_t g1_full_max_q = 64;
  std::uint32_t g1_max_q = 1u << 13;
  // genus 2
  std::uint32_t g2_full_max_q = 13;
  std::uint32_t g2_max_q = 29;
  // Auto switches to the reduced path above these sizes.
  std::uint32_t g1_auto_full_max_q = 16;
  std::uint32_t g2_auto_full_max_q = 5;
};

struct CensusOptions {
  Strategy strategy = Strategy::Auto;
  unsigned threads = 1;
  CensusBounds bounds{};
};

/// Complement of the image of an F_2-linear map on packed bit vectors
/// (n <= 63 bits). Every vector v decomposes uniquely as s + w with s in the
/// slice and w in the image.
class F2Slice {
 public:
  F2Slice(unsigned nbits, const std::vector<std::uint64_t>& generators) : nbits_(nbits) {
    if (nbits > 63) throw std::invalid_argument("F2Slice supports at most 63 bits");
    std::vector<std::uint64_t> basis;
    for (std::uint64_t v : generators) {
      for (std::uint64_t b : basis) {
        const int top = 63 - __builtin_clzll(b);
        if ((v >> top) & 1u) v ^= b;
      }
      if (v == 0) continue;
      // keep basis sorted by decreasing leading bit, fully reduced
      const int top = 63 - __builtin_clzll(v);
      for (auto& b : basis) {
        if ((b >> top) & 1u) b ^= v;
      }
      basis.push_back(v);
      std::sort(basis.begin(), basis.end(), [](std::uint64_t a, std::uint64_t b) { return a > b; });
    }
    rank_ = static_cast<unsigned>(basis.size());
    std::uint64_t pivots = 0;
    for (std::uint64_t b : basis) pivots |= std::uint64_t{1} << (63 - __builtin_clzll(b));
    for (unsigned i = 0; i < nbits; ++i) {
      if (!((pivots >> i) & 1u)) free_bits_.push_back(i);
    }
  }

  unsigned rank() const { return rank_; }
  std::uint64_t size() const { return std::uint64_t{1} << free_bits_.size(); }

  /// The idx-th slice vector, 0 <= idx < size().
  std::uint64_t element(std::uint64_t idx) const {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < free_bits_.size(); ++i) {
      if ((idx >> i) & 1u) v |= std::uint64_t{1} << free_bits_[i];
    }
    return v;
  }

 private:
  unsigned nbits_;
  unsigned rank_ = 0;
  std::vector<unsigned> free_bits_;
};

}  // namespace locsys
