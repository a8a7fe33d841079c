#pragma once

// Plain-text persistence of census histograms, and a store that serves
// histograms from memory, then disk, then by computing them.
//
//   locsys-census
//   version 1
//   kind g2
//   q 5
//   denominator 480
//   entries 2
//   -3 4 12
//   3 4 12
//   checksum 24
//
// Body lines are keys followed by the weight numerator, in ascending key
// order; the checksum is the sum of all numerators.

#include "locsys/census1.hpp"
#include "locsys/census2.hpp"
#include "locsys/histogram.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

namespace locsys {

enum class CacheErrorKind { Malformed, Version, Kind, Checksum, Io };

class CacheError : public std::runtime_error {
 public:
  CacheError(CacheErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  CacheErrorKind kind() const { return kind_; }

 private:
  CacheErrorKind kind_;
};

/// Requested data is neither in memory nor on disk and computing is disabled.
class MissingDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCacheVersion = 1;

namespace detail {

inline void write_key(std::ostream& os, int a) { os << a; }
inline void write_key(std::ostream& os, const WeilKey& k) { os << k.a1 << ' ' << k.a2; }
inline bool read_key(std::istream& is, int& a) { return static_cast<bool>(is >> a); }
inline bool read_key(std::istream& is, WeilKey& k) { return static_cast<bool>(is >> k.a1 >> k.a2); }

template <class Key>
constexpr const char* kind_tag() {
  if constexpr (std::is_same_v<Key, int>) {
    return "g1";
  } else {
    return "g2";
  }
}

inline std::string expect_field(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw CacheError(CacheErrorKind::Malformed, "cache: missing '" + name + "' line");
  std::istringstream ls(line);
  std::string tag, value, extra;
  if (!(ls >> tag >> value) || tag != name || (ls >> extra)) {
    throw CacheError(CacheErrorKind::Malformed, "cache: malformed '" + name + "' line: " + line);
  }
  return value;
}

inline BigInt parse_bigint(const std::string& s, const std::string& what) {
  try {
    if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos) throw std::invalid_argument(s);
    return BigInt(s);
  } catch (const std::exception&) {
    throw CacheError(CacheErrorKind::Malformed, "cache: bad integer for " + what + ": " + s);
  }
}

}  // namespace detail

template <class Key>
void write_histogram(std::ostream& os, const Histogram<Key>& h) {
  os << "locsys-census\n";
  os << "version " << kCacheVersion << "\n";
  os << "kind " << detail::kind_tag<Key>() << "\n";
  os << "q " << h.q() << "\n";
  os << "denominator " << h.denominator() << "\n";
  os << "entries " << h.numerators().size() << "\n";
  BigInt sum = 0;
  for (const auto& [k, n] : h.numerators()) {
    detail::write_key(os, k);
    os << ' ' << n << "\n";
    sum += n;
  }
  os << "checksum " << sum << "\n";
}

template <class Key>
Histogram<Key> read_histogram(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "locsys-census") {
    throw CacheError(CacheErrorKind::Malformed, "cache: missing format tag");
  }
  const std::string version = detail::expect_field(in, "version");
  if (version != std::to_string(kCacheVersion)) {
    throw CacheError(CacheErrorKind::Version, "cache: unsupported version " + version);
  }
  const std::string kind = detail::expect_field(in, "kind");
  if (kind != detail::kind_tag<Key>()) {
    throw CacheError(CacheErrorKind::Kind,
                     std::string("cache: expected kind ") + detail::kind_tag<Key>() + ", found " + kind);
  }
  const BigInt q = detail::parse_bigint(detail::expect_field(in, "q"), "q");
  const BigInt den = detail::parse_bigint(detail::expect_field(in, "denominator"), "denominator");
  const BigInt entries = detail::parse_bigint(detail::expect_field(in, "entries"), "entries");
  if (q < 2 || q > (1u << 20) || den <= 0 || entries < 0) {
    throw CacheError(CacheErrorKind::Malformed, "cache: header values out of range");
  }
  Histogram<Key> h(static_cast<std::uint32_t>(q), den);
  BigInt sum = 0;
  std::optional<Key> prev;
  for (BigInt i = 0; i < entries; ++i) {
    if (!std::getline(in, line)) throw CacheError(CacheErrorKind::Malformed, "cache: truncated body");
    std::istringstream ls(line);
    Key k{};
    std::string num, extra;
    if (!detail::read_key(ls, k) || !(ls >> num) || (ls >> extra)) {
      throw CacheError(CacheErrorKind::Malformed, "cache: malformed body line: " + line);
    }
    if (prev && !(*prev < k)) throw CacheError(CacheErrorKind::Malformed, "cache: keys not strictly ascending");
    const BigInt n = detail::parse_bigint(num, "numerator");
    if (n <= 0) throw CacheError(CacheErrorKind::Malformed, "cache: nonpositive weight");
    h.add(k, n);
    sum += n;
    prev = k;
  }
  const BigInt check = detail::parse_bigint(detail::expect_field(in, "checksum"), "checksum");
  if (check != sum) throw CacheError(CacheErrorKind::Checksum, "cache: checksum mismatch");
  if (std::getline(in, line) && !line.empty()) throw CacheError(CacheErrorKind::Malformed, "cache: trailing data");
  return h;
}

template <class Key>
std::string serialize(const Histogram<Key>& h) {
  std::ostringstream os;
  write_histogram(os, h);
  return os.str();
}

template <class Key>
Histogram<Key> deserialize(const std::string& text) {
  std::istringstream is(text);
  return read_histogram<Key>(is);
}

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw CacheError(CacheErrorKind::Io, "cache: cannot create " + path.parent_path().string());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << contents;
    os.flush();
    if (!os) throw CacheError(CacheErrorKind::Io, "cache: cannot write " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CacheError(CacheErrorKind::Io, "cache: cannot rename into " + path.string());
  }
}

inline FieldDesc field_for_q(std::uint32_t q) {
  if (q < 2) throw FieldError("q must be a prime power >= 2");
  unsigned p = 2;
  while (q % p != 0) ++p;
  unsigned e = 0;
  std::uint32_t r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) throw FieldError(std::to_string(q) + " is not a prime power");
  return make_field(p, e);
}

/// Memoizing source of census histograms.
class CensusStore {
 public:
  explicit CensusStore(CensusOptions opt = {}, std::optional<std::filesystem::path> cache_dir = std::nullopt,
                       bool compute = true)
      : opt_(opt), dir_(std::move(cache_dir)), compute_(compute) {}

  const CensusOptions& options() const { return opt_; }

  const TraceHistogram& elliptic(std::uint32_t q) { return get(g1_, q, "g1"); }
  const WeilHistogram& genus2(std::uint32_t q) { return get(g2_, q, "g2"); }

 private:
  template <class Key>
  const Histogram<Key>& get(std::map<std::uint32_t, Histogram<Key>>& memo, std::uint32_t q, const char* tag) {
    std::lock_guard lock(mu_);
    if (auto it = memo.find(q); it != memo.end()) return it->second;
    std::optional<std::filesystem::path> path;
    if (dir_) path = *dir_ / (std::string(tag) + "_q" + std::to_string(q) + ".txt");
    if (path && std::filesystem::exists(*path)) {
      std::ifstream in(*path, std::ios::binary);
      auto h = read_histogram<Key>(in);
      if (h.q() != q) throw CacheError(CacheErrorKind::Malformed, "cache: file " + path->string() + " is for another q");
      return memo.emplace(q, std::move(h)).first->second;
    }
    if (!compute_) {
      throw MissingDataError(std::string("no cached ") + tag + " census for q = " + std::to_string(q) +
                             " (enable computing to build it)");
    }
    const FieldDesc F = field_for_q(q);
    Histogram<Key> h;
    if constexpr (std::is_same_v<Key, int>) {
      h = census_elliptic(F, opt_);
    } else {
      h = census_genus2(F, opt_);
    }
    if (path) write_file_atomic(*path, serialize(h));
    return memo.emplace(q, std::move(h)).first->second;
  }

  CensusOptions opt_;
  std::optional<std::filesystem::path> dir_;
  bool compute_;
  std::mutex mu_;
  std::map<std::uint32_t, TraceHistogram> g1_;
  std::map<std::uint32_t, WeilHistogram> g2_;
};

}  // namespace locsys
