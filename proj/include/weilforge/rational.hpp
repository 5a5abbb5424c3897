#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <string>

#include "weilforge/error.hpp"

namespace weilforge {

/// Exact arbitrary-precision rational. All verdicts in this library are exact
/// algebraic conditions, so no floating point appears anywhere in the core.
using Rat = mpq_class;

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

/// Parses "p", "-p" or "p/q". Throws on malformed input or zero denominator.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) fail(errc::io_error, "empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) fail(errc::io_error, "malformed rational literal '" + s + "'");
  if (sgn(q.get_den()) == 0) fail(errc::io_error, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

/// Canonical form: "p" when the denominator is 1, else "p/q".
inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Hashing (content hashes for serialized artifacts)
// ---------------------------------------------------------------------------

struct Fnv1a {
  std::uint64_t state = 1469598103934665603ull;
  void feed(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state ^= p[i];
      state *= 1099511628211ull;
    }
  }
  void feed(const std::string& s) {
    feed(s.data(), s.size());
    feed("\x1f", 1);  // field separator, keeps adjacent fields from merging
  }
  std::uint64_t value() const { return state; }
};

inline std::string hash_to_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic random sampling (property tests, automorphism sampling)
// ---------------------------------------------------------------------------

/// SplitMix64. Small, deterministic, and good enough for test sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(int num, int den) { return below(static_cast<std::uint64_t>(den)) < static_cast<std::uint64_t>(num); }

  /// Small rational with numerator in [-bound, bound] and denominator in [1, den_bound].
  Rat small_rational(int bound = 3, int den_bound = 2) {
    Rat q(range(-bound, bound), range(1, den_bound));
    q.canonicalize();
    return q;
  }

 private:
  std::uint64_t state_;
};

/// Seed used by sampled verifications; WEILFORGE_SEED overrides the default.
inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("WEILFORGE_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return 0x77e11f04c3ull;
}

}  // namespace weilforge
