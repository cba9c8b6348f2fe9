#pragma once

// Exact coefficient fields for module computations.
//
// A field is a small value type that owns its parameters and performs all
// arithmetic on a plain element type. Matrices store bare elements; every
// algorithm receives the field explicitly, so two fields (or two primes) can
// be in use at the same time on different threads.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace nilcrystal {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; bit-reproducible across
/// standard libraries, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

/// splitmix64 finalizer, used to derive independent per-job seeds.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t job) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (job + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_prime_u64(std::uint64_t n);

class PrimeField {
 public:
  using Element = std::uint64_t;
  static constexpr std::uint64_t kDefaultPrime = (std::uint64_t{1} << 61) - 1;

  explicit PrimeField(std::uint64_t p = kDefaultPrime);

  std::uint64_t modulus() const noexcept { return p_; }

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  bool is_zero(const Element& a) const noexcept { return a == 0; }
  bool equal(const Element& a, const Element& b) const noexcept { return a == b; }

  Element add(Element a, Element b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element from_int(std::int64_t v) const noexcept;

  Element random(Rng& rng) const { return uniform_below(rng, p_); }

  /// log2 of the number of values `random` can produce.
  double log2_sample_size() const noexcept { return std::log2(static_cast<double>(p_)); }

  std::string to_string(const Element& a) const { return std::to_string(a); }
  Element parse(std::string_view text) const;

  /// "prime:<p>"
  std::string name() const { return "prime:" + std::to_string(p_); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

class RationalField {
 public:
  using Element = mpq_class;
  static constexpr std::uint32_t kDefaultSampleRadius = 1u << 16;

  /// Random elements are integers drawn uniformly from [-radius, radius].
  explicit RationalField(std::uint32_t sample_radius = kDefaultSampleRadius);

  std::uint32_t sample_radius() const noexcept { return radius_; }

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool equal(const Element& a, const Element& b) const { return a == b; }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const;
  Element div(const Element& a, const Element& b) const;
  Element from_int(std::int64_t v) const { return Element(static_cast<long>(v)); }

  Element random(Rng& rng) const;
  double log2_sample_size() const noexcept { return std::log2(2.0 * radius_ + 1.0); }

  /// Always "num/den".
  std::string to_string(const Element& a) const;
  Element parse(std::string_view text) const;

  std::string name() const { return "rat"; }

  friend bool operator==(const RationalField& a, const RationalField& b) {
    return a.radius_ == b.radius_;
  }

 private:
  std::uint32_t radius_;
};

}  // namespace nilcrystal
