#include "nilcrystal/field.hpp"

#include <charconv>

#include "nilcrystal/errors.hpp"

namespace nilcrystal {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all n < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (std::uint64_t{1} << 63)) throw InvalidInput("prime field modulus must be below 2^63");
  if (!is_prime_u64(p)) throw InvalidInput("prime field modulus " + std::to_string(p) + " is not prime");
}

PrimeField::Element PrimeField::inv(Element a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return powmod(a, p_ - 2, p_);
}

PrimeField::Element PrimeField::from_int(std::int64_t v) const noexcept {
  const auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<Element>(r);
}

PrimeField::Element PrimeField::parse(std::string_view text) const {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw FormatError("bad prime-field element '" + std::string(text) + "'");
  if (v >= p_) throw FormatError("prime-field element out of range: " + std::string(text));
  return v;
}

RationalField::RationalField(std::uint32_t sample_radius) : radius_(sample_radius) {
  if (radius_ == 0) throw InvalidInput("rational sample radius must be positive");
}

RationalField::Element RationalField::inv(const Element& a) const {
  if (sgn(a) == 0) throw std::domain_error("inverse of zero");
  Element r = 1 / a;
  r.canonicalize();
  return r;
}

RationalField::Element RationalField::div(const Element& a, const Element& b) const {
  if (sgn(b) == 0) throw std::domain_error("division by zero");
  return a / b;
}

RationalField::Element RationalField::random(Rng& rng) const {
  const std::uint64_t span = 2 * static_cast<std::uint64_t>(radius_) + 1;
  const auto v = static_cast<std::int64_t>(uniform_below(rng, span)) - static_cast<std::int64_t>(radius_);
  return Element(static_cast<long>(v));
}

std::string RationalField::to_string(const Element& a) const {
  return a.get_num().get_str() + "/" + a.get_den().get_str();
}

RationalField::Element RationalField::parse(std::string_view text) const {
  Element r;
  try {
    r = Element(std::string(text), 10);
  } catch (const std::invalid_argument&) {
    throw FormatError("bad rational element '" + std::string(text) + "'");
  }
  if (sgn(r.get_den()) == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

}  // namespace nilcrystal
