#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace embvan {

/// Integers modulo a prime that fits in 31 bits. Elements are stored as
/// plain integers in [0, p); the field object carries the modulus.
class PrimeField {
public:
  using Elem = std::uint32_t;

  static constexpr std::uint32_t kDefaultPrime = 32003;

  explicit PrimeField(std::uint32_t p = kDefaultPrime);

  std::uint32_t characteristic() const { return p_; }
  std::string name() const;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const;

  Elem add(Elem a, Elem b) const {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  bool is_zero(Elem a) const { return a == 0; }
  bool is_one(Elem a) const { return a == 1; }
  bool equal(Elem a, Elem b) const { return a == b; }

  // Symmetric representative in (-p/2, p/2], used for printing small values.
  std::int64_t to_signed(Elem a) const;
  std::string to_string(Elem a) const;
  Elem parse(std::string_view text) const;

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
  std::uint32_t p_;
};

/// The rational numbers, backed by GMP.
class RationalField {
public:
  using Elem = mpq_class;

  std::string name() const { return "QQ"; }
  std::uint32_t characteristic() const { return 0; }

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(std::int64_t v) const;

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool is_one(const Elem& a) const { return a == 1; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  std::string to_string(const Elem& a) const { return a.get_str(); }
  Elem parse(std::string_view text) const;

  bool operator==(const RationalField&) const { return true; }
};

bool is_prime(std::uint64_t n);

} // namespace embvan
