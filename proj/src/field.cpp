#include "embvan/field.hpp"

#include <charconv>
#include <stdexcept>

namespace embvan {

bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p))
    throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) +
                                " is not a prime below 2^31");
}

std::string PrimeField::name() const { return "GF(" + std::to_string(p_) + ")"; }

PrimeField::Elem PrimeField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0)
    r += p_;
  return static_cast<Elem>(r);
}

PrimeField::Elem PrimeField::inv(Elem a) const {
  if (a == 0)
    throw std::domain_error("PrimeField: inverse of zero");
  std::int64_t t = 0, newt = 1;
  std::int64_t r = p_, newr = a;
  while (newr != 0) {
    const std::int64_t q = r / newr;
    t -= q * newt;
    std::swap(t, newt);
    r -= q * newr;
    std::swap(r, newr);
  }
  return from_int(t);
}

std::int64_t PrimeField::to_signed(Elem a) const {
  return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : a;
}

std::string PrimeField::to_string(Elem a) const { return std::to_string(a); }

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("cannot parse integer '" + std::string(s) + "'");
  return v;
}

} // namespace

PrimeField::Elem PrimeField::parse(std::string_view text) const {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return from_int(parse_int(text));
  return div(from_int(parse_int(text.substr(0, slash))),
             from_int(parse_int(text.substr(slash + 1))));
}

RationalField::Elem RationalField::from_int(std::int64_t v) const {
  mpz_class z;
  z = std::to_string(v);
  return Elem(z);
}

RationalField::Elem RationalField::inv(const Elem& a) const {
  if (sgn(a) == 0)
    throw std::domain_error("RationalField: inverse of zero");
  return 1 / a;
}

RationalField::Elem RationalField::parse(std::string_view text) const {
  std::string s(text);
  if (!s.empty() && s.front() == '+')
    s.erase(0, 1);
  Elem q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("cannot parse rational '" + s + "'");
  if (sgn(q.get_den()) == 0)
    throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

} // namespace embvan
