#include "embvan/monomial.hpp"

#include <stdexcept>

namespace embvan {

Monomial Monomial::from_exponents(const std::vector<int>& e) {
  if (e.size() > static_cast<std::size_t>(kMaxVars))
    throw std::invalid_argument("too many variables for Monomial");
  Monomial m;
  int d = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] > 255)
      throw std::invalid_argument("exponent out of range");
    m.exp[i] = static_cast<std::uint8_t>(e[i]);
    d += e[i];
  }
  m.deg = static_cast<std::uint16_t>(d);
  return m;
}

Monomial Monomial::variable(int i, int power) {
  if (i < 0 || i >= kMaxVars)
    throw std::invalid_argument("variable index out of range");
  Monomial m;
  m.exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(power);
  m.deg = static_cast<std::uint16_t>(power);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    const int e = a.exp[i] + b.exp[i];
    if (e > 255)
      throw std::overflow_error("monomial exponent overflow");
    r.exp[i] = static_cast<std::uint8_t>(e);
  }
  r.deg = static_cast<std::uint16_t>(a.deg + b.deg);
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i)
    r.exp[i] = static_cast<std::uint8_t>(a.exp[i] - b.exp[i]);
  r.deg = static_cast<std::uint16_t>(a.deg - b.deg);
  return r;
}

bool divides(const Monomial& a, const Monomial& b) {
  if (a.deg > b.deg)
    return false;
  for (int i = 0; i < kMaxVars; ++i)
    if (a.exp[i] > b.exp[i])
      return false;
  return true;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  int d = 0;
  for (int i = 0; i < kMaxVars; ++i) {
    r.exp[i] = a.exp[i] > b.exp[i] ? a.exp[i] : b.exp[i];
    d += r.exp[i];
  }
  r.deg = static_cast<std::uint16_t>(d);
  return r;
}

bool coprime(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kMaxVars; ++i)
    if (a.exp[i] != 0 && b.exp[i] != 0)
      return false;
  return true;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto e : m.exp) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return h;
}

MonomialOrder MonomialOrder::parse(int nvars, const std::string& spec) {
  if (spec == "grevlex")
    return MonomialOrder(nvars, OrderKind::Grevlex);
  if (spec == "lex")
    return MonomialOrder(nvars, OrderKind::Lex);
  if (spec == "deglex")
    return MonomialOrder(nvars, OrderKind::Deglex);
  throw std::invalid_argument("unsupported monomial order '" + spec + "'");
}

std::string MonomialOrder::name() const {
  switch (kind_) {
  case OrderKind::Grevlex:
    return "grevlex";
  case OrderKind::Lex:
    return "lex";
  case OrderKind::Deglex:
    return "deglex";
  }
  return "?";
}

namespace {

void enumerate(int var, int nvars, int remaining, Monomial& cur,
               std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur.exp[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    cur.exp[var] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.exp[var] = static_cast<std::uint8_t>(e);
    enumerate(var + 1, nvars, remaining - e, cur, out);
  }
  cur.exp[var] = 0;
}

} // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  if (degree < 0 || nvars <= 0)
    return out;
  Monomial cur;
  cur.deg = static_cast<std::uint16_t>(degree);
  enumerate(0, nvars, degree, cur, out);
  return out;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n)
    return 0;
  if (k > n - k)
    k = n - k;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

} // namespace embvan
