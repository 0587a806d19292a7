#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace embvan {

inline constexpr int kMaxVars = 48;

/// Exponent vector with cached total degree. Exponents past the ring's
/// variable count are always zero, so whole-array comparisons are valid.
struct Monomial {
  std::array<std::uint8_t, kMaxVars> exp{};
  std::uint16_t deg = 0;

  static Monomial from_exponents(const std::vector<int>& e);
  static Monomial variable(int i, int power = 1);

  int operator[](int i) const { return exp[static_cast<std::size_t>(i)]; }
  bool is_one() const { return deg == 0; }

  bool operator==(const Monomial& o) const { return deg == o.deg && exp == o.exp; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }
};

Monomial operator*(const Monomial& a, const Monomial& b);
// Requires divides(b, a).
Monomial operator/(const Monomial& a, const Monomial& b);
bool divides(const Monomial& a, const Monomial& b);
Monomial lcm(const Monomial& a, const Monomial& b);
bool coprime(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

enum class OrderKind { Grevlex, Lex, Deglex };

/// Global monomial order on a fixed number of variables.
class MonomialOrder {
public:
  explicit MonomialOrder(int nvars = 0, OrderKind kind = OrderKind::Grevlex)
      : nvars_(nvars), kind_(kind) {}

  // Accepts "grevlex", "lex", "deglex"; throws std::invalid_argument otherwise.
  static MonomialOrder parse(int nvars, const std::string& spec);

  int nvars() const { return nvars_; }
  OrderKind kind() const { return kind_; }
  std::string name() const;

  // Negative, zero, positive as a <, =, > b.
  int compare(const Monomial& a, const Monomial& b) const {
    switch (kind_) {
    case OrderKind::Grevlex:
      if (a.deg != b.deg)
        return a.deg < b.deg ? -1 : 1;
      for (int i = nvars_ - 1; i >= 0; --i)
        if (a.exp[i] != b.exp[i])
          return a.exp[i] > b.exp[i] ? -1 : 1;
      return 0;
    case OrderKind::Deglex:
      if (a.deg != b.deg)
        return a.deg < b.deg ? -1 : 1;
      [[fallthrough]];
    case OrderKind::Lex:
      for (int i = 0; i < nvars_; ++i)
        if (a.exp[i] != b.exp[i])
          return a.exp[i] < b.exp[i] ? -1 : 1;
      return 0;
    }
    return 0;
  }

  bool operator==(const MonomialOrder& o) const {
    return nvars_ == o.nvars_ && kind_ == o.kind_;
  }

private:
  int nvars_;
  OrderKind kind_;
};

/// All monomials of total degree d in n variables, in lex-descending order.
std::vector<Monomial> monomials_of_degree(int nvars, int degree);

/// C(n, k) as a 64-bit integer; zero when k < 0 or k > n or n < 0.
std::int64_t binomial(std::int64_t n, std::int64_t k);

} // namespace embvan
