#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "embvan/polynomial.hpp"

namespace embvan {

// Plain-text polynomial format: terms `coeff*x0^e0*...*xn^en` joined by `+`,
// factors with exponent zero omitted, the zero polynomial written as `0`.
template <class F>
std::string to_text(const PolyRing<F>& ring, const Polynomial<F>& f) {
  if (f.is_zero())
    return "0";
  std::string out;
  for (std::size_t t = 0; t < f.terms.size(); ++t) {
    if (t > 0)
      out += '+';
    out += ring.field().to_string(f.terms[t].coef);
    for (int i = 0; i < ring.nvars(); ++i) {
      const int e = f.terms[t].mono[i];
      if (e == 0)
        continue;
      out += "*x" + std::to_string(i) + "^" + std::to_string(e);
    }
  }
  return out;
}

// Inverse of to_text. Also accepts `-` between terms, bare variables without
// an exponent and terms without a leading coefficient.
template <class F>
Polynomial<F> parse_polynomial(const PolyRing<F>& ring, std::string_view text) {
  const F& field = ring.field();
  std::vector<Term<F>> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("parse_polynomial: " + why + " in '" +
                                std::string(text) + "'");
  };
  skip_ws();
  if (pos == text.size())
    fail("empty input");
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == text.size())
      break;
    bool negative = false;
    bool separated = false;
    while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negative ^= text[pos] == '-';
      separated = true;
      ++pos;
      skip_ws();
    }
    if (!first && !separated)
      fail("expected '+' or '-'");
    first = false;
    skip_ws();
    typename F::Elem coef = field.one();
    std::vector<int> exps(static_cast<std::size_t>(ring.nvars()), 0);
    bool any_factor = false;
    while (true) {
      skip_ws();
      if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])))) {
        std::size_t end = pos;
        while (end < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '/'))
          ++end;
        coef = field.mul(coef, field.parse(text.substr(pos, end - pos)));
        pos = end;
      } else if (pos < text.size() && text[pos] == 'x') {
        std::size_t end = pos + 1;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
          ++end;
        if (end == pos + 1)
          fail("variable without index");
        const int var = std::stoi(std::string(text.substr(pos + 1, end - pos - 1)));
        if (var < 0 || var >= ring.nvars())
          fail("variable index out of range");
        pos = end;
        int e = 1;
        if (pos < text.size() && text[pos] == '^') {
          std::size_t eend = pos + 1;
          while (eend < text.size() && std::isdigit(static_cast<unsigned char>(text[eend])))
            ++eend;
          if (eend == pos + 1)
            fail("missing exponent");
          e = std::stoi(std::string(text.substr(pos + 1, eend - pos - 1)));
          pos = eend;
        }
        exps[static_cast<std::size_t>(var)] += e;
      } else {
        fail("unexpected character");
      }
      any_factor = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any_factor)
      fail("empty term");
    if (negative)
      coef = field.neg(coef);
    terms.push_back({Monomial::from_exponents(exps), coef});
  }
  return ring.normalize(std::move(terms));
}

template <class F>
nlohmann::json ideal_to_json(const PolyRing<F>& ring, const std::vector<Polynomial<F>>& gens) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gens)
    arr.push_back(to_text(ring, g));
  return arr;
}

template <class F>
std::vector<Polynomial<F>> ideal_from_json(const PolyRing<F>& ring, const nlohmann::json& arr) {
  if (!arr.is_array())
    throw std::invalid_argument("ideal JSON must be an array of strings");
  std::vector<Polynomial<F>> gens;
  for (const auto& s : arr)
    gens.push_back(parse_polynomial(ring, s.get<std::string>()));
  return gens;
}

} // namespace embvan
