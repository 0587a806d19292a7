#pragma once

#include <string>
#include <vector>

#include "embvan/ideal.hpp"
#include "embvan/serialize.hpp"

namespace testutil {

inline embvan::RingGF ring(int n) { return embvan::RingGF(embvan::PrimeField(), n); }

inline std::vector<embvan::PolyGF> polys(const embvan::RingGF& R,
                                         const std::vector<std::string>& texts) {
  std::vector<embvan::PolyGF> out;
  for (const auto& t : texts)
    out.push_back(embvan::parse_polynomial(R, t));
  return out;
}

inline embvan::PolyGF P(const embvan::RingGF& R, const std::string& t) {
  return embvan::parse_polynomial(R, t);
}

// Minors of [[x0, x1, x2], [x1, x2, x3]].
inline std::vector<std::string> twisted_cubic() {
  return {"x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"};
}

} // namespace testutil
