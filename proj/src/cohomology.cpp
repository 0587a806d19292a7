#include "embvan/cohomology.hpp"

#include <sstream>

namespace embvan {

long long line_bundle_cohomology(int n, int p, int i) {
  if (n < 1 || i < 0 || i > n)
    return 0;
  if (i == 0)
    return p >= 0 ? binomial(n + p, n) : 0;
  if (i == n)
    return p <= -n - 1 ? binomial(-p - 1, n) : 0;
  return 0;
}

mpz_class binomial_polynomial(long long x, int m) {
  mpz_class num = 1;
  for (int j = 1; j <= m; ++j)
    num *= mpz_class(std::to_string(x + j));
  mpz_class den;
  mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(m));
  return num / den;
}

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return "pass";
  case Verdict::Fail:
    return "fail";
  case Verdict::Incomplete:
    return "incomplete";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return 0;
  case Verdict::Fail:
    return 1;
  case Verdict::Incomplete:
    return 2;
  }
  return 1;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail)
    return Verdict::Fail;
  if (a == Verdict::Incomplete || b == Verdict::Incomplete)
    return Verdict::Incomplete;
  return Verdict::Pass;
}

std::optional<long long> CohomologyTable::get(int i, int k, int p) const {
  for (const auto& c : cells)
    if (c.k == k && c.p == p && i >= 0 && i < static_cast<int>(c.h.size()))
      return c.h[static_cast<std::size_t>(i)];
  return std::nullopt;
}

std::string CohomologyTable::to_csv() const {
  std::ostringstream os;
  os << "k,p,i,dim\n";
  for (const auto& c : cells)
    for (std::size_t i = 0; i < c.h.size(); ++i)
      os << c.k << ',' << c.p << ',' << i << ',' << c.h[i] << '\n';
  return os.str();
}

nlohmann::json CohomologyTable::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["field"] = field;
  j["n"] = n;
  j["e"] = e;
  j["d_Y"] = d_Y;
  j["k_max"] = k_max;
  j["pad"] = pad;
  j["threshold_formula"] = "p >= e + (k-1)*d_Y";
  nlohmann::json by_k = nlohmann::json::object();
  for (const auto& st : powers) {
    nlohmann::json kj;
    kj["status"] = st.complete ? "complete" : "incomplete";
    if (!st.note.empty())
      kj["note"] = st.note;
    kj["threshold"] = threshold(st.k);
    kj["window"] = {st.p_lo, st.p_hi};
    kj["total_betti"] = st.total_betti;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : cells)
      if (c.k == st.k)
        rows.push_back({{"p", c.p},
                        {"h", c.h},
                        {"hilbert_polynomial", c.hilbert_polynomial},
                        {"euler_ok", c.euler_ok}});
    kj["cells"] = rows;
    by_k[std::to_string(st.k)] = kj;
  }
  j["by_k"] = by_k;
  return j;
}

nlohmann::json ScanResult::to_json() const {
  auto triples = [](const std::vector<std::tuple<int, int, int>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [i, k, p] : v)
      a.push_back({{"i", i}, {"k", k}, {"p", p}});
    return a;
  };
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["criterion"] = kThresholdFormula;
  j["euler_characteristic_consistent"] = euler_consistent;
  j["violations"] = triples(violations);
  j["below_threshold_nonvanishing"] = triples(below_threshold_nonvanishing);
  j["table"] = table.to_json();
  return j;
}

} // namespace embvan
