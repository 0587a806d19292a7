#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace embvan {

// The algorithms below only need a commutative ring `R` exposing Elem, zero,
// one, add, sub, mul, neg and is_zero; fields and PolyRing both qualify.
template <class R>
using Mat = std::vector<std::vector<typename R::Elem>>;

/// Determinant by expansion over column subsets (2^n n ring multiplications).
template <class R>
typename R::Elem determinant(const R& ring, const Mat<R>& m) {
  const std::size_t n = m.size();
  if (n == 0)
    return ring.one();
  for (const auto& row : m)
    if (row.size() != n)
      throw std::invalid_argument("determinant: matrix is not square");
  if (n > 20)
    throw std::invalid_argument("determinant: matrix too large");
  std::vector<typename R::Elem> d(std::size_t{1} << n, ring.zero());
  std::vector<bool> set(d.size(), false);
  d[0] = ring.one();
  set[0] = true;
  for (std::uint32_t mask = 0; mask < d.size(); ++mask) {
    if (!set[mask] || ring.is_zero(d[mask]))
      continue;
    const auto row = static_cast<std::size_t>(std::popcount(mask));
    if (row == n)
      continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j) || ring.is_zero(m[row][j]))
        continue;
      const int above = std::popcount(mask >> j);
      auto term = ring.mul(d[mask], m[row][j]);
      const auto next = mask | (1u << j);
      d[next] = above % 2 ? ring.sub(d[next], term) : ring.add(d[next], term);
      set[next] = true;
    }
  }
  return d.back();
}

namespace detail {

template <class R>
typename R::Elem pfaffian_rec(const R& ring, const Mat<R>& m, std::uint32_t mask,
                              std::unordered_map<std::uint32_t, typename R::Elem>& memo) {
  if (mask == 0)
    return ring.one();
  if (auto it = memo.find(mask); it != memo.end())
    return it->second;
  const int i = std::countr_zero(mask);
  const std::uint32_t rest = mask & ~(1u << i);
  auto acc = ring.zero();
  int pos = 0;
  for (std::uint32_t r = rest; r != 0; r &= r - 1, ++pos) {
    const int j = std::countr_zero(r);
    const auto& a = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (ring.is_zero(a))
      continue;
    auto term = ring.mul(a, pfaffian_rec(ring, m, rest & ~(1u << j), memo));
    acc = pos % 2 ? ring.sub(acc, term) : ring.add(acc, term);
  }
  memo.emplace(mask, acc);
  return acc;
}

} // namespace detail

/// Pfaffian by expansion along the first row; Pf [[0, a], [-a, 0]] = a.
/// Only the strict upper triangle is read.
template <class R>
typename R::Elem pfaffian(const R& ring, const Mat<R>& m) {
  const std::size_t n = m.size();
  if (n % 2 != 0)
    throw std::invalid_argument("pfaffian: odd dimension");
  if (n > 30)
    throw std::invalid_argument("pfaffian: matrix too large");
  std::unordered_map<std::uint32_t, typename R::Elem> memo;
  const std::uint32_t all = n == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  return detail::pfaffian_rec(ring, m, all, memo);
}

template <class R>
bool is_skew(const R& ring, const Mat<R>& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!ring.is_zero(m[i][i]))
      return false;
    for (std::size_t j = 0; j < i; ++j)
      if (!ring.is_zero(ring.add(m[i][j], m[j][i])))
        return false;
  }
  return true;
}

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n)
    return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int pos = k - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - k + pos)
      --pos;
    if (pos < 0)
      break;
    ++cur[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < k; ++q)
      cur[static_cast<std::size_t>(q)] = cur[static_cast<std::size_t>(q - 1)] + 1;
  }
  return out;
}

template <class R>
Mat<R> submatrix(const Mat<R>& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat<R> s;
  for (int r : rows) {
    std::vector<typename R::Elem> row;
    for (int c : cols)
      row.push_back(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    s.push_back(std::move(row));
  }
  return s;
}

/// All size-k minors, rows-major over lexicographic row and column subsets.
template <class R>
std::vector<typename R::Elem> minors(const R& ring, const Mat<R>& m, int k) {
  std::vector<typename R::Elem> out;
  const int nr = static_cast<int>(m.size());
  const int nc = nr == 0 ? 0 : static_cast<int>(m[0].size());
  for (const auto& rs : subsets(nr, k))
    for (const auto& cs : subsets(nc, k))
      out.push_back(determinant(ring, submatrix<R>(m, rs, cs)));
  return out;
}

/// Pfaffians of all principal 2k x 2k submatrices.
template <class R>
std::vector<typename R::Elem> sub_pfaffians(const R& ring, const Mat<R>& m, int k) {
  std::vector<typename R::Elem> out;
  for (const auto& s : subsets(static_cast<int>(m.size()), 2 * k))
    out.push_back(pfaffian(ring, submatrix<R>(m, s, s)));
  return out;
}

/// Rank of a matrix over a field, by Gaussian elimination on a copy.
template <class F>
int matrix_rank(const F& field, Mat<F> m) {
  const int nr = static_cast<int>(m.size());
  const int nc = nr == 0 ? 0 : static_cast<int>(m[0].size());
  int rank = 0;
  for (int c = 0; c < nc && rank < nr; ++c) {
    int sel = -1;
    for (int r = rank; r < nr; ++r)
      if (!field.is_zero(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)])) {
        sel = r;
        break;
      }
    if (sel < 0)
      continue;
    std::swap(m[static_cast<std::size_t>(sel)], m[static_cast<std::size_t>(rank)]);
    const auto& prow = m[static_cast<std::size_t>(rank)];
    const auto inv = field.inv(prow[static_cast<std::size_t>(c)]);
    for (int r = rank + 1; r < nr; ++r) {
      auto& row = m[static_cast<std::size_t>(r)];
      if (field.is_zero(row[static_cast<std::size_t>(c)]))
        continue;
      const auto f = field.mul(row[static_cast<std::size_t>(c)], inv);
      for (int j = c; j < nc; ++j)
        row[static_cast<std::size_t>(j)] =
            field.sub(row[static_cast<std::size_t>(j)], field.mul(f, prow[static_cast<std::size_t>(j)]));
    }
    ++rank;
  }
  return rank;
}

} // namespace embvan
