#pragma once

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

namespace embvan {

template <class F>
using SparseRow = std::vector<std::pair<int, typename F::Elem>>;  // sorted by column

/// Incremental row echelon form over a field with sparse rows. Only leading
/// entries are eliminated, which is all that rank and membership need.
template <class F>
class SparseEchelon {
public:
  using Scalar = typename F::Elem;
  using Row = SparseRow<F>;

  explicit SparseEchelon(const F& field) : field_(field) {}

  // Reduces `row` against the stored pivots; returns the remainder.
  Row reduce(Row row) const {
    while (!row.empty()) {
      auto it = pivot_.find(row.front().first);
      if (it == pivot_.end())
        break;
      const Row& p = rows_[static_cast<std::size_t>(it->second)];
      row = axpy(row, field_.neg(row.front().second), p);
    }
    return row;
  }

  // Returns true if the row was independent of the stored rows.
  bool insert(Row row) {
    row = reduce(std::move(row));
    if (row.empty())
      return false;
    const Scalar inv = field_.inv(row.front().second);
    for (auto& e : row)
      e.second = field_.mul(e.second, inv);
    pivot_.emplace(row.front().first, static_cast<int>(rows_.size()));
    rows_.push_back(std::move(row));
    return true;
  }

  bool contains(Row row) const { return reduce(std::move(row)).empty(); }
  int rank() const { return static_cast<int>(rows_.size()); }

private:
  // a + c * b, where b's leading column cancels a's.
  Row axpy(const Row& a, const Scalar& c, const Row& b) const {
    Row r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        r.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        r.emplace_back(b[j].first, field_.mul(c, b[j].second));
        ++j;
      } else {
        auto v = field_.add(a[i].second, field_.mul(c, b[j].second));
        if (!field_.is_zero(v))
          r.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return r;
  }

  F field_;
  std::vector<Row> rows_;
  std::unordered_map<int, int> pivot_;
};

template <class F>
int sparse_rank(const F& field, std::vector<SparseRow<F>> rows) {
  // Shorter rows first keeps fill-in down.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  SparseEchelon<F> ech(field);
  for (auto& r : rows)
    ech.insert(std::move(r));
  return ech.rank();
}

/// Dense matrix over a field, row-major.
template <class F>
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<typename F::Elem> data;

  DenseMatrix() = default;
  DenseMatrix(const F& field, int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r * c), field.zero()) {}

  typename F::Elem& at(int i, int j) { return data[static_cast<std::size_t>(i * cols + j)]; }
  const typename F::Elem& at(int i, int j) const {
    return data[static_cast<std::size_t>(i * cols + j)];
  }
};

/// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<int> rref(const F& field, DenseMatrix<F>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int i = row; i < m.rows; ++i)
      if (!field.is_zero(m.at(i, col))) {
        sel = i;
        break;
      }
    if (sel < 0)
      continue;
    if (sel != row)
      for (int j = 0; j < m.cols; ++j)
        std::swap(m.at(sel, j), m.at(row, j));
    const auto inv = field.inv(m.at(row, col));
    for (int j = 0; j < m.cols; ++j)
      m.at(row, j) = field.mul(m.at(row, j), inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || field.is_zero(m.at(i, col)))
        continue;
      const auto c = m.at(i, col);
      for (int j = 0; j < m.cols; ++j)
        m.at(i, j) = field.sub(m.at(i, j), field.mul(c, m.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class F>
int dense_rank(const F& field, DenseMatrix<F> m) {
  return static_cast<int>(rref(field, m).size());
}

/// Basis of the right null space {v : m v = 0}, one vector per free column,
/// each with a 1 in its free column.
template <class F>
std::vector<std::vector<typename F::Elem>> null_space(const F& field, DenseMatrix<F> m) {
  const auto pivots = rref(field, m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols), false);
  for (int p : pivots)
    is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<typename F::Elem>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)])
      continue;
    std::vector<typename F::Elem> v(static_cast<std::size_t>(m.cols), field.zero());
    v[static_cast<std::size_t>(free)] = field.one();
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = field.neg(m.at(static_cast<int>(r), free));
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace embvan
