#include "core/linalg.hpp"

#include "core/errors.hpp"

namespace polymax {

namespace {

// Row-reduce in place; returns pivot column per pivot row. Pivots are
// sought only in the first `pivot_cols` columns (the rest ride along, which
// keeps augmented columns out of the basis).
std::vector<size_t> reduce(Matrix& m, size_t pivot_cols) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  size_t cols = m[0].size();
  size_t row = 0;
  for (size_t col = 0; col < pivot_cols && row < m.size(); col++) {
    size_t p = row;
    while (p < m.size() && m[p][col].is_zero()) p++;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    Rat inv = Rat(1) / m[row][col];
    for (size_t j = col; j < cols; j++) m[row][j] *= inv;
    for (size_t i = 0; i < m.size(); i++) {
      if (i == row || m[i][col].is_zero()) continue;
      Rat f = m[i][col];
      for (size_t j = col; j < cols; j++) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    row++;
  }
  return pivots;
}

}  // namespace

int rank(Matrix m) {
  size_t cols = m.empty() ? 0 : m[0].size();
  return static_cast<int>(reduce(m, cols).size());
}

std::optional<Vec> solve_square(Matrix a, Vec b) {
  size_t n = a.size();
  require(n > 0, ErrorCode::kInvalidArgument, "solve_square: empty system");
  for (size_t i = 0; i < n; i++) {
    require(a[i].size() == n, ErrorCode::kInvalidArgument, "solve_square: not square");
    a[i].push_back(b[i]);
  }
  auto pivots = reduce(a, n);
  if (pivots.size() != n) return std::nullopt;
  for (size_t i = pivots.size(); i < a.size(); i++)
    if (!a[i][n].is_zero()) return std::nullopt;
  Vec x(n);
  for (size_t i = 0; i < n; i++) x[pivots[i]] = a[i][n];
  return x;
}

std::vector<Vec> kernel_basis(Matrix a) {
  if (a.empty()) return {};
  size_t cols = a[0].size();
  auto pivots = reduce(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (size_t free = 0; free < cols; free++) {
    if (is_pivot[free]) continue;
    Vec v(cols);
    v[free] = Rat(1);
    for (size_t i = 0; i < pivots.size(); i++) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace polymax
