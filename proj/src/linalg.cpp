#include "symcat/linalg.hpp"

#include <cmath>

namespace symcat {

bool all_finite(const Matrix& m) { return m.allFinite(); }

std::vector<Eigen::Index> rref_in_place(Matrix& m, double piv_tol) {
  std::vector<Eigen::Index> pivots;
  const double scale = std::max(1.0, max_abs(m));
  const double thresh = piv_tol * scale;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index best = row;
    for (Eigen::Index r = row + 1; r < m.rows(); ++r) {
      if (std::abs(m(r, col)) > std::abs(m(best, col))) best = r;
    }
    if (std::abs(m(best, col)) <= thresh) {
      for (Eigen::Index r = row; r < m.rows(); ++r) m(r, col) = 0.0;
      continue;
    }
    m.row(row).swap(m.row(best));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != row && m(r, col) != 0.0) m.row(r) -= m(r, col) * m.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Matrix nullspace(const Matrix& a, double piv_tol) {
  Matrix r = a;
  const auto pivots = rref_in_place(r, piv_tol);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  Matrix basis(a.cols(), a.cols() - static_cast<Eigen::Index>(pivots.size()));
  Eigen::Index k = 0;
  for (Eigen::Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vector v = Vector::Zero(a.cols());
    v(free) = 1.0;
    for (std::size_t i = 0; i < pivots.size(); ++i) v(pivots[i]) = -r(static_cast<Eigen::Index>(i), free);
    basis.col(k++) = v;
  }
  return basis;
}

Matrix column_basis(const Matrix& a, double piv_tol) {
  Matrix r = a;
  const auto pivots = rref_in_place(r, piv_tol);
  Matrix basis(a.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (std::size_t i = 0; i < pivots.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = a.col(pivots[i]);
  return basis;
}

bool is_permutation_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int row_ones = 0;
    int col_ones = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 1.0) ++row_ones;
      else if (m(i, j) != 0.0) return false;
      if (m(j, i) == 1.0) ++col_ones;
    }
    if (row_ones != 1 || col_ones != 1) return false;
  }
  return true;
}

}  // namespace symcat
