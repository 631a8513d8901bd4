#pragma once

#include <Eigen/Dense>
#include <vector>

namespace symcat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Residual tolerances shared by the numeric checkers.
struct Tolerances {
  double alg = 1e-9;  ///< homomorphism / equivariance residuals
  double piv = 1e-10; ///< rank decisions in elimination
};

/// Entrywise max-norm.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m);

/// Reduced row echelon form by Gauss-Jordan elimination with partial
/// pivoting. Columns whose best pivot is below `piv_tol` (relative to the
/// largest entry of the input) are treated as free. Returns the pivot column
/// indices; `m` is overwritten with the RREF.
std::vector<Eigen::Index> rref_in_place(Matrix& m, double piv_tol);

/// Basis of {x : A x = 0}, one column per free variable.
Matrix nullspace(const Matrix& a, double piv_tol);

/// Basis of the column space of `a`, chosen as the pivot columns of `a`.
Matrix column_basis(const Matrix& a, double piv_tol);

/// True iff m is a 0/1 matrix with exactly one 1 per row and column.
bool is_permutation_matrix(const Matrix& m);

}  // namespace symcat
