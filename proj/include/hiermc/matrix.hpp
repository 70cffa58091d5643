#pragma once

#include <Eigen/Dense>
#include <optional>

#include "hiermc/errors.hpp"

namespace hiermc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Symmetric positive-definite matrix with a lazily computed Cholesky
/// factor. Construction checks symmetry; definiteness is checked on first
/// use of the factor. A failed factorization is retried once with jitter
/// 1e-9 * trace/p added to the diagonal, then reported as an error.
class MatrixSym {
 public:
  MatrixSym() = default;
  explicit MatrixSym(Matrix m);

  static MatrixSym identity(int p);
  static MatrixSym scalar(double v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& entries() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// 1x1 convenience accessor.
  double value() const;

  double trace() const { return m_.trace(); }

  /// Lower Cholesky factor (of the jittered matrix when jitter was needed).
  const Matrix& chol_lower() const;

  double log_det() const;
  Matrix inverse() const;
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;
  /// x' M^{-1} x
  double quad_form_inv(const Vector& x) const;

 private:
  Matrix m_;
  mutable std::optional<Matrix> chol_;
};

/// Diagonal jitter used to repair nearly singular matrices.
double spd_jitter(const Matrix& m);

/// Symmetrize and, if needed, add jitter to the stored entries so the
/// result is positive definite. Throws DefinitenessError if one round of
/// jitter does not fix it.
MatrixSym repair_spd(Matrix m);

/// Column-major flattening of a p x p matrix, and its inverse.
Vector flatten(const Matrix& m);
Matrix unflatten(const Vector& v, int p);

}  // namespace hiermc
