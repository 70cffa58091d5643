#include "hiermc/matrix.hpp"

#include <cmath>
#include <string>

namespace hiermc {

namespace {

bool finite_entries(const Matrix& m) { return m.allFinite(); }

// Plain LLT attempt; empty optional on failure.
std::optional<Matrix> try_llt(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Matrix l = llt.matrixL();
  for (int i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) return std::nullopt;
  }
  return l;
}

}  // namespace

MatrixSym::MatrixSym(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw InputError("MatrixSym: matrix must be square");
  }
  if (!finite_entries(m_)) {
    throw InputError("MatrixSym: non-finite entries");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw InputError("MatrixSym: matrix is not symmetric (|A - A'| = " +
                     std::to_string(asym) + ")");
  }
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

MatrixSym MatrixSym::identity(int p) {
  return MatrixSym(Matrix::Identity(p, p));
}

MatrixSym MatrixSym::scalar(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return MatrixSym(m);
}

double MatrixSym::value() const {
  if (dim() != 1) throw InputError("MatrixSym::value: matrix is not 1x1");
  return m_(0, 0);
}

double spd_jitter(const Matrix& m) {
  const double tr = m.trace();
  const double p = static_cast<double>(m.rows());
  return tr > 0.0 ? 1e-9 * tr / p : 1e-9;
}

const Matrix& MatrixSym::chol_lower() const {
  if (chol_) return *chol_;
  if (auto l = try_llt(m_)) {
    chol_ = std::move(*l);
    return *chol_;
  }
  Matrix jittered = m_;
  jittered.diagonal().array() += spd_jitter(m_);
  if (auto l = try_llt(jittered)) {
    chol_ = std::move(*l);
    return *chol_;
  }
  throw DefinitenessError("MatrixSym: matrix is not positive definite");
}

double MatrixSym::log_det() const {
  const Matrix& l = chol_lower();
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

Matrix MatrixSym::inverse() const {
  Matrix eye = Matrix::Identity(dim(), dim());
  return solve(eye);
}

Vector MatrixSym::solve(const Vector& b) const {
  const Matrix& l = chol_lower();
  Vector y = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix MatrixSym::solve(const Matrix& b) const {
  const Matrix& l = chol_lower();
  Matrix y = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

double MatrixSym::quad_form_inv(const Vector& x) const {
  const Matrix& l = chol_lower();
  Vector y = l.triangularView<Eigen::Lower>().solve(x);
  return y.squaredNorm();
}

MatrixSym repair_spd(Matrix m) {
  Matrix sym = (m + m.transpose()) / 2.0;
  if (try_llt(sym)) return MatrixSym(std::move(sym));
  sym.diagonal().array() += spd_jitter(sym);
  if (try_llt(sym)) return MatrixSym(std::move(sym));
  throw DefinitenessError("repair_spd: matrix not positive definite after jitter");
}

Vector flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unflatten(const Vector& v, int p) {
  if (v.size() != static_cast<Eigen::Index>(p) * p) {
    throw InputError("unflatten: length does not match dimension");
  }
  return Eigen::Map<const Matrix>(v.data(), p, p);
}

}  // namespace hiermc
