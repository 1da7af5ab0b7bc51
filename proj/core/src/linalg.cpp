#include "gausscond/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace gausscond {

bool all_finite(const Matrix& m) { return m.allFinite(); }

bool approx_equal(const Eigen::Ref<const Matrix>& a,
                  const Eigen::Ref<const Matrix>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() <= tol * scale;
}

PsdMatrix::PsdMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("PsdMatrix: matrix must be square");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("PsdMatrix: entries must be finite");
  }
  if (m.rows() == 0) {
    inner_ = m;
    return;
  }
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  double tol_sym = 1e-9 * scale;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol_sym) {
    throw std::invalid_argument("PsdMatrix: matrix is not symmetric");
  }
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector& ev = es.eigenvalues();
  double lambda_max = ev.size() > 0 ? ev.maxCoeff() : 0.0;
  double tol_psd = 1e-9 * std::max(1.0, lambda_max);
  if (ev.minCoeff() < -tol_psd) {
    throw std::invalid_argument("PsdMatrix: matrix is not positive semidefinite");
  }
  if (ev.minCoeff() >= 0.0) {
    inner_ = sym;  // keep exact entries when no clamping is needed
  } else {
    Vector clamped = ev.cwiseMax(0.0);
    inner_ = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
    inner_ = 0.5 * (inner_ + inner_.transpose());
  }
}

Matrix pinv(const PsdMatrix& m) {
  Eigen::Index n = m.side();
  if (n == 0) return Matrix::Zero(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
  const Vector& ev = es.eigenvalues();
  double lambda_max = ev.maxCoeff();
  if (lambda_max <= 0.0) return Matrix::Zero(n, n);
  double cutoff = kRankTol * lambda_max;
  Vector inv = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Matrix col_space_projector(const PsdMatrix& m) {
  Eigen::Index n = m.side();
  if (n == 0) return Matrix::Zero(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
  const Vector& ev = es.eigenvalues();
  double lambda_max = ev.maxCoeff();
  if (lambda_max <= 0.0) return Matrix::Zero(n, n);
  double cutoff = kRankTol * lambda_max;
  Matrix proj = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) > cutoff) {
      proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    }
  }
  return proj;
}

bool in_col_space(const PsdMatrix& sigma, const Vector& v, double tol) {
  if (v.size() != sigma.side()) {
    throw std::invalid_argument("in_col_space: dimension mismatch");
  }
  if (v.size() == 0) return true;
  Vector residual = col_space_projector(sigma) * v - v;
  return residual.norm() <= tol * std::max(1.0, v.norm());
}

RrefResult rref_transform(const Matrix& m) {
  Eigen::Index rows = m.rows(), cols = m.cols();
  RrefResult out;
  out.r = m;
  out.s = Matrix::Identity(rows, rows);
  if (rows == 0 || cols == 0) return out;

  double cutoff = kRankTol * std::max(1.0, m.cwiseAbs().maxCoeff());
  Eigen::Index pivot_row = 0;
  for (Eigen::Index col = 0; col < cols && pivot_row < rows; ++col) {
    // partial pivoting on the current column
    Eigen::Index best = pivot_row;
    double best_abs = std::abs(out.r(pivot_row, col));
    for (Eigen::Index i = pivot_row + 1; i < rows; ++i) {
      double a = std::abs(out.r(i, col));
      if (a > best_abs) {
        best = i;
        best_abs = a;
      }
    }
    if (best_abs <= cutoff) {
      for (Eigen::Index i = pivot_row; i < rows; ++i) out.r(i, col) = 0.0;
      continue;
    }
    out.r.row(pivot_row).swap(out.r.row(best));
    out.s.row(pivot_row).swap(out.s.row(best));

    double p = out.r(pivot_row, col);
    out.r.row(pivot_row) /= p;
    out.s.row(pivot_row) /= p;
    out.r(pivot_row, col) = 1.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == pivot_row) continue;
      double f = out.r(i, col);
      if (f != 0.0) {
        out.r.row(i) -= f * out.r.row(pivot_row);
        out.s.row(i) -= f * out.s.row(pivot_row);
        out.r(i, col) = 0.0;
      }
    }
    out.pivot_cols.push_back(col);
    ++pivot_row;
  }
  // snap sub-cutoff residue left of later pivots to exact zero
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (std::abs(out.r(i, j)) <= cutoff) out.r(i, j) = 0.0;
    }
  }
  return out;
}

RankSplit rank_split(const Matrix& a) {
  Eigen::Index n = a.rows(), m = a.cols();
  RankSplit out;
  out.s = Matrix::Identity(n, n);
  out.t = Matrix::Identity(m, m);
  if (n == 0 || m == 0) return out;

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (sigma_max <= 0.0) return out;  // zero matrix: identity transforms
  double cutoff = kRankTol * sigma_max;

  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  out.rank = r;

  // a = u diag(sv) v^T; with t = v^T (orthogonal) and s = e u^T where e
  // rescales the leading r rows, s a t^-1 = e diag(sv) = [[I_r,0],[0,0]].
  Vector e = Vector::Ones(n);
  for (Eigen::Index i = 0; i < r; ++i) e(i) = 1.0 / sv(i);
  out.s = e.asDiagonal() * svd.matrixU().transpose();
  out.t = svd.matrixV().transpose();
  return out;
}

std::optional<Conditioned> condition_gaussian(const Vector& mu,
                                              const PsdMatrix& sigma,
                                              Eigen::Index n_keep,
                                              const Vector& a,
                                              double support_tol) {
  Eigen::Index n = sigma.side();
  if (mu.size() != n) {
    throw std::invalid_argument("condition_gaussian: mean and covariance sizes differ");
  }
  Eigen::Index k = n - n_keep;
  if (n_keep < 0 || k < 0 || a.size() != k) {
    throw std::invalid_argument("condition_gaussian: block split does not match observation");
  }
  if (k == 0) {
    return Conditioned{mu, sigma};
  }
  Matrix s11 = sigma.mat().topLeftCorner(n_keep, n_keep);
  Matrix s12 = sigma.mat().topRightCorner(n_keep, k);
  Matrix s22 = sigma.mat().bottomRightCorner(k, k);
  PsdMatrix s22p(s22);

  Vector diff = a - mu.tail(k);
  if (!in_col_space(s22p, diff, support_tol)) return std::nullopt;

  Matrix g = pinv(s22p);
  Vector mean = mu.head(n_keep) + s12 * (g * diff);
  Matrix cov = s11 - s12 * g * s12.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return Conditioned{mean, PsdMatrix(cov)};
}

}  // namespace gausscond
