#ifndef GAUSSCOND_LINALG_HPP
#define GAUSSCOND_LINALG_HPP

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace gausscond {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative cutoff below which eigenvalues / singular values count as zero.
inline constexpr double kRankTol = 1e-9;
/// Relative tolerance for column-space membership (support tests).
inline constexpr double kSupportTol = 1e-8;
/// Relative tolerance for approximate equality of means and covariances.
inline constexpr double kEqualityTol = 1e-8;
/// Absolute bound on |Sigma| below which a map counts as deterministic.
inline constexpr double kDeterministicTol = 1e-9;

bool all_finite(const Matrix& m);

/// Entrywise comparison with tolerance relative to max(1, |a|, |b|).
/// Accepts matrices, vectors and Eigen expressions of either.
bool approx_equal(const Eigen::Ref<const Matrix>& a,
                  const Eigen::Ref<const Matrix>& b, double tol = kEqualityTol);

/// Symmetric positive semidefinite matrix. Construction symmetrizes the
/// input and clamps slightly negative eigenvalues to zero; genuinely
/// asymmetric or indefinite inputs are rejected.
class PsdMatrix {
 public:
  PsdMatrix() : inner_(Matrix::Zero(0, 0)) {}
  explicit PsdMatrix(const Matrix& m);

  const Matrix& mat() const { return inner_; }
  Eigen::Index side() const { return inner_.rows(); }

  static PsdMatrix zero(Eigen::Index n) { return PsdMatrix(Matrix::Zero(n, n)); }
  static PsdMatrix identity(Eigen::Index n) {
    return PsdMatrix(Matrix::Identity(n, n));
  }

 private:
  Matrix inner_;
};

/// Moore-Penrose pseudoinverse of a PSD matrix, via symmetric
/// eigendecomposition with relative eigenvalue cutoff. The zero matrix
/// maps to the zero matrix.
Matrix pinv(const PsdMatrix& m);

/// The orthogonal projector onto col(m), i.e. m pinv(m), assembled from
/// the retained eigenvectors directly for numerical stability.
Matrix col_space_projector(const PsdMatrix& m);

/// True iff v lies in the column space of sigma:
/// |sigma pinv(sigma) v - v| <= tol * max(1, |v|).
bool in_col_space(const PsdMatrix& sigma, const Vector& v,
                  double tol = kSupportTol);

struct RrefResult {
  Matrix r;  // reduced row echelon form, pivots exactly 1, eliminated 0
  Matrix s;  // invertible, r = s * m
  std::vector<Eigen::Index> pivot_cols;  // one per pivot row, ascending
};

/// Row reduction with the applied transform. Pivot candidates below a
/// relative cutoff are snapped to exact zero before selection, and the
/// eliminated entries are written as exact zeros.
RrefResult rref_transform(const Matrix& m);

struct RankSplit {
  Matrix s;  // invertible, n x n
  Matrix t;  // orthogonal, m x m
  Eigen::Index rank = 0;
};

/// Factors a into s * a * t^-1 = [[I_r, 0], [0, 0]] with t orthogonal,
/// via SVD with a relative singular-value cutoff.
RankSplit rank_split(const Matrix& a);

struct Conditioned {
  Vector mean;
  PsdMatrix cov;
};

/// Conditions N(mu, sigma) on its trailing block being equal to a.
/// The first n_keep coordinates are kept. Returns nullopt when the
/// observation lies outside the support of the observed block.
std::optional<Conditioned> condition_gaussian(const Vector& mu,
                                              const PsdMatrix& sigma,
                                              Eigen::Index n_keep,
                                              const Vector& a,
                                              double support_tol = kSupportTol);

}  // namespace gausscond

#endif
