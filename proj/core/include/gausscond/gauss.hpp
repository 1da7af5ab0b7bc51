#ifndef GAUSSCOND_GAUSS_HPP
#define GAUSSCOND_GAUSS_HPP

#include "gausscond/linalg.hpp"

#include <optional>
#include <vector>

namespace gausscond {

/// An affine-linear map perturbed by Gaussian noise:
/// x in R^dom  |->  A x + b + N(0, Sigma) in R^cod.
/// Deterministic maps are the Sigma = 0 case; distributions are dom = 0.
class GaussMap {
 public:
  GaussMap(Matrix a, Vector b, PsdMatrix sigma);

  Eigen::Index dom() const { return a_.cols(); }
  Eigen::Index cod() const { return a_.rows(); }
  const Matrix& linear() const { return a_; }
  const Vector& offset() const { return b_; }
  const PsdMatrix& noise() const { return sigma_; }

 private:
  Matrix a_;
  Vector b_;
  PsdMatrix sigma_;
};

/// A Gaussian distribution N(mean, cov), i.e. a map out of dimension 0.
class GaussState {
 public:
  GaussState() : mean_(Vector::Zero(0)), cov_(PsdMatrix::zero(0)) {}
  GaussState(Vector mean, PsdMatrix cov);

  Eigen::Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  const PsdMatrix& cov() const { return cov_; }

  GaussMap as_map() const;
  static GaussState standard_normal(Eigen::Index n);
  static GaussState point(Vector v);

 private:
  Vector mean_;
  PsdMatrix cov_;
};

bool approx_equal(const GaussState& a, const GaussState& b,
                  double tol = kEqualityTol);

GaussMap compose(const GaussMap& g, const GaussMap& f);
GaussMap tensor(const GaussMap& f, const GaussMap& g);
GaussState tensor(const GaussState& a, const GaussState& b);

GaussMap identity_map(Eigen::Index n);
GaussMap copy_map(Eigen::Index n);      // x |-> (x, x)
GaussMap del_map(Eigen::Index n);       // x |-> ()
GaussMap swap_map(Eigen::Index m, Eigen::Index n);  // (x, y) |-> (y, x)
GaussMap const_map(const Vector& v);    // () |-> v, deterministic
GaussMap affine_map(const Matrix& a, const Vector& b);  // noiseless

GaussState apply(const GaussMap& f, const GaussState& psi);  // pushforward

/// Sub-vector of the mean and principal submatrix of the covariance.
GaussState marginal(const GaussState& psi, const std::vector<Eigen::Index>& keep);
GaussState marginal_head(const GaussState& psi, Eigen::Index n);
GaussState marginal_tail(const GaussState& psi, Eigen::Index k);

/// A conditional K -> X for a state psi over X (x) K: the map
/// k |-> mu_X + Sigma_XK Sigma_KK^+ (k - mu_K) + N(0, Schur complement).
GaussMap conditional(const GaussState& psi, Eigen::Index k_dim);

/// Parameterized conditional (X (x) A) -> Y for f : A -> X (x) Y.
GaussMap param_conditional(const GaussMap& f, Eigen::Index x_dim);

/// Absolute continuity mu << nu: supp(mu) contained in supp(nu).
bool abs_cont(const GaussState& mu, const GaussState& nu,
              double tol = kSupportTol);

/// Support membership of a point, i.e. delta_x << mu.
bool in_support(const Vector& x, const GaussState& mu,
                double tol = kSupportTol);

/// f and g agree mu-almost surely: the joints <id,f> mu and <id,g> mu
/// have equal mean and covariance.
bool almost_sure_equal(const GaussMap& f, const GaussMap& g,
                       const GaussState& mu, double tol = kEqualityTol);

bool is_deterministic(const GaussMap& f, double tol = kDeterministicTol);

/// The joint <id, f> o mu over X (x) Y.
GaussState graph_state(const GaussMap& f, const GaussState& mu);

/// A joint model over X (x) K together with a deterministic observation
/// of the trailing K block.
struct InferenceProblem {
  Eigen::Index k_dim = 0;
  GaussState joint;
  Vector observation;
};

/// Posterior over X if the observation lies in the support of the K
/// marginal, nullopt otherwise.
std::optional<GaussState> solve_inference(const InferenceProblem& p,
                                          double tol = kSupportTol);

/// Conditions psi on u . X = a (a single affine row).
std::optional<GaussState> condition_affine_row(const GaussState& psi,
                                               const Vector& u, double a,
                                               double tol = kSupportTol);

}  // namespace gausscond

#endif
