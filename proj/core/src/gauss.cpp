#include "gausscond/gauss.hpp"

#include <stdexcept>
#include <utility>

namespace gausscond {

GaussMap::GaussMap(Matrix a, Vector b, PsdMatrix sigma)
    : a_(std::move(a)), b_(std::move(b)), sigma_(std::move(sigma)) {
  if (b_.size() != a_.rows() || sigma_.side() != a_.rows()) {
    throw std::invalid_argument("GaussMap: inconsistent shapes");
  }
  if (!a_.allFinite() || !b_.allFinite()) {
    throw std::invalid_argument("GaussMap: entries must be finite");
  }
}

GaussState::GaussState(Vector mean, PsdMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() != cov_.side()) {
    throw std::invalid_argument("GaussState: mean and covariance sizes differ");
  }
  if (!mean_.allFinite()) {
    throw std::invalid_argument("GaussState: mean must be finite");
  }
}

GaussMap GaussState::as_map() const {
  return GaussMap(Matrix::Zero(dim(), 0), mean_, cov_);
}

GaussState GaussState::standard_normal(Eigen::Index n) {
  return GaussState(Vector::Zero(n), PsdMatrix::identity(n));
}

GaussState GaussState::point(Vector v) {
  Eigen::Index n = v.size();
  return GaussState(std::move(v), PsdMatrix::zero(n));
}

bool approx_equal(const GaussState& a, const GaussState& b, double tol) {
  return a.dim() == b.dim() && approx_equal(a.mean(), b.mean(), tol) &&
         approx_equal(a.cov().mat(), b.cov().mat(), tol);
}

GaussMap compose(const GaussMap& g, const GaussMap& f) {
  if (g.dom() != f.cod()) {
    throw std::invalid_argument("compose: domain/codomain mismatch");
  }
  Matrix a = g.linear() * f.linear();
  Vector b = g.linear() * f.offset() + g.offset();
  Matrix sigma = g.linear() * f.noise().mat() * g.linear().transpose() + g.noise().mat();
  return GaussMap(std::move(a), std::move(b), PsdMatrix(sigma));
}

GaussMap tensor(const GaussMap& f, const GaussMap& g) {
  Eigen::Index rf = f.cod(), cf = f.dom(), rg = g.cod(), cg = g.dom();
  Matrix a = Matrix::Zero(rf + rg, cf + cg);
  a.topLeftCorner(rf, cf) = f.linear();
  a.bottomRightCorner(rg, cg) = g.linear();
  Vector b(rf + rg);
  b << f.offset(), g.offset();
  Matrix sigma = Matrix::Zero(rf + rg, rf + rg);
  sigma.topLeftCorner(rf, rf) = f.noise().mat();
  sigma.bottomRightCorner(rg, rg) = g.noise().mat();
  return GaussMap(std::move(a), std::move(b), PsdMatrix(sigma));
}

GaussState tensor(const GaussState& a, const GaussState& b) {
  return apply(tensor(a.as_map(), b.as_map()), GaussState());
}

GaussMap identity_map(Eigen::Index n) {
  return GaussMap(Matrix::Identity(n, n), Vector::Zero(n), PsdMatrix::zero(n));
}

GaussMap copy_map(Eigen::Index n) {
  Matrix a(2 * n, n);
  a << Matrix::Identity(n, n), Matrix::Identity(n, n);
  return GaussMap(std::move(a), Vector::Zero(2 * n), PsdMatrix::zero(2 * n));
}

GaussMap del_map(Eigen::Index n) {
  return GaussMap(Matrix::Zero(0, n), Vector::Zero(0), PsdMatrix::zero(0));
}

GaussMap swap_map(Eigen::Index m, Eigen::Index n) {
  Matrix a = Matrix::Zero(m + n, m + n);
  a.topRightCorner(n, n).setIdentity();
  a.bottomLeftCorner(m, m).setIdentity();
  return GaussMap(std::move(a), Vector::Zero(m + n), PsdMatrix::zero(m + n));
}

GaussMap const_map(const Vector& v) {
  return GaussMap(Matrix::Zero(v.size(), 0), v, PsdMatrix::zero(v.size()));
}

GaussMap affine_map(const Matrix& a, const Vector& b) {
  return GaussMap(a, b, PsdMatrix::zero(a.rows()));
}

GaussState apply(const GaussMap& f, const GaussState& psi) {
  if (f.dom() != psi.dim()) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
  Vector mean = f.linear() * psi.mean() + f.offset();
  Matrix cov = f.linear() * psi.cov().mat() * f.linear().transpose() + f.noise().mat();
  return GaussState(std::move(mean), PsdMatrix(cov));
}

GaussState marginal(const GaussState& psi, const std::vector<Eigen::Index>& keep) {
  Eigen::Index k = static_cast<Eigen::Index>(keep.size());
  Vector mean(k);
  Matrix cov(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (keep[i] < 0 || keep[i] >= psi.dim()) {
      throw std::invalid_argument("marginal: index out of range");
    }
    mean(i) = psi.mean()(keep[i]);
    for (Eigen::Index j = 0; j < k; ++j) {
      cov(i, j) = psi.cov().mat()(keep[i], keep[j]);
    }
  }
  return GaussState(std::move(mean), PsdMatrix(cov));
}

GaussState marginal_head(const GaussState& psi, Eigen::Index n) {
  std::vector<Eigen::Index> keep(n);
  for (Eigen::Index i = 0; i < n; ++i) keep[i] = i;
  return marginal(psi, keep);
}

GaussState marginal_tail(const GaussState& psi, Eigen::Index k) {
  std::vector<Eigen::Index> keep(k);
  for (Eigen::Index i = 0; i < k; ++i) keep[i] = psi.dim() - k + i;
  return marginal(psi, keep);
}

GaussMap conditional(const GaussState& psi, Eigen::Index k_dim) {
  Eigen::Index n = psi.dim();
  Eigen::Index x_dim = n - k_dim;
  if (k_dim < 0 || x_dim < 0) {
    throw std::invalid_argument("conditional: bad block split");
  }
  Matrix sxx = psi.cov().mat().topLeftCorner(x_dim, x_dim);
  Matrix sxk = psi.cov().mat().topRightCorner(x_dim, k_dim);
  PsdMatrix skk(Matrix(psi.cov().mat().bottomRightCorner(k_dim, k_dim)));
  Matrix g = pinv(skk);
  Matrix a = sxk * g;
  Vector b = psi.mean().head(x_dim) - a * psi.mean().tail(k_dim);
  Matrix cov = sxx - a * sxk.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return GaussMap(std::move(a), std::move(b), PsdMatrix(cov));
}

GaussMap param_conditional(const GaussMap& f, Eigen::Index x_dim) {
  Eigen::Index y_dim = f.cod() - x_dim;
  if (x_dim < 0 || y_dim < 0) {
    throw std::invalid_argument("param_conditional: bad block split");
  }
  Eigen::Index m = f.dom();
  Matrix ax = f.linear().topRows(x_dim);
  Matrix ay = f.linear().bottomRows(y_dim);
  Vector bx = f.offset().head(x_dim);
  Vector by = f.offset().tail(y_dim);
  PsdMatrix sxx(Matrix(f.noise().mat().topLeftCorner(x_dim, x_dim)));
  Matrix syx = f.noise().mat().bottomLeftCorner(y_dim, x_dim);
  Matrix syy = f.noise().mat().bottomRightCorner(y_dim, y_dim);

  Matrix gain = syx * pinv(sxx);
  // columns: x block first, then the parameter block
  Matrix a(y_dim, x_dim + m);
  a.leftCols(x_dim) = gain;
  a.rightCols(m) = ay - gain * ax;
  Vector b = by - gain * bx;
  Matrix cov = syy - gain * syx.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return GaussMap(std::move(a), std::move(b), PsdMatrix(cov));
}

bool abs_cont(const GaussState& mu, const GaussState& nu, double tol) {
  if (mu.dim() != nu.dim()) {
    throw std::invalid_argument("abs_cont: dimension mismatch");
  }
  if (mu.dim() == 0) return true;
  Matrix proj = col_space_projector(nu.cov());
  Matrix col_residual = proj * mu.cov().mat() - mu.cov().mat();
  double col_scale = std::max(1.0, mu.cov().mat().cwiseAbs().maxCoeff());
  if (col_residual.cwiseAbs().maxCoeff() > tol * col_scale) return false;
  Vector d = mu.mean() - nu.mean();
  Vector mean_residual = proj * d - d;
  return mean_residual.norm() <= tol * std::max(1.0, d.norm());
}

bool in_support(const Vector& x, const GaussState& mu, double tol) {
  return abs_cont(GaussState::point(x), mu, tol);
}

GaussState graph_state(const GaussMap& f, const GaussState& mu) {
  return apply(compose(tensor(identity_map(mu.dim()), f), copy_map(mu.dim())), mu);
}

bool almost_sure_equal(const GaussMap& f, const GaussMap& g,
                       const GaussState& mu, double tol) {
  if (f.dom() != g.dom() || f.cod() != g.cod() || f.dom() != mu.dim()) {
    throw std::invalid_argument("almost_sure_equal: dimension mismatch");
  }
  return approx_equal(graph_state(f, mu), graph_state(g, mu), tol);
}

bool is_deterministic(const GaussMap& f, double tol) {
  if (f.cod() == 0) return true;
  return f.noise().mat().cwiseAbs().maxCoeff() <= tol;
}

std::optional<GaussState> solve_inference(const InferenceProblem& p, double tol) {
  if (p.k_dim < 0 || p.k_dim > p.joint.dim() || p.observation.size() != p.k_dim) {
    throw std::invalid_argument("solve_inference: inconsistent problem");
  }
  GaussState psi_k = marginal_tail(p.joint, p.k_dim);
  if (!in_support(p.observation, psi_k, tol)) return std::nullopt;
  auto posterior = condition_gaussian(p.joint.mean(), p.joint.cov(),
                                      p.joint.dim() - p.k_dim, p.observation, tol);
  if (!posterior) return std::nullopt;
  return GaussState(posterior->mean, posterior->cov);
}

std::optional<GaussState> condition_affine_row(const GaussState& psi,
                                               const Vector& u, double a,
                                               double tol) {
  if (u.size() != psi.dim()) {
    throw std::invalid_argument("condition_affine_row: dimension mismatch");
  }
  Eigen::Index n = psi.dim();
  Matrix ext(n + 1, n);
  ext.topRows(n).setIdentity();
  ext.bottomRows(1) = u.transpose();
  GaussState joint = apply(affine_map(ext, Vector::Zero(n + 1)), psi);
  Vector obs(1);
  obs << a;
  return solve_inference(InferenceProblem{1, joint, obs}, tol);
}

}  // namespace gausscond
