#include "gausscond/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace gausscond {

Channel::Channel(Eigen::Index cod, GaussMap f, Vector obs)
    : cod_(cod), f_(std::move(f)), obs_(std::move(obs)) {
  if (cod_ < 0 || f_.cod() != cod_ + obs_.size()) {
    throw std::invalid_argument("Channel: map codomain must split into outputs and condition wires");
  }
  if (!obs_.allFinite()) {
    throw std::invalid_argument("Channel: observation must be finite");
  }
}

Channel lift(const GaussMap& g) { return Channel(g.cod(), g, Vector::Zero(0)); }

Channel lift(const GaussState& psi) { return lift(psi.as_map()); }

Channel observe(const Vector& o) {
  return Channel(0, identity_map(o.size()), o);
}

Channel identity_channel(Eigen::Index n) { return lift(identity_map(n)); }

Channel compose(const Channel& g, const Channel& f) {
  if (g.dom() != f.cod()) {
    throw std::invalid_argument("compose: channel domain/codomain mismatch");
  }
  // f : X -> Y (x) K, g : Y -> Z (x) K'; composite X -> Z (x) K' (x) K.
  GaussMap h = compose(tensor(g.map(), identity_map(f.k_dim())), f.map());
  Vector obs(g.k_dim() + f.k_dim());
  obs << g.observation(), f.observation();
  return Channel(g.cod(), std::move(h), std::move(obs));
}

Channel tensor(const Channel& f, const Channel& g) {
  // Juxtapose outputs and move both condition blocks to the rear:
  // Y1 (x) K1 (x) Y2 (x) K2  ->  Y1 (x) Y2 (x) K1 (x) K2.
  Eigen::Index y1 = f.cod(), k1 = f.k_dim(), y2 = g.cod(), k2 = g.k_dim();
  GaussMap wide = tensor(f.map(), g.map());
  GaussMap shuffle = tensor(tensor(identity_map(y1), swap_map(k1, y2)), identity_map(k2));
  GaussMap h = compose(shuffle, wide);
  Vector obs(k1 + k2);
  obs << f.observation(), g.observation();
  return Channel(y1 + y2, std::move(h), std::move(obs));
}

StateResult eval_state(const Channel& c, double tol) {
  if (c.dom() != 0) {
    throw std::invalid_argument("eval_state: channel must be closed");
  }
  GaussState psi = apply(c.map(), GaussState());
  return solve_inference(InferenceProblem{c.k_dim(), psi, c.observation()}, tol);
}

namespace {

// Any l with l l^T = sigma, columns of zero eigenvalue dropped.
Matrix noise_factor(const PsdMatrix& sigma) {
  Eigen::Index n = sigma.side();
  if (n == 0) return Matrix::Zero(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.mat());
  const Vector& ev = es.eigenvalues();
  double lambda_max = std::max(0.0, ev.maxCoeff());
  double cutoff = kRankTol * std::max(1.0, lambda_max);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) > cutoff) keep.push_back(i);
  }
  Matrix l(n, static_cast<Eigen::Index>(keep.size()));
  for (Eigen::Index j = 0; j < l.cols(); ++j) {
    l.col(j) = es.eigenvectors().col(keep[j]) * std::sqrt(ev(keep[j]));
  }
  return l;
}

}  // namespace

CanonicalChannel canonicalize(const Channel& c, double tol) {
  Eigen::Index m = c.dom(), y = c.cod(), k = c.k_dim();
  CanonicalChannel out;

  // Present the channel as
  //   x |- nu z. (fk x + lk z =:= o - bk); return fy x + by + ly z
  Matrix l = noise_factor(c.map().noise());
  Eigen::Index nz = l.cols();
  Matrix fy = c.map().linear().topRows(y);
  Matrix fk = c.map().linear().bottomRows(k);
  Matrix ly = l.topRows(y);
  Matrix lk = l.bottomRows(k);
  Vector by = c.map().offset().head(y);
  Vector rhs = c.observation() - c.map().offset().tail(k);

  // Row-reduce the condition block jointly with its noise and rhs.
  RrefResult red = rref_transform(fk);
  Matrix lk2 = red.s * lk;
  Vector rhs2 = red.s * rhs;
  Eigen::Index r = static_cast<Eigen::Index>(red.pivot_cols.size());

  // Rows without an x part are closed conditions on the latent z alone.
  // Row elimination leaves numerical dust there; snap it so it cannot
  // masquerade as a constraint.
  Eigen::Index q = k - r;
  Matrix w = lk2.bottomRows(q);
  Vector wo = rhs2.tail(q);
  double scale = std::max(1.0, lk2.size() > 0 ? lk2.cwiseAbs().maxCoeff() : 0.0);
  scale = std::max(scale, rhs2.size() > 0 ? rhs2.cwiseAbs().maxCoeff() : 0.0);
  double dust = kRankTol * scale;
  w = (w.cwiseAbs().array() <= dust).select(Matrix::Zero(q, nz), w);
  wo = (wo.cwiseAbs().array() <= dust).select(Vector::Zero(q), wo);
  Matrix ext(nz + q, nz);
  ext.topRows(nz).setIdentity();
  ext.bottomRows(q) = w;
  GaussState z_joint = apply(GaussMap(ext, Vector::Zero(nz + q), PsdMatrix::zero(nz + q)),
                             GaussState::standard_normal(nz));
  auto z_post = solve_inference(InferenceProblem{q, z_joint, wo}, tol);
  if (!z_post) {
    out.bottom = true;
    return out;
  }

  // Remaining rows: a x =:= eta with eta = cp - g z.
  out.a = red.r.topRows(r);
  out.pivot_cols = red.pivot_cols;
  Matrix g = lk2.topRows(r);
  Vector cp = rhs2.head(r);

  // Reduce the output matrix modulo the pivot rows: d0 vanishes on pivot
  // columns, and the pivot contribution d_p (a x) becomes d_p eta.
  Matrix dp(y, r);
  for (Eigen::Index j = 0; j < r; ++j) dp.col(j) = fy.col(red.pivot_cols[j]);
  out.d0 = fy - dp * out.a;
  for (Eigen::Index j = 0; j < r; ++j) out.d0.col(red.pivot_cols[j]).setZero();

  // Joint residual (eta, eps) as an affine image of the conditioned z.
  Matrix coeff(r + y, nz);
  coeff.topRows(r) = -g;
  coeff.bottomRows(y) = ly - dp * g;
  Vector base(r + y);
  base << cp, by + dp * cp;
  out.joint = apply(GaussMap(coeff, base, PsdMatrix::zero(r + y)), *z_post);
  return out;
}

bool approx_equal(const CanonicalChannel& x, const CanonicalChannel& y, double tol) {
  if (x.bottom || y.bottom) return x.bottom == y.bottom;
  return x.pivot_cols == y.pivot_cols && approx_equal(x.a, y.a, tol) &&
         approx_equal(x.d0, y.d0, tol) && approx_equal(x.joint, y.joint, tol);
}

bool equiv(const Channel& c1, const Channel& c2, double tol) {
  if (c1.dom() != c2.dom() || c1.cod() != c2.cod()) {
    throw std::invalid_argument("equiv: channel shapes differ");
  }
  return approx_equal(canonicalize(c1), canonicalize(c2), tol);
}

bool probe_equiv(const Channel& c1, const Channel& c2,
                 const std::vector<GaussState>& priors, double tol) {
  if (c1.dom() != c2.dom() || c1.cod() != c2.cod()) {
    throw std::invalid_argument("probe_equiv: channel shapes differ");
  }
  for (const GaussState& phi : priors) {
    Channel duplicated = lift(compose(copy_map(phi.dim()), phi.as_map()));
    StateResult r1 = eval_state(compose(tensor(identity_channel(phi.dim()), c1), duplicated));
    StateResult r2 = eval_state(compose(tensor(identity_channel(phi.dim()), c2), duplicated));
    if (r1.has_value() != r2.has_value()) return false;
    if (r1 && !approx_equal(*r1, *r2, tol)) return false;
  }
  return true;
}

std::vector<GaussState> probe_priors(Eigen::Index dim, unsigned seed) {
  std::vector<GaussState> out;
  if (dim == 0) {
    out.push_back(GaussState());
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&](Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  };
  auto random_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    return m;
  };

  out.push_back(GaussState::standard_normal(dim));
  for (int i = 0; i < 8; ++i) {
    Matrix l = random_matrix(dim, dim);
    Matrix cov = l * l.transpose() + 0.25 * Matrix::Identity(dim, dim);
    out.emplace_back(random_vector(dim), PsdMatrix(cov));
  }
  for (int i = 0; i < 8; ++i) {
    Eigen::Index rank = dim > 1 ? static_cast<Eigen::Index>(rng() % dim) : 0;
    Matrix l = random_matrix(dim, rank);
    Matrix cov = l * l.transpose();
    out.emplace_back(random_vector(dim), PsdMatrix(cov));
  }
  for (int i = 0; i < 4; ++i) {
    out.push_back(GaussState::point(random_vector(dim)));
  }
  return out;
}

}  // namespace gausscond
