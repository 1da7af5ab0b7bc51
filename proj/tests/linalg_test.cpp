#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gausscond/linalg.hpp"
#include "test_util.hpp"

using namespace gausscond;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// independent oracle: pseudoinverse assembled from a hand-computed
// eigendecomposition, outside the production code path
Matrix pinv_from_eigenpairs(const std::vector<std::pair<double, Vector>>& pairs,
                            Eigen::Index n) {
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [lambda, v] : pairs) {
    if (lambda > 0) out += (1.0 / lambda) * (v * v.transpose()) / v.squaredNorm();
  }
  return out;
}

// any G with M G M = M, built by perturbing the Moore-Penrose inverse
// inside the null space
Matrix second_generalized_inverse(const PsdMatrix& m, gctest::Rng& rng) {
  Matrix g = pinv(m);
  Eigen::Index n = m.side();
  Matrix w = rng.matrix(n, n);
  return g + (Matrix::Identity(n, n) - g * m.mat()) * w;
}

}  // namespace

TEST_CASE("psd construction symmetrizes and clamps") {
  CHECK_THROWS_AS(PsdMatrix(mat2(1, 2, 3, 4)), std::invalid_argument);   // asymmetric
  CHECK_THROWS_AS(PsdMatrix(mat2(1, 0, 0, -1)), std::invalid_argument);  // indefinite
  Matrix wiggle = mat2(1, 0, 0, -1e-12);
  CHECK(PsdMatrix(wiggle).mat()(1, 1) >= 0.0);
  CHECK(PsdMatrix(Matrix::Zero(0, 0)).side() == 0);
}

TEST_CASE("pinv on identity and diagonal") {
  CHECK(approx_equal(pinv(PsdMatrix::identity(2)), Matrix::Identity(2, 2)));
  Matrix d = mat2(2, 0, 0, 0);
  Matrix expected = mat2(0.5, 0, 0, 0);
  CHECK(approx_equal(pinv(PsdMatrix(d)), expected));
  CHECK(approx_equal(pinv(PsdMatrix::zero(3)), Matrix::Zero(3, 3)));
}

TEST_CASE("pinv of rank-one matrix matches the eigen oracle") {
  // [[1,1],[1,1]] has eigenpairs (2, (1,1)) and (0, (1,-1))
  Matrix m = mat2(1, 1, 1, 1);
  Matrix oracle = pinv_from_eigenpairs({{2.0, vec2(1, 1)}, {0.0, vec2(1, -1)}}, 2);
  CHECK(approx_equal(oracle, mat2(0.25, 0.25, 0.25, 0.25), 1e-12));
  CHECK(approx_equal(pinv(PsdMatrix(m)), oracle, 1e-12));
}

TEST_CASE("pinv satisfies both Penrose identities on random psd matrices") {
  gctest::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Index n = 1 + rng.pick(5);
    PsdMatrix m = rng.psd_rank(n, rng.pick(n + 1));
    Matrix g = pinv(m);
    double scale = std::max(1.0, m.mat().cwiseAbs().maxCoeff());
    CHECK((m.mat() * g * m.mat() - m.mat()).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK((g * m.mat() * g - g).cwiseAbs().maxCoeff() <=
          1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("column space membership") {
  PsdMatrix ones(mat2(1, 1, 1, 1));
  CHECK(in_col_space(ones, Vector::Zero(2)));
  CHECK(in_col_space(ones, vec2(1, 1)));
  CHECK_FALSE(in_col_space(ones, vec2(1, -1)));
  CHECK_THROWS_AS(in_col_space(ones, Vector::Zero(3)), std::invalid_argument);
  // zero vector is in every column space, including the zero matrix's
  CHECK(in_col_space(PsdMatrix::zero(2), Vector::Zero(2)));
}

TEST_CASE("rref on hand-reduced examples") {
  RrefResult id = rref_transform(Matrix::Identity(2, 2));
  CHECK(approx_equal(id.r, Matrix::Identity(2, 2)));
  CHECK(approx_equal(id.s, Matrix::Identity(2, 2)));

  Matrix a = mat2(0, 1, 0, 2);
  RrefResult ra = rref_transform(a);
  CHECK(approx_equal(ra.r, mat2(0, 1, 0, 0)));
  CHECK(ra.pivot_cols == std::vector<Eigen::Index>{1});

  Matrix b = mat2(1, 2, 2, 4);
  RrefResult rb = rref_transform(b);
  CHECK(approx_equal(rb.r, mat2(1, 2, 0, 0)));
  CHECK(rb.pivot_cols == std::vector<Eigen::Index>{0});
}

TEST_CASE("rref reconstructs exactly and is idempotent") {
  gctest::Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::Index rows = 1 + rng.pick(4), cols = 1 + rng.pick(4);
    Matrix m = rng.matrix(rows, cols);
    if (rng.chance(0.4)) m.row(rng.pick(rows)).setZero();
    if (rng.chance(0.4) && rows > 1) m.row(0) = 2.0 * m.row(rows - 1);
    RrefResult red = rref_transform(m);
    CHECK(approx_equal(red.s * m, red.r, 1e-9));
    // s invertible
    CHECK(std::abs(red.s.determinant()) > 1e-12);
    // pivots exactly 1, eliminated entries exactly 0
    for (size_t k = 0; k < red.pivot_cols.size(); ++k) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        double expected = i == static_cast<Eigen::Index>(k) ? 1.0 : 0.0;
        CHECK(red.r(i, red.pivot_cols[k]) == expected);
      }
    }
    RrefResult again = rref_transform(red.r);
    CHECK(approx_equal(again.r, red.r, 1e-12));
  }
}

TEST_CASE("rank split on special cases") {
  RankSplit z = rank_split(Matrix::Zero(2, 3));
  CHECK(z.rank == 0);
  CHECK(approx_equal(z.s, Matrix::Identity(2, 2)));
  CHECK(approx_equal(z.t, Matrix::Identity(3, 3)));

  Matrix scalar(1, 1);
  scalar << 3;
  RankSplit three = rank_split(scalar);
  CHECK(three.rank == 1);
  CHECK(approx_equal(three.s * scalar * three.t.transpose(), Matrix::Identity(1, 1)));

  Matrix row(1, 2);
  row << 1, 1;
  RankSplit rs = rank_split(row);
  CHECK(rs.rank == 1);
  Matrix block = rs.s * row * rs.t.transpose();
  CHECK(std::abs(block(0, 0) - 1.0) <= 1e-12);
  CHECK(std::abs(block(0, 1)) <= 1e-12);
}

TEST_CASE("rank split properties on random matrices") {
  gctest::Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::Index rows = 1 + rng.pick(4), cols = 1 + rng.pick(4);
    Eigen::Index inner = rng.pick(std::min(rows, cols) + 1);
    Matrix m = rng.matrix(rows, inner) * rng.matrix(inner, cols);
    RankSplit split = rank_split(m);
    CHECK((split.t * split.t.transpose() - Matrix::Identity(cols, cols))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    Matrix block = split.s * m * split.t.transpose();
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        double expected = (i == j && i < split.rank) ? 1.0 : 0.0;
        CHECK(std::abs(block(i, j) - expected) <= 1e-9);
      }
    }
  }
}

TEST_CASE("conditioning the worked three-dimensional example") {
  // X, Y independent standard normals, Z = X - Y, condition Z = 0
  Matrix sigma(3, 3);
  sigma << 1, 0, 1, 0, 1, -1, 1, -1, 2;
  Vector mu = Vector::Zero(3);
  Vector obs(1);
  obs << 0;
  auto post = condition_gaussian(mu, PsdMatrix(sigma), 2, obs);
  REQUIRE(post.has_value());
  CHECK(approx_equal(post->mean, Vector::Zero(2), 1e-10));
  CHECK(approx_equal(post->cov.mat(), mat2(0.5, 0.5, 0.5, 0.5), 1e-10));
}

TEST_CASE("conditioning the noisy measurement") {
  Matrix sigma = mat2(100, 100, 100, 125);
  Vector mu = vec2(50, 50);
  Vector obs(1);
  obs << 40;
  auto post = condition_gaussian(mu, PsdMatrix(sigma), 1, obs);
  REQUIRE(post.has_value());
  CHECK(std::abs(post->mean(0) - 42.0) <= 1e-10);
  CHECK(std::abs(post->cov.mat()(0, 0) - 20.0) <= 1e-10);
}

TEST_CASE("tautological condition on a deterministic block") {
  Matrix sigma = Matrix::Zero(2, 2);
  sigma(0, 0) = 4.0;
  Vector mu = vec2(1, 7);
  Vector obs(1);
  obs << 7;
  auto post = condition_gaussian(mu, PsdMatrix(sigma), 1, obs);
  REQUIRE(post.has_value());
  CHECK(post->mean(0) == 1.0);
  CHECK(post->cov.mat()(0, 0) == 4.0);

  obs << 8;  // outside the support
  CHECK_FALSE(condition_gaussian(mu, PsdMatrix(sigma), 1, obs).has_value());
}

TEST_CASE("schur complement is independent of the generalized inverse") {
  gctest::Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Index keep = 1 + rng.pick(3), obs_dim = 1 + rng.pick(3);
    Eigen::Index n = keep + obs_dim;
    PsdMatrix joint = rng.psd_rank(n, rng.chance(0.5) ? n : 1 + rng.pick(n));
    Matrix s11 = joint.mat().topLeftCorner(keep, keep);
    Matrix s12 = joint.mat().topRightCorner(keep, obs_dim);
    PsdMatrix s22(Matrix(joint.mat().bottomRightCorner(obs_dim, obs_dim)));

    Matrix schur_mp = s11 - s12 * pinv(s22) * s12.transpose();
    Matrix schur_other = s11 - s12 * second_generalized_inverse(s22, rng) * s12.transpose();
    CHECK(approx_equal(schur_mp, schur_other, 1e-8));
  }
}

TEST_CASE("conditioning agrees with the single-row update") {
  gctest::Rng rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Index n = 1 + rng.pick(4);
    PsdMatrix sigma = rng.psd_rank(n, n);
    Vector mu = rng.vector(n);
    Vector u = rng.vector(n);

    // joint of (X, uX) and its single-row posterior
    Matrix ext(n + 1, n);
    ext.topRows(n).setIdentity();
    ext.bottomRows(1) = u.transpose();
    Matrix joint = ext * sigma.mat() * ext.transpose();
    Vector joint_mu(n + 1);
    joint_mu << mu, u.dot(mu);
    double a = rng.gauss(2.0);
    Vector obs(1);
    obs << a;
    auto post = condition_gaussian(joint_mu, PsdMatrix(joint), n, obs);
    REQUIRE(post.has_value());

    double s22 = u.dot(sigma.mat() * u);
    Vector mean_formula = mu + (a - u.dot(mu)) / s22 * (sigma.mat() * u);
    Matrix cov_formula =
        sigma.mat() - (sigma.mat() * u) * (u.transpose() * sigma.mat()) / s22;
    CHECK(approx_equal(post->mean, mean_formula, 1e-10));
    CHECK(approx_equal(post->cov.mat(), cov_formula, 1e-10));
  }
}

TEST_CASE("posterior covariance stays psd") {
  gctest::Rng rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Index keep = 1 + rng.pick(3), obs_dim = 1 + rng.pick(3);
    Eigen::Index n = keep + obs_dim;
    PsdMatrix joint = rng.psd_rank(n, 1 + rng.pick(n));
    Vector mu = rng.vector(n);
    // observe a point that the support definitely contains
    Vector latent = rng.vector(n);
    Vector in_support_point = mu + joint.mat() * latent;
    auto post = condition_gaussian(mu, joint, keep, in_support_point.tail(obs_dim));
    REQUIRE(post.has_value());
    Eigen::SelfAdjointEigenSolver<Matrix> es(post->cov.mat());
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("degenerate zero-dimensional inputs behave as identities") {
  Matrix empty(0, 0);
  RrefResult red = rref_transform(empty);
  CHECK(red.r.rows() == 0);
  RankSplit split = rank_split(empty);
  CHECK(split.rank == 0);
  auto post = condition_gaussian(Vector::Zero(0), PsdMatrix::zero(0), 0, Vector::Zero(0));
  REQUIRE(post.has_value());
  CHECK(post->mean.size() == 0);
}
