#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nsinpaint/error.hpp"
#include "nsinpaint/fd_operators.hpp"
#include "oracles.hpp"

using namespace nsinpaint;

namespace {

template <typename F>
GrayImage image_from(int h, int w, F f) {
  GrayImage image(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) image.at(i, j) = f(static_cast<double>(i), static_cast<double>(j));
  }
  return image;
}

Eigen::VectorXd on_omega(const InpaintDomain& d, auto f) {
  Eigen::VectorXd v(d.omega_size());
  for (std::size_t k = 0; k < d.omega_size(); ++k) v[k] = f(d.omega()[k].row, d.omega()[k].col);
  return v;
}

struct Problem {
  InpaintDomain domain;
  OperatorSet ops;
};

Problem make_problem(const Mask& mask) {
  InpaintDomain d = extract_domain(mask.height, mask.width, mask);
  OperatorSet ops = build_operators(d);
  return {std::move(d), std::move(ops)};
}

}  // namespace

TEST(Stencils, CompositionHasExpectedTaps) {
  const Stencil s = stencils::compose(stencils::d1(), stencils::laplacian());
  double sum = 0.0, moment = 0.0;
  for (const StencilTap& t : s) {
    sum += t.coeff;
    moment += t.coeff * t.drow;
    EXPECT_LE(std::abs(t.drow) + std::abs(t.dcol), 2);
  }
  EXPECT_NEAR(sum, 0.0, 1e-15);
  // D1 Lap applied to a linear function in the row index vanishes; the
  // first moment of the stencil is therefore zero as well.
  EXPECT_NEAR(moment, 0.0, 1e-15);
  EXPECT_EQ(s.size(), 8u);
}

TEST(Operators, ExactOnPolynomials) {
  const Problem s = make_problem(fixture::block_mask(16, 16, 4, 5, 7));
  const auto& d = s.domain;
  auto up = [&](auto f) { return restrict(image_from(16, 16, f), d, Region::OmegaPrime); };

  const Eigen::VectorXd constant = up([](double, double) { return 3.0; });
  for (const RestrictedOperator* op : {&s.ops.d1, &s.ops.d2, &s.ops.lap, &s.ops.d1_lap, &s.ops.d2_lap}) {
    EXPECT_LE(op->apply(constant).cwiseAbs().maxCoeff(), 1e-13) << to_string(op->name());
  }

  const Eigen::VectorXd linear = up([](double i, double) { return i; });
  EXPECT_LE((s.ops.d1.apply(linear).array() - 1.0).abs().maxCoeff(), 1e-13);
  EXPECT_LE(s.ops.d2.apply(linear).cwiseAbs().maxCoeff(), 1e-13);

  const Eigen::VectorXd sq = up([](double i, double) { return i * i; });
  EXPECT_LE((s.ops.d1.apply(sq) - on_omega(d, [](int i, int) { return 2.0 * i; })).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_LE((s.ops.lap.apply(sq).array() - 2.0).abs().maxCoeff(), 1e-12);

  const Eigen::VectorXd bowl = up([](double i, double j) { return i * i + j * j; });
  EXPECT_LE((s.ops.lap.apply(bowl).array() - 4.0).abs().maxCoeff(), 1e-12);

  // Lap(i^3 + j^3) = 6i + 6j, so D1 Lap = 6 and D2 Lap = 6.
  const Eigen::VectorXd cubic = up([](double i, double j) { return i * i * i + j * j * j; });
  EXPECT_LE((s.ops.d1_lap.apply(cubic).array() - 6.0).abs().maxCoeff(), 1e-10);
  EXPECT_LE((s.ops.d2_lap.apply(cubic).array() - 6.0).abs().maxCoeff(), 1e-10);
}

TEST(Operators, MatchDenseFullGridOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int h = 10 + trial, w = 12;
    const Problem s = make_problem(fixture::random_mask(h, w, 0.35, rng));
    const Eigen::MatrixXd fd1 = oracle::full_grid_d1(h, w);
    const Eigen::MatrixXd fd2 = oracle::full_grid_d2(h, w);
    const Eigen::MatrixXd flap = oracle::full_grid_laplacian(h, w);
    const Eigen::MatrixXd d1 = oracle::restrict_dense(fd1, s.domain);
    const Eigen::MatrixXd d2 = oracle::restrict_dense(fd2, s.domain);
    const Eigen::MatrixXd lap = oracle::restrict_dense(flap, s.domain);
    const Eigen::MatrixXd d1lap = oracle::restrict_dense(fd1 * flap, s.domain);
    const Eigen::MatrixXd d2lap = oracle::restrict_dense(fd2 * flap, s.domain);

    EXPECT_LE((Eigen::MatrixXd(s.ops.d1.matrix()) - d1).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((Eigen::MatrixXd(s.ops.d2.matrix()) - d2).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((Eigen::MatrixXd(s.ops.lap.matrix()) - lap).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((Eigen::MatrixXd(s.ops.d1_lap.matrix()) - d1lap).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((Eigen::MatrixXd(s.ops.d2_lap.matrix()) - d2lap).cwiseAbs().maxCoeff(), 1e-14);

    const Eigen::VectorXd v = Eigen::VectorXd::Random(s.ops.omega_prime_size());
    const Eigen::VectorXd w_vec = Eigen::VectorXd::Random(s.ops.omega_size());
    EXPECT_LE((s.ops.d1_lap.apply(v) - d1lap * v).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE((s.ops.d2_lap.apply_adjoint(w_vec) - d2lap.transpose() * w_vec).cwiseAbs().maxCoeff(),
              1e-13);
  }
}

TEST(Operators, AdjointIdentity) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const Problem s = make_problem(fixture::random_mask(24, 20, 0.4, rng));
  for (const RestrictedOperator* op : {&s.ops.d1, &s.ops.d2, &s.ops.lap, &s.ops.d1_lap, &s.ops.d2_lap}) {
    Eigen::VectorXd v(op->cols()), w(op->rows());
    for (auto& x : v) x = uni(rng);
    for (auto& x : w) x = uni(rng);
    const double lhs = w.dot(op->apply(v));
    const double rhs = op->apply_adjoint(w).dot(v);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs))) << to_string(op->name());
  }
}

TEST(Operators, LengthMismatchThrows) {
  const Problem s = make_problem(fixture::block_mask(12, 12, 4, 4, 3));
  try {
    s.ops.d1.apply(Eigen::VectorXd::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  try {
    s.ops.d1.apply_adjoint(Eigen::VectorXd::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(Operators, StencilOutsideRingIsRejected) {
  Mask mask(9, 9);
  mask.at(4, 4) = 1;
  const InpaintDomain d = extract_domain(9, 9, mask);
  const Stencil far = {{3, 0, 1.0}};
  try {
    restrict_stencil(far, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDomain);
  }
}

TEST(ShiftedLaplacian, SinglePixelIsFive) {
  Mask mask(9, 9);
  mask.at(4, 4) = 1;
  const InpaintDomain d = extract_domain(9, 9, mask);
  const SparseMatrix a = shifted_dirichlet_laplacian(d);
  ASSERT_EQ(a.rows(), 1);
  EXPECT_EQ(a.coeff(0, 0), 5.0);
  const PreconditionerFactorization fact(d);
  EXPECT_DOUBLE_EQ(fact.solve(Eigen::VectorXd::Constant(1, 10.0))[0], 2.0);
}

TEST(ShiftedLaplacian, MatchesDenseAssemblyAndIsPositiveDefinite) {
  std::mt19937_64 rng(31);
  const Mask mask = fixture::random_mask(18, 18, 0.5, rng);
  const InpaintDomain d = extract_domain(18, 18, mask);
  const Eigen::MatrixXd dense = oracle::dense_shifted_laplacian(d);
  const Eigen::MatrixXd sparse(shifted_dirichlet_laplacian(d));
  EXPECT_EQ((sparse - dense).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((sparse - sparse.transpose()).cwiseAbs().maxCoeff(), 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  EXPECT_GE(eig.eigenvalues().minCoeff(), 1.0);
}

TEST(Preconditioner, SolveRoundTrip) {
  std::mt19937_64 rng(37);
  const Mask mask = fixture::random_mask(30, 30, 0.5, rng);
  const InpaintDomain d = extract_domain(30, 30, mask);
  const PreconditionerFactorization fact = factor_preconditioner(d);
  const Eigen::VectorXd y = Eigen::VectorXd::Random(fact.dimension());
  const Eigen::VectorXd x = fact.solve(y);
  EXPECT_LE((fact.matrix() * x - y).norm() / y.norm(), 1e-12);
  EXPECT_LE((fact.apply_power(x, 1) - y).norm() / y.norm(), 1e-12);
  EXPECT_EQ(fact.apply_power(y, 0), y);
}

TEST(Preconditioner, EigenvaluesMatchClosedForm) {
  const int n = 6;
  const InpaintDomain d = extract_domain(12, 12, fixture::block_mask(12, 12, 3, 3, n));
  const Eigen::MatrixXd dense(shifted_dirichlet_laplacian(d));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  std::vector<double> expected;
  for (int p = 1; p <= n; ++p) {
    for (int q = 1; q <= n; ++q) {
      const double sp = std::sin(p * std::numbers::pi / (2.0 * (n + 1)));
      const double sq = std::sin(q * std::numbers::pi / (2.0 * (n + 1)));
      expected.push_back(1.0 + 4.0 * sp * sp + 4.0 * sq * sq);
    }
  }
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < n * n; ++k) EXPECT_NEAR(eig.eigenvalues()[k], expected[k], 1e-12);
}

TEST(Preconditioner, SolveKMatchesDenseInversePower) {
  std::mt19937_64 rng(41);
  const Mask mask = fixture::random_mask(14, 14, 0.6, rng);
  const InpaintDomain d = extract_domain(14, 14, mask);
  const PreconditionerFactorization fact(d);
  const Eigen::MatrixXd inv = oracle::gauss_jordan_inverse(oracle::dense_shifted_laplacian(d));
  const Eigen::VectorXd y = Eigen::VectorXd::Random(fact.dimension());
  Eigen::VectorXd expected = y;
  for (int k = 1; k <= 3; ++k) {
    expected = inv * expected;
    const Eigen::VectorXd got = fact.solve_k(y, k);
    EXPECT_LE((got - expected).norm() / expected.norm(), 1e-10) << "k=" << k;
    EXPECT_LE((fact.apply_power(got, k) - y).norm() / y.norm(), 1e-10) << "k=" << k;
  }
  EXPECT_LE((fact.solve_k(y, 2) - fact.solve(fact.solve(y))).norm(), 1e-14 * y.norm() * 10);
}

TEST(Preconditioner, RejectsBadArguments) {
  const InpaintDomain d = extract_domain(12, 12, fixture::block_mask(12, 12, 4, 4, 3));
  const PreconditionerFactorization fact(d);
  for (int k : {0, 4}) {
    try {
      fact.solve_k(Eigen::VectorXd::Zero(9), k);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
  }
  try {
    fact.solve(Eigen::VectorXd::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}
