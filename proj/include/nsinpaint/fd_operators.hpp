#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nsinpaint/grid_domain.hpp"

namespace nsinpaint {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One tap of a finite-difference stencil: coefficient applied to the pixel
/// at (row + drow, col + dcol).
struct StencilTap {
  int drow = 0;
  int dcol = 0;
  double coeff = 0.0;
};

using Stencil = std::vector<StencilTap>;

namespace stencils {
Stencil d1();         ///< 1/2 (u[i+1,j] - u[i-1,j])
Stencil d2();         ///< 1/2 (u[i,j+1] - u[i,j-1])
Stencil laplacian();  ///< five-point Laplacian, h = 1
/// Stencil of the product outer * inner, i.e. outer applied to inner(u).
/// Taps with equal offsets are merged and zero taps dropped; the result is
/// sorted column-major by offset.
Stencil compose(const Stencil& outer, const Stencil& inner);
}  // namespace stencils

enum class OperatorName { D1, D2, Lap, D1Lap, D2Lap };

std::string_view to_string(OperatorName name) noexcept;

/// Finite-difference operator with rows restricted to omega and columns to
/// omega-prime.
class RestrictedOperator {
 public:
  RestrictedOperator(OperatorName name, SparseMatrix matrix)
      : name_(name), matrix_(std::move(matrix)) {}

  OperatorName name() const noexcept { return name_; }
  Eigen::Index rows() const noexcept { return matrix_.rows(); }
  Eigen::Index cols() const noexcept { return matrix_.cols(); }
  const SparseMatrix& matrix() const noexcept { return matrix_; }

  /// op * v, with v an omega-prime vector.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  /// op^T * w, with w an omega vector.
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& w) const;

 private:
  OperatorName name_;
  SparseMatrix matrix_;
};

struct OperatorSet {
  RestrictedOperator d1;
  RestrictedOperator d2;
  RestrictedOperator lap;
  RestrictedOperator d1_lap;
  RestrictedOperator d2_lap;
  /// For each omega position, the matching omega-prime position.
  std::vector<int> omega_in_prime;

  Eigen::Index omega_size() const noexcept { return d1.rows(); }
  Eigen::Index omega_prime_size() const noexcept { return d1.cols(); }
};

/// Builds D1, D2, Lap, D1*Lap and D2*Lap. Products are formed at the
/// stencil level on the full grid and then restricted; every tap of every
/// row must land in omega-prime.
OperatorSet build_operators(const InpaintDomain& domain);

/// Restricts a full-grid stencil to rows in omega and columns in
/// omega-prime. Throws InvalidDomain if a tap falls outside omega-prime.
SparseMatrix restrict_stencil(const Stencil& stencil, const InpaintDomain& domain);

/// (I - Lap) on omega with homogeneous Dirichlet conditions: diagonal 5,
/// -1 for each 4-neighbour that is also in omega.
SparseMatrix shifted_dirichlet_laplacian(const InpaintDomain& domain);

/// Sparse Cholesky factorization of (I - Lap_omega), reused for every
/// Sobolev gradient evaluation.
class PreconditionerFactorization {
 public:
  explicit PreconditionerFactorization(const InpaintDomain& domain);
  ~PreconditionerFactorization();
  PreconditionerFactorization(PreconditionerFactorization&&) noexcept;
  PreconditionerFactorization& operator=(PreconditionerFactorization&&) noexcept;

  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }

  /// (I - Lap)^{-1} y
  Eigen::VectorXd solve(const Eigen::VectorXd& y) const;
  /// (I - Lap)^{-k} y by k successive solves, k in 1..3.
  Eigen::VectorXd solve_k(const Eigen::VectorXd& y, int k) const;
  /// (I - Lap)^{k} x by k sparse products, k >= 0.
  Eigen::VectorXd apply_power(const Eigen::VectorXd& x, int k) const;

 private:
  struct Impl;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Impl> impl_;
};

PreconditionerFactorization factor_preconditioner(const InpaintDomain& domain);

}  // namespace nsinpaint
