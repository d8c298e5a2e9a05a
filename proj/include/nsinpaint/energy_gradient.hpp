#pragma once

#include <Eigen/Core>

#include "nsinpaint/fd_operators.hpp"

namespace nsinpaint {

/// Descent direction: the plain Euler-Lagrange (L2) gradient, or the
/// Sobolev H^k gradient (I - Lap)^{-k} g_EL.
class GradientKind {
 public:
  enum class Family { EulerLagrange, Sobolev };

  static GradientKind euler_lagrange() noexcept { return GradientKind(Family::EulerLagrange, 0); }
  /// Throws InvalidArgument unless order is 1, 2 or 3.
  static GradientKind sobolev(int order);

  Family family() const noexcept { return family_; }
  /// 0 for Euler-Lagrange, k for H^k.
  int order() const noexcept { return order_; }
  bool is_sobolev() const noexcept { return family_ == Family::Sobolev; }

  friend bool operator==(const GradientKind&, const GradientKind&) = default;

 private:
  GradientKind(Family f, int order) noexcept : family_(f), order_(order) {}
  Family family_;
  int order_;
};

/// Residual F(Du) = D2u' * D1Lap u' - D1u' * D2Lap u' together with the
/// derivative fields it was built from.
struct EnergyState {
  Eigen::VectorXd residual;
  double energy = 0.0;
  Eigen::VectorXd d1u;
  Eigen::VectorXd d2u;
  Eigen::VectorXd d1_lap_u;
  Eigen::VectorXd d2_lap_u;

  double residual_norm2() const { return residual.squaredNorm(); }
};

EnergyState evaluate(const OperatorSet& ops, const Eigen::VectorXd& u_prime);

Eigen::VectorXd residual(const OperatorSet& ops, const Eigen::VectorXd& u_prime);
double energy(const OperatorSet& ops, const Eigen::VectorXd& u_prime);

/// L2 gradient of E with respect to the omega values, the ring held fixed.
Eigen::VectorXd gradient_el(const OperatorSet& ops, const EnergyState& state);
Eigen::VectorXd gradient_el(const OperatorSet& ops, const Eigen::VectorXd& u_prime);

Eigen::VectorXd gradient(const OperatorSet& ops, const Eigen::VectorXd& u_prime,
                         const PreconditionerFactorization& fact, GradientKind kind);

/// Applies the preconditioner for `kind` to an Euler-Lagrange gradient.
Eigen::VectorXd precondition(const Eigen::VectorXd& g_el, const PreconditionerFactorization& fact,
                             GradientKind kind);

}  // namespace nsinpaint
