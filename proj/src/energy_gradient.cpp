#include "nsinpaint/energy_gradient.hpp"

#include "nsinpaint/error.hpp"

namespace nsinpaint {

GradientKind GradientKind::sobolev(int order) {
  if (order < 1 || order > 3) {
    throw Error(ErrorCode::InvalidArgument, "Sobolev order must be 1, 2 or 3");
  }
  return GradientKind(Family::Sobolev, order);
}

EnergyState evaluate(const OperatorSet& ops, const Eigen::VectorXd& u_prime) {
  if (u_prime.size() != ops.omega_prime_size()) {
    throw Error(ErrorCode::LengthMismatch, "expected an omega-prime vector");
  }
  EnergyState s;
  s.d1u = ops.d1.apply(u_prime);
  s.d2u = ops.d2.apply(u_prime);
  s.d1_lap_u = ops.d1_lap.apply(u_prime);
  s.d2_lap_u = ops.d2_lap.apply(u_prime);
  s.residual = s.d2u.cwiseProduct(s.d1_lap_u) - s.d1u.cwiseProduct(s.d2_lap_u);
  s.energy = 0.5 * s.residual.squaredNorm();
  return s;
}

Eigen::VectorXd residual(const OperatorSet& ops, const Eigen::VectorXd& u_prime) {
  return evaluate(ops, u_prime).residual;
}

double energy(const OperatorSet& ops, const Eigen::VectorXd& u_prime) {
  return evaluate(ops, u_prime).energy;
}

Eigen::VectorXd gradient_el(const OperatorSet& ops, const EnergyState& s) {
  const Eigen::VectorXd& f = s.residual;
  // First-order part pairs with (D1 h, D2 h), third-order part with
  // (D1Lap h, D2Lap h). Signs follow from differentiating F as defined above.
  const Eigen::VectorXd first_1 = -f.cwiseProduct(s.d2_lap_u);
  const Eigen::VectorXd first_2 = f.cwiseProduct(s.d1_lap_u);
  const Eigen::VectorXd third_1 = f.cwiseProduct(s.d2u);
  const Eigen::VectorXd third_2 = -f.cwiseProduct(s.d1u);

  // Lift the third-order terms to omega-prime, then apply the restricted
  // Laplacian (Lap^T = Lap for the symmetric five-point stencil).
  const Eigen::VectorXd lifted = ops.d1.apply_adjoint(third_1) + ops.d2.apply_adjoint(third_2);
  Eigen::VectorXd g = ops.lap.apply(lifted);

  // First-order terms live on omega-prime too; keep the omega entries.
  const Eigen::VectorXd first = ops.d1.apply_adjoint(first_1) + ops.d2.apply_adjoint(first_2);
  for (std::size_t k = 0; k < ops.omega_in_prime.size(); ++k) {
    g[static_cast<Eigen::Index>(k)] += first[ops.omega_in_prime[k]];
  }
  return g;
}

Eigen::VectorXd gradient_el(const OperatorSet& ops, const Eigen::VectorXd& u_prime) {
  return gradient_el(ops, evaluate(ops, u_prime));
}

Eigen::VectorXd precondition(const Eigen::VectorXd& g_el, const PreconditionerFactorization& fact,
                             GradientKind kind) {
  if (!kind.is_sobolev()) return g_el;
  return fact.solve_k(g_el, kind.order());
}

Eigen::VectorXd gradient(const OperatorSet& ops, const Eigen::VectorXd& u_prime,
                         const PreconditionerFactorization& fact, GradientKind kind) {
  return precondition(gradient_el(ops, u_prime), fact, kind);
}

}  // namespace nsinpaint
