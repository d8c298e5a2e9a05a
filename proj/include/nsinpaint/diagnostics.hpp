#pragma once

#include <array>

#include <Eigen/Core>

#include "nsinpaint/fd_operators.hpp"
#include "nsinpaint/grid_domain.hpp"

namespace nsinpaint {

/// How the gradient norm enters the relative condition number.
///  - Rooted: ||grad_{H^k} f||_{H^k} = sqrt(<g, (I-Lap)^{-k} g>).
///  - Unrooted: the un-rooted inner product <g, (I-Lap)^{-k} g>.
enum class ConditionFormula { Rooted, Unrooted };

inline constexpr int kMaxSobolevOrder = 3;

/// Condition numbers of one iterate for every gradient order k = 0..3
/// (k = 0 is the Euclidean / Euler-Lagrange case).
struct ConditionReport {
  int iter = 0;
  double energy = 0.0;
  std::array<double, kMaxSobolevOrder + 1> kappa_rel{};
  std::array<double, kMaxSobolevOrder + 1> hk_grad_norm{};
  std::array<double, kMaxSobolevOrder + 1> x_hk_norm{};
};

/// sqrt(<g, (I-Lap)^{-k} g>); k = 0 gives the Euclidean norm.
double hk_gradient_norm(const Eigen::VectorXd& g_el, const PreconditionerFactorization& fact,
                        int k);
/// sqrt(<x, (I-Lap)^{k} x>).
double hk_norm(const Eigen::VectorXd& x, const PreconditionerFactorization& fact, int k);

/// ||grad_{H^k} E|| * ||u0||_{H^k} / E. Throws ZeroEnergy when energy <= 0.
double relative_condition(const Eigen::VectorXd& u0, const Eigen::VectorXd& g_el,
                          const PreconditionerFactorization& fact, int k, double energy,
                          ConditionFormula formula = ConditionFormula::Rooted);

ConditionReport condition_report(int iter, const Eigen::VectorXd& u0,
                                 const Eigen::VectorXd& g_el,
                                 const PreconditionerFactorization& fact, double energy,
                                 ConditionFormula formula = ConditionFormula::Rooted);

/// Eigenvalue of -Lap with Dirichlet conditions on an n x n square for mode
/// (p, q), 1 <= p, q <= n.
double dirichlet_eigenvalue(int n, int p, int q);

/// Checks solve_k(v_pq) = v_pq / (1 + lambda_pq)^k for every Dirichlet
/// eigenvector of a square omega and returns the largest relative
/// deviation. Throws InvalidDomain if omega is not an n x n block.
double spectral_attenuation_check(const InpaintDomain& domain,
                                  const PreconditionerFactorization& fact, int k);

}  // namespace nsinpaint
