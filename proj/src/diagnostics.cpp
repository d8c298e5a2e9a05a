#include "nsinpaint/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nsinpaint/error.hpp"

namespace nsinpaint {

namespace {

void check_order(int k) {
  if (k < 0 || k > kMaxSobolevOrder) {
    throw Error(ErrorCode::InvalidArgument, "Sobolev order must be in 0..3");
  }
}

double gradient_inner(const Eigen::VectorXd& g_el, const PreconditionerFactorization& fact,
                      int k) {
  if (k == 0) return g_el.squaredNorm();
  // Clamp tiny negative roundoff; the resolvent is SPD.
  return std::max(0.0, g_el.dot(fact.solve_k(g_el, k)));
}

}  // namespace

double hk_gradient_norm(const Eigen::VectorXd& g_el, const PreconditionerFactorization& fact,
                        int k) {
  check_order(k);
  return std::sqrt(gradient_inner(g_el, fact, k));
}

double hk_norm(const Eigen::VectorXd& x, const PreconditionerFactorization& fact, int k) {
  check_order(k);
  return std::sqrt(std::max(0.0, x.dot(fact.apply_power(x, k))));
}

double relative_condition(const Eigen::VectorXd& u0, const Eigen::VectorXd& g_el,
                          const PreconditionerFactorization& fact, int k, double energy,
                          ConditionFormula formula) {
  check_order(k);
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::ZeroEnergy, "relative condition number needs a positive energy");
  }
  const double inner = gradient_inner(g_el, fact, k);
  const double grad = formula == ConditionFormula::Rooted ? std::sqrt(inner) : inner;
  return grad * hk_norm(u0, fact, k) / energy;
}

ConditionReport condition_report(int iter, const Eigen::VectorXd& u0,
                                 const Eigen::VectorXd& g_el,
                                 const PreconditionerFactorization& fact, double energy,
                                 ConditionFormula formula) {
  ConditionReport r;
  r.iter = iter;
  r.energy = energy;
  Eigen::VectorXd resolved = g_el;
  Eigen::VectorXd powered = u0;
  for (int k = 0; k <= kMaxSobolevOrder; ++k) {
    if (k > 0) {
      resolved = fact.solve(resolved);
      powered = fact.apply_power(powered, 1);
    }
    const double inner = std::max(0.0, g_el.dot(resolved));
    r.hk_grad_norm[k] = std::sqrt(inner);
    r.x_hk_norm[k] = std::sqrt(std::max(0.0, u0.dot(powered)));
    if (energy > 0.0) {
      const double grad = formula == ConditionFormula::Rooted ? r.hk_grad_norm[k] : inner;
      r.kappa_rel[k] = grad * r.x_hk_norm[k] / energy;
    }
  }
  return r;
}

double dirichlet_eigenvalue(int n, int p, int q) {
  const double a = std::sin(p * std::numbers::pi / (2.0 * (n + 1)));
  const double b = std::sin(q * std::numbers::pi / (2.0 * (n + 1)));
  return 4.0 * a * a + 4.0 * b * b;
}

double spectral_attenuation_check(const InpaintDomain& domain,
                                  const PreconditionerFactorization& fact, int k) {
  const auto& omega = domain.omega();
  int row0 = omega.front().row, col0 = omega.front().col;
  int row1 = row0, col1 = col0;
  for (const Pixel& p : omega) {
    row0 = std::min(row0, p.row);
    row1 = std::max(row1, p.row);
    col0 = std::min(col0, p.col);
    col1 = std::max(col1, p.col);
  }
  const int n = row1 - row0 + 1;
  if (col1 - col0 + 1 != n || omega.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::InvalidDomain, "spectral check needs a square block region");
  }

  double worst = 0.0;
  Eigen::VectorXd mode(static_cast<Eigen::Index>(omega.size()));
  for (int p = 1; p <= n; ++p) {
    for (int q = 1; q <= n; ++q) {
      for (std::size_t idx = 0; idx < omega.size(); ++idx) {
        const int a = omega[idx].row - row0 + 1;
        const int b = omega[idx].col - col0 + 1;
        mode[static_cast<Eigen::Index>(idx)] =
            std::sin(p * std::numbers::pi * a / (n + 1)) *
            std::sin(q * std::numbers::pi * b / (n + 1));
      }
      const double factor = std::pow(1.0 + dirichlet_eigenvalue(n, p, q), -k);
      const Eigen::VectorXd expected = factor * mode;
      const Eigen::VectorXd got = fact.solve_k(mode, k);
      worst = std::max(worst, (got - expected).norm() / expected.norm());
    }
  }
  return worst;
}

}  // namespace nsinpaint
