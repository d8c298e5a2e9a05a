#include "nsinpaint/fd_operators.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include <Eigen/SparseCholesky>

#include "nsinpaint/error.hpp"

namespace nsinpaint {

namespace stencils {

Stencil d1() { return {{-1, 0, -0.5}, {1, 0, 0.5}}; }

Stencil d2() { return {{0, -1, -0.5}, {0, 1, 0.5}}; }

Stencil laplacian() {
  return {{0, -1, 1.0}, {-1, 0, 1.0}, {0, 0, -4.0}, {1, 0, 1.0}, {0, 1, 1.0}};
}

Stencil compose(const Stencil& outer, const Stencil& inner) {
  // Keyed (dcol, drow) so iteration order is the natural (column-major) one.
  std::map<std::pair<int, int>, double> taps;
  for (const StencilTap& o : outer) {
    for (const StencilTap& i : inner) {
      taps[{o.dcol + i.dcol, o.drow + i.drow}] += o.coeff * i.coeff;
    }
  }
  Stencil out;
  for (const auto& [offset, coeff] : taps) {
    if (coeff != 0.0) out.push_back({offset.second, offset.first, coeff});
  }
  return out;
}

}  // namespace stencils

std::string_view to_string(OperatorName name) noexcept {
  switch (name) {
    case OperatorName::D1: return "D1";
    case OperatorName::D2: return "D2";
    case OperatorName::Lap: return "Lap";
    case OperatorName::D1Lap: return "D1Lap";
    case OperatorName::D2Lap: return "D2Lap";
  }
  return "?";
}

Eigen::VectorXd RestrictedOperator::apply(const Eigen::VectorXd& v) const {
  if (v.size() != matrix_.cols()) {
    throw Error(ErrorCode::LengthMismatch,
                std::string(to_string(name_)) + " expects an omega-prime vector");
  }
  return matrix_ * v;
}

Eigen::VectorXd RestrictedOperator::apply_adjoint(const Eigen::VectorXd& w) const {
  if (w.size() != matrix_.rows()) {
    throw Error(ErrorCode::LengthMismatch,
                std::string(to_string(name_)) + "^T expects an omega vector");
  }
  return matrix_.transpose() * w;
}

SparseMatrix restrict_stencil(const Stencil& stencil, const InpaintDomain& domain) {
  const auto& omega = domain.omega();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(omega.size() * stencil.size());
  for (std::size_t r = 0; r < omega.size(); ++r) {
    const Pixel& p = omega[r];
    for (const StencilTap& tap : stencil) {
      const int col = domain.prime_index(p.row + tap.drow, p.col + tap.dcol);
      if (col < 0) {
        throw Error(ErrorCode::InvalidDomain,
                    "stencil tap outside omega-prime at (" + std::to_string(p.row + tap.drow) +
                        "," + std::to_string(p.col + tap.dcol) + ")");
      }
      triplets.emplace_back(static_cast<int>(r), col, tap.coeff);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(omega.size()),
                 static_cast<Eigen::Index>(domain.omega_prime_size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

OperatorSet build_operators(const InpaintDomain& domain) {
  if (domain.omega_size() == 0) {
    throw Error(ErrorCode::InvalidDomain, "empty inpainting region");
  }
  const Stencil lap = stencils::laplacian();
  return OperatorSet{
      RestrictedOperator(OperatorName::D1, restrict_stencil(stencils::d1(), domain)),
      RestrictedOperator(OperatorName::D2, restrict_stencil(stencils::d2(), domain)),
      RestrictedOperator(OperatorName::Lap, restrict_stencil(lap, domain)),
      RestrictedOperator(OperatorName::D1Lap,
                         restrict_stencil(stencils::compose(stencils::d1(), lap), domain)),
      RestrictedOperator(OperatorName::D2Lap,
                         restrict_stencil(stencils::compose(stencils::d2(), lap), domain)),
      domain.omega_in_prime(),
  };
}

SparseMatrix shifted_dirichlet_laplacian(const InpaintDomain& domain) {
  static constexpr int kNeighbours[4][2] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};
  const auto& omega = domain.omega();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(omega.size() * 5);
  for (std::size_t r = 0; r < omega.size(); ++r) {
    const Pixel& p = omega[r];
    triplets.emplace_back(static_cast<int>(r), static_cast<int>(r), 5.0);
    for (const auto& nb : kNeighbours) {
      const int c = domain.omega_index(p.row + nb[0], p.col + nb[1]);
      if (c >= 0) triplets.emplace_back(static_cast<int>(r), c, -1.0);
    }
  }
  const auto n = static_cast<Eigen::Index>(omega.size());
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

struct PreconditionerFactorization::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

PreconditionerFactorization::PreconditionerFactorization(const InpaintDomain& domain)
    : matrix_(shifted_dirichlet_laplacian(domain)), impl_(std::make_unique<Impl>()) {
  impl_->llt.compute(matrix_);
  if (impl_->llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization of (I - Lap) failed");
  }
}

PreconditionerFactorization::~PreconditionerFactorization() = default;
PreconditionerFactorization::PreconditionerFactorization(PreconditionerFactorization&&) noexcept =
    default;
PreconditionerFactorization& PreconditionerFactorization::operator=(
    PreconditionerFactorization&&) noexcept = default;

Eigen::VectorXd PreconditionerFactorization::solve(const Eigen::VectorXd& y) const {
  if (y.size() != matrix_.rows()) {
    throw Error(ErrorCode::LengthMismatch, "preconditioner expects an omega vector");
  }
  return impl_->llt.solve(y);
}

Eigen::VectorXd PreconditionerFactorization::solve_k(const Eigen::VectorXd& y, int k) const {
  if (k < 1 || k > 3) {
    throw Error(ErrorCode::InvalidArgument, "Sobolev order must be 1, 2 or 3");
  }
  Eigen::VectorXd x = solve(y);
  for (int i = 1; i < k; ++i) x = impl_->llt.solve(x);
  return x;
}

Eigen::VectorXd PreconditionerFactorization::apply_power(const Eigen::VectorXd& x, int k) const {
  if (x.size() != matrix_.rows()) {
    throw Error(ErrorCode::LengthMismatch, "preconditioner expects an omega vector");
  }
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative power");
  Eigen::VectorXd y = x;
  for (int i = 0; i < k; ++i) y = matrix_ * y;
  return y;
}

PreconditionerFactorization factor_preconditioner(const InpaintDomain& domain) {
  if (domain.omega_size() == 0) {
    throw Error(ErrorCode::InvalidDomain, "empty inpainting region");
  }
  return PreconditionerFactorization(domain);
}

}  // namespace nsinpaint
