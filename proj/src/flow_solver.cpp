#include "nsinpaint/flow_solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "nsinpaint/error.hpp"

namespace nsinpaint {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (!(sor_omega > 1.0 && sor_omega < 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "SOR relaxation must lie in (1, 2)");
  }
  if (!(sor_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "sor_tol must be positive");
  if (max_iters < 0 || sor_max_iters < 1) {
    throw Error(ErrorCode::InvalidArgument, "iteration limits must be positive");
  }
  if (!(line_search.t_min > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "t_min must be positive");
  }
}

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::StepUnderflow: return "step_underflow";
  }
  return "?";
}

GrayImage harmonic_init(const GrayImage& image, const InpaintDomain& domain,
                        const SolverConfig& cfg) {
  if (!image.same_shape(GrayImage(domain.height(), domain.width()))) {
    throw Error(ErrorCode::ShapeMismatch, "domain was extracted for a different shape");
  }
  if (!(cfg.sor_omega > 1.0 && cfg.sor_omega < 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "SOR relaxation must lie in (1, 2)");
  }
  GrayImage out = image;
  const auto& omega = domain.omega();
  for (int sweep = 0; sweep < cfg.sor_max_iters; ++sweep) {
    double max_update = 0.0;
    for (const Pixel& p : omega) {
      const double avg = 0.25 * (out.at(p.row - 1, p.col) + out.at(p.row + 1, p.col) +
                                 out.at(p.row, p.col - 1) + out.at(p.row, p.col + 1));
      double& u = out.at(p.row, p.col);
      const double update = cfg.sor_omega * (avg - u);
      u += update;
      max_update = std::max(max_update, std::abs(update));
    }
    if (!std::isfinite(max_update)) {
      throw Error(ErrorCode::NonFiniteValues, "SOR produced non-finite values");
    }
    if (max_update < cfg.sor_tol) return out;
  }
  throw Error(ErrorCode::SorDidNotConverge,
              "no convergence after " + std::to_string(cfg.sor_max_iters) + " sweeps");
}

namespace {

// phi evaluations keyed by t; the bracket search revisits the same points.
class PhiCache {
 public:
  PhiCache(const std::function<double(double)>& phi, double phi0) : phi_(phi) {
    values_[0.0] = phi0;
  }

  double operator()(double t) {
    auto it = values_.find(t);
    if (it != values_.end()) return it->second;
    const double v = phi_(t);
    ++evaluations_;
    values_.emplace(t, v);
    return v;
  }

  int evaluations() const { return evaluations_; }

 private:
  const std::function<double(double)>& phi_;
  std::map<double, double> values_;
  int evaluations_ = 0;
};

constexpr std::array<double, 5> kFitNodes = {0.0, 0.25, 0.5, 0.75, 1.0};

// Grows t_hat while phi is still decreasing at the right end of the bracket.
double expand_bracket(PhiCache& phi, double phi0, double t_hat, const LineSearchParams& params) {
  for (int i = 0; i < params.max_expansions; ++i) {
    const double right = phi(t_hat);
    if (!(right < phi0) || !(right < phi(0.75 * t_hat))) break;
    t_hat *= 2.0;
  }
  return t_hat;
}

// Minimizer on [0, 1] of the quartic through (kFitNodes, y). Returns NaN if
// the fit is not usable.
double quartic_fit_minimizer(const std::array<double, 5>& y) {
  Eigen::Matrix<double, 5, 5> vander;
  Eigen::Matrix<double, 5, 1> rhs;
  for (int i = 0; i < 5; ++i) {
    double power = 1.0;
    for (int j = 0; j < 5; ++j) {
      vander(i, j) = power;
      power *= kFitNodes[i];
    }
    rhs[i] = y[i] - y[0];
  }
  const Eigen::Matrix<double, 5, 1> c = vander.fullPivLu().solve(rhs);
  if (!c.allFinite()) return std::numeric_limits<double>::quiet_NaN();

  auto poly = [&](double s) { return (((c[4] * s + c[3]) * s + c[2]) * s + c[1]) * s + c[0]; };
  auto slope = [&](double s) {
    return ((4.0 * c[4] * s + 3.0 * c[3]) * s + 2.0 * c[2]) * s + c[1];
  };

  double best_s = 1.0;
  double best_val = poly(1.0);
  // Local minima are sign changes of the slope from - to +; the cubic slope
  // has at most three roots so a fine scan cannot miss a simple one.
  constexpr int kScan = 512;
  double left = 0.0;
  double left_slope = slope(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double right = static_cast<double>(i) / kScan;
    const double right_slope = slope(right);
    if (left_slope < 0.0 && right_slope >= 0.0) {
      double a = left, b = right;
      for (int it = 0; it < 100 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b);
        (slope(m) < 0.0 ? a : b) = m;
      }
      const double s = 0.5 * (a + b);
      const double v = poly(s);
      if (v < best_val) {
        best_val = v;
        best_s = s;
      }
    }
    left = right;
    left_slope = right_slope;
  }
  return best_s;
}

LineSearchResult quartic_search(PhiCache& phi, double phi0, double t_hat,
                                const LineSearchParams& params) {
  while (t_hat >= params.t_min) {
    t_hat = expand_bracket(phi, phi0, t_hat, params);
    std::array<double, 5> y{};
    double best_t = 0.0;
    double best_val = phi0;
    for (int i = 0; i < 5; ++i) {
      const double t = kFitNodes[i] * t_hat;
      y[i] = phi(t);
      if (y[i] < best_val) {
        best_val = y[i];
        best_t = t;
      }
    }
    const double s = quartic_fit_minimizer(y);
    if (std::isfinite(s) && s > 0.0) {
      const double t = s * t_hat;
      const double v = phi(t);
      if (v < best_val) {
        best_val = v;
        best_t = t;
      }
    }
    if (best_t > 0.0 && best_val < phi0) return {best_t, best_val, phi.evaluations()};
    t_hat *= 0.25;
  }
  throw Error(ErrorCode::StepUnderflow, "no step above t_min decreases the energy");
}

LineSearchResult golden_search(PhiCache& phi, double phi0, double t_hat,
                               const LineSearchParams& params) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  while (t_hat >= params.t_min) {
    t_hat = expand_bracket(phi, phi0, t_hat, params);
    double a = 0.0, b = t_hat;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = phi(c), fd = phi(d);
    double best_t = fc < fd ? c : d;
    double best_val = std::min(fc, fd);
    for (int i = 0; i < params.golden_iters; ++i) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = phi(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = phi(d);
      }
      if (fc < best_val) {
        best_val = fc;
        best_t = c;
      }
      if (fd < best_val) {
        best_val = fd;
        best_t = d;
      }
    }
    if (best_t > 0.0 && best_val < phi0) return {best_t, best_val, phi.evaluations()};
    t_hat *= 0.25;
  }
  throw Error(ErrorCode::StepUnderflow, "no step above t_min decreases the energy");
}

LineSearchResult backtracking_search(PhiCache& phi, double phi0, double slope0, double t,
                                     const LineSearchParams& params) {
  if (!(slope0 < 0.0)) {
    throw Error(ErrorCode::StepUnderflow, "direction is not a descent direction");
  }
  while (t >= params.t_min) {
    const double v = phi(t);
    if (v <= phi0 + params.armijo_c * t * slope0 && v < phi0) {
      return {t, v, phi.evaluations()};
    }
    t *= params.backtrack_factor;
  }
  throw Error(ErrorCode::StepUnderflow, "no step above t_min satisfies the Armijo condition");
}

}  // namespace

LineSearchResult line_search(const std::function<double(double)>& phi, double phi0,
                             double slope0, double initial_bracket,
                             const LineSearchParams& params) {
  if (!(initial_bracket > 0.0) || !std::isfinite(initial_bracket)) {
    throw Error(ErrorCode::InvalidArgument, "initial bracket must be positive");
  }
  PhiCache cache(phi, phi0);
  switch (params.method) {
    case LineSearchMethod::QuarticFit:
      return quartic_search(cache, phi0, initial_bracket, params);
    case LineSearchMethod::GoldenSection:
      return golden_search(cache, phi0, initial_bracket, params);
    case LineSearchMethod::Backtracking:
      return backtracking_search(cache, phi0, slope0, initial_bracket, params);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown line search method");
}

SolveResult minimize(const GrayImage& image, const InpaintDomain& domain, const OperatorSet& ops,
                     const PreconditionerFactorization& fact, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    if (!cfg.record_timing) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  const GradientKind kind = cfg.gradient_kind;
  const auto& omega_in_prime = ops.omega_in_prime;
  Eigen::VectorXd u_prime = restrict(image, domain, Region::OmegaPrime);
  Eigen::VectorXd u0 = restrict(image, domain, Region::Omega);

  SolveResult result;
  result.stop = StopReason::MaxIters;
  ConvergenceTrace& trace = result.trace;

  EnergyState state = evaluate(ops, u_prime);
  double prev_step = 0.0;
  double error = 0.0;

  for (int iter = 0;; ++iter) {
    if (!std::isfinite(state.energy)) {
      throw Error(ErrorCode::NonFiniteEnergy, "energy is not finite at iteration " +
                                                  std::to_string(iter));
    }
    const Eigen::VectorXd g_el = gradient_el(ops, state);
    const Eigen::VectorXd direction = precondition(g_el, fact, kind);
    if (!g_el.allFinite() || !direction.allFinite()) {
      throw Error(ErrorCode::NonFiniteEnergy, "gradient is not finite at iteration " +
                                                  std::to_string(iter));
    }

    TraceRecord rec;
    rec.iter = iter;
    rec.energy = state.energy;
    rec.residual2 = state.residual_norm2();
    rec.error = error;
    rec.step = prev_step;
    if (state.energy > 0.0) {
      const double inner = kind.is_sobolev() ? g_el.dot(direction) : g_el.squaredNorm();
      const double grad = cfg.condition_formula == ConditionFormula::Rooted
                              ? std::sqrt(std::max(0.0, inner))
                              : std::max(0.0, inner);
      rec.kappa = grad * hk_norm(u0, fact, kind.order()) / state.energy;
    }
    rec.wall_ms = elapsed_ms();
    trace.records.push_back(rec);
    if (cfg.record_conditions) {
      trace.conditions.push_back(
          condition_report(iter, u0, g_el, fact, state.energy, cfg.condition_formula));
    }
    if (cfg.log_every > 0 && iter % cfg.log_every == 0) {
      std::clog << "iter " << iter << " energy " << rec.energy << " error " << rec.error
                << " step " << rec.step << '\n';
    }

    if (state.energy == 0.0 || direction.isZero(0.0)) {
      result.stop = StopReason::Converged;
      break;
    }
    if (iter > 0 && error < cfg.tol) {
      result.stop = StopReason::Converged;
      break;
    }
    if (iter >= cfg.max_iters) {
      result.stop = StopReason::MaxIters;
      break;
    }

    const Eigen::VectorXd lifted = domain.lift(direction);
    auto phi = [&](double t) { return energy(ops, u_prime - t * lifted); };
    const double bracket =
        iter == 0 || prev_step <= 0.0 ? 1.0 / (1.0 + direction.lpNorm<Eigen::Infinity>())
                                      : 2.0 * prev_step;
    LineSearchResult ls;
    try {
      ls = line_search(phi, state.energy, -g_el.dot(direction), bracket, cfg.line_search);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepUnderflow) throw;
      // Energy at rounding level: even the first trial step would have moved
      // no pixel by tol, so the iterate is stationary to tolerance.
      const bool stationary = bracket * direction.lpNorm<Eigen::Infinity>() < cfg.tol;
      result.stop = stationary ? StopReason::Converged : StopReason::StepUnderflow;
      break;
    }

    error = 0.0;
    for (Eigen::Index k = 0; k < u0.size(); ++k) {
      const double next = u0[k] - ls.step * direction[k];
      error = std::max(error, std::abs(next - u0[k]));
      u0[k] = next;
      u_prime[omega_in_prime[static_cast<std::size_t>(k)]] = next;
    }
    prev_step = ls.step;
    state = evaluate(ops, u_prime);
  }

  result.image = scatter(u0, domain, image);
  return result;
}

}  // namespace nsinpaint
