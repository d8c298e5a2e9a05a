#include "nsinpaint/bbs_baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <string>

#include "nsinpaint/energy_gradient.hpp"
#include "nsinpaint/error.hpp"

namespace nsinpaint {

namespace {

double laplacian_at(const GrayImage& im, int r, int c) {
  return im.at(r + 1, c) + im.at(r - 1, c) + im.at(r, c + 1) + im.at(r, c - 1) - 4.0 * im.at(r, c);
}

// Centred derivative of Lap I along (dr, dc).
double lap_derivative(const GrayImage& im, int r, int c, int dr, int dc) {
  const double ahead = laplacian_at(im, r + dr, c + dc);
  const double behind = laplacian_at(im, r - dr, c - dc);
  return 0.5 * (ahead - behind);
}

// Upwind |grad I| for I' = beta |grad I|: one-sided differences are
// clipped according to the sign of beta.
double upwind_gradient_norm(const GrayImage& im, int r, int c, double beta) {
  const double centre = im.at(r, c);
  const double back_r = centre - im.at(r - 1, c);
  const double fwd_r = im.at(r + 1, c) - centre;
  const double back_c = centre - im.at(r, c - 1);
  const double fwd_c = im.at(r, c + 1) - centre;
  auto sq = [](double v) { return v * v; };
  if (beta > 0.0) {
    return std::sqrt(sq(std::min(back_r, 0.0)) + sq(std::max(fwd_r, 0.0)) +
                     sq(std::min(back_c, 0.0)) + sq(std::max(fwd_c, 0.0)));
  }
  return std::sqrt(sq(std::max(back_r, 0.0)) + sq(std::min(fwd_r, 0.0)) +
                   sq(std::max(back_c, 0.0)) + sq(std::min(fwd_c, 0.0)));
}

void check_finite(const GrayImage& im, const InpaintDomain& domain) {
  for (const Pixel& p : domain.omega()) {
    if (!std::isfinite(im.at(p.row, p.col))) {
      throw Error(ErrorCode::NonFiniteValues, "BBS evolution produced non-finite values");
    }
  }
}

}  // namespace

void BbsConfig::validate() const {
  if (diffusion_every < 1) throw Error(ErrorCode::InvalidArgument, "diffusion_every must be >= 1");
  if (diffusion_steps < 0 || init_diffusion_steps < 0) {
    throw Error(ErrorCode::InvalidArgument, "diffusion step counts must be >= 0");
  }
  if (!(pm_k > 0.0)) throw Error(ErrorCode::InvalidArgument, "pm_k must be positive");
  if (!(pm_dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "pm_dt must be positive");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (max_iters < 0) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 0");
}

double perona_malik_conductivity(double gradient_norm, double k) {
  return std::exp(-gradient_norm / k);
}

double cfl_time_step(const GrayImage& image, const InpaintDomain& domain) {
  double max_grad = 0.0;
  for (const Pixel& p : domain.omega()) {
    const double g1 = 0.5 * (image.at(p.row + 1, p.col) - image.at(p.row - 1, p.col));
    const double g2 = 0.5 * (image.at(p.row, p.col + 1) - image.at(p.row, p.col - 1));
    max_grad = std::max(max_grad, std::hypot(g1, g2));
  }
  return 0.9 / (4.0 * max_grad + 1e-12);
}

Eigen::VectorXd transport_rate(const GrayImage& image, const InpaintDomain& domain,
                               ConvectionLimiter limiter) {
  const auto& omega = domain.omega();
  Eigen::VectorXd rate(static_cast<Eigen::Index>(omega.size()));
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const int r = omega[k].row, c = omega[k].col;
    const double d1 = 0.5 * (image.at(r + 1, c) - image.at(r - 1, c));
    const double d2 = 0.5 * (image.at(r, c + 1) - image.at(r, c - 1));
    // F = v . grad(Lap I) with v = (D2 I, -D1 I).
    const double v1 = d2, v2 = -d1;
    const double l1 = lap_derivative(image, r, c, 1, 0);
    const double l2 = lap_derivative(image, r, c, 0, 1);
    double value = v1 * l1 + v2 * l2;
    if (limiter == ConvectionLimiter::Upwind) {
      // beta |grad I| with beta the slope of Lap I along v / |v|.
      const double speed = std::hypot(v1, v2);
      const double beta = speed > 0.0 ? value / speed : 0.0;
      value = beta * upwind_gradient_norm(image, r, c, beta);
    }
    rate[static_cast<Eigen::Index>(k)] = value;
  }
  return rate;
}

GrayImage bbs_step(const GrayImage& image, const InpaintDomain& domain, const BbsConfig& cfg) {
  const double dt = cfg.dt > 0.0 ? cfg.dt : cfl_time_step(image, domain);
  return bbs_step(image, domain, cfg, dt);
}

GrayImage bbs_step(const GrayImage& image, const InpaintDomain& domain, const BbsConfig& cfg,
                   double dt) {
  const Eigen::VectorXd rate = transport_rate(image, domain, cfg.limiter);
  GrayImage out = image;
  const auto& omega = domain.omega();
  for (std::size_t k = 0; k < omega.size(); ++k) {
    out.at(omega[k].row, omega[k].col) += dt * rate[static_cast<Eigen::Index>(k)];
  }
  check_finite(out, domain);
  return out;
}

GrayImage perona_malik_pass(const GrayImage& image, const InpaintDomain& domain,
                            const BbsConfig& cfg) {
  return perona_malik_pass(image, domain, cfg, cfg.diffusion_steps);
}

GrayImage perona_malik_pass(const GrayImage& image, const InpaintDomain& domain,
                            const BbsConfig& cfg, int steps) {
  static constexpr int kNeighbours[4][2] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};
  GrayImage current = image;
  const auto& omega = domain.omega();
  std::vector<double> update(omega.size());
  for (int s = 0; s < steps; ++s) {
    for (std::size_t k = 0; k < omega.size(); ++k) {
      const int r = omega[k].row, c = omega[k].col;
      const double centre = current.at(r, c);
      double flux = 0.0;
      for (const auto& nb : kNeighbours) {
        const double diff = current.at(r + nb[0], c + nb[1]) - centre;
        flux += perona_malik_conductivity(std::abs(diff), cfg.pm_k) * diff;
      }
      update[k] = cfg.pm_dt * flux;
    }
    for (std::size_t k = 0; k < omega.size(); ++k) current.at(omega[k].row, omega[k].col) += update[k];
    check_finite(current, domain);
  }
  return current;
}

SolveResult bbs_run(const GrayImage& image, const InpaintDomain& domain, const OperatorSet& ops,
                    const BbsConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    if (!cfg.record_timing) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  SolveResult result;
  result.stop = StopReason::MaxIters;
  GrayImage current = cfg.init_diffusion_steps > 0
                          ? perona_malik_pass(image, domain, cfg, cfg.init_diffusion_steps)
                          : image;

  auto record = [&](int iter, double error, double step) {
    const Eigen::VectorXd u_prime = restrict(current, domain, Region::OmegaPrime);
    const EnergyState state = evaluate(ops, u_prime);
    if (!std::isfinite(state.energy)) {
      throw Error(ErrorCode::NonFiniteValues, "BBS residual is not finite");
    }
    TraceRecord rec;
    rec.iter = iter;
    rec.energy = state.energy;
    rec.residual2 = state.residual_norm2();
    rec.error = error;
    rec.step = step;
    if (state.energy > 0.0) {
      const Eigen::VectorXd u0 = restrict(current, domain, Region::Omega);
      rec.kappa = gradient_el(ops, state).norm() * u0.norm() / state.energy;
    }
    rec.wall_ms = elapsed_ms();
    result.trace.records.push_back(rec);
    if (cfg.log_every > 0 && iter % cfg.log_every == 0) {
      std::clog << "bbs iter " << iter << " energy " << rec.energy << " error " << error
                << " dt " << step << '\n';
    }
  };

  record(0, 0.0, 0.0);
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const double dt = cfg.dt > 0.0 ? cfg.dt : cfl_time_step(current, domain);
    GrayImage next = bbs_step(current, domain, cfg, dt);
    if (iter % cfg.diffusion_every == 0 && cfg.diffusion_steps > 0) {
      next = perona_malik_pass(next, domain, cfg);
    }
    double error = 0.0;
    for (const Pixel& p : domain.omega()) {
      error = std::max(error, std::abs(next.at(p.row, p.col) - current.at(p.row, p.col)));
    }
    current = std::move(next);
    record(iter, error, dt);
    if (error < cfg.tol) {
      result.stop = StopReason::Converged;
      break;
    }
  }
  result.image = std::move(current);
  return result;
}

}  // namespace nsinpaint
