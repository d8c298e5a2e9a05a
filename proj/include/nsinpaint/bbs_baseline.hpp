#pragma once

#include "nsinpaint/fd_operators.hpp"
#include "nsinpaint/flow_solver.hpp"
#include "nsinpaint/grid_domain.hpp"

namespace nsinpaint {

/// Discretization of the convection term grad(Lap I) along the isophotes.
///  - Central: centred differences throughout (the same stencils as F).
///  - Upwind: the rate is written beta |grad I| with beta the slope of Lap I
///    along the unit isophote direction; |grad I| is built from one-sided
///    differences clipped by the sign of beta. Stable at the CFL step, unlike
///    Central, which can blow up.
enum class ConvectionLimiter { Central, Upwind };

/// Explicit transport I' = F(I) on omega with periodic Perona-Malik passes.
struct BbsConfig {
  /// Time step; <= 0 selects the CFL-style step 0.9 / (4 max|grad I|)
  /// recomputed every iteration.
  double dt = 0.0;
  int diffusion_every = 50;
  int diffusion_steps = 5;
  /// Edge threshold k in c = exp(-|grad I| / k), for unit-normalized images.
  double pm_k = 0.1;
  /// Explicit diffusion step; <= 0.25 keeps the maximum principle.
  double pm_dt = 0.2;
  ConvectionLimiter limiter = ConvectionLimiter::Upwind;
  int max_iters = 20000;
  double tol = 1e-4;
  /// Perona-Malik steps applied once before the evolution starts.
  int init_diffusion_steps = 0;
  bool record_timing = false;
  int log_every = 0;

  void validate() const;
};

/// c = exp(-gradient_norm / k), in (0, 1].
double perona_malik_conductivity(double gradient_norm, double k);

/// 0.9 / (4 max_omega |grad I| + tiny), gradients by centred differences.
double cfl_time_step(const GrayImage& image, const InpaintDomain& domain);

/// Pointwise transport rate on omega, in omega order. With Central this is
/// F(I) = D2 I * D1 Lap I - D1 I * D2 Lap I.
Eigen::VectorXd transport_rate(const GrayImage& image, const InpaintDomain& domain,
                               ConvectionLimiter limiter);

/// One explicit update I <- I + dt F(I) on omega. Uses cfg.dt, or the CFL
/// step when cfg.dt <= 0.
GrayImage bbs_step(const GrayImage& image, const InpaintDomain& domain, const BbsConfig& cfg);
GrayImage bbs_step(const GrayImage& image, const InpaintDomain& domain, const BbsConfig& cfg,
                   double dt);

/// cfg.diffusion_steps explicit steps of div(c grad I) on omega; fluxes are
/// evaluated on the edges between 4-neighbours.
GrayImage perona_malik_pass(const GrayImage& image, const InpaintDomain& domain,
                            const BbsConfig& cfg);
GrayImage perona_malik_pass(const GrayImage& image, const InpaintDomain& domain,
                            const BbsConfig& cfg, int steps);

/// Alternates bbs_step with a Perona-Malik pass every cfg.diffusion_every
/// iterations until max|I_{n+1} - I_n| < cfg.tol. The trace uses the same
/// residual and energy as the minimizers.
SolveResult bbs_run(const GrayImage& image, const InpaintDomain& domain, const OperatorSet& ops,
                    const BbsConfig& cfg);

}  // namespace nsinpaint
