#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nsinpaint/diagnostics.hpp"
#include "nsinpaint/energy_gradient.hpp"
#include "nsinpaint/fd_operators.hpp"
#include "nsinpaint/grid_domain.hpp"

namespace nsinpaint {

enum class LineSearchMethod { QuarticFit, GoldenSection, Backtracking };

struct LineSearchParams {
  LineSearchMethod method = LineSearchMethod::QuarticFit;
  double t_min = 1e-14;
  int max_expansions = 60;
  int golden_iters = 80;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
};

struct SolverConfig {
  GradientKind gradient_kind = GradientKind::sobolev(1);
  double tol = 1e-4;
  int max_iters = 20000;
  double sor_omega = 1.8;
  double sor_tol = 1e-8;
  int sor_max_iters = 50000;
  LineSearchParams line_search;
  /// Wall-clock times are written to the trace only when set; otherwise the
  /// column is zero and traces are bit-reproducible.
  bool record_timing = false;
  /// Adds a ConditionReport (all orders k = 0..3) for every iterate.
  bool record_conditions = false;
  ConditionFormula condition_formula = ConditionFormula::Rooted;
  /// Print a progress line every N iterations (0 disables).
  int log_every = 0;

  void validate() const;
};

struct TraceRecord {
  int iter = 0;
  double energy = 0.0;
  double residual2 = 0.0;
  double error = 0.0;
  double step = 0.0;
  double kappa = 0.0;
  double wall_ms = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  std::vector<ConditionReport> conditions;

  int iterations() const { return records.empty() ? 0 : records.back().iter; }
};

enum class StopReason { Converged, MaxIters, StepUnderflow };

std::string_view to_string(StopReason reason) noexcept;

struct SolveResult {
  GrayImage image;
  ConvergenceTrace trace;
  StopReason stop = StopReason::MaxIters;
};

/// Replaces the omega pixels with the SOR solution of the five-point Laplace
/// equation, using the surrounding pixels as Dirichlet data. Throws
/// SorDidNotConverge.
GrayImage harmonic_init(const GrayImage& image, const InpaintDomain& domain,
                        const SolverConfig& cfg);

struct LineSearchResult {
  double step = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Approximately minimizes phi(t) = E(u0 - t g) over t > 0, starting from the
/// bracket [0, initial_bracket]. `slope0` is phi'(0) (only used by
/// backtracking). Returns a step with phi(step) < phi0; throws StepUnderflow
/// if no step above params.t_min decreases phi.
LineSearchResult line_search(const std::function<double(double)>& phi, double phi0,
                             double slope0, double initial_bracket,
                             const LineSearchParams& params);

/// Explicit Euler descent u0 <- u0 - t_n g with a locally minimizing step,
/// stopped when max|u_{n+1} - u_n| < cfg.tol. Pixels outside omega are never
/// written.
SolveResult minimize(const GrayImage& image, const InpaintDomain& domain, const OperatorSet& ops,
                     const PreconditionerFactorization& fact, const SolverConfig& cfg);

}  // namespace nsinpaint
