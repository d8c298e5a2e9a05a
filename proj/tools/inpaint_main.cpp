// Command-line driver: inpaint, interpolate and compare subcommands.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nsinpaint/pipeline.hpp"

using namespace nsinpaint;

namespace {

void add_solver_options(CLI::App* cmd, RunSpec& spec, std::string& line_search,
                        std::string& limiter, bool& unrooted) {
  auto& s = spec.options.solver;
  auto& b = spec.options.bbs;
  cmd->add_option("--tol", s.tol, "stop when max|u_{n+1} - u_n| < tol")->capture_default_str();
  cmd->add_option("--max-iters", s.max_iters, "iteration limit")->capture_default_str();
  cmd->add_option("--sor-omega", s.sor_omega, "SOR relaxation for the Laplace fill")
      ->capture_default_str();
  cmd->add_option("--sor-tol", s.sor_tol)->capture_default_str();
  cmd->add_option("--line-search", line_search, "quartic, golden or backtracking")
      ->capture_default_str();
  cmd->add_option("--bbs-dt", b.dt, "BBS time step (<= 0: CFL step)")->capture_default_str();
  cmd->add_option("--bbs-limiter", limiter, "central or upwind")->capture_default_str();
  cmd->add_option("--diffusion-every", b.diffusion_every)->capture_default_str();
  cmd->add_option("--diffusion-steps", b.diffusion_steps)->capture_default_str();
  cmd->add_option("--pm-k", b.pm_k, "Perona-Malik edge threshold")->capture_default_str();
  cmd->add_option("--pm-dt", b.pm_dt)->capture_default_str();
  cmd->add_option("--init-diffusion", b.init_diffusion_steps,
                  "Perona-Malik steps before the BBS evolution")
      ->capture_default_str();
  cmd->add_flag("--timing", s.record_timing, "record wall-clock times in the trace");
  cmd->add_flag("--unrooted-kappa", unrooted,
                "un-rooted gradient inner product in the condition number");
  cmd->add_option("--log-every", s.log_every, "progress line every N iterations");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes inpainting by Sobolev gradient descent"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string method = "h1";
  std::string line_search = "quartic";
  std::string limiter = "upwind";
  bool unrooted = false;
  std::string output, trace, input, mask, out_dir;

  auto* inpaint = app.add_subcommand("inpaint", "fill the masked region of an image");
  inpaint->add_option("--input", input, "PGM or PNG image")->required();
  inpaint->add_option("--mask", mask, "nonzero pixels are inpainted")->required();
  inpaint->add_option("--method", method, "el, h1, h2, h3, bbs or laplace-only")
      ->capture_default_str();
  inpaint->add_option("--output", output)->required();
  inpaint->add_option("--trace", trace, "trace CSV");
  add_solver_options(inpaint, spec, line_search, limiter, unrooted);

  auto* interp = app.add_subcommand("interpolate", "enlarge an image and inpaint the new pixels");
  interp->add_option("--input", input)->required();
  interp->add_option("--factor", spec.factor)->check(CLI::IsMember({2, 3, 4}))->required();
  interp->add_option("--method", method)->capture_default_str();
  interp->add_option("--output", output)->required();
  interp->add_option("--trace", trace);
  add_solver_options(interp, spec, line_search, limiter, unrooted);

  auto* compare = app.add_subcommand("compare", "run bbs, el, h1 and h3 on the same problem");
  compare->add_option("--input", input)->required();
  compare->add_option("--mask", mask)->required();
  compare->add_option("--out-dir", out_dir)->required();
  compare->add_option("--threads", spec.threads, "parallel runs (default: INPAINT_THREADS)");
  add_solver_options(compare, spec, line_search, limiter, unrooted);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  static const std::map<std::string, LineSearchMethod> kLineSearch = {
      {"quartic", LineSearchMethod::QuarticFit},
      {"golden", LineSearchMethod::GoldenSection},
      {"backtracking", LineSearchMethod::Backtracking}};
  static const std::map<std::string, ConvectionLimiter> kLimiter = {
      {"central", ConvectionLimiter::Central}, {"upwind", ConvectionLimiter::Upwind}};
  try {
    spec.method = parse_method(method);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  if (!kLineSearch.count(line_search) || !kLimiter.count(limiter)) {
    std::cerr << "unknown --line-search or --bbs-limiter value\n";
    return kExitUsage;
  }
  spec.options.solver.line_search.method = kLineSearch.at(line_search);
  spec.options.bbs.limiter = kLimiter.at(limiter);
  spec.options.solver.condition_formula =
      unrooted ? ConditionFormula::Unrooted : ConditionFormula::Rooted;
  spec.options.bbs.tol = spec.options.solver.tol;
  spec.options.bbs.max_iters = spec.options.solver.max_iters;
  spec.options.bbs.record_timing = spec.options.solver.record_timing;
  spec.options.bbs.log_every = spec.options.solver.log_every;

  spec.input = input;
  spec.mask = mask;
  spec.output = output;
  spec.out_dir = out_dir;
  if (!trace.empty()) spec.trace = trace;
  if (*inpaint) spec.mode = Mode::Inpaint;
  if (*interp) spec.mode = Mode::Interpolate;
  if (*compare) spec.mode = Mode::Compare;

  return run(spec, std::cerr);
}
