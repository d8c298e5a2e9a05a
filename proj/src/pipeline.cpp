#include "nsinpaint/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <exception>
#include <thread>

#include "nsinpaint/energy_gradient.hpp"
#include "nsinpaint/error.hpp"
#include "nsinpaint/image_io.hpp"

namespace nsinpaint {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::El: return "el";
    case Method::H1: return "h1";
    case Method::H2: return "h2";
    case Method::H3: return "h3";
    case Method::Bbs: return "bbs";
    case Method::LaplaceOnly: return "laplace-only";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::El, Method::H1, Method::H2, Method::H3, Method::Bbs,
                   Method::LaplaceOnly}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

Problem prepare_problem(const GrayImage& image, const Mask& mask, const SolverConfig& cfg) {
  InpaintDomain domain = extract_domain(image, mask);
  OperatorSet ops = build_operators(domain);
  PreconditionerFactorization fact = factor_preconditioner(domain);
  GrayImage initial = harmonic_init(image, domain, cfg);
  return Problem{std::move(domain), std::move(ops), std::move(fact), std::move(initial)};
}

SolveResult run_method(const Problem& problem, Method method, const MethodOptions& options) {
  SolverConfig cfg = options.solver;
  switch (method) {
    case Method::El: cfg.gradient_kind = GradientKind::euler_lagrange(); break;
    case Method::H1: cfg.gradient_kind = GradientKind::sobolev(1); break;
    case Method::H2: cfg.gradient_kind = GradientKind::sobolev(2); break;
    case Method::H3: cfg.gradient_kind = GradientKind::sobolev(3); break;
    case Method::Bbs: return bbs_run(problem.initial, problem.domain, problem.ops, options.bbs);
    case Method::LaplaceOnly: {
      // A zero-iteration descent yields exactly the one-row trace we want.
      cfg.gradient_kind = GradientKind::euler_lagrange();
      cfg.max_iters = 0;
      SolveResult r = minimize(problem.initial, problem.domain, problem.ops, problem.fact, cfg);
      r.stop = StopReason::Converged;
      return r;
    }
  }
  return minimize(problem.initial, problem.domain, problem.ops, problem.fact, cfg);
}

SolveResult interpolate(const GrayImage& image, int factor, Method method,
                        const MethodOptions& options) {
  const Expansion expanded = expand_nearest(image, factor);
  const GrayImage padded = pad_replicate(expanded.image, kBorderMargin);
  const Mask padded_mask = pad_mask(expanded.mask, kBorderMargin);
  const Problem problem = prepare_problem(padded, padded_mask, options.solver);
  SolveResult r = run_method(problem, method, options);
  r.image = crop(r.image, kBorderMargin, kBorderMargin, expanded.image.height(),
                 expanded.image.width());
  return r;
}

std::vector<CompareEntry> compare_methods(const Problem& problem, const MethodOptions& options,
                                          int threads) {
  constexpr std::size_t n = std::size(kCompareMethods);
  std::vector<std::optional<SolveResult>> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t i) {
    try {
      results[i] = run_method(problem, kCompareMethods[i], options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t width = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t begin = 0; begin < n; begin += width) {
    std::vector<std::jthread> batch;
    for (std::size_t i = begin; i < std::min(n, begin + width); ++i) batch.emplace_back(work, i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<CompareEntry> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({kCompareMethods[i], std::move(*results[i])});
  return out;
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<CompareEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "method,iterations,stop_reason,initial_residual2,final_residual2\n";
  char line[256];
  for (const CompareEntry& e : entries) {
    const auto& recs = e.result.trace.records;
    std::snprintf(line, sizeof line, "%s,%d,%s,%.17g,%.17g\n",
                  std::string(to_string(e.method)).c_str(), e.result.trace.iterations(),
                  std::string(to_string(e.result.stop)).c_str(),
                  recs.empty() ? 0.0 : recs.front().residual2,
                  recs.empty() ? 0.0 : recs.back().residual2);
    out << line;
  }
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::AllZeroImage:
      return kExitIo;
    case ErrorCode::EmptyMask:
    case ErrorCode::MaskTouchesBorder:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidDomain:
      return kExitDomain;
    case ErrorCode::InvalidArgument:
    case ErrorCode::FactorTooSmall:
    case ErrorCode::LengthMismatch:
      return kExitUsage;
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::SorDidNotConverge:
    case ErrorCode::NonFiniteEnergy:
    case ErrorCode::NonFiniteValues:
    case ErrorCode::StepUnderflow:
    case ErrorCode::ZeroEnergy:
      return kExitNoConvergence;
  }
  return kExitUsage;
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("INPAINT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string image_extension(const std::filesystem::path& input) {
  std::string ext = input.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" ? ".png" : ".pgm";
}

int finish(const SolveResult& r, const RunSpec& spec, std::ostream& log) {
  save_image(spec.output, r.image);
  if (spec.trace) write_trace_csv(*spec.trace, r.trace);
  log << to_string(spec.method) << ": " << r.trace.iterations() << " iterations, "
      << to_string(r.stop) << '\n';
  return r.stop == StopReason::Converged ? kExitOk : kExitNoConvergence;
}

int run_unchecked(const RunSpec& spec, std::ostream& log) {
  switch (spec.mode) {
    case Mode::Inpaint: {
      const GrayImage image = load_image(spec.input);
      const Mask mask = load_mask(spec.mask);
      const Problem problem = prepare_problem(image, mask, spec.options.solver);
      return finish(run_method(problem, spec.method, spec.options), spec, log);
    }
    case Mode::Interpolate: {
      if (spec.factor < 2 || spec.factor > 4) {
        throw Error(ErrorCode::FactorTooSmall, "interpolation factor must be 2, 3 or 4");
      }
      const GrayImage image = load_image(spec.input);
      return finish(interpolate(image, spec.factor, spec.method, spec.options), spec, log);
    }
    case Mode::Compare: {
      const GrayImage image = load_image(spec.input);
      const Mask mask = load_mask(spec.mask);
      const Problem problem = prepare_problem(image, mask, spec.options.solver);
      std::filesystem::create_directories(spec.out_dir);
      const auto entries = compare_methods(problem, spec.options, resolve_threads(spec.threads));
      const std::string ext = image_extension(spec.input);
      bool all_converged = true;
      for (const CompareEntry& e : entries) {
        const std::string name(to_string(e.method));
        save_image(spec.out_dir / (name + ext), e.result.image);
        write_trace_csv(spec.out_dir / (name + "_trace.csv"), e.result.trace);
        log << name << ": " << e.result.trace.iterations() << " iterations, "
            << to_string(e.result.stop) << '\n';
        all_converged = all_converged && e.result.stop == StopReason::Converged;
      }
      write_summary_csv(spec.out_dir / "summary.csv", entries);
      return all_converged ? kExitOk : kExitNoConvergence;
    }
  }
  return kExitUsage;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& log) {
  try {
    return run_unchecked(spec, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace nsinpaint
