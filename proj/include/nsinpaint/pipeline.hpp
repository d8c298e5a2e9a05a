#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsinpaint/bbs_baseline.hpp"
#include "nsinpaint/error.hpp"
#include "nsinpaint/fd_operators.hpp"
#include "nsinpaint/flow_solver.hpp"
#include "nsinpaint/grid_domain.hpp"

namespace nsinpaint {

enum class Method { El, H1, H2, H3, Bbs, LaplaceOnly };

std::string_view to_string(Method method) noexcept;
/// Accepts el, h1, h2, h3, bbs, laplace-only. Throws InvalidArgument.
Method parse_method(std::string_view name);

struct MethodOptions {
  SolverConfig solver;
  BbsConfig bbs;
};

/// Everything derived from (image, mask) that all methods share: the domain,
/// the operators, the preconditioner and the harmonic initialization.
struct Problem {
  InpaintDomain domain;
  OperatorSet ops;
  PreconditionerFactorization fact;
  GrayImage initial;
};

Problem prepare_problem(const GrayImage& image, const Mask& mask, const SolverConfig& cfg);

/// Runs one method from problem.initial. LaplaceOnly returns the harmonic
/// fill with a one-row trace.
SolveResult run_method(const Problem& problem, Method method, const MethodOptions& options);

/// Nearest-neighbour expansion followed by inpainting of the new pixels. The
/// expanded image is padded by replication so that the region keeps its
/// distance from the border; the padding is cropped off again.
SolveResult interpolate(const GrayImage& image, int factor, Method method,
                        const MethodOptions& options);

struct CompareEntry {
  Method method;
  SolveResult result;
};

/// Methods run by `compare`, in summary order.
inline constexpr Method kCompareMethods[] = {Method::Bbs, Method::El, Method::H1, Method::H3};

/// Runs kCompareMethods on the same problem, at most `threads` at a time.
std::vector<CompareEntry> compare_methods(const Problem& problem, const MethodOptions& options,
                                          int threads);

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<CompareEntry>& entries);

enum class Mode { Inpaint, Interpolate, Compare };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitDomain = 3,
  kExitNoConvergence = 4,
};

struct RunSpec {
  Mode mode = Mode::Inpaint;
  std::filesystem::path input;
  std::filesystem::path mask;
  int factor = 2;
  Method method = Method::H1;
  std::filesystem::path output;
  std::optional<std::filesystem::path> trace;
  std::filesystem::path out_dir;
  /// Caps compare-mode parallelism; 0 reads INPAINT_THREADS or uses the
  /// hardware concurrency.
  int threads = 0;
  MethodOptions options;
};

int exit_code_for(ErrorCode code) noexcept;

/// load -> extract_domain -> harmonic_init -> method -> write. Errors are
/// reported on `log` and mapped to exit codes.
int run(const RunSpec& spec, std::ostream& log);

}  // namespace nsinpaint
