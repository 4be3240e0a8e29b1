#ifndef BMC_RUN_HPP
#define BMC_RUN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmc/estimators.hpp"
#include "bmc/models.hpp"

namespace bmc {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSweepSchema = "bmc-sweep/1";

/// Invalid user input; the CLI maps it to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RunMethod { Exact, Scott, Congdon, Gibbs, Coupled };

std::string to_string(RunMethod method);
/// Parses a comma-separated method list such as "exact,scott,gibbs".
std::vector<RunMethod> parse_methods(const std::string& list);

/// Builds an example configuration from its name (ex1, ex2, ex3, ex3-three,
/// ex4) and named numeric parameters. Unknown names or parameters throw
/// UsageError; omitted parameters keep their defaults.
ExampleConfig make_example_config(const std::string& name,
                                  const std::map<std::string, double>& params);

/// Parses "key=value,key=value".
std::map<std::string, double> parse_params(const std::string& text);

/// `count` evenly spaced points from "min:max:count" (count >= 2, min < max).
std::vector<double> parse_grid(const std::string& spec);

/// Figure-range grid for an example: ex1 0.05..3 (60 points), ex2 -3..8
/// (56 points), ex3 every integer 0..n, ex4 -3..12 (61 points).
std::vector<double> default_grid(const ExampleConfig& config);

struct RunConfig {
  ExampleConfig example = Ex1Config{};
  std::vector<RunMethod> methods = {RunMethod::Exact};
  std::vector<double> y_values;
  bool default_grid = false;
  Eigen::Index T = 10000;
  std::uint64_t seed = 42;
  Eigen::Index burn_in = 0;
  /// Worker threads for grid points; 0 picks the hardware concurrency.
  unsigned jobs = 0;
};

/// Throws UsageError when the configuration is inconsistent.
void validate(const RunConfig& config);

/// Stream for (grid index, sampling scheme) under a master seed.
RandomStream point_stream(std::uint64_t seed, std::size_t y_index, RunMethod scheme);

struct SweepRow {
  double y = 0.0;
  std::optional<double> exact, scott, scott_se, congdon, congdon_se, gibbs, gibbs_se, coupled;
};

struct SweepTable {
  std::string example;
  std::string parameters;
  Eigen::Index T = 0;
  std::uint64_t seed = 0;
  Eigen::Index burn_in = 0;
  std::vector<RunMethod> methods;
  bool default_grid = false;
  std::vector<SweepRow> rows;
};

/// One estimate per requested method at a single observation. Scott and
/// Congdon share the same within-model draws.
std::vector<EstimateResult> run_estimate(const RunConfig& config, double y,
                                         std::size_t y_index = 0);

/// P(M = 1 | y) for every requested method over the grid. Rows are produced
/// in grid order regardless of evaluation order.
SweepTable run_sweep(const RunConfig& config);

/// CSV with '#' metadata lines, a header line and 17 significant digits.
void write_csv(std::ostream& os, const SweepTable& table);
void write_csv(const std::filesystem::path& path, const SweepTable& table);

struct FigureSpec {
  std::string file_name;
  RunConfig config;
};

inline constexpr std::uint64_t kFigureSeed = 20080101;

/// Every figure panel with caption parameters and sample sizes. A positive
/// `T_override` replaces all sample sizes.
std::vector<FigureSpec> figure_specs(std::uint64_t seed = kFigureSeed,
                                     Eigen::Index T_override = 0);

/// Writes one CSV per figure panel into `dir` and returns the paths.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir,
                                                 std::uint64_t seed = kFigureSeed,
                                                 Eigen::Index T_override = 0, unsigned jobs = 0);

}  // namespace bmc

#endif  // BMC_RUN_HPP
