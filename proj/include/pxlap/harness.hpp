#ifndef PXLAP_HARNESS_HPP
#define PXLAP_HARNESS_HPP

#include <pxlap/counting.hpp>
#include <pxlap/eigensolver.hpp>
#include <pxlap/lambda_star.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pxlap
{

enum class Command
{
  norm,
  eig,
  spectrum,
  count,
  verify,
  lambda_star
};

char const *to_string(Command command);
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);

enum class OutputFormat
{
  csv,
  json
};

/// Malformed configuration or usage. Maps to exit code 1.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs. Each field has a key of the same name in the
/// config file (`key = value`, `#` starts a comment).
struct ExperimentConfig
{
  std::string domain = "interval 0 1"; // or "box x0 x1 y0 y1"
  std::size_t nodes = 257;
  std::size_t nodes_y = 0; // 0: same as nodes
  std::string exponent = "2";
  std::string exponent_file; // node samples; overrides exponent when set
  std::string boundary = "dirichlet"; // dirichlet | free
  std::string constraint = "balanced"; // free boundary only: balanced | odd | none

  int max_iter = 2000;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  int restarts = 5;

  std::string function = "sin(pi*x)"; // norm
  std::string source = "auto"; // spectrum and count: auto | oracle | nodal
  int j_max = 8;
  double lambda_min = 10.0;
  double lambda_max = 1000.0;
  std::size_t lambda_count = 40;
  double anchor = 0.0; // 0: lambda_min
  double cube_epsilon = 0.25; // cover accuracy for the cube counts
  std::size_t verify_cases = 200;

  double t_max = 0.1;
  double t_min = 1e-6;
  std::size_t t_count = 6;
  double bump_x = 0.5;
  double bump_y = 0.5;
  double bump_plateau = 0.2;
  double bump_ramp = 0.05;

  std::string out; // empty: write to stdout
  OutputFormat format = OutputFormat::csv;
};

/// Sets one key from its text form. Throws ConfigError.
void set_config_value(ExperimentConfig &config, std::string_view key, std::string_view value);

/// Applies `key = value` lines on top of `config`.
void parse_config_text(ExperimentConfig &config, std::string_view text);
void load_config_file(ExperimentConfig &config, std::string const &path);

/// All keys with their current values, in the config file syntax.
std::string config_to_text(ExperimentConfig const &config);

/// Throws ConfigError on invalid values (resolution < 17, tol <= 0, missing
/// files, unparsable domain).
void validate(ExperimentConfig const &config);

/// Formatted cells, one row per sample.
struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest text that reads back to the same double.
std::string format_number(double x);

/// Comma delimited with a header row.
std::string to_csv(Table const &table);

/// lambda, N, lower, upper, fitted_exponent.
Table counting_table(CountingReport const &report);
std::string counting_json(CountingReport const &report);

/// Runs one command. The report goes to `out` (or to files under
/// config.out), diagnostics to `err`. Returns 0 on success, 1 on a
/// configuration error and 2 when a checked invariant fails.
int run(Command command, ExperimentConfig const &config, std::ostream &out, std::ostream &err);

} // namespace pxlap

#endif
