#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "varcert/calculus.hpp"
#include "varcert/expr.hpp"
#include "varcert/variational.hpp"

namespace varcert::cli {

using nlohmann::json;

inline constexpr const char* kToolName = "varcert";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitMinimum = 0,
  kExitError = 1,
  kExitInconclusive = 2,
  kExitPrecondition = 3,
};

/// Malformed input: bad JSON, schema violations, unparsable expressions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<int> grid_n;
  std::optional<double> el_tol;
  std::optional<int> env_grid_n;  // VARCERT_GRID_N
  bool sobolev = false;
  std::uint64_t seed = 0;
  int modes = 8;
  int splines = 4;
  std::vector<double> ladder;  // empty means the default ladder
  std::optional<std::string> plot_data;
};

/// A problem file after parsing and validation.
///   {"integrand": "...", "interval": {"a": 0, "b": 1}, "extremal": "0",
///    "grid_n": 512, "el_tol": 1e-8,
///    "tables": {"A": {"a": 0, "b": 1, "values": [...], "slopes": [...]}}}
struct Problem {
  std::string integrand_text;
  std::string extremal_text;
  Integrand f;
  Extremal y0;
  Grid grid;
  double el_tol;
  std::vector<std::string> table_names;
};

/// Parses an expression field, turning a ParseError into an InputError that
/// points at the offending offset.
Expr parse_field(const std::string& source, const std::string& what, const TableSet* tables = nullptr);

/// Grid resolution order: command-line flag, problem file, environment, 512.
Problem load_problem(const json& doc, const Options& opts);
json read_json_file(const std::string& path);

struct CommandResult {
  json report;
  int exit_code = kExitMinimum;
  std::string diagnostic;  // for the error stream; empty on success
};

CommandResult run_certify(const json& problem, const Options& opts);
CommandResult run_compare(const json& problem, const Options& opts);
CommandResult run_verify(const json& problem, const Options& opts);

struct GenerateOptions {
  std::optional<std::uint64_t> corpus_seed;
  int corpus_count = 0;
  double corpus_a = 0.0;
  double corpus_b = 0.6;
};

/// Single spec mode builds one problem from `spec`; corpus mode ignores it.
CommandResult run_generate(const json& spec, const GenerateOptions& gen, const Options& opts);

/// Writes x,p,q,U for the problem to `path`. U is left blank when the
/// accessory equation is undefined.
void write_plot_data(const Problem& problem, const std::string& path);

}  // namespace varcert::cli
