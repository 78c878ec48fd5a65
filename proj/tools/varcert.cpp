#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "varcert/cli.hpp"

namespace cli = varcert::cli;

namespace {

void add_common(CLI::App* sub, cli::Options& opts, std::string& input) {
  sub->add_option("--grid-n", opts.grid_n, "Grid intervals (even, >= 2)");
  sub->add_option("--el-tol", opts.el_tol, "Euler-Lagrange residual tolerance");
  sub->add_flag("--sobolev", opts.sobolev, "Add the K-extremum note to the report");
  sub->add_option("--plot-data", opts.plot_data, "Write x,p,q,U as CSV");
  sub->add_option("problem", input, "Problem file (JSON)")->required();
}

int emit(const cli::CommandResult& res) {
  std::cout << res.report.dump(2) << '\n';
  if (res.exit_code != cli::kExitMinimum && !res.diagnostic.empty()) std::cerr << "varcert: " << res.diagnostic << '\n';
  return res.exit_code;
}

int write_problems(const nlohmann::json& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const nlohmann::json& problem, const std::string& name) {
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
    out << problem.dump(2) << '\n';
  };
  if (report.contains("problems")) {
    char name[32];
    for (std::size_t i = 0; i < report["problems"].size(); ++i) {
      std::snprintf(name, sizeof name, "problem_%03zu.json", i);
      write(report["problems"][i]["problem"], name);
    }
  } else if (report.contains("problem")) {
    write(report["problem"], "problem.json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong-minimum certificates for one-dimensional variational problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::kVersion);

  cli::Options opts;
  std::string input;

  auto* certify = app.add_subcommand("certify", "Classify y0 by the length criterion");
  add_common(certify, opts, input);

  auto* compare = app.add_subcommand("compare", "Compare the length criterion with the conjugate point");
  add_common(compare, opts, input);

  auto* verify = app.add_subcommand("verify", "Probe the quadratic lower bound with perturbations");
  add_common(verify, opts, input);
  verify->add_option("--seed", opts.seed, "Seed for random spline perturbations");
  verify->add_option("--modes", opts.modes, "Number of sine modes")->check(CLI::NonNegativeNumber);
  verify->add_option("--splines", opts.splines, "Number of random splines")->check(CLI::NonNegativeNumber);
  verify->add_option("--ladder", opts.ladder, "Decreasing epsilon values, comma separated")->delimiter(',');

  cli::GenerateOptions gen;
  std::vector<std::uint64_t> corpus;
  std::vector<double> interval;
  std::string out_dir;
  auto* generate = app.add_subcommand("generate", "Build integrands with a prescribed minimum");
  generate->add_option("--grid-n", opts.grid_n, "grid_n written into emitted problems");
  generate->add_option("--corpus", corpus, "Sample a corpus: SEED COUNT")->expected(2);
  generate->add_option("--interval", interval, "Corpus interval: A,B (default 0,0.6)")->delimiter(',')->expected(2);
  generate->add_option("--out-dir", out_dir, "Also write each problem to its own file");
  generate->add_option("spec", input, "Generator spec file (JSON)");

  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("VARCERT_GRID_N"); env && *env) {
    int n = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, n);
    if (ec != std::errc{} || ptr != end) {
      std::cerr << "varcert: VARCERT_GRID_N is not an integer: " << env << '\n';
      return cli::kExitError;
    }
    opts.env_grid_n = n;
  }

  try {
    if (generate->parsed()) {
      if (!corpus.empty()) {
        gen.corpus_seed = corpus[0];
        gen.corpus_count = static_cast<int>(corpus[1]);
        if (!interval.empty()) {
          gen.corpus_a = interval[0];
          gen.corpus_b = interval[1];
        }
      } else if (input.empty()) {
        std::cerr << "varcert: generate needs a spec file or --corpus SEED COUNT\n";
        return cli::kExitError;
      }
      const auto spec = corpus.empty() ? cli::read_json_file(input) : nlohmann::json::object();
      const auto res = cli::run_generate(spec, gen, opts);
      const int code = emit(res);
      if (!out_dir.empty() && code != cli::kExitError) write_problems(res.report, out_dir);
      return code;
    }

    const auto problem = cli::read_json_file(input);
    if (certify->parsed()) return emit(cli::run_certify(problem, opts));
    if (compare->parsed()) return emit(cli::run_compare(problem, opts));
    return emit(cli::run_verify(problem, opts));
  } catch (const std::exception& e) {
    std::cerr << "varcert: " << e.what() << '\n';
    return cli::kExitError;
  }
}
