// aiedge: command-line front end for the tiered edge inference simulator.
//
//   aiedge run <scenario.yaml> [--seed N] [--out DIR] [--workload FILE] [--quiet]
//   aiedge sweep <sweep.yaml> [--seed N] [--out DIR] [--quiet]
//   aiedge validate <scenario.yaml> [--print]
//   aiedge dump-workload <scenario.yaml> [--seed N] [--out FILE]
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.
// AIEDGE_OUT_DIR overrides the output directory when --out is not given.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aiedge/aiedge.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::filesystem::path output_dir(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("AIEDGE_OUT_DIR"); env && *env) return env;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for tiered edge AI inference"};
  app.require_subcommand(1);

  std::string path, out, workload_file;
  std::optional<std::uint64_t> seed;
  bool quiet = false, print = false;

  auto* run = app.add_subcommand("run", "simulate one scenario and write its artifacts");
  run->add_option("scenario", path, "scenario YAML file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out, "output directory");
  run->add_option("--workload", workload_file, "replay a workload CSV instead of generating one");
  run->add_flag("--quiet", quiet, "do not print the summary table");

  auto* sweep = app.add_subcommand("sweep", "run every point of a parameter sweep");
  sweep->add_option("sweep", path, "sweep YAML file")->required();
  sweep->add_option("--seed", seed, "override the seed of every point");
  sweep->add_option("--out", out, "output directory");
  sweep->add_flag("--quiet", quiet, "do not print summary tables");

  auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
  validate->add_option("scenario", path, "scenario YAML file")->required();
  validate->add_flag("--print", print, "print the fully expanded scenario");

  auto* dump = app.add_subcommand("dump-workload", "write the generated request stream as CSV");
  dump->add_option("scenario", path, "scenario YAML file")->required();
  dump->add_option("--seed", seed, "override the scenario seed");
  dump->add_option("--out", out, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      aiedge::Scenario sc = aiedge::parse_scenario(path);
      if (seed) sc.seed = *seed;
      const auto dir = output_dir(out, sc.output.dir);
      aiedge::RunResult r;
      if (workload_file.empty()) {
        r = aiedge::run(sc);
      } else {
        std::ifstream in(workload_file);
        if (!in) throw aiedge::ConfigError("", 0, "cannot read workload '" + workload_file + "'");
        r = aiedge::run(sc, aiedge::read_workload(in));
      }
      aiedge::write_artifacts(r, sc.output, dir);
      if (!quiet) aiedge::print_summary_table(std::cout, r.report);
    } else if (*sweep) {
      aiedge::SweepSpec spec = aiedge::parse_sweep(path);
      if (seed)
        for (auto& p : spec.points) p.scenario.seed = *seed;
      aiedge::run_sweep(spec, output_dir(out, "out/" + spec.name), quiet ? nullptr : &std::cout);
    } else if (*validate) {
      const aiedge::Scenario sc = aiedge::parse_scenario(path);
      if (print) std::cout << aiedge::serialize_scenario(sc);
      else std::cout << path << ": ok\n";
    } else if (*dump) {
      aiedge::Scenario sc = aiedge::parse_scenario(path);
      if (seed) sc.seed = *seed;
      const auto requests = aiedge::generate_stream(sc.seed, sc.workload);
      if (out.empty()) {
        aiedge::write_workload(std::cout, requests);
      } else {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!f) throw aiedge::RuntimeError("cannot write '" + out + "'");
        aiedge::write_workload(f, requests);
      }
    }
  } catch (const aiedge::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
