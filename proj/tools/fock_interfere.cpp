#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "fock/matrix_functions.hpp"
#include "fock/scenario.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& format_override, long long seed_override) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file " << config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  try {
    fock::ScenarioConfig config = fock::ScenarioConfig::parse(buffer.str());
    if (!format_override.empty()) {
      if (format_override != "csv" && format_override != "json") {
        std::cerr << "error: --format must be csv or json\n";
        return 2;
      }
      config.format = format_override;
    }
    if (seed_override >= 0) {
      if (!config.shots) {
        std::cerr << "error: --seed given but the config has no sampling block\n";
        return 2;
      }
      config.seed = static_cast<std::uint64_t>(seed_override);
    }
    const auto path = fock::run_scenario(config, out_dir);
    std::cout << path.string() << "\n";
    return 0;
  } catch (const fock::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fock::dimension_cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {  // parameter outside its physical domain
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_bench_permanent(int max_n, int threads, const std::string& out_path) {
  if (max_n < 2 || max_n > 30) {
    std::cerr << "error: --max-n must lie in [2, 30]\n";
    return 2;
  }
  std::ostringstream report;
  report << "n,seconds,abs_permanent\n";
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int n = 2; n <= max_n; ++n) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = fock::cxd(uniform(rng), uniform(rng));
    const auto start = std::chrono::steady_clock::now();
    const fock::cxd value = fock::permanent_ryser(m, threads);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report << n << ',' << fock::format_double(elapsed.count()) << ','
           << fock::format_double(std::abs(value)) << "\n";
    std::cerr << "n = " << n << ": " << elapsed.count() << " s\n";
  }
  if (out_path.empty()) {
    std::cout << report.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 1;
    }
    out << report.str();
    std::cout << out_path << "\n";
  }
  return 0;
}

int cmd_list_scenarios() {
  for (const auto& [name, scenario] : fock::scenario_registry())
    std::cout << name << "  -  " << scenario.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fock-interfere: exact few-particle interference and lattice dynamics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format_override;
  long long seed_override = -1;
  auto* run = app.add_subcommand("run", "execute a scenario config file");
  run->add_option("config", config_path, "path to the JSON config")->required();
  run->add_option("--out", out_dir, "directory for relative output paths");
  run->add_option("--format", format_override, "override the output format (csv|json)");
  run->add_option("--seed", seed_override, "override the sampling seed");

  int max_n = 20, threads = 1;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "performance reports");
  auto* bench_perm = bench->add_subcommand("permanent", "time the permanent against matrix size");
  bench_perm->add_option("--max-n", max_n, "largest matrix size");
  bench_perm->add_option("--threads", threads, "worker threads (result is thread-count independent)");
  bench_perm->add_option("--out", bench_out, "write the CSV report to this file");

  auto* list = app.add_subcommand("list-scenarios", "print the scenario registry");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, out_dir, format_override, seed_override);
  if (bench->parsed() && bench_perm->parsed()) return cmd_bench_permanent(max_n, threads, bench_out);
  if (list->parsed()) return cmd_list_scenarios();
  std::cerr << app.help();
  return 2;
}
