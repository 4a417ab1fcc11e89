#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cfw/error.hpp"
#include "cfw/lmo.hpp"
#include "cfw/run_config.hpp"
#include "cfw/runner.hpp"
#include "cfw/trace_io.hpp"

namespace fs = std::filesystem;

namespace {

int solve_command(const std::string& path, const std::vector<std::string>& overrides) {
  try {
    cfw::RunConfig config = cfw::load_config(path);
    for (const auto& s : overrides) cfw::apply_setting(config, s);
    return cfw::run(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

std::size_t suite_threads(std::size_t jobs) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CFW_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) threads = std::min<std::size_t>(threads, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring CFW_THREADS='" << env << "'\n";
    }
  }
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

// Each *.cfg in dir runs independently; its trace goes next to it as <stem>.trace.csv.
int suite_command(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    std::cerr << "error: not a directory: " << dir << '\n';
    return 1;
  }
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    std::cerr << "error: no .cfg files in " << dir << '\n';
    return 1;
  }

  std::vector<int> codes(configs.size(), 1);
  std::vector<std::string> lines(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      std::ostringstream out, err;
      try {
        cfw::RunConfig config = cfw::load_config(configs[i].string());
        fs::path trace = configs[i];
        trace.replace_extension(".trace.csv");
        config.output_path = trace.string();
        codes[i] = cfw::run(config, out, err);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        codes[i] = 1;
      }
      std::string text = out.str() + err.str();
      while (!text.empty() && text.back() == '\n') text.pop_back();
      lines[i] = configs[i].filename().string() + ": exit=" + std::to_string(codes[i]) + " " + text;
    }
  };
  const std::size_t n_threads = suite_threads(configs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& line : lines) std::cout << line << '\n';
  if (std::find(codes.begin(), codes.end(), 1) != codes.end()) return 1;
  if (std::find(codes.begin(), codes.end(), 2) != codes.end()) return 2;
  return 0;
}

std::shared_ptr<const cfw::LinearMinimizationOracle> make_domain(const std::string& domain, cfw::Index n) {
  using namespace cfw;
  if (domain == "simplex") return std::make_shared<SimplexOracle>(n);
  if (domain == "l1") return std::make_shared<L1BallOracle>(n, 1.0);
  if (domain == "ksparse") return std::make_shared<KSparseOracle>(n, std::max<Index>(1, n / 4), 1.0);
  if (domain == "birkhoff") return std::make_shared<BirkhoffOracle>(n);
  if (domain == "l2") return std::make_shared<L2BallOracle>(Vector::Zero(n), 1.0);
  if (domain == "box") return std::make_shared<BoxOracle>(Vector::Constant(n, -1.0), Vector::Ones(n));
  throw Error(ErrorCode::InvalidArgument, "unknown domain '" + domain + "'");
}

// LMO answer must be feasible and no worse than any sampled feasible point.
int lmo_check_command(const std::string& domain, long n, std::uint64_t seed, int trials) {
  try {
    if (n < 1) throw cfw::Error(cfw::ErrorCode::InvalidArgument, "n must be positive");
    auto lmo = make_domain(domain, n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    int failures = 0;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      cfw::Vector d(lmo->dimension());
      for (auto& x : d) x = normal(rng);
      const cfw::Atom v = lmo->minimize(d);
      const cfw::Vector vd = v.to_dense();
      const double value = d.dot(vd);
      bool ok = lmo->contains(vd, 1e-9);
      for (int s = 0; s < 20; ++s) {
        const cfw::Vector p = cfw::sample_feasible_point(*lmo, rng);
        const double excess = value - d.dot(p);
        worst = std::max(worst, excess);
        if (excess > 1e-9 * (1.0 + std::abs(value))) ok = false;
      }
      if (!ok) ++failures;
    }
    std::cout << "domain=" << domain << " n=" << n << " seed=" << seed << " trials=" << trials
              << " failures=" << failures << " worst_excess=" << cfw::format_double(worst) << '\n';
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int trace_validate_command(const std::string& path) {
  try {
    const auto records = cfw::read_trace_file(path);
    const auto problems = cfw::validate_trace(records);
    std::map<std::string, std::size_t> kinds;
    for (const auto& r : records) ++kinds[std::string(cfw::to_string(r.step_kind))];
    for (const auto& p : problems) std::cerr << path << ": " << p << '\n';
    std::cout << path << ": rows=" << records.size();
    for (const auto& [k, count] : kinds) std::cout << ' ' << k << '=' << count;
    std::cout << (problems.empty() ? " ok" : " invalid") << '\n';
    return problems.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corrective Frank-Wolfe benchmark runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* solve = app.add_subcommand("solve", "Run one configuration and write its trace");
  solve->add_option("config", config_path, "Run configuration file")->required();
  solve->add_option("--set", overrides, "Override a key, as key=value");

  std::string suite_dir;
  auto* suite = app.add_subcommand("suite", "Run every .cfg file in a directory");
  suite->add_option("dir", suite_dir, "Directory of configuration files")->required();

  std::string domain;
  long n = 6;
  std::uint64_t seed = 0;
  int trials = 50;
  auto* lmo_check = app.add_subcommand("lmo-check", "Check an LMO against sampled feasible points");
  lmo_check->add_option("domain", domain, "simplex | l1 | ksparse | birkhoff | l2 | box")->required();
  lmo_check->add_option("--n", n, "Dimension (side length for birkhoff)");
  lmo_check->add_option("--seed", seed, "RNG seed");
  lmo_check->add_option("--trials", trials, "Random directions to test");

  std::string csv;
  auto* validate = app.add_subcommand("trace-validate", "Parse and check a trace CSV");
  validate->add_option("csv", csv, "Trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*solve) return solve_command(config_path, overrides);
  if (*suite) return suite_command(suite_dir);
  if (*lmo_check) return lmo_check_command(domain, n, seed, trials);
  if (*validate) return trace_validate_command(csv);
  return 1;
}
