#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "decent/cli/config.hpp"
#include "decent/cli/run.hpp"
#include "decent/error.hpp"
#include "decent/parallel.hpp"

namespace {

using decent::cli::Json;

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> flags;
  std::string config_file;
};

int run(const std::string& command, const Subcommand& sub, unsigned threads) {
  Json raw = Json::object();
  if (!sub.config_file.empty()) raw = decent::cli::load_config_file(sub.config_file, command);
  for (const auto& [key, value] : sub.flags) {
    if (sub.app->count("--" + key) > 0) raw[key] = value;
  }
  const auto config = decent::cli::resolve_config(command, raw);
  if (config.seed_generated) std::cerr << "decent: seed " << config.seed() << " (generated)\n";

  const auto start = std::chrono::steady_clock::now();
  const auto out = decent::cli::execute(config, threads);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = config.text("format") == "csv"
                               ? out.csv
                               : decent::cli::make_report(config, out.results, wall).dump(2) + "\n";
  const auto output = config.text("output");
  if (output.empty()) {
    std::cout << text;
    return 0;
  }
  const auto path = decent::cli::resolve_output_path(output);
  std::ofstream file(path, std::ios::binary);
  decent::require(file.good(), decent::ErrorKind::io, "cannot write '" + path + "'");
  file << text;
  decent::require(file.good(), decent::ErrorKind::io, "failed writing '" + path + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralization analysis toolkit for permissionless blockchains"};
  app.set_version_flag("--version", std::string(decent::cli::kVersion));
  app.require_subcommand(1);
  unsigned threads = decent::default_threads();
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  const std::map<std::string, std::string> descriptions{
      {"simulate", "reinvestment dynamics under a block lottery"},
      {"bound", "Monte Carlo estimate of the catch-up bound"},
      {"sweep", "bound estimates over an f x epsilon x rho grid"},
      {"metrics", "top-share subsets, Gini and entropy of a producer dataset"},
      {"check", "decentralization conditions for one model and state"},
      {"anchors", "real-world reference inputs for the bound"},
  };
  std::map<std::string, Subcommand> subs;
  for (const auto& name : decent::cli::commands()) {
    auto& sub = subs[name];
    sub.app = app.add_subcommand(name, descriptions.at(name));
    sub.app->add_option("--config", sub.config_file, "JSON config file or an earlier report");
    for (const auto& key : decent::cli::schema(name)) {
      std::string help = key.help + " (" + decent::cli::to_string(key.type);
      help += key.fallback.is_null() ? (key.name == "seed" ? ", generated if unset)" : ", required)")
                                     : ", default " + key.fallback.dump() + ")";
      sub.app->add_option("--" + key.name, sub.flags[key.name], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : decent::exit_code(decent::ErrorKind::config);
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (sub.app->parsed()) return run(name, sub, threads);
    }
  } catch (const decent::Error& e) {
    std::cerr << "decent: " << decent::to_string(e.kind()) << " error: " << e.what() << "\n";
    return decent::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "decent: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
