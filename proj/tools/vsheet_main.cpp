// vsheet: batch stability analysis of planar compressible elastic vortex
// sheets. Subcommands: check, scan, roots, map, oracle. Each takes a JSON
// config (--config) and an optional output path (--out); check and oracle
// default to standard output. Exit codes: 0 pass/stable, 1 analytic
// negative, 2 usage or config error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vsheet/commands.hpp"

namespace {

int run(const std::string& name, const std::string& config_path, const std::string& out_path,
        int threads) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << config_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  vsheet::RunConfig cfg;
  try {
    cfg = vsheet::parse_config_text(buf.str());
  } catch (const vsheet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (threads > 0) cfg.threads = threads;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output path: " << out_path << "\n";
      return 2;
    }
    out = &file;
  } else if (name == "scan" || name == "roots" || name == "map") {
    // CSV commands want a destination; stdout is still allowed.
    out = &std::cout;
  }

  try {
    if (name == "check") return vsheet::cmd_check(cfg, *out);
    if (name == "scan") return vsheet::cmd_scan(cfg, *out);
    if (name == "roots") return vsheet::cmd_roots(cfg, *out, std::cerr);
    if (name == "map") return vsheet::cmd_map(cfg, *out);
    if (name == "oracle") return vsheet::cmd_oracle(cfg, *out);
  } catch (const vsheet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const vsheet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear stability analyzer for planar elastic vortex sheets"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  int threads = 0;

  const char* log_env = std::getenv("VSHEET_LOG");
  if (log_env && std::string(log_env) == "debug")
    std::cerr << "vsheet: debug logging enabled\n";

  for (const char* name : {"check", "scan", "roots", "map", "oracle"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "path to the JSON run configuration")->required();
    sub->add_option("--out", out_path, "output path (default: standard output)");
    sub->add_option("--threads", threads, "worker thread hint for grid scans");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(app.get_subcommands().front()->get_name(), config_path, out_path, threads);
}
