#include <CLI11.hpp>

#include <iostream>

#include "app.hpp"
#include "sobtri/error.hpp"

int main(int argc, char** argv) {
  using namespace sobtri;
  CLI::App app{"Decaying solutions of the Poincare-Sobolev equation on a right triangle"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  bool svg = false;
  bool print_config = false;
  app.add_option("-c,--config", config_path, "key=value config file");
  app.add_option("-s,--set", overrides, "override one key, e.g. --set alpha=0.7")->take_all();
  app.add_option("-o,--output", output, "output directory (overrides 'output')");
  app.add_flag("--svg", svg, "also write SVG renderings of the CSVs");
  app.add_flag("--print-config", print_config, "print the effective config and exit");
  app.fallthrough();
  for (const auto& c : cli::commands()) app.add_subcommand(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    for (const auto& s : overrides) cfg.set(s);
    if (!output.empty()) cfg.set("output=" + output, "--output");
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kExitConfig;
  }
  if (print_config) {
    std::cout << cfg.serialize();
    return cli::kExitOk;
  }
  return cli::run(app.get_subcommands().front()->get_name(), cfg, svg, std::cout, std::cerr);
}
