#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "specode/io.hpp"
#include "specode/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral coding simulator for multiplexed biphotons"};
  app.set_version_flag("--version", specode::version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  for (const auto& name : specode::subcommands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " stage");
    sub->add_option("-c,--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
    sub->add_flag("-q,--quiet", quiet, "do not print the summary");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : specode::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::ifstream in(config_path);
  std::stringstream buf;
  buf << in.rdbuf();

  const specode::RunResult r = specode::run_command(command, buf.str(), out_dir);
  if (!r.error.empty()) std::cerr << "specode " << command << ": " << r.error << '\n';
  if (!quiet && !r.summary.empty()) std::cout << r.summary << '\n';
  return r.exit_code;
}
