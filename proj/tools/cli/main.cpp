#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  using namespace kppfront::cli;
  CLI::App app{"Forced-speed KPP front laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out = "out";
  int workers = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "key = value config file with [sections]");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--workers", workers, "worker threads for sweeps (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose", verbose, "progress on stderr");
  const std::map<std::string, std::string> blurbs = {
      {"eigen", "principal eigenvalue, c* and the truncated limit"},
      {"front", "traveling front by pseudo-transient Newton"},
      {"evolve", "time-march the moving-frame equation"},
      {"illustrate", "lambda(L) ladder and the threshold L*"},
      {"symmetry", "tail exponents and the mirror-symmetry verdict"},
      {"concentrate", "penalized fronts against the Dirichlet strip front"},
      {"pulsate", "Floquet eigenvalue and the pulsating front"},
      {"sweep", "eigenvalue and outcome over a range of speeds"},
  };
  for (const auto& name : command_names()) app.add_subcommand(name, blurbs.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Config cfg = config_path.empty() ? Config::empty() : Config::load(config_path);
    Options opts;
    opts.out = out;
    opts.workers = workers;
    opts.verbose = verbose;
    const int code = run_command(app.get_subcommands().front()->get_name(), cfg, opts);
    if (code == 3) std::fprintf(stderr, "kppfront: outcome undecided; rerun with a longer horizon\n");
    return code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kppfront: %s\n", e.what());
    return exit_code_for(e);
  }
}
