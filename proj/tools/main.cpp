// Command line front end: parses arguments, loads the text config, hands the
// run to the core dispatcher, prints per-check verdict lines.
//
// Exit status: 0 when no check FAILs, 1 on FAIL verdicts, 2 on validation or
// usage errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "disloc/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 42;
  int workers = 0;
  std::string taus;
  std::string select;
  std::string inject_fault;
  int samples = 200;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path,
                              "key-value text configuration file");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir,
                  "output directory for report.json and CSV traces");
  cmd->add_option("--seed", args.seed, "seed for randomized probes");
  cmd->add_option("--workers", args.workers,
                  "parallel worker budget (default: DISLOC_WORKERS or cores)");
}

int print_and_status(const disloc::RunReport& report) {
  for (const auto& c : report.checks)
    std::cout << "[" << disloc::verdict_name(c.verdict) << "] " << c.name
              << ": " << c.detail << "\n";
  if (!report.artifacts.empty()) {
    std::cout << "artifacts:";
    for (const auto& a : report.artifacts) std::cout << " " << a;
    std::cout << "\n";
  }
  return report.any_fail() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dislocation-space toolkit: profile decomposition, cocompact "
               "embedding checks, and invariant isoperimetric minimization "
               "on lattice discretizations"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {
      "decompose", "minimize", "subadd", "verify-axioms",
      "flask",     "symmetry", "cocompact"};
  std::map<std::string, CommonArgs> args;
  for (const auto& name : commands) {
    auto* cmd = app.add_subcommand(name);
    const bool needs_config = name != "verify-axioms";
    add_common(cmd, args[name], needs_config);
    if (name == "subadd")
      cmd->add_option("--taus", args[name].taus,
                      "comma separated constraint splits in (0, t)");
    if (name == "verify-axioms") {
      cmd->add_option("--select", args[name].select,
                      "comma separated suite names (default: all)");
      cmd->add_option("--samples", args[name].samples,
                      "random draws per randomized suite");
      cmd->add_option("--inject-fault", args[name].inject_fault,
                      "test hook: break an axiom on purpose (action-scale)")
          ->group("");
    }
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const CommonArgs& a = args[command];

  try {
    disloc::RunConfig rc;
    rc.command = command;
    rc.seed = a.seed;
    rc.workers = a.workers;
    rc.out_dir = a.out_dir;
    if (!a.config_path.empty())
      rc.config = disloc::Config::parse_file(a.config_path);

    if (command == "subadd" && !a.taus.empty()) {
      std::string token;
      std::istringstream ss(a.taus);
      while (std::getline(ss, token, ','))
        if (!token.empty()) rc.taus.push_back(std::stod(token));
    }
    if (command == "verify-axioms") {
      // Command line switches append after any config file; later keys win.
      std::string text = rc.config.raw();
      text += "\n[axioms]\n";
      text += "samples = " + std::to_string(a.samples) + "\n";
      if (!a.select.empty()) {
        std::string sel = a.select;
        for (char& c : sel)
          if (c == ',') c = ' ';
        text += "select = " + sel + "\n";
      }
      if (!a.inject_fault.empty())
        text += "inject_fault = " + a.inject_fault + "\n";
      rc.config = disloc::Config::parse_string(text);
    }

    const disloc::RunReport report = disloc::run(rc);
    return print_and_status(report);
  } catch (const disloc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
