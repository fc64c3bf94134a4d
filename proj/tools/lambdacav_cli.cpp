// lambdacav: steady-state sweeps of a driven Lambda atom in an optical cavity.
//
//   lambdacav spectrum --set epsilon=2 --out spectrum.csv
//   lambdacav response --set C=250 --workers 4
//   lambdacav rcurve --config run.cfg
//   lambdacav probe --set epsilon=0

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lambdacav/run.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out;
  unsigned workers = 0;
  int fock_max = 0;
  std::vector<std::string> sets;
};

void add_options(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config_path, "key = value run configuration (or a manifest)")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opts.out, "CSV output path; the manifest goes to <out>.manifest");
  sub->add_option("--workers", opts.workers, "worker threads for grid points")->check(CLI::PositiveNumber);
  sub->add_option("--fock-max", opts.fock_max, "maximum Fock truncation N_max")
      ->check(CLI::Range(2, lambdacav::TruncationPolicy::kHardCap));
  sub->add_option("--set", opts.sets, "key=value override (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state simulator for a driven three-level Lambda atom in an optical cavity"};
  app.require_subcommand(1);
  Options opts;
  for (const char* name : {"spectrum", "response", "rcurve", "probe"}) {
    add_options(app.add_subcommand(name, std::string("run a ") + name + " computation"), opts);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const auto subcommand = lambdacav::parse_subcommand(app.get_subcommands().front()->get_name());
    std::string text;
    if (!opts.config_path.empty()) {
      std::ifstream in(opts.config_path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    std::vector<lambdacav::Override> overrides;
    for (const std::string& s : opts.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << s << "'\n";
        return 2;
      }
      overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!opts.out.empty()) overrides.emplace_back("out", opts.out);
    if (opts.workers > 0) overrides.emplace_back("workers", std::to_string(opts.workers));
    if (opts.fock_max > 0) overrides.emplace_back("N_max", std::to_string(opts.fock_max));

    const lambdacav::RunConfig config = lambdacav::parse_config(text, subcommand, overrides);
    return lambdacav::run(config, std::cout);
  } catch (const lambdacav::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
