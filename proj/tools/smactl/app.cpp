#include "smactl/app.hpp"

#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sma/errors.hpp"
#include "smactl/commands.hpp"
#include "smactl/settings.hpp"

namespace smactl {

namespace {

struct FlagSpec {
  const char* names;
  const char* key;
  const char* help;
};

const std::vector<FlagSpec> kCommonFlags = {
    {"--n", "n", "vector length"},
    {"--p", "p", "per-sign connection probability"},
    {"--c1", "c1", "middle-layer threshold"},
    {"--c2", "c2", "output-layer threshold"},
    {"--rn,--r", "rn", "target output weight r_n"},
    {"--gamma", "gamma", "p = n^-gamma"},
    {"--trials", "trials", "trials per grid point"},
    {"--seed", "seed", "master seed (integer, hex or 'random')"},
    {"--out", "out", "output directory"},
    {"--threads", "threads", "worker threads (0 = hardware)"},
};

const std::vector<FlagSpec> kExperimentFlags = {
    {"--allocator", "allocator", "neural or select-flip"},
    {"--densities", "densities", "comma-separated input densities"},
    {"--distances", "distances", "comma-separated distances L"},
    {"--fresh", "fresh", "fresh allocator per trial (true/false)"},
    {"--kappa", "kappa", "select-flip flip fraction"},
};

const std::vector<FlagSpec> kBoundsFlags = {
    {"--b", "b", "output distance B_n"},
    {"--delta", "delta", "stability deviation"},
    {"--mu", "mu", "continuity constant"},
    {"--lambda", "lambda", "orthogonality input gap"},
    {"--eps", "eps", "error probability or deviation"},
    {"--slack", "slack", "vanishing-sequence stand-in"},
    {"--m", "m", "input weight"},
    {"--wx", "wx", "weight of x"},
    {"--wy", "wy", "weight of y"},
    {"--overlap", "overlap", "|x & y|"},
    {"--c", "c", "divisive threshold"},
    {"--eta", "eta", "coordinate disagreement rate"},
    {"--s0", "s0", "minimum input density"},
    {"--z0", "z0", "constant in mu_n"},
    {"--t", "t", "continuity multiplier"},
    {"--a", "a", "orthogonality input gap fraction"},
    {"--distance", "distance", "input distance in the continuity bound"},
    {"--log-base", "log-base", "logarithm base (default e)"},
};

const std::vector<FlagSpec> kDatadepFlags = {
    {"--b", "b", "output distance B_n"},
    {"--items", "items", "number of stored items"},
    {"--attempts", "attempts", "total draw budget"},
    {"--density", "density", "item density"},
};

struct Sub {
  explicit Sub(CLI::App* a) : app(a) {}

  CLI::App* app;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> values;
  std::string preset;
  std::string config;
};

void add_flags(Sub& sub, const std::vector<FlagSpec>& flags) {
  for (const auto& f : flags) {
    sub.options[f.key] = sub.app->add_option(f.names, sub.values[f.key], f.help);
  }
}

void add_common(Sub& sub) {
  add_flags(sub, kCommonFlags);
  sub.app->add_option("--preset", sub.preset, "paper-fig1a or paper-fig1b");
  sub.app->add_option("--config", sub.config, "manifest or key=value file");
}

Settings resolve(const std::string& command, const Sub& sub) {
  Settings s = command_defaults(command);
  if (!sub.preset.empty()) s = merge(s, preset_settings(sub.preset));
  if (!sub.config.empty()) s = merge(s, read_config_file(sub.config));
  Settings flags;
  for (const auto& [key, opt] : sub.options) {
    if (opt->count() > 0) flags[key] = sub.values.at(key);
  }
  return merge(s, flags);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable memory allocators: simulation, bounds and verification", "smactl"};
  app.set_version_flag("--version", std::string(SMACTL_VERSION));
  app.require_subcommand(1);

  Sub stability{app.add_subcommand("stability", "layer densities across input densities")};
  Sub expansion{app.add_subcommand("expansion", "expansion rate across input distances")};
  Sub bounds{app.add_subcommand("bounds", "evaluate a theorem or lemma")};
  Sub verify{app.add_subcommand("verify", "run an acceptance suite")};
  Sub datadep{app.add_subcommand("datadep", "search a data-dependent orthogonal map")};
  for (Sub* s : {&stability, &expansion, &bounds, &verify, &datadep}) add_common(*s);
  add_flags(stability, kExperimentFlags);
  add_flags(expansion, kExperimentFlags);
  add_flags(bounds, kBoundsFlags);
  add_flags(datadep, kDatadepFlags);

  std::string bound_name;
  bool json = false;
  bounds.app->add_option("name", bound_name, "theorem1..theorem5, lemma1..lemma4, network")->required();
  bounds.app->add_flag("--json", json, "emit a JSON document");
  std::string suite;
  verify.app->add_option("suite", suite, "lemmas, selectflip, neural, datadep or all")->required();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << SMACTL_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const CommandIo io{out, err};
  try {
    if (stability.app->parsed()) return cmd_stability(resolve("stability", stability), io);
    if (expansion.app->parsed()) return cmd_expansion(resolve("expansion", expansion), io);
    if (bounds.app->parsed()) return cmd_bounds(bound_name, resolve("bounds", bounds), json, io);
    if (verify.app->parsed()) return cmd_verify(suite, resolve("verify", verify), io);
    if (datadep.app->parsed()) return cmd_datadep(resolve("datadep", datadep), io);
  } catch (const sma::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace smactl
