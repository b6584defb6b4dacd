// hyperam: hypercomplex-valued recurrent correlation network experiments.
//
//   hyperam <dynamics|energy-trace|image-recall|verify>
//           [--config <path>] [--out <dir>] [--seed <u64>] [--check <name>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hyperam/commands.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string check;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int dispatch(hyperam::ExperimentKind kind, const Options& opt) {
  using namespace hyperam;
  try {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
      cfg = load_config(opt.config_path);
    } else if (kind == ExperimentKind::verify) {
      cfg = preset("verify_default");
    } else {
      std::cerr << "error: --config is required for this command\n";
      return kExitUsage;
    }
    if (cfg.kind != kind) {
      std::cerr << "error: config kind '" << to_string(cfg.kind)
                << "' does not match the subcommand\n";
      return kExitUsage;
    }
    if (opt.seed_given) cfg.seed = opt.seed;
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (!opt.check.empty()) cfg.single_check = opt.check;
    return run_command(cfg, cfg.out_dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << opt.config_path << ":" << e.line << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypercomplex-valued recurrent correlation network experiments"};
  app.require_subcommand(1);

  Options opt;
  hyperam::ExperimentKind kind = hyperam::ExperimentKind::verify;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "experiment config file");
    sub->add_option("--out", opt.out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", opt.seed, "seed override")->each([&](const std::string&) {
      opt.seed_given = true;
    });
  };

  CLI::App* dyn = app.add_subcommand("dynamics", "exhaustive state-graph analysis");
  add_common(dyn);
  dyn->callback([&] { kind = hyperam::ExperimentKind::dynamics; });

  CLI::App* energy = app.add_subcommand("energy-trace", "energy evolution experiments");
  add_common(energy);
  energy->callback([&] { kind = hyperam::ExperimentKind::energy_trace; });

  CLI::App* recall = app.add_subcommand("image-recall", "gray-scale recall experiments");
  add_common(recall);
  recall->callback([&] { kind = hyperam::ExperimentKind::image_recall; });

  CLI::App* verify = app.add_subcommand("verify", "algebra and activation property suite");
  add_common(verify);
  verify->add_option("--check", opt.check, "run only checks whose id contains this string");
  verify->callback([&] { kind = hyperam::ExperimentKind::verify; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hyperam::kExitUsage;
  }
  return dispatch(kind, opt);
}
