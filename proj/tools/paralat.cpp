// paralat: discrete paracontrolled calculus on Bravais lattices.
// One subcommand per experiment; all knobs live in the config file.

#include <iostream>

#include "CLI11.hpp"
#include "paralat/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::string seeds;
  int threads = 0;
  bool dry_run = false;
};

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoull(tok));
  return out;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "experiment config file")->required();
  cmd->add_option("--out", args.out, "output directory (overrides config)");
  cmd->add_option("--seeds", args.seeds, "comma-separated seed override");
  cmd->add_option("--threads", args.threads, "worker count (default PARALAT_THREADS)");
  cmd->add_flag("--dry-run", args.dry_run, "validate the config and exit");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete paracontrolled calculus on Bravais lattices"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {
      "fourier-selftest", "besov-report",      "heat-smoothing", "renorm-scaling",
      "noise-enhancement", "pam-macro",        "pam-universality"};
  CommonArgs args;
  std::string chosen;
  for (const auto& k : kinds) {
    auto* cmd = app.add_subcommand(k, "run the " + k + " experiment");
    add_common(cmd, args);
    cmd->callback([&chosen, k] { chosen = k; });
  }

  std::string plot_dir, plot_metric, plot_out;
  auto* plot = app.add_subcommand("plotdata", "reshape results for plotting");
  plot->add_option("--results", plot_dir, "result directory (with MANIFEST.json)")
      ->required();
  plot->add_option("--metric", plot_metric, "metric name")->required();
  plot->add_option("--out", plot_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      if (plot_out.empty()) {
        paralat::plotdata(plot_dir, plot_metric, std::cout);
      } else {
        std::ofstream out(plot_out);
        paralat::plotdata(plot_dir, plot_metric, out);
      }
      return 0;
    }
    paralat::ExperimentConfig cfg = paralat::load_config(args.config);
    if (cfg.kind.empty()) cfg.kind = chosen;
    if (cfg.kind != chosen) {
      std::cerr << "experiment.kind: config declares '" << cfg.kind
                << "' but subcommand is '" << chosen << "'\n";
      return 2;
    }
    paralat::RunOptions opt;
    if (!args.out.empty()) opt.out = args.out;
    if (!args.seeds.empty()) opt.seeds_override = parse_seeds(args.seeds);
    opt.threads = args.threads;
    opt.dry_run = args.dry_run;
    return paralat::run_experiment(cfg, opt);
  } catch (const paralat::config_error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const paralat::argument_error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
