#pragma once

#include <ostream>

#include "paralat/config.hpp"
#include "paralat/io.hpp"
#include "paralat/pam.hpp"

namespace paralat {

struct RunOptions {
  std::filesystem::path out;
  std::vector<std::uint64_t> seeds_override;
  int threads = 0;
  bool dry_run = false;
};

// Runs the configured experiment, writing metrics.csv (tidy long format:
// config_hash, experiment, eps, seed, t, metric, value), experiment-specific
// reports, NDJSON sample records, field snapshots, and MANIFEST.json into the
// output directory. Returns 0 on success, 1 on runtime numeric failure.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

// Reshapes metrics.csv rows for one metric into (experiment, eps, seed, t,
// metric, value). Throws argument_error listing the available metrics if the
// requested one is absent.
void plotdata(const std::filesystem::path& result_dir, const std::string& metric,
              std::ostream& out);

// Worker pool over independent cells; results must be written to
// pre-allocated per-index slots so output is schedule-independent.
void parallel_tasks(int threads, int n, const std::function<void(int)>& fn);
int default_thread_count();

// Helpers shared with the acceptance suite.
double median(std::vector<double> v);
struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace paralat
