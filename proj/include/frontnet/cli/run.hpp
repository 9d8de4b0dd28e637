#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontnet/cli/config.hpp"
#include "frontnet/metrics/errors.hpp"
#include "frontnet/schemes/policy.hpp"

namespace frontnet::cli {

// Artifacts inside a run directory:
//   config.cfg      canonical config snapshot
//   <scheme>_n<k>.net (+ _v<k>/_vtmp<k>)  trained nets
//   loss.csv        step,n,iter,loss
//   manifest.json   config + hash + timings (+ errors after evaluate)
//   errors.csv      one table row per evaluate call
//   error_field.csv a,b,vhat,oracle,abs_err dump of the last evaluate

std::string cmd_train(const RunConfig& cfg);

struct EvalRow {
  metrics::ErrorStats stats;
  bool have_oracle = false;
  double cpu_seconds = 0.0;
  std::string csv;  // row matching kErrorTableHeader
};

inline constexpr const char* kErrorTableHeader =
    "scheme,N,layers,neurons,M,sg_iters,global_Linf,global_L1_rel,local_Linf,"
    "local_L1_rel,cpu_seconds";

EvalRow cmd_evaluate(const std::string& run_dir, std::optional<double> eta,
                     std::optional<int> grid_n);

void cmd_oracle(const std::string& problem, int d, double t,
                const std::string& points_path, const std::string& out_path,
                int angle_samples = 4096);

void cmd_contour(const std::string& run_dir, const std::vector<int>& times);

std::string cmd_table(const std::vector<std::string>& run_dirs);

// Reload a finished run. Returns the config and the policy.
struct LoadedRun {
  RunConfig cfg;
  std::unique_ptr<problems::Problem> prob;
  schemes::TrainedPolicy policy;
};
LoadedRun load_run(const std::string& run_dir);

// Full command-line entry point; maps config_error to exit code 2 and
// numeric_error to 3.
int run_main(int argc, char** argv);

}  // namespace frontnet::cli
