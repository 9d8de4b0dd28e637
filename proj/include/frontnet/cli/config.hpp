#pragma once

#include <string>

#include "frontnet/schemes/train.hpp"

namespace frontnet::cli {

// One run, fully determined by one file. Sections: [problem], [scheme],
// [metrics], [output]. Unknown sections or keys are rejected by name.
struct RunConfig {
  std::string problem = "rotation";
  int d = 0;  // 0 picks the problem default

  schemes::TrainConfig scheme;

  double eta = 0.1;
  int grid_n = 201;
  double rmax = 0.0;  // 0 picks the problem default
  int oracle_angle_samples = 4096;

  std::string out_dir;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical snapshot; parse_config_text(render_config(c)) reproduces c.
std::string render_config(const RunConfig& cfg);

// out_dir, under the directory named by FRONTNET_OUTPUT_ROOT when that is
// set and out_dir is relative.
std::string resolve_output_dir(const RunConfig& cfg);

}  // namespace frontnet::cli
