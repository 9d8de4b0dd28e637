#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frontnet/nn/adam.hpp"
#include "frontnet/schemes/policy.hpp"

namespace frontnet::schemes {

struct TrainConfig {
  SchemeKind kind = SchemeKind::L;
  int N = 5;
  int p = 5;
  dynamics::ButcherTableau tab = dynamics::ButcherTableau::heun();

  int M = 1000;       // batch size per gradient step
  int sg_iters = 1000;
  int value_M = 0;         // 0: inherit M
  int value_sg_iters = 0;  // 0: inherit sg_iters

  std::vector<int> control_hidden = {40, 40, 40};
  std::vector<int> value_hidden = {40, 40, 40};

  uint64_t seed = 1;
  bool warm_start = true;  // start step-n nets from the step-(n+1) weights
  nn::AdamConfig adam;
  int threads = 1;
};

struct LossRecord {
  std::string phase;  // "control" or "value"
  int n = 0;
  int iter = 0;
  double loss = 0.0;
};

struct PhaseTiming {
  std::string phase;
  int n = 0;
  double seconds = 0.0;
};

// Backward-in-time training of the chosen scheme. Deterministic for a fixed
// config and seed, independent of the thread count. sg_iters = 0 leaves the
// nets at their initialization, which is still a usable policy.
TrainedPolicy train(const problems::Problem& prob, const TrainConfig& cfg,
                    std::vector<LossRecord>* loss_log = nullptr,
                    std::vector<PhaseTiming>* timings = nullptr);

}  // namespace frontnet::schemes
