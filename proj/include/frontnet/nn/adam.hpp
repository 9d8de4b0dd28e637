#pragma once

#include <span>

#include "frontnet/common.hpp"

namespace frontnet::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Standard bias-corrected Adam over a flat parameter vector.
class Adam {
 public:
  Adam(size_t n, AdamConfig cfg = {});

  void step(std::span<double> params, std::span<const double> grads);

  long steps_taken() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  Vec m_, v_;
  long t_ = 0;
};

}  // namespace frontnet::nn
