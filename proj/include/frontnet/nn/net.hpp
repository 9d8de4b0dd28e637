#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "frontnet/autodiff/tape.hpp"
#include "frontnet/common.hpp"

namespace frontnet::nn {

enum class Activation { Relu, Tanh };

// Maps the raw last-layer output onto the control set.
struct OutputMap {
  enum class Kind { Identity, SigmoidAffine, BallProjection } kind = Kind::Identity;
  double lo = 0.0, hi = 0.0;  // SigmoidAffine range
  double radius = 1.0;        // BallProjection

  static OutputMap identity() { return {}; }
  static OutputMap sigmoid_affine(double lo, double hi);
  static OutputMap ball(double radius);

  void apply(std::span<const double> raw, std::span<double> out) const;
  ad::Var apply(ad::Tape& t, ad::Var raw) const;

  std::string describe() const;
  static OutputMap parse(const std::string& text);
};

// Fully connected net. Layer k maps d_{k-1} -> d_k via a row-major
// d_k x (d_{k-1}+1) matrix whose last column is the bias. All weights live in
// one contiguous vector so the optimizer and the tape share a single layout.
class FeedforwardNet {
 public:
  FeedforwardNet() = default;
  FeedforwardNet(std::vector<int> dims, Activation inner, OutputMap out);

  // He-uniform weights (bound sqrt(6/fan_in)), zero biases, deterministic in seed.
  void init(uint64_t seed);
  void zero_weights();

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int layer_count() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<int>& dims() const { return dims_; }
  Activation inner() const { return inner_; }
  const OutputMap& output_map() const { return out_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  size_t param_count() const { return params_.size(); }
  size_t layer_offset(int k) const { return offsets_[k]; }

  struct Workspace {
    Vec h0, h1;
  };

  // Plain evaluation, no tape. out.size() == output_dim().
  void forward(std::span<const double> x, std::span<double> out, Workspace& ws) const;
  Vec forward(std::span<const double> x) const;

  // Taped evaluation. wgrad, when non-null, points at a buffer with the same
  // layout as params() into which backward() accumulates weight gradients.
  ad::Var forward(ad::Tape& t, ad::Var x, double* wgrad) const;

  void save(std::ostream& os) const;
  void save_file(const std::string& path) const;
  static FeedforwardNet load(std::istream& is);
  static FeedforwardNet load_file(const std::string& path);

  bool same_weights(const FeedforwardNet& other) const;

 private:
  std::vector<int> dims_;
  Activation inner_ = Activation::Relu;
  OutputMap out_;
  std::vector<double> params_;
  std::vector<size_t> offsets_;  // per-layer start into params_
};

}  // namespace frontnet::nn
