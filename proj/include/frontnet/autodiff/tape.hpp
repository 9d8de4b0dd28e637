#pragma once

#include <cstdint>
#include <span>

#include "frontnet/common.hpp"

namespace frontnet::ad {

// Handle to a tape node. dim == 1 for scalars, > 1 for vectors.
struct Var {
  int id = -1;
  int dim = 0;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape with layer-sized primitives. A tape is built eagerly
// (forward values are computed as nodes are recorded), then backward() runs
// one reverse sweep. Tapes are single threaded; parallelism happens across
// independent per-sample tapes.
//
// Subgradient conventions, fixed for determinism:
//   relu'(0) = 0, abs'(0) = 0, sqrt'(0) = 0, max/min tie -> first argument.
class Tape {
 public:
  Tape() { clear(); }

  // Leaves.
  Var constant(double v);
  Var constant(std::span<const double> v);
  Var input(std::span<const double> v);

  // out = W [x;1], W row-major rows x cols with cols == x.dim + 1.
  // If wgrad is non-null, backward accumulates d(out)/dW into it (same layout).
  Var affine(const double* W, int rows, int cols, Var x, double* wgrad);

  // Elementwise on vectors (or scalars).
  Var relu(Var x);
  Var sigmoid(Var x);
  Var tanh(Var x);

  // Scalar arithmetic (dim 1 operands).
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);  // throws numeric_error when b == 0
  Var neg(Var a);
  Var sqrt(Var a);  // throws numeric_error when a < 0
  Var abs(Var a);
  Var max(Var a, Var b);
  Var min(Var a, Var b);
  Var add_const(Var a, double c);
  Var mul_const(Var a, double c);

  Var dot(Var a, Var b);                   // vectors, same dim
  Var element(Var v, int k);               // scalar v[k]
  Var pack(std::span<const Var> scalars);  // scalars -> vector
  Var scale(Var s, Var v);                 // scalar * vector

  // sum_i coeff[i] * vs[i], all same dim. With base: base + sum_i coeff[i]*vs[i].
  Var lincomb(std::span<const Var> vs, std::span<const double> coeff);
  Var lincomb(std::span<const double> base, std::span<const Var> vs,
              std::span<const double> coeff);

  double value(Var v) const { return vals_[nodes_[v.id].vof]; }
  const double* data(Var v) const { return vals_.data() + nodes_[v.id].vof; }

  // Reverse sweep from a scalar output. Adjoints are readable afterwards;
  // affine nodes with a wgrad target have accumulated into it (+=).
  void backward(Var output);

  double adjoint(Var v) const { return adj_[nodes_[v.id].vof]; }
  const double* adjoint_data(Var v) const { return adj_.data() + nodes_[v.id].vof; }

  size_t size() const { return nodes_.size(); }
  void clear();  // drop all nodes, keep capacity

 private:
  enum class Op : uint8_t {
    Const, Input, Affine, Relu, Sigmoid, Tanh,
    Add, Sub, Mul, Div, Neg, Sqrt, Abs, Max, Min,
    AddC, MulC, Dot, Lincomb, LincombBase, Element, Pack, ScaleVec,
  };

  struct Node {
    Op op;
    int a = -1;      // first input id, or aux_ids_ offset for Lincomb/Pack
    int b = -1;      // second input id, count for Lincomb/Pack, index for Element
    int dim = 0;
    uint32_t vof = 0;   // offset into vals_/adj_
    uint32_t aux = 0;   // offset into aux_data_ / affine_payloads_
  };

  struct AffinePayload {
    const double* W;
    double* wgrad;
    int rows, cols;
  };

  Var push(Op op, int dim, int a = -1, int b = -1, uint32_t aux = 0);
  double* val_ptr(int id) { return vals_.data() + nodes_[id].vof; }
  void check_finite(Var v, const char* what) const;

  std::vector<Node> nodes_;
  std::vector<double> vals_, adj_;
  std::vector<double> aux_data_;
  std::vector<int> aux_ids_;
  std::vector<AffinePayload> affine_payloads_;
};

}  // namespace frontnet::ad
