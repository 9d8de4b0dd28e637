#include "frontnet/autodiff/tape.hpp"

#include <cmath>
#include <cstring>

namespace frontnet::ad {

Var Tape::push(Op op, int dim, int a, int b, uint32_t aux) {
  Node n;
  n.op = op;
  n.a = a;
  n.b = b;
  n.dim = dim;
  n.vof = static_cast<uint32_t>(vals_.size());
  n.aux = aux;
  vals_.resize(vals_.size() + dim);
  nodes_.push_back(n);
  return Var{static_cast<int>(nodes_.size()) - 1, dim};
}

void Tape::check_finite(Var v, const char* what) const {
  const double* p = data(v);
  double s = 0.0;
  for (int i = 0; i < v.dim; ++i) s += p[i];
  if (!std::isfinite(s)) {
    for (int i = 0; i < v.dim; ++i) {
      if (!std::isfinite(p[i]))
        throw numeric_error(std::string("non-finite value in ") + what);
    }
    throw numeric_error(std::string("non-finite value in ") + what);
  }
}

Var Tape::constant(double v) {
  Var r = push(Op::Const, 1);
  vals_[nodes_[r.id].vof] = v;
  check_finite(r, "constant");
  return r;
}

Var Tape::constant(std::span<const double> v) {
  Var r = push(Op::Const, static_cast<int>(v.size()));
  std::memcpy(val_ptr(r.id), v.data(), v.size() * sizeof(double));
  check_finite(r, "constant");
  return r;
}

Var Tape::input(std::span<const double> v) {
  Var r = push(Op::Input, static_cast<int>(v.size()));
  std::memcpy(val_ptr(r.id), v.data(), v.size() * sizeof(double));
  check_finite(r, "input");
  return r;
}

Var Tape::affine(const double* W, int rows, int cols, Var x, double* wgrad) {
  if (cols != x.dim + 1) throw numeric_error("affine: shape mismatch");
  uint32_t aux = static_cast<uint32_t>(affine_payloads_.size());
  affine_payloads_.push_back({W, wgrad, rows, cols});
  Var r = push(Op::Affine, rows, x.id, -1, aux);
  const double* xv = data(x);
  double* out = val_ptr(r.id);
  for (int i = 0; i < rows; ++i) {
    const double* wr = W + static_cast<size_t>(i) * cols;
    double s = wr[cols - 1];
    for (int j = 0; j < cols - 1; ++j) s += wr[j] * xv[j];
    out[i] = s;
  }
  check_finite(r, "affine");
  return r;
}

Var Tape::relu(Var x) {
  Var r = push(Op::Relu, x.dim, x.id);
  const double* xv = data(x);
  double* out = val_ptr(r.id);
  for (int i = 0; i < x.dim; ++i) out[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  return r;
}

Var Tape::sigmoid(Var x) {
  Var r = push(Op::Sigmoid, x.dim, x.id);
  const double* xv = data(x);
  double* out = val_ptr(r.id);
  for (int i = 0; i < x.dim; ++i) out[i] = 1.0 / (1.0 + std::exp(-xv[i]));
  check_finite(r, "sigmoid");
  return r;
}

Var Tape::tanh(Var x) {
  Var r = push(Op::Tanh, x.dim, x.id);
  const double* xv = data(x);
  double* out = val_ptr(r.id);
  for (int i = 0; i < x.dim; ++i) out[i] = std::tanh(xv[i]);
  return r;
}

#define FRONTNET_SCALAR_CHECK(a, b)                                     \
  if (a.dim != 1 || b.dim != 1) throw numeric_error("scalar op on vector")

Var Tape::add(Var a, Var b) {
  FRONTNET_SCALAR_CHECK(a, b);
  Var r = push(Op::Add, 1, a.id, b.id);
  vals_[nodes_[r.id].vof] = value(a) + value(b);
  check_finite(r, "add");
  return r;
}

Var Tape::sub(Var a, Var b) {
  FRONTNET_SCALAR_CHECK(a, b);
  Var r = push(Op::Sub, 1, a.id, b.id);
  vals_[nodes_[r.id].vof] = value(a) - value(b);
  check_finite(r, "sub");
  return r;
}

Var Tape::mul(Var a, Var b) {
  FRONTNET_SCALAR_CHECK(a, b);
  Var r = push(Op::Mul, 1, a.id, b.id);
  vals_[nodes_[r.id].vof] = value(a) * value(b);
  check_finite(r, "mul");
  return r;
}

Var Tape::div(Var a, Var b) {
  FRONTNET_SCALAR_CHECK(a, b);
  if (value(b) == 0.0) throw numeric_error("division by zero");
  Var r = push(Op::Div, 1, a.id, b.id);
  vals_[nodes_[r.id].vof] = value(a) / value(b);
  check_finite(r, "div");
  return r;
}

Var Tape::neg(Var a) {
  Var r = push(Op::Neg, a.dim, a.id);
  const double* av = data(a);
  double* out = val_ptr(r.id);
  for (int i = 0; i < a.dim; ++i) out[i] = -av[i];
  return r;
}

Var Tape::sqrt(Var a) {
  if (a.dim != 1) throw numeric_error("sqrt on vector");
  double v = value(a);
  if (v < 0.0) throw numeric_error("sqrt of negative value");
  Var r = push(Op::Sqrt, 1, a.id);
  vals_[nodes_[r.id].vof] = std::sqrt(v);
  return r;
}

Var Tape::abs(Var a) {
  if (a.dim != 1) throw numeric_error("abs on vector");
  Var r = push(Op::Abs, 1, a.id);
  vals_[nodes_[r.id].vof] = std::fabs(value(a));
  return r;
}

Var Tape::max(Var a, Var b) {
  FRONTNET_SCALAR_CHECK(a, b);
  Var r = push(Op::Max, 1, a.id, b.id);
  vals_[nodes_[r.id].vof] = value(a) >= value(b) ? value(a) : value(b);
  return r;
}

Var Tape::min(Var a, Var b) {
  FRONTNET_SCALAR_CHECK(a, b);
  Var r = push(Op::Min, 1, a.id, b.id);
  vals_[nodes_[r.id].vof] = value(a) <= value(b) ? value(a) : value(b);
  return r;
}

Var Tape::add_const(Var a, double c) {
  if (a.dim != 1) throw numeric_error("add_const on vector");
  uint32_t aux = static_cast<uint32_t>(aux_data_.size());
  aux_data_.push_back(c);
  Var r = push(Op::AddC, 1, a.id, -1, aux);
  vals_[nodes_[r.id].vof] = value(a) + c;
  check_finite(r, "add_const");
  return r;
}

Var Tape::mul_const(Var a, double c) {
  if (a.dim != 1) throw numeric_error("mul_const on vector");
  uint32_t aux = static_cast<uint32_t>(aux_data_.size());
  aux_data_.push_back(c);
  Var r = push(Op::MulC, 1, a.id, -1, aux);
  vals_[nodes_[r.id].vof] = value(a) * c;
  check_finite(r, "mul_const");
  return r;
}

Var Tape::dot(Var a, Var b) {
  if (a.dim != b.dim) throw numeric_error("dot: dim mismatch");
  Var r = push(Op::Dot, 1, a.id, b.id);
  const double* av = data(a);
  const double* bv = data(b);
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += av[i] * bv[i];
  vals_[nodes_[r.id].vof] = s;
  check_finite(r, "dot");
  return r;
}

Var Tape::element(Var v, int k) {
  if (k < 0 || k >= v.dim) throw numeric_error("element: index out of range");
  Var r = push(Op::Element, 1, v.id, k);
  vals_[nodes_[r.id].vof] = data(v)[k];
  return r;
}

Var Tape::pack(std::span<const Var> scalars) {
  int ofs = static_cast<int>(aux_ids_.size());
  for (Var s : scalars) {
    if (s.dim != 1) throw numeric_error("pack: non-scalar input");
    aux_ids_.push_back(s.id);
  }
  Var r = push(Op::Pack, static_cast<int>(scalars.size()), ofs,
               static_cast<int>(scalars.size()));
  double* out = val_ptr(r.id);
  for (size_t i = 0; i < scalars.size(); ++i) out[i] = value(scalars[i]);
  return r;
}

Var Tape::scale(Var s, Var v) {
  if (s.dim != 1) throw numeric_error("scale: scalar expected");
  Var r = push(Op::ScaleVec, v.dim, s.id, v.id);
  const double* vv = data(v);
  double sv = value(s);
  double* out = val_ptr(r.id);
  for (int i = 0; i < v.dim; ++i) out[i] = sv * vv[i];
  check_finite(r, "scale");
  return r;
}

Var Tape::lincomb(std::span<const Var> vs, std::span<const double> coeff) {
  return lincomb(std::span<const double>(), vs, coeff);
}

Var Tape::lincomb(std::span<const double> base, std::span<const Var> vs,
                  std::span<const double> coeff) {
  if (vs.empty() || vs.size() != coeff.size())
    throw numeric_error("lincomb: bad arity");
  int dim = vs[0].dim;
  for (Var v : vs)
    if (v.dim != dim) throw numeric_error("lincomb: dim mismatch");
  bool with_base = !base.empty();
  if (with_base && static_cast<int>(base.size()) != dim)
    throw numeric_error("lincomb: base dim mismatch");

  int ofs = static_cast<int>(aux_ids_.size());
  for (Var v : vs) aux_ids_.push_back(v.id);
  uint32_t aux = static_cast<uint32_t>(aux_data_.size());
  aux_data_.insert(aux_data_.end(), coeff.begin(), coeff.end());
  if (with_base) aux_data_.insert(aux_data_.end(), base.begin(), base.end());

  Var r = push(with_base ? Op::LincombBase : Op::Lincomb, dim, ofs,
               static_cast<int>(vs.size()), aux);
  double* out = val_ptr(r.id);
  if (with_base) {
    const double* bp = aux_data_.data() + aux + vs.size();
    for (int i = 0; i < dim; ++i) out[i] = bp[i];
  } else {
    for (int i = 0; i < dim; ++i) out[i] = 0.0;
  }
  for (size_t k = 0; k < vs.size(); ++k) {
    const double* vv = data(vs[k]);
    double c = coeff[k];
    for (int i = 0; i < dim; ++i) out[i] += c * vv[i];
  }
  check_finite(r, "lincomb");
  return r;
}

void Tape::backward(Var output) {
  if (output.dim != 1) throw numeric_error("backward: output must be scalar");
  adj_.assign(vals_.size(), 0.0);
  adj_[nodes_[output.id].vof] = 1.0;

  for (int id = output.id; id >= 0; --id) {
    const Node& n = nodes_[id];
    const double* u = adj_.data() + n.vof;  // upstream adjoint of this node
    switch (n.op) {
      case Op::Const:
      case Op::Input:
        break;
      case Op::Affine: {
        const AffinePayload& P = affine_payloads_[n.aux];
        const Node& xn = nodes_[n.a];
        const double* xv = vals_.data() + xn.vof;
        double* xa = adj_.data() + xn.vof;
        for (int i = 0; i < P.rows; ++i) {
          double ui = u[i];
          if (ui == 0.0) continue;
          const double* wr = P.W + static_cast<size_t>(i) * P.cols;
          for (int j = 0; j < P.cols - 1; ++j) xa[j] += ui * wr[j];
          if (P.wgrad) {
            double* gr = P.wgrad + static_cast<size_t>(i) * P.cols;
            for (int j = 0; j < P.cols - 1; ++j) gr[j] += ui * xv[j];
            gr[P.cols - 1] += ui;
          }
        }
        break;
      }
      case Op::Relu: {
        const Node& xn = nodes_[n.a];
        const double* xv = vals_.data() + xn.vof;
        double* xa = adj_.data() + xn.vof;
        for (int i = 0; i < n.dim; ++i)
          if (xv[i] > 0.0) xa[i] += u[i];
        break;
      }
      case Op::Sigmoid: {
        const double* yv = vals_.data() + n.vof;
        double* xa = adj_.data() + nodes_[n.a].vof;
        for (int i = 0; i < n.dim; ++i) xa[i] += u[i] * yv[i] * (1.0 - yv[i]);
        break;
      }
      case Op::Tanh: {
        const double* yv = vals_.data() + n.vof;
        double* xa = adj_.data() + nodes_[n.a].vof;
        for (int i = 0; i < n.dim; ++i) xa[i] += u[i] * (1.0 - yv[i] * yv[i]);
        break;
      }
      case Op::Add:
        adj_[nodes_[n.a].vof] += u[0];
        adj_[nodes_[n.b].vof] += u[0];
        break;
      case Op::Sub:
        adj_[nodes_[n.a].vof] += u[0];
        adj_[nodes_[n.b].vof] -= u[0];
        break;
      case Op::Mul:
        adj_[nodes_[n.a].vof] += u[0] * vals_[nodes_[n.b].vof];
        adj_[nodes_[n.b].vof] += u[0] * vals_[nodes_[n.a].vof];
        break;
      case Op::Div: {
        double bv = vals_[nodes_[n.b].vof];
        double y = vals_[n.vof];
        adj_[nodes_[n.a].vof] += u[0] / bv;
        adj_[nodes_[n.b].vof] -= u[0] * y / bv;
        break;
      }
      case Op::Neg: {
        double* xa = adj_.data() + nodes_[n.a].vof;
        for (int i = 0; i < n.dim; ++i) xa[i] -= u[i];
        break;
      }
      case Op::Sqrt: {
        double y = vals_[n.vof];
        if (y > 0.0) adj_[nodes_[n.a].vof] += u[0] * 0.5 / y;
        break;  // sqrt'(0) treated as 0
      }
      case Op::Abs: {
        double xv = vals_[nodes_[n.a].vof];
        if (xv > 0.0)
          adj_[nodes_[n.a].vof] += u[0];
        else if (xv < 0.0)
          adj_[nodes_[n.a].vof] -= u[0];
        break;
      }
      case Op::Max: {
        bool first = vals_[nodes_[n.a].vof] >= vals_[nodes_[n.b].vof];
        adj_[nodes_[first ? n.a : n.b].vof] += u[0];
        break;
      }
      case Op::Min: {
        bool first = vals_[nodes_[n.a].vof] <= vals_[nodes_[n.b].vof];
        adj_[nodes_[first ? n.a : n.b].vof] += u[0];
        break;
      }
      case Op::AddC:
        adj_[nodes_[n.a].vof] += u[0];
        break;
      case Op::MulC:
        adj_[nodes_[n.a].vof] += u[0] * aux_data_[n.aux];
        break;
      case Op::Dot: {
        const Node& an = nodes_[n.a];
        const Node& bn = nodes_[n.b];
        const double* av = vals_.data() + an.vof;
        const double* bv = vals_.data() + bn.vof;
        double* aa = adj_.data() + an.vof;
        double* ba = adj_.data() + bn.vof;
        for (int i = 0; i < an.dim; ++i) {
          aa[i] += u[0] * bv[i];
          ba[i] += u[0] * av[i];
        }
        break;
      }
      case Op::Lincomb:
      case Op::LincombBase: {
        const double* coeff = aux_data_.data() + n.aux;
        for (int k = 0; k < n.b; ++k) {
          int vid = aux_ids_[n.a + k];
          double c = coeff[k];
          if (c == 0.0) continue;
          double* va = adj_.data() + nodes_[vid].vof;
          for (int i = 0; i < n.dim; ++i) va[i] += c * u[i];
        }
        break;
      }
      case Op::Element:
        adj_[nodes_[n.a].vof + n.b] += u[0];
        break;
      case Op::Pack:
        for (int k = 0; k < n.b; ++k)
          adj_[nodes_[aux_ids_[n.a + k]].vof] += u[k];
        break;
      case Op::ScaleVec: {
        const Node& vn = nodes_[n.b];
        double sv = vals_[nodes_[n.a].vof];
        const double* vv = vals_.data() + vn.vof;
        double* va = adj_.data() + vn.vof;
        double acc = 0.0;
        for (int i = 0; i < n.dim; ++i) {
          va[i] += sv * u[i];
          acc += u[i] * vv[i];
        }
        adj_[nodes_[n.a].vof] += acc;
        break;
      }
    }
  }
}

void Tape::clear() {
  nodes_.clear();
  vals_.clear();
  adj_.clear();
  aux_data_.clear();
  aux_ids_.clear();
  affine_payloads_.clear();
}

}  // namespace frontnet::ad
