#include "frontnet/nn/net.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace frontnet::nn {

OutputMap OutputMap::sigmoid_affine(double lo, double hi) {
  if (!(lo < hi)) throw config_error("sigmoid_affine: need lo < hi");
  OutputMap m;
  m.kind = Kind::SigmoidAffine;
  m.lo = lo;
  m.hi = hi;
  return m;
}

OutputMap OutputMap::ball(double radius) {
  if (!(radius > 0.0)) throw config_error("ball projection: need radius > 0");
  OutputMap m;
  m.kind = Kind::BallProjection;
  m.radius = radius;
  return m;
}

void OutputMap::apply(std::span<const double> raw, std::span<double> out) const {
  switch (kind) {
    case Kind::Identity:
      for (size_t i = 0; i < raw.size(); ++i) out[i] = raw[i];
      break;
    case Kind::SigmoidAffine: {
      double s = 1.0 / (1.0 + std::exp(-raw[0]));
      out[0] = lo + (hi - lo) * s;
      break;
    }
    case Kind::BallProjection: {
      double n = norm2(raw);
      double m = n / radius;
      double s = m > 1.0 ? 1.0 / m : 1.0;
      for (size_t i = 0; i < raw.size(); ++i) out[i] = s * raw[i];
      break;
    }
  }
}

ad::Var OutputMap::apply(ad::Tape& t, ad::Var raw) const {
  switch (kind) {
    case Kind::Identity:
      return raw;
    case Kind::SigmoidAffine: {
      if (raw.dim != 1) throw numeric_error("sigmoid_affine expects 1-d output");
      ad::Var s = t.sigmoid(raw);
      return t.add_const(t.mul_const(s, hi - lo), lo);
    }
    case Kind::BallProjection: {
      // p -> p / max(1, |p|/radius); matches the plain path bit for bit.
      ad::Var n = t.sqrt(t.dot(raw, raw));
      ad::Var m = t.mul_const(n, 1.0 / radius);
      ad::Var s = t.div(t.constant(1.0), t.max(m, t.constant(1.0)));
      return t.scale(s, raw);
    }
  }
  throw numeric_error("unknown output map");
}

std::string OutputMap::describe() const {
  char buf[96];
  switch (kind) {
    case Kind::Identity:
      return "identity";
    case Kind::SigmoidAffine:
      std::snprintf(buf, sizeof buf, "sigmoid_affine %.17g %.17g", lo, hi);
      return buf;
    case Kind::BallProjection:
      std::snprintf(buf, sizeof buf, "ball %.17g", radius);
      return buf;
  }
  return "identity";
}

OutputMap OutputMap::parse(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  if (kind == "identity") return identity();
  if (kind == "sigmoid_affine") {
    double lo, hi;
    if (!(is >> lo >> hi)) throw config_error("bad sigmoid_affine spec: " + text);
    return sigmoid_affine(lo, hi);
  }
  if (kind == "ball") {
    double r;
    if (!(is >> r)) throw config_error("bad ball spec: " + text);
    return ball(r);
  }
  throw config_error("unknown output map: " + text);
}

FeedforwardNet::FeedforwardNet(std::vector<int> dims, Activation inner, OutputMap out)
    : dims_(std::move(dims)), inner_(inner), out_(out) {
  if (dims_.size() < 2) throw config_error("net needs at least input and output dims");
  for (int d : dims_)
    if (d < 1) throw config_error("net layer dims must be >= 1");
  size_t total = 0;
  offsets_.resize(layer_count());
  for (int k = 0; k < layer_count(); ++k) {
    offsets_[k] = total;
    total += static_cast<size_t>(dims_[k + 1]) * (dims_[k] + 1);
  }
  params_.assign(total, 0.0);
}

void FeedforwardNet::init(uint64_t seed) {
  Rng rng(seed);
  for (int k = 0; k < layer_count(); ++k) {
    int rows = dims_[k + 1], cols = dims_[k] + 1;
    double bound = std::sqrt(6.0 / dims_[k]);
    double* w = params_.data() + offsets_[k];
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols - 1; ++j)
        w[static_cast<size_t>(i) * cols + j] = rng.uniform(-bound, bound);
      w[static_cast<size_t>(i) * cols + cols - 1] = 0.0;
    }
  }
}

void FeedforwardNet::zero_weights() { params_.assign(params_.size(), 0.0); }

void FeedforwardNet::forward(std::span<const double> x, std::span<double> out,
                             Workspace& ws) const {
  const Vec* cur = nullptr;
  const double* xv = x.data();
  int xd = dims_[0];
  Vec* a = &ws.h0;
  Vec* b = &ws.h1;
  for (int k = 0; k < layer_count(); ++k) {
    int rows = dims_[k + 1], cols = dims_[k] + 1;
    const double* w = params_.data() + offsets_[k];
    a->resize(rows);
    for (int i = 0; i < rows; ++i) {
      const double* wr = w + static_cast<size_t>(i) * cols;
      double s = wr[cols - 1];
      for (int j = 0; j < cols - 1; ++j) s += wr[j] * xv[j];
      (*a)[i] = s;
    }
    if (k < layer_count() - 1) {
      if (inner_ == Activation::Relu) {
        for (int i = 0; i < rows; ++i)
          if ((*a)[i] < 0.0) (*a)[i] = 0.0;
      } else {
        for (int i = 0; i < rows; ++i) (*a)[i] = std::tanh((*a)[i]);
      }
    }
    cur = a;
    xv = a->data();
    xd = rows;
    std::swap(a, b);
  }
  (void)xd;
  out_.apply(std::span<const double>(cur->data(), cur->size()), out);
}

Vec FeedforwardNet::forward(std::span<const double> x) const {
  Workspace ws;
  Vec out(output_dim());
  forward(x, out, ws);
  return out;
}

ad::Var FeedforwardNet::forward(ad::Tape& t, ad::Var x, double* wgrad) const {
  if (x.dim != input_dim()) throw numeric_error("net forward: input dim mismatch");
  ad::Var h = x;
  for (int k = 0; k < layer_count(); ++k) {
    const double* w = params_.data() + offsets_[k];
    double* g = wgrad ? wgrad + offsets_[k] : nullptr;
    h = t.affine(w, dims_[k + 1], dims_[k] + 1, h, g);
    if (k < layer_count() - 1)
      h = inner_ == Activation::Relu ? t.relu(h) : t.tanh(h);
  }
  return out_.apply(t, h);
}

void FeedforwardNet::save(std::ostream& os) const {
  os << "frontnet net 1\n";
  os << "dims";
  for (int d : dims_) os << ' ' << d;
  os << "\ninner " << (inner_ == Activation::Relu ? "relu" : "tanh") << '\n';
  os << "output " << out_.describe() << '\n';
  char buf[40];
  for (int k = 0; k < layer_count(); ++k) {
    os << "layer " << k << '\n';
    int rows = dims_[k + 1], cols = dims_[k] + 1;
    const double* w = params_.data() + offsets_[k];
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", w[static_cast<size_t>(i) * cols + j]);
        os << buf << (j + 1 == cols ? '\n' : ' ');
      }
    }
  }
}

void FeedforwardNet::save_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw config_error("cannot write net file: " + path);
  save(os);
  if (!os) throw config_error("failed writing net file: " + path);
}

FeedforwardNet FeedforwardNet::load(std::istream& is) {
  std::string word, line;
  if (!std::getline(is, line) || line != "frontnet net 1")
    throw config_error("bad net file header");
  if (!(is >> word) || word != "dims") throw config_error("net file: missing dims");
  std::getline(is, line);
  std::istringstream dl(line);
  std::vector<int> dims;
  int d;
  while (dl >> d) dims.push_back(d);
  if (!(is >> word) || word != "inner") throw config_error("net file: missing inner");
  std::string act;
  is >> act;
  Activation inner;
  if (act == "relu")
    inner = Activation::Relu;
  else if (act == "tanh")
    inner = Activation::Tanh;
  else
    throw config_error("net file: unknown activation " + act);
  if (!(is >> word) || word != "output")
    throw config_error("net file: missing output map");
  std::getline(is, line);
  OutputMap out = OutputMap::parse(line);

  FeedforwardNet net(dims, inner, out);
  for (int k = 0; k < net.layer_count(); ++k) {
    int idx;
    if (!(is >> word >> idx) || word != "layer" || idx != k)
      throw config_error("net file: missing layer " + std::to_string(k));
    int rows = dims[k + 1], cols = dims[k] + 1;
    double* w = net.params_.data() + net.offsets_[k];
    for (int i = 0; i < rows * cols; ++i)
      if (!(is >> w[i])) throw config_error("net file: truncated weights");
  }
  return net;
}

FeedforwardNet FeedforwardNet::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open net file: " + path);
  return load(is);
}

bool FeedforwardNet::same_weights(const FeedforwardNet& other) const {
  return dims_ == other.dims_ && params_ == other.params_;
}

}  // namespace frontnet::nn
