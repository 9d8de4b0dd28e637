#include "frontnet/schemes/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

namespace frontnet::schemes {

namespace {

constexpr int kChunk = 64;

// Per-sample losses are taped and backpropagated into per-chunk weight-grad
// buffers; chunks are then reduced in index order. This keeps the gradient
// bitwise reproducible for any thread count.
class BatchRunner {
 public:
  BatchRunner(size_t param_count, int threads)
      : P_(param_count), threads_(std::max(threads, 1)) {}

  using SampleFn = std::function<double(ad::Tape&, nn::FeedforwardNet::Workspace&,
                                        int, double*)>;

  // Runs fn for samples 0..M-1, sums weight grads and per-sample losses.
  // Returns the mean loss and writes the mean gradient.
  double run(int M, const SampleFn& fn, std::span<double> grad_out) {
    const int chunks = (M + kChunk - 1) / kChunk;
    buffers_.assign(static_cast<size_t>(chunks) * P_, 0.0);
    losses_.assign(chunks, 0.0);

    auto worker = [&](int w) {
      ad::Tape tape;
      nn::FeedforwardNet::Workspace ws;
      for (int c = w; c < chunks; c += threads_) {
        double* buf = buffers_.data() + static_cast<size_t>(c) * P_;
        double sub = 0.0;
        const int lo = c * kChunk, hi = std::min(M, lo + kChunk);
        for (int i = lo; i < hi; ++i) {
          tape.clear();
          sub += fn(tape, ws, i, buf);
        }
        losses_[c] = sub;
      }
    };

    if (threads_ == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads_);
      for (int w = 0; w < threads_; ++w) pool.emplace_back(worker, w);
      for (auto& t : pool) t.join();
    }

    const double inv = 1.0 / M;
    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    for (int c = 0; c < chunks; ++c) {
      const double* buf = buffers_.data() + static_cast<size_t>(c) * P_;
      for (size_t j = 0; j < P_; ++j) grad_out[j] += buf[j];
    }
    for (size_t j = 0; j < P_; ++j) grad_out[j] *= inv;
    double loss = 0.0;
    for (int c = 0; c < chunks; ++c) loss += losses_[c];
    return loss * inv;
  }

 private:
  size_t P_;
  int threads_;
  std::vector<double> buffers_;
  std::vector<double> losses_;
};

void sample_batch(Rng& rng, const problems::Box& box, int M, Vec& out) {
  const int d = box.dim();
  out.resize(static_cast<size_t>(M) * d);
  for (int i = 0; i < M; ++i)
    for (int m = 0; m < d; ++m)
      out[static_cast<size_t>(i) * d + m] = rng.uniform(box.lo[m], box.hi[m]);
}

struct Sizes {
  int M, iters;
};

Sizes value_sizes(const TrainConfig& cfg) {
  return {cfg.value_M > 0 ? cfg.value_M : cfg.M,
          cfg.value_sg_iters > 0 ? cfg.value_sg_iters : cfg.sg_iters};
}

}  // namespace

TrainedPolicy train(const problems::Problem& prob, const TrainConfig& cfg,
                    std::vector<LossRecord>* loss_log,
                    std::vector<PhaseTiming>* timings) {
  if (cfg.N < 1) throw config_error("step count N must be at least 1");
  if (cfg.M < 1) throw config_error("batch size must be positive");
  if (cfg.sg_iters < 0 || cfg.value_sg_iters < 0)
    throw config_error("iteration counts cannot be negative");
  const auto t_start = std::chrono::steady_clock::now();

  const int d = prob.dim();
  const int N = cfg.N;
  TrainedPolicy pol;
  pol.kind = cfg.kind;
  pol.tab = cfg.tab;
  pol.N = N;
  pol.p = cfg.p;
  pol.dt = prob.horizon() / N;

  std::vector<int> cdims, vdims;
  cdims.push_back(d);
  for (int h : cfg.control_hidden) cdims.push_back(h);
  cdims.push_back(prob.control_dim());
  vdims.push_back(d);
  for (int h : cfg.value_hidden) vdims.push_back(h);
  vdims.push_back(1);

  pol.ctrl.assign(N, {});
  for (int n = 0; n < N; ++n)
    pol.ctrl[n] =
        nn::FeedforwardNet(cdims, nn::Activation::Relu, prob.control_map());
  const bool sl = cfg.kind == SchemeKind::SL;
  const bool hy = cfg.kind == SchemeKind::H;
  if (sl) pol.val.assign(N, {});
  if (hy) pol.vtmp.assign(N, {});
  auto make_value_net = [&] {
    return nn::FeedforwardNet(vdims, nn::Activation::Relu,
                              nn::OutputMap::identity());
  };

  std::vector<const nn::FeedforwardNet*> chain(N);
  for (int k = 0; k < N; ++k) chain[k] = &pol.ctrl[k];

  Vec batch;
  nn::FeedforwardNet::Workspace ws0;
  const Sizes vs = value_sizes(cfg);

  auto phase_clock = [&](const char* phase, int n, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    if (timings) {
      double sec = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
      timings->push_back({phase, n, sec});
    }
  };

  for (int n = N - 1; n >= 0; --n) {
    // ---- control phase ----
    nn::FeedforwardNet& cnet = pol.ctrl[n];
    if (cfg.warm_start && n < N - 1) {
      std::copy(pol.ctrl[n + 1].params().begin(),
                pol.ctrl[n + 1].params().end(), cnet.params().begin());
    } else {
      cnet.init(derive_seed(cfg.seed, "ctrl-init", n));
    }
    nn::Adam copt(cnet.param_count(), cfg.adam);
    Rng crng(derive_seed(cfg.seed, "ctrl-batch", n));
    BatchRunner crun(cnet.param_count(), cfg.threads);
    Vec grad(cnet.param_count());

    auto control_loss = [&](ad::Tape& tape, nn::FeedforwardNet::Workspace&,
                            int i, double* wgrad) {
      const double* x = batch.data() + static_cast<size_t>(i) * d;
      ad::Var xv = tape.input({x, static_cast<size_t>(d)});
      ad::Var av = cnet.forward(tape, xv, wgrad);
      dynamics::TapedStep st =
          dynamics::coarse_step(tape, cfg.tab, prob, xv, av, pol.dt, cfg.p);
      ad::Var cont;
      if (n + 1 == N) {
        cont = prob.gphi(tape, st.xnext);
      } else if (sl) {
        cont = pol.val[n + 1].forward(tape, st.xnext, nullptr);
      } else if (hy) {
        cont = pol.vtmp[n + 1].forward(tape, st.xnext, nullptr);
      } else {
        cont = dynamics::trajectory_cost(tape, cfg.tab, prob, chain, n + 1, N,
                                         pol.dt, cfg.p, st.xnext);
      }
      ad::Var loss = st.has_G ? tape.max(st.G, cont) : cont;
      tape.backward(loss);
      return tape.value(loss);
    };

    phase_clock("control", n, [&] {
      for (int it = 0; it < cfg.sg_iters; ++it) {
        sample_batch(crng, prob.sampling_box(), cfg.M, batch);
        double loss = crun.run(cfg.M, control_loss, grad);
        if (!std::isfinite(loss))
          throw numeric_error("control loss became non-finite");
        copt.step(cnet.params(), grad);
        if (loss_log) loss_log->push_back({"control", n, it, loss});
      }
    });

    // ---- value phase (SL always, H for n >= 1) ----
    const bool fit_value = sl || (hy && n >= 1);
    if (!fit_value) continue;
    nn::FeedforwardNet& vnet = sl ? pol.val[n] : pol.vtmp[n];
    vnet = make_value_net();
    const nn::FeedforwardNet* prev =
        sl ? (n + 1 < N ? &pol.val[n + 1] : nullptr)
           : (n + 1 < N ? &pol.vtmp[n + 1] : nullptr);
    if (cfg.warm_start && prev) {
      std::copy(prev->params().begin(), prev->params().end(),
                vnet.params().begin());
    } else {
      vnet.init(derive_seed(cfg.seed, sl ? "val-init" : "vtmp-init", n));
    }
    nn::Adam vopt(vnet.param_count(), cfg.adam);
    Rng vrng(derive_seed(cfg.seed, "value-batch", n));
    BatchRunner vrun(vnet.param_count(), cfg.threads);
    Vec vgrad(vnet.param_count());
    Vec targets;

    auto fill_targets = [&](int M) {
      targets.resize(M);
      double a[dynamics::kMaxStateDim];
      double xn[dynamics::kMaxStateDim];
      for (int i = 0; i < M; ++i) {
        const double* x = batch.data() + static_cast<size_t>(i) * d;
        if (sl) {
          cnet.forward({x, static_cast<size_t>(d)},
                       {a, static_cast<size_t>(prob.control_dim())}, ws0);
          dynamics::StepResult sr =
              dynamics::coarse_step(cfg.tab, prob, x, a, pol.dt, cfg.p, xn);
          double cont;
          if (n + 1 == N) {
            cont = prob.gphi(xn);
          } else {
            double vo;
            pol.val[n + 1].forward({xn, static_cast<size_t>(d)}, {&vo, 1}, ws0);
            cont = vo;
          }
          targets[i] = sr.has_G ? std::max(sr.G, cont) : cont;
        } else {
          targets[i] = dynamics::trajectory_cost(cfg.tab, prob, chain, n, N,
                                                 pol.dt, cfg.p, x, ws0);
        }
      }
    };

    auto value_loss = [&](ad::Tape& tape, nn::FeedforwardNet::Workspace&, int i,
                          double* wgrad) {
      const double* x = batch.data() + static_cast<size_t>(i) * d;
      ad::Var xv = tape.input({x, static_cast<size_t>(d)});
      ad::Var vv = vnet.forward(tape, xv, wgrad);
      ad::Var diff = tape.sub(vv, tape.constant(targets[i]));
      ad::Var loss = tape.mul(diff, diff);
      tape.backward(loss);
      return tape.value(loss);
    };

    phase_clock("value", n, [&] {
      for (int it = 0; it < vs.iters; ++it) {
        sample_batch(vrng, prob.sampling_box(), vs.M, batch);
        fill_targets(vs.M);
        double loss = vrun.run(vs.M, value_loss, vgrad);
        if (!std::isfinite(loss))
          throw numeric_error("value regression loss became non-finite");
        vopt.step(vnet.params(), vgrad);
        if (loss_log) loss_log->push_back({"value", n, it, loss});
      }
    });
  }

  pol.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return pol;
}

}  // namespace frontnet::schemes
