#pragma once

#include <string>
#include <vector>

#include "frontnet/dynamics/rollout.hpp"
#include "frontnet/nn/net.hpp"
#include "frontnet/problems/problem.hpp"

namespace frontnet::schemes {

// SL regresses a value net at every step, L re-rolls the stored controls to
// price a state, H keeps throwaway value fits for training but prices like L.
enum class SchemeKind { SL, L, H };

SchemeKind scheme_by_name(const std::string& name);
const char* scheme_name(SchemeKind kind);

// Everything a finished training run leaves behind, minus the manifest.
struct TrainedPolicy {
  SchemeKind kind = SchemeKind::L;
  dynamics::ButcherTableau tab = dynamics::ButcherTableau::heun();
  int N = 0;
  int p = 1;
  double dt = 0.0;

  std::vector<nn::FeedforwardNet> ctrl;  // one feedback net per step, size N
  std::vector<nn::FeedforwardNet> val;   // SL only, size N (step 0..N-1)
  std::vector<nn::FeedforwardNet> vtmp;  // H only, entries 1..N-1 are live

  double train_seconds = 0.0;

  // V-hat at step n. n == N returns max(g, phi) directly.
  double value(const problems::Problem& prob, int n, const double* x,
               nn::FeedforwardNet::Workspace& ws) const;

  // Feedback control at step n.
  void control(int n, const double* x, double* a,
               nn::FeedforwardNet::Workspace& ws) const;

  // Net files under dir: <scheme>_n<k>.net for controls, <scheme>_v<k>.net
  // and <scheme>_vtmp<k>.net for the value fits that exist.
  void save_nets(const std::string& dir) const;
  void load_nets(const std::string& dir);
};

}  // namespace frontnet::schemes
