#include "frontnet/schemes/policy.hpp"

#include <cstdio>

namespace frontnet::schemes {

SchemeKind scheme_by_name(const std::string& name) {
  if (name == "SL") return SchemeKind::SL;
  if (name == "L") return SchemeKind::L;
  if (name == "H") return SchemeKind::H;
  throw config_error("unknown scheme: " + name + " (expected SL|L|H)");
}

const char* scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::SL: return "SL";
    case SchemeKind::L: return "L";
    case SchemeKind::H: return "H";
  }
  throw config_error("bad scheme kind");
}

double TrainedPolicy::value(const problems::Problem& prob, int n,
                            const double* x,
                            nn::FeedforwardNet::Workspace& ws) const {
  if (n < 0 || n > N) throw config_error("time step out of range");
  if (n == N) return prob.gphi(x);
  if (kind == SchemeKind::SL) {
    double out;
    val[n].forward({x, static_cast<size_t>(prob.dim())}, {&out, 1}, ws);
    return out;
  }
  std::vector<const nn::FeedforwardNet*> nets(N);
  for (int k = 0; k < N; ++k) nets[k] = &ctrl[k];
  return dynamics::trajectory_cost(tab, prob, nets, n, N, dt, p, x, ws);
}

void TrainedPolicy::control(int n, const double* x, double* a,
                            nn::FeedforwardNet::Workspace& ws) const {
  if (n < 0 || n >= N) throw config_error("time step out of range");
  const auto& net = ctrl[n];
  net.forward({x, static_cast<size_t>(net.input_dim())},
              {a, static_cast<size_t>(net.output_dim())}, ws);
}

namespace {
std::string net_path(const std::string& dir, SchemeKind kind, const char* tag,
                     int k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "/%s_%s%d.net", scheme_name(kind), tag, k);
  return dir + buf;
}
}  // namespace

void TrainedPolicy::save_nets(const std::string& dir) const {
  for (int k = 0; k < N; ++k)
    ctrl[k].save_file(net_path(dir, kind, "n", k));
  for (size_t k = 0; k < val.size(); ++k)
    if (val[k].param_count() > 0)
      val[k].save_file(net_path(dir, kind, "v", static_cast<int>(k)));
  for (size_t k = 0; k < vtmp.size(); ++k)
    if (vtmp[k].param_count() > 0)
      vtmp[k].save_file(net_path(dir, kind, "vtmp", static_cast<int>(k)));
}

void TrainedPolicy::load_nets(const std::string& dir) {
  ctrl.assign(N, {});
  for (int k = 0; k < N; ++k)
    ctrl[k] = nn::FeedforwardNet::load_file(net_path(dir, kind, "n", k));
  val.clear();
  vtmp.clear();
  if (kind == SchemeKind::SL) {
    val.assign(N, {});
    for (int k = 0; k < N; ++k)
      val[k] = nn::FeedforwardNet::load_file(net_path(dir, kind, "v", k));
  } else if (kind == SchemeKind::H) {
    vtmp.assign(N, {});
    for (int k = 1; k < N; ++k)
      vtmp[k] = nn::FeedforwardNet::load_file(net_path(dir, kind, "vtmp", k));
  }
}

}  // namespace frontnet::schemes
