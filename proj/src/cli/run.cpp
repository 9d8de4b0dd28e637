#include "frontnet/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "frontnet/metrics/contour.hpp"
#include "frontnet/problems/eikadv.hpp"
#include "frontnet/problems/rotation.hpp"
#include "frontnet/schemes/train.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace frontnet::cli {

namespace {

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw config_error("cannot write " + tmp);
    f << text;
  }
  fs::rename(tmp, path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::unique_ptr<problems::Problem> make_problem(const RunConfig& cfg) {
  auto prob = problems::Problem::make(cfg.problem, cfg.d);
  if (auto* rot = dynamic_cast<problems::Rotation*>(prob.get()))
    rot->set_oracle_samples(cfg.oracle_angle_samples);
  return prob;
}

metrics::ReferenceGrid make_grid(const RunConfig& cfg,
                                 const problems::Problem& prob,
                                 std::optional<int> grid_override) {
  auto g = metrics::ReferenceGrid::from_plane(prob.plane(),
                                              grid_override.value_or(cfg.grid_n));
  if (cfg.rmax > 0.0) g.rmax = cfg.rmax;
  return g;
}

std::string fmt_err(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

json manifest_read(const std::string& dir) {
  return json::parse(read_text(dir + "/manifest.json"));
}

void manifest_write(const std::string& dir, const json& j) {
  write_text_atomic(dir + "/manifest.json", j.dump(2) + "\n");
}

// Field of V-hat at step 0 over the grid, plus the oracle field when there
// is one. Points where the oracle declines (for example unreachable spots
// behind the wall in the drift problems) are masked out rather than fatal.
struct Fields {
  Vec vhat;
  Vec oracle;
  std::vector<char> valid;
  size_t n_valid = 0;
  bool have_oracle = false;
};

Fields eval_fields(const problems::Problem& prob,
                   const schemes::TrainedPolicy& pol,
                   const metrics::ReferenceGrid& grid) {
  Fields f;
  f.vhat.resize(grid.size());
  f.have_oracle = prob.has_oracle();
  if (f.have_oracle) {
    f.oracle.resize(grid.size());
    f.valid.assign(grid.size(), 1);
  }
  nn::FeedforwardNet::Workspace ws;
  double x[dynamics::kMaxStateDim];
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      grid.point(i, j, x);
      const size_t k = static_cast<size_t>(i) * grid.n + j;
      f.vhat[k] = pol.value(prob, 0, x, ws);
      if (f.have_oracle) {
        try {
          f.oracle[k] = prob.oracle(0.0, x);
          ++f.n_valid;
        } catch (const numeric_error&) {
          f.oracle[k] = std::numeric_limits<double>::quiet_NaN();
          f.valid[k] = 0;
        }
      }
    }
  }
  return f;
}

}  // namespace

std::string cmd_train(const RunConfig& cfg) {
  const std::string dir = resolve_output_dir(cfg);
  fs::create_directories(dir);

  auto prob = make_problem(cfg);
  std::vector<schemes::LossRecord> losses;
  std::vector<schemes::PhaseTiming> timings;
  schemes::TrainedPolicy pol = schemes::train(*prob, cfg.scheme, &losses,
                                              &timings);
  pol.save_nets(dir);

  {
    std::ofstream f(dir + "/loss.csv", std::ios::trunc);
    f << "step,n,iter,loss\n";
    for (const auto& r : losses) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.17g", r.loss);
      f << r.phase << ',' << r.n << ',' << r.iter << ',' << buf << '\n';
    }
  }

  const std::string snapshot = render_config(cfg);
  write_text_atomic(dir + "/config.cfg", snapshot);

  uint64_t h = fnv1a64(snapshot);
  std::vector<std::string> nets;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".net") nets.push_back(e.path().string());
  std::sort(nets.begin(), nets.end());
  for (const auto& p : nets) h = fnv1a64(read_text(p), h);

  json j;
  j["version"] = 1;
  j["created"] = now_iso8601();
  j["config"] = snapshot;
  j["content_hash"] = hex64(h);
  j["train_seconds"] = pol.train_seconds;
  j["phases"] = json::array();
  for (const auto& t : timings)
    j["phases"].push_back(
        {{"phase", t.phase}, {"n", t.n}, {"seconds", t.seconds}});
  j["errors"] = nullptr;
  manifest_write(dir, j);
  return dir;
}

LoadedRun load_run(const std::string& run_dir) {
  LoadedRun lr;
  lr.cfg = parse_config_file(run_dir + "/config.cfg");
  lr.prob = make_problem(lr.cfg);
  lr.policy.kind = lr.cfg.scheme.kind;
  lr.policy.tab = lr.cfg.scheme.tab;
  lr.policy.N = lr.cfg.scheme.N;
  lr.policy.p = lr.cfg.scheme.p;
  lr.policy.dt = lr.prob->horizon() / lr.cfg.scheme.N;
  lr.policy.load_nets(run_dir);
  json j = manifest_read(run_dir);
  lr.policy.train_seconds = j.value("train_seconds", 0.0);
  return lr;
}

EvalRow cmd_evaluate(const std::string& run_dir, std::optional<double> eta,
                     std::optional<int> grid_n) {
  LoadedRun lr = load_run(run_dir);
  const double band = eta.value_or(lr.cfg.eta);
  metrics::ReferenceGrid grid = make_grid(lr.cfg, *lr.prob, grid_n);
  Fields f = eval_fields(*lr.prob, lr.policy, grid);

  EvalRow row;
  row.have_oracle = f.have_oracle;
  row.cpu_seconds = lr.policy.train_seconds;
  if (f.have_oracle) {
    if (f.n_valid == f.vhat.size()) {
      row.stats = metrics::compute_errors(f.vhat, f.oracle, band);
    } else if (f.n_valid > 0) {
      Vec vh, orc;
      vh.reserve(f.n_valid);
      orc.reserve(f.n_valid);
      for (size_t k = 0; k < f.vhat.size(); ++k)
        if (f.valid[k]) {
          vh.push_back(f.vhat[k]);
          orc.push_back(f.oracle[k]);
        }
      row.stats = metrics::compute_errors(vh, orc, band);
    } else {
      throw numeric_error("oracle undefined on the whole evaluation grid");
    }
  }

  {
    std::ofstream out(run_dir + "/error_field.csv", std::ios::trunc);
    out << "a,b,vhat,oracle,abs_err\n";
    char buf[128];
    for (int i = 0; i < grid.n; ++i) {
      for (int j = 0; j < grid.n; ++j) {
        const size_t k = static_cast<size_t>(i) * grid.n + j;
        if (f.have_oracle && f.valid[k]) {
          std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g\n",
                        grid.coord(i), grid.coord(j), f.vhat[k], f.oracle[k],
                        std::fabs(f.vhat[k] - f.oracle[k]));
        } else {
          std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,,\n",
                        grid.coord(i), grid.coord(j), f.vhat[k]);
        }
        out << buf;
      }
    }
  }

  std::ostringstream r;
  r << schemes::scheme_name(lr.cfg.scheme.kind) << ',' << lr.cfg.scheme.N
    << ',' << lr.cfg.scheme.control_hidden.size() << ','
    << (lr.cfg.scheme.control_hidden.empty()
            ? 0
            : lr.cfg.scheme.control_hidden.front())
    << ',' << lr.cfg.scheme.M << ',' << lr.cfg.scheme.sg_iters << ',';
  if (f.have_oracle) {
    r << fmt_err(row.stats.global_linf) << ',' << fmt_err(row.stats.global_l1)
      << ',' << fmt_err(row.stats.local_linf) << ','
      << fmt_err(row.stats.local_l1) << ',';
  } else {
    r << ",,,,";
  }
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", row.cpu_seconds);
    r << buf;
  }
  row.csv = r.str();

  const std::string table = run_dir + "/errors.csv";
  const bool fresh = !fs::exists(table);
  std::ofstream out(table, std::ios::app);
  if (fresh) out << kErrorTableHeader << '\n';
  out << row.csv << '\n';
  out.close();

  json j = manifest_read(run_dir);
  if (f.have_oracle) {
    j["errors"] = {{"eta", band},
                   {"grid", grid.n},
                   {"global_linf", row.stats.global_linf},
                   {"global_l1_rel", row.stats.global_l1},
                   {"local_linf", row.stats.local_linf},
                   {"local_l1_rel", row.stats.local_l1},
                   {"local_count", row.stats.local_count}};
  } else {
    j["errors"] = {{"eta", band}, {"grid", grid.n}, {"available", false}};
  }
  manifest_write(run_dir, j);
  return row;
}

void cmd_oracle(const std::string& problem, int d, double t,
                const std::string& points_path, const std::string& out_path,
                int angle_samples) {
  RunConfig pc;
  pc.problem = problem;
  pc.d = d;
  pc.oracle_angle_samples = angle_samples;
  auto prob = make_problem(pc);
  if (!prob->has_oracle())
    throw config_error("problem " + problem + " has no oracle");
  const int dim = prob->dim();

  std::ifstream in(points_path);
  if (!in) throw config_error("cannot open points file: " + points_path);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw config_error("cannot write " + out_path);
  for (int i = 0; i < dim; ++i) out << 'x' << i + 1 << ',';
  out << "v,branch\n";

  auto* adv = dynamic_cast<const problems::EikonalAdvection*>(prob.get());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line;
    if (size_t c = stripped.find('#'); c != std::string::npos)
      stripped.resize(c);
    bool blank = stripped.find_first_not_of(" \t\r\n,") == std::string::npos;
    if (blank) continue;
    std::stringstream ss(stripped);
    std::string cell;
    Vec x;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t pos = 0;
        double v = std::stod(cell, &pos);
        x.push_back(v);
        (void)pos;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric && lineno == 1) continue;  // header row
    if (!numeric)
      throw config_error("non-numeric cell in points file line " +
                         std::to_string(lineno));
    if (static_cast<int>(x.size()) != dim)
      throw config_error("expected " + std::to_string(dim) +
                         " coordinates on line " + std::to_string(lineno));
    for (int m = 0; m < dim; ++m) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g,", x[m]);
      out << buf;
    }
    try {
      if (adv) {
        auto res = adv->oracle_detail(t, x.data());
        const char* tag = res.branch == problems::OracleBranch::Straight
                              ? "straight"
                          : res.branch == problems::OracleBranch::TwoSegment
                              ? "two-segment"
                              : "unreached";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", res.v);
        out << buf << ',' << tag << '\n';
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", prob->oracle(t, x.data()));
        out << buf << ",\n";
      }
    } catch (const numeric_error&) {
      out << ",failed\n";  // keep going, mark the row
    }
  }
}

void cmd_contour(const std::string& run_dir, const std::vector<int>& times) {
  LoadedRun lr = load_run(run_dir);
  metrics::ReferenceGrid grid = make_grid(lr.cfg, *lr.prob, std::nullopt);
  nn::FeedforwardNet::Workspace ws;
  double x[dynamics::kMaxStateDim];

  auto dump = [&](const std::string& path,
                  const std::vector<metrics::Polyline>& polys) {
    std::ofstream out(path, std::ios::trunc);
    out << "poly_id,a,b\n";
    int id = 0;
    char buf[80];
    for (const auto& poly : polys) {
      for (const auto& pt : poly) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g\n", id, pt[0], pt[1]);
        out << buf;
      }
      ++id;
    }
  };

  for (int n : times) {
    if (n < 0 || n > lr.policy.N)
      throw config_error("time index " + std::to_string(n) +
                         " outside 0.." + std::to_string(lr.policy.N));
    Vec field(grid.size());
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) {
        grid.point(i, j, x);
        field[static_cast<size_t>(i) * grid.n + j] =
            lr.policy.value(*lr.prob, n, x, ws);
      }
    dump(run_dir + "/contour_vhat_n" + std::to_string(n) + ".csv",
         metrics::zero_contours(grid, field));
    if (lr.prob->has_oracle()) {
      const double t = n * lr.policy.dt;
      for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
          grid.point(i, j, x);
          double v;
          try {
            v = lr.prob->oracle(t, x);
          } catch (const numeric_error&) {
            // contouring skips cells with undefined corners
            v = std::numeric_limits<double>::quiet_NaN();
          }
          field[static_cast<size_t>(i) * grid.n + j] = v;
        }
      dump(run_dir + "/contour_oracle_n" + std::to_string(n) + ".csv",
           metrics::zero_contours(grid, field));
    }
  }
}

std::string cmd_table(const std::vector<std::string>& run_dirs) {
  std::ostringstream out;
  out << kErrorTableHeader << '\n';
  for (const auto& dir : run_dirs) {
    const std::string path = dir + "/errors.csv";
    if (!fs::exists(path)) throw config_error("no errors.csv under " + dir);
    std::ifstream f(path);
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
      if (first) {
        first = false;  // header
        continue;
      }
      if (!line.empty()) out << line << '\n';
    }
  }
  return out.str();
}

int run_main(int argc, char** argv) {
  CLI::App app{"Neural feedback schemes for state-constrained reachability "
               "fronts"};
  app.require_subcommand(1);

  std::string config_path;
  int threads_override = 0;
  auto* tr = app.add_subcommand("train", "train a policy from a config file");
  tr->add_option("config", config_path, "run config file")->required();
  tr->add_option("--threads", threads_override,
                 "override [scheme] threads from the config");

  std::string run_dir;
  std::string eta_flag;
  int grid_flag = 0;
  auto* ev = app.add_subcommand("evaluate", "error table row for a run");
  ev->add_option("run_dir", run_dir, "run directory")->required();
  ev->add_option("--eta", eta_flag, "local band half-width (inf allowed)");
  ev->add_option("--grid", grid_flag, "grid points per axis");

  std::string oracle_problem, points_path, out_path;
  int oracle_d = 0;
  double oracle_t = 0.0;
  int oracle_samples = 4096;
  auto* orc = app.add_subcommand("oracle", "reference values at given points");
  orc->add_option("problem", oracle_problem, "problem name")->required();
  orc->add_option("--d", oracle_d, "state dimension (0: default)");
  orc->add_option("--t", oracle_t, "evaluation time");
  orc->add_option("--points", points_path, "CSV of points, one per row")
      ->required();
  orc->add_option("--out", out_path, "output CSV")->required();
  orc->add_option("--angle-samples", oracle_samples,
                  "direction resolution for the rotation oracle");

  std::string contour_dir;
  std::vector<int> contour_times;
  auto* ct = app.add_subcommand("contour", "zero-front polylines for a run");
  ct->add_option("run_dir", contour_dir, "run directory")->required();
  ct->add_option("--times", contour_times, "time indices n (comma separated)")
      ->required()
      ->delimiter(',');

  std::vector<std::string> table_dirs;
  std::string table_out;
  auto* tb = app.add_subcommand("table", "aggregate error rows across runs");
  tb->add_option("run_dirs", table_dirs, "run directories")->required();
  tb->add_option("--out", table_out, "write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tr) {
      RunConfig cfg = parse_config_file(config_path);
      if (threads_override > 0) cfg.scheme.threads = threads_override;
      std::string dir = cmd_train(cfg);
      std::printf("%s\n", dir.c_str());
    } else if (*ev) {
      std::optional<double> eta;
      if (!eta_flag.empty()) {
        if (eta_flag == "inf")
          eta = std::numeric_limits<double>::infinity();
        else
          eta = std::stod(eta_flag);
      }
      std::optional<int> grid;
      if (grid_flag > 0) grid = grid_flag;
      EvalRow row = cmd_evaluate(run_dir, eta, grid);
      std::printf("%s\n%s\n", kErrorTableHeader, row.csv.c_str());
    } else if (*orc) {
      cmd_oracle(oracle_problem, oracle_d, oracle_t, points_path, out_path,
                 oracle_samples);
    } else if (*ct) {
      cmd_contour(contour_dir, contour_times);
    } else if (*tb) {
      std::string table = cmd_table(table_dirs);
      if (table_out.empty()) {
        std::fputs(table.c_str(), stdout);
      } else {
        write_text_atomic(table_out, table);
      }
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}

}  // namespace frontnet::cli
