#include "frontnet/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace frontnet::cli {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  size_t pos = 0;
  double r;
  try {
    r = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw config_error("bad number for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw config_error("bad number for " + key + ": '" + v + "'");
  return r;
}

long long parse_int(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long long r;
  try {
    r = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw config_error("bad integer for " + key + ": '" + v + "'");
  }
  if (pos != v.size())
    throw config_error("bad integer for " + key + ": '" + v + "'");
  return r;
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  size_t pos = 0;
  uint64_t r;
  try {
    r = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw config_error("bad seed for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw config_error("bad seed for " + key + ": '" + v + "'");
  return r;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("bad boolean for " + key + ": '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw config_error("empty entry in list for " + key);
    out.push_back(static_cast<int>(parse_int(key, item)));
  }
  if (out.empty()) throw config_error("empty list for " + key);
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t cpos = line.find_first_of("#;");
    if (cpos != std::string::npos) line.resize(cpos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("malformed section header on line " +
                           std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "scheme" && section != "metrics" &&
          section != "output")
        throw config_error("unknown config section: [" + section + "]");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected key = value on line " +
                         std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw config_error("key '" + key + "' appears before any section");
    const std::string qual = section + "." + key;

    if (section == "problem") {
      if (key == "name") cfg.problem = val;
      else if (key == "d") cfg.d = static_cast<int>(parse_int(qual, val));
      else throw config_error("unknown config key: " + qual);
    } else if (section == "scheme") {
      auto& s = cfg.scheme;
      if (key == "kind") s.kind = schemes::scheme_by_name(val);
      else if (key == "N") s.N = static_cast<int>(parse_int(qual, val));
      else if (key == "p") s.p = static_cast<int>(parse_int(qual, val));
      else if (key == "tableau") s.tab = dynamics::ButcherTableau::by_name(val);
      else if (key == "M") s.M = static_cast<int>(parse_int(qual, val));
      else if (key == "sg_iters") s.sg_iters = static_cast<int>(parse_int(qual, val));
      else if (key == "value_M") s.value_M = static_cast<int>(parse_int(qual, val));
      else if (key == "value_sg_iters") s.value_sg_iters = static_cast<int>(parse_int(qual, val));
      else if (key == "control_hidden") s.control_hidden = parse_int_list(qual, val);
      else if (key == "value_hidden") s.value_hidden = parse_int_list(qual, val);
      else if (key == "seed") s.seed = parse_u64(qual, val);
      else if (key == "warm_start") s.warm_start = parse_bool(qual, val);
      else if (key == "lr") s.adam.lr = parse_double(qual, val);
      else if (key == "adam_beta1") s.adam.beta1 = parse_double(qual, val);
      else if (key == "adam_beta2") s.adam.beta2 = parse_double(qual, val);
      else if (key == "adam_eps") s.adam.eps = parse_double(qual, val);
      else if (key == "threads") s.threads = static_cast<int>(parse_int(qual, val));
      else throw config_error("unknown config key: " + qual);
    } else if (section == "metrics") {
      if (key == "eta") cfg.eta = parse_double(qual, val);
      else if (key == "grid") cfg.grid_n = static_cast<int>(parse_int(qual, val));
      else if (key == "rmax") cfg.rmax = parse_double(qual, val);
      else if (key == "oracle_angle_samples")
        cfg.oracle_angle_samples = static_cast<int>(parse_int(qual, val));
      else throw config_error("unknown config key: " + qual);
    } else {  // output
      if (key == "dir") cfg.out_dir = val;
      else throw config_error("unknown config key: " + qual);
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[problem]\n";
  os << "name = " << cfg.problem << "\n";
  os << "d = " << cfg.d << "\n";
  os << "\n[scheme]\n";
  os << "kind = " << schemes::scheme_name(cfg.scheme.kind) << "\n";
  os << "N = " << cfg.scheme.N << "\n";
  os << "p = " << cfg.scheme.p << "\n";
  os << "tableau = " << cfg.scheme.tab.name << "\n";
  os << "M = " << cfg.scheme.M << "\n";
  os << "sg_iters = " << cfg.scheme.sg_iters << "\n";
  os << "value_M = " << cfg.scheme.value_M << "\n";
  os << "value_sg_iters = " << cfg.scheme.value_sg_iters << "\n";
  os << "control_hidden = " << join_ints(cfg.scheme.control_hidden) << "\n";
  os << "value_hidden = " << join_ints(cfg.scheme.value_hidden) << "\n";
  os << "seed = " << cfg.scheme.seed << "\n";
  os << "warm_start = " << (cfg.scheme.warm_start ? "true" : "false") << "\n";
  os << "lr = " << fmt_double(cfg.scheme.adam.lr) << "\n";
  os << "adam_beta1 = " << fmt_double(cfg.scheme.adam.beta1) << "\n";
  os << "adam_beta2 = " << fmt_double(cfg.scheme.adam.beta2) << "\n";
  os << "adam_eps = " << fmt_double(cfg.scheme.adam.eps) << "\n";
  os << "threads = " << cfg.scheme.threads << "\n";
  os << "\n[metrics]\n";
  os << "eta = " << fmt_double(cfg.eta) << "\n";
  os << "grid = " << cfg.grid_n << "\n";
  os << "rmax = " << fmt_double(cfg.rmax) << "\n";
  os << "oracle_angle_samples = " << cfg.oracle_angle_samples << "\n";
  os << "\n[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  return os.str();
}

std::string resolve_output_dir(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) throw config_error("output.dir is not set");
  std::filesystem::path p(cfg.out_dir);
  if (p.is_absolute()) return p.string();
  const char* root = std::getenv("FRONTNET_OUTPUT_ROOT");
  if (root && *root) return (std::filesystem::path(root) / p).string();
  return p.string();
}

}  // namespace frontnet::cli
