#include "svne/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "svne/brite.hpp"

namespace svne {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  return out;
}

long to_long(const std::string& v, const std::string& key) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("bad integer value for " + key + ": '" + v + "'");
  return out;
}

std::vector<double> to_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, key));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

std::string list_to_string(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "substrate" && section != "workload" && section != "solver" &&
          section != "swarm" && section != "embedding")
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section +
                          "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "strategy") {
      if (value == "cnd")
        config.strategy = Strategy::kCnd;
      else if (value == "fip")
        config.strategy = Strategy::kFip;
      else
        throw ConfigError("strategy must be cnd or fip, got '" + value + "'");
    } else if (qualified == "seed") {
      config.master_seed = static_cast<std::uint64_t>(to_long(value, qualified));
    } else if (qualified == "substrate.nodes") {
      config.substrate.nodes = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "substrate.links") {
      config.substrate.links = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "substrate.bw_low") {
      config.substrate.bw_low = to_double(value, qualified);
    } else if (qualified == "substrate.bw_high") {
      config.substrate.bw_high = to_double(value, qualified);
    } else if (qualified == "substrate.cpu_options") {
      config.substrate.cpu_options = to_list(value, qualified);
    } else if (qualified == "substrate.waxman_alpha") {
      config.substrate.waxman_alpha = to_double(value, qualified);
    } else if (qualified == "substrate.waxman_beta") {
      config.substrate.waxman_beta = to_double(value, qualified);
    } else if (qualified == "workload.vn_count") {
      config.workload.vn_count = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "workload.arrival_rate") {
      config.workload.arrival_rate = to_double(value, qualified);
    } else if (qualified == "workload.lifetime_low") {
      config.workload.lifetime_low = to_double(value, qualified);
    } else if (qualified == "workload.lifetime_high") {
      config.workload.lifetime_high = to_double(value, qualified);
    } else if (qualified == "workload.size_low") {
      config.workload.size_low = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "workload.size_high") {
      config.workload.size_high = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "workload.connectivity") {
      config.workload.connectivity = to_double(value, qualified);
    } else if (qualified == "workload.cpu_set") {
      config.workload.cpu_set = to_list(value, qualified);
    } else if (qualified == "workload.bw_low") {
      config.workload.bw_low = to_double(value, qualified);
    } else if (qualified == "workload.bw_high") {
      config.workload.bw_high = to_double(value, qualified);
    } else if (qualified == "workload.time_horizon") {
      config.workload.time_horizon = to_double(value, qualified);
    } else if (qualified == "solver.beta") {
      config.solver.beta = to_double(value, qualified);
    } else if (qualified == "solver.step_size") {
      config.solver.step_size = to_double(value, qualified);
    } else if (qualified == "solver.max_steps") {
      config.solver.max_steps = to_long(value, qualified);
    } else if (qualified == "solver.kkt_tolerance") {
      config.solver.kkt_tolerance = to_double(value, qualified);
    } else if (qualified == "solver.integrator") {
      if (value == "euler")
        config.solver.integrator = SolverConfig::Integrator::kEuler;
      else if (value == "rk4")
        config.solver.integrator = SolverConfig::Integrator::kRk4;
      else
        throw ConfigError("solver.integrator must be euler or rk4");
    } else if (qualified == "swarm.size") {
      config.swarm.swarm_size = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "swarm.inertia") {
      config.swarm.inertia = to_double(value, qualified);
    } else if (qualified == "swarm.c1") {
      config.swarm.c1 = to_double(value, qualified);
    } else if (qualified == "swarm.c2") {
      config.swarm.c2 = to_double(value, qualified);
    } else if (qualified == "swarm.outer_rounds") {
      config.swarm.outer_rounds = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "swarm.stall_rounds") {
      config.swarm.stall_rounds = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "embedding.eta") {
      config.eta = static_cast<int>(to_long(value, qualified));
    } else if (qualified == "embedding.alpha") {
      config.alpha = to_double(value, qualified);
    } else if (qualified == "embedding.candidate_cap") {
      config.candidate_cap = static_cast<int>(to_long(value, qualified));
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + qualified + "'");
    }
  }
  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string print_config(const ScenarioConfig& c) {
  std::string out;
  out += "strategy = " + to_string(c.strategy) + "\n";
  out += "seed = " + std::to_string(c.master_seed) + "\n";
  out += "\n[substrate]\n";
  out += "nodes = " + std::to_string(c.substrate.nodes) + "\n";
  out += "links = " + std::to_string(c.substrate.links) + "\n";
  out += "bw_low = " + format_double(c.substrate.bw_low) + "\n";
  out += "bw_high = " + format_double(c.substrate.bw_high) + "\n";
  out += "cpu_options = " + list_to_string(c.substrate.cpu_options) + "\n";
  out += "waxman_alpha = " + format_double(c.substrate.waxman_alpha) + "\n";
  out += "waxman_beta = " + format_double(c.substrate.waxman_beta) + "\n";
  out += "\n[workload]\n";
  out += "vn_count = " + std::to_string(c.workload.vn_count) + "\n";
  out += "arrival_rate = " + format_double(c.workload.arrival_rate) + "\n";
  out += "lifetime_low = " + format_double(c.workload.lifetime_low) + "\n";
  out += "lifetime_high = " + format_double(c.workload.lifetime_high) + "\n";
  out += "size_low = " + std::to_string(c.workload.size_low) + "\n";
  out += "size_high = " + std::to_string(c.workload.size_high) + "\n";
  out += "connectivity = " + format_double(c.workload.connectivity) + "\n";
  out += "cpu_set = " + list_to_string(c.workload.cpu_set) + "\n";
  out += "bw_low = " + format_double(c.workload.bw_low) + "\n";
  out += "bw_high = " + format_double(c.workload.bw_high) + "\n";
  out += "time_horizon = " + format_double(c.workload.time_horizon) + "\n";
  out += "\n[solver]\n";
  out += "beta = " + format_double(c.solver.beta) + "\n";
  out += "step_size = " + format_double(c.solver.step_size) + "\n";
  out += "max_steps = " + std::to_string(c.solver.max_steps) + "\n";
  out += "kkt_tolerance = " + format_double(c.solver.kkt_tolerance) + "\n";
  out += std::string("integrator = ") +
         (c.solver.integrator == SolverConfig::Integrator::kEuler ? "euler" : "rk4") + "\n";
  out += "\n[swarm]\n";
  out += "size = " + std::to_string(c.swarm.swarm_size) + "\n";
  out += "inertia = " + format_double(c.swarm.inertia) + "\n";
  out += "c1 = " + format_double(c.swarm.c1) + "\n";
  out += "c2 = " + format_double(c.swarm.c2) + "\n";
  out += "outer_rounds = " + std::to_string(c.swarm.outer_rounds) + "\n";
  out += "stall_rounds = " + std::to_string(c.swarm.stall_rounds) + "\n";
  out += "\n[embedding]\n";
  out += "eta = " + std::to_string(c.eta) + "\n";
  out += "alpha = " + format_double(c.alpha) + "\n";
  out += "candidate_cap = " + std::to_string(c.candidate_cap) + "\n";
  return out;
}

}  // namespace svne
