#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "svne/cnd.hpp"
#include "svne/enhance.hpp"
#include "svne/multipath.hpp"
#include "svne/netmodel.hpp"

namespace svne {

struct SubstrateParams {
  int nodes = 100;
  int links = 500;
  double bw_low = 50, bw_high = 150;
  std::vector<double> cpu_options = {3720, 5320};
  double waxman_alpha = 0.15, waxman_beta = 0.2;
};

struct WorkloadParams {
  int vn_count = 1000;
  double arrival_rate = 0.1;  // VNs per time unit
  double lifetime_low = 300, lifetime_high = 700;
  int size_low = 2, size_high = 20;
  double connectivity = 0.5;
  std::vector<double> cpu_set = {2500, 2000, 1000, 500};
  double bw_low = 1, bw_high = 50;
  double time_horizon = 0;  // > 0 drops events after this time (mid-run states)
};

struct Event {
  double time = 0.0;
  enum class Kind { kArrival = 0, kDeparture = 1, kNodeFailure = 2, kLinkFailure = 3 };
  Kind kind = Kind::kArrival;
  int id = 0;          // vn id, or substrate node/link id for failures
  VirtualNetwork vn;   // populated for arrivals
};

bool event_before(const Event& a, const Event& b);

enum class Strategy { kCnd, kFip };

std::string to_string(Strategy s);

struct ScenarioConfig {
  SubstrateParams substrate;
  WorkloadParams workload;
  Strategy strategy = Strategy::kCnd;
  int eta = 3;
  double alpha = 1.0;
  SolverConfig solver;
  CndConfig swarm;
  int candidate_cap = 0;  // 0 = twice the enhanced slot count
  std::uint64_t master_seed = 1;
  // Optional failure schedule, merged into the event stream. The reference
  // experiment injects none; sweeps and tests drive it directly.
  std::vector<Event> failure_schedule;

  // Simulation-scale solver budgets; the full defaults of SolverConfig /
  // CndConfig are meant for one-shot solves, not a few hundred of them.
  ScenarioConfig() {
    solver.max_steps = 400;
    solver.step_size = 1e-3;
    swarm.swarm_size = 4;
    swarm.outer_rounds = 3;
    swarm.stall_rounds = 2;
  }
};

// Poisson arrivals with uniform lifetimes; one departure per arrival.
std::vector<Event> generate_workload(const ScenarioConfig& config);

struct DecisionRow {
  double time = 0;
  int vn_id = -1;
  std::string event;    // arrive / depart / node_fail / link_fail
  std::string outcome;  // accept / reject / release / recovered / noop / ...
  double objective = 0;
  double cpu_used = 0, bw_used = 0;  // this event's delta
  double revenue_cum = 0;
  double accept_ratio = 0;
  double util_cpu = 0, util_bw = 0;
};

struct Metrics {
  std::vector<DecisionRow> rows;
  int submitted = 0, accepted = 0;
  double revenue = 0;
  double total_cpu_capacity = 0, total_bw_capacity = 0;

  double accept_ratio() const { return submitted ? static_cast<double>(accepted) / submitted : 0; }
  double final_util_cpu() const { return rows.empty() ? 0 : rows.back().util_cpu; }
  double final_util_bw() const { return rows.empty() ? 0 : rows.back().util_bw; }
};

struct LiveVn {
  EnhancedVn enhanced;
  Embedding embedding;
};

struct SimState {
  SubstrateNetwork substrate;
  std::map<int, LiveVn> live;
  std::set<int> failed_nodes;
};

struct SimResult {
  Metrics metrics;
  SimState state;  // state at the end of the run
};

Metrics run_scenario(const ScenarioConfig& config);
SimResult run_scenario_with_state(const ScenarioConfig& config);

struct FailureOutcome {
  std::string outcome;  // recovered / noop / backup_lost / survived / violation
  int affected_vns = 0;
  bool violation = false;
};

// Applies one failure event to the state: node failures replay the stored
// recovery plan of every affected VN against its reserved envelope; link
// failures check multi-path survival. No re-optimization happens.
FailureOutcome inject_failure(SimState& state, const Event& event);

struct SweepSummary {
  int swept = 0;
  int plan_recoveries = 0;  // node sweeps: failures absorbed by a stored plan
  int backup_only = 0;      // failed node hosted only backup slots
  int idle = 0;             // failed resource hosted nothing
  int survived = 0;         // link sweeps
  int violations = 0;
};

// Non-mutating exhaustive sweeps over single failures.
SweepSummary sweep_node_failures(const SimState& state);
SweepSummary sweep_link_failures(const SimState& state);

// Recompute the running metric columns from the per-event deltas alone.
Metrics compute_metrics(const std::vector<DecisionRow>& log, double total_cpu_capacity,
                        double total_bw_capacity);

std::pair<Metrics, Metrics> compare_strategies(const ScenarioConfig& config);

std::string decision_csv(const Metrics& metrics);
std::string comparison_csv(const Metrics& cnd, const Metrics& fip);

}  // namespace svne
