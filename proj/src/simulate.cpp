#include "svne/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "svne/brite.hpp"

namespace svne {

std::string to_string(Strategy s) { return s == Strategy::kCnd ? "cnd" : "fip"; }

bool event_before(const Event& a, const Event& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.id < b.id;
}

std::vector<Event> generate_workload(const ScenarioConfig& config) {
  const auto& w = config.workload;
  if (w.vn_count < 0 || w.arrival_rate <= 0 || w.lifetime_low <= 0 ||
      w.lifetime_low > w.lifetime_high)
    throw std::invalid_argument("generate_workload: bad workload parameters");
  std::vector<Event> events;
  Rng arrivals = Rng::stream(config.master_seed, "arrivals");
  double t = 0.0;
  for (int i = 0; i < w.vn_count; ++i) {
    t += arrivals.exponential(w.arrival_rate);
    double lifetime = arrivals.uniform(w.lifetime_low, w.lifetime_high);
    Event arrive;
    arrive.time = t;
    arrive.kind = Event::Kind::kArrival;
    arrive.id = i;
    arrive.vn = generate_vn_request(w.size_low, w.size_high, w.connectivity, w.cpu_set,
                                    w.bw_low, w.bw_high,
                                    mix_seed(config.master_seed, "vn-" + std::to_string(i)));
    arrive.vn.id = i;
    arrive.vn.arrival_time = t;
    arrive.vn.lifetime = lifetime;
    events.push_back(std::move(arrive));
    Event depart;
    depart.time = t + lifetime;
    depart.kind = Event::Kind::kDeparture;
    depart.id = i;
    events.push_back(std::move(depart));
  }
  if (w.time_horizon > 0)
    std::erase_if(events, [&](const Event& e) { return e.time > w.time_horizon; });
  std::sort(events.begin(), events.end(), event_before);
  return events;
}

namespace {

struct EmbedAttempt {
  bool accepted = false;
  EnhancedVn enhanced;
  Embedding embedding;
  double objective = 0;
  std::string reason;
};

EmbedAttempt embed_one(SubstrateNetwork& substrate, const ScenarioConfig& config,
                       const VirtualNetwork& vn) {
  EmbedAttempt attempt;
  CndConfig swarm = config.swarm;
  swarm.seed = mix_seed(config.master_seed, "swarm-" + std::to_string(vn.id));

  attempt.enhanced = config.strategy == Strategy::kCnd
                         ? enhance_vn(vn, config.alpha, config.solver, swarm)
                         : fip_enhance(vn, config.alpha);
  const EnhancedVn& enhanced = attempt.enhanced;

  auto candidates = select_candidates(substrate, enhanced, config.candidate_cap);
  // The weakest per-path requirement of this VN bounds which links can carry
  // any of its sub-links at all.
  double min_need = std::numeric_limits<double>::infinity();
  int nu = enhanced.slot_count();
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j)
      if (enhanced.b_e[i][j] > 0)
        min_need = std::min(min_need, enhanced.b_e[i][j] / (config.eta - 1));
  if (!std::isfinite(min_need)) min_need = 0.0;

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j) {
      if (enhanced.b_e[i][j] <= 0) continue;
      for (int a : candidates[i])
        for (int b : candidates[j])
          if (a != b) pairs.push_back(std::minmax(a, b));
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  PathTable table = build_path_table(substrate, pairs, config.eta, min_need);

  std::string reason;
  auto problem = build_embedding_lp(enhanced, substrate, config.eta, table, candidates, &reason);
  if (!problem) {
    attempt.reason = reason;
    return attempt;
  }

  CndConfig embed_swarm = swarm;
  embed_swarm.seed = mix_seed(config.master_seed, "embed-swarm-" + std::to_string(vn.id));
  Rounder rounder = [&](std::span<const double> primal) {
    auto map = round_assignment(primal, *problem, enhanced, substrate, table);
    if (!map) return std::numeric_limits<double>::infinity();
    return realized_cost(*map, enhanced, table, config.eta);
  };
  CndResult result = cnd_solve(problem->lp, embed_swarm, config.solver, rounder);
  if (!std::isfinite(result.best_objective)) {
    attempt.reason = "no feasible assignment found";
    return attempt;
  }
  auto map = round_assignment(result.best_primal, *problem, enhanced, substrate, table);
  if (!map) {
    attempt.reason = "rounding rejected the relaxed solution";
    return attempt;
  }
  auto embedding = allocate_embedding(substrate, enhanced, *map, config.eta, table, &reason);
  if (!embedding) {
    attempt.reason = reason;
    return attempt;
  }
  attempt.accepted = true;
  attempt.embedding = std::move(*embedding);
  attempt.objective = attempt.embedding.objective;
  return attempt;
}

}  // namespace

SimResult run_scenario_with_state(const ScenarioConfig& config) {
  SimResult result;
  result.state.substrate =
      waxman_generate(config.substrate.nodes, config.substrate.links, config.substrate.bw_low,
                      config.substrate.bw_high, config.substrate.cpu_options,
                      config.substrate.waxman_alpha, config.substrate.waxman_beta,
                      config.master_seed);
  Metrics& metrics = result.metrics;
  SimState& state = result.state;
  metrics.total_cpu_capacity = state.substrate.total_cpu();
  metrics.total_bw_capacity = state.substrate.total_bw();

  auto events = generate_workload(config);
  if (!config.failure_schedule.empty()) {
    for (const auto& failure : config.failure_schedule) {
      if (failure.kind != Event::Kind::kNodeFailure && failure.kind != Event::Kind::kLinkFailure)
        throw std::invalid_argument("run_scenario: schedule may only hold failure events");
      events.push_back(failure);
    }
    std::sort(events.begin(), events.end(), event_before);
  }
  for (const auto& event : events) {
    DecisionRow row;
    row.time = event.time;
    switch (event.kind) {
      case Event::Kind::kArrival: {
        ++metrics.submitted;
        row.vn_id = event.id;
        row.event = "arrive";
        auto attempt = embed_one(state.substrate, config, event.vn);
        if (attempt.accepted) {
          ++metrics.accepted;
          metrics.revenue += event.vn.total_cpu() + event.vn.total_bw();
          row.outcome = "accept";
          row.objective = attempt.objective;
          row.cpu_used = attempt.embedding.ledger.total_cpu();
          row.bw_used = attempt.embedding.ledger.total_bw();
          state.live.emplace(event.id,
                             LiveVn{std::move(attempt.enhanced), std::move(attempt.embedding)});
        } else {
          row.outcome = "reject";
        }
        break;
      }
      case Event::Kind::kDeparture: {
        row.vn_id = event.id;
        row.event = "depart";
        auto it = state.live.find(event.id);
        if (it == state.live.end()) {
          row.outcome = "noop";  // was rejected on arrival
        } else {
          row.outcome = "release";
          row.cpu_used = it->second.embedding.ledger.total_cpu();
          row.bw_used = it->second.embedding.ledger.total_bw();
          release(state.substrate, it->second.embedding.ledger);
          state.live.erase(it);
        }
        break;
      }
      case Event::Kind::kNodeFailure:
      case Event::Kind::kLinkFailure: {
        row.vn_id = -1;
        row.event = event.kind == Event::Kind::kNodeFailure ? "node_fail" : "link_fail";
        auto outcome = inject_failure(state, event);
        row.outcome = outcome.outcome;
        break;
      }
    }
    row.revenue_cum = metrics.revenue;
    row.accept_ratio = metrics.accept_ratio();
    row.util_cpu =
        metrics.total_cpu_capacity > 0 ? state.substrate.used_cpu() / metrics.total_cpu_capacity : 0;
    row.util_bw =
        metrics.total_bw_capacity > 0 ? state.substrate.used_bw() / metrics.total_bw_capacity : 0;
    metrics.rows.push_back(std::move(row));
  }
  return result;
}

Metrics run_scenario(const ScenarioConfig& config) {
  return run_scenario_with_state(config).metrics;
}

namespace {

// Validates one VN's plan-based recovery for the failure of substrate node s.
// Returns "recovered", "backup_lost", or "violation"; "" when unaffected.
std::string recover_vn(const LiveVn& vn, int failed_node) {
  const auto& map = vn.embedding.node_map;
  int n = vn.enhanced.base.node_count();
  for (int slot = 0; slot < static_cast<int>(map.size()); ++slot) {
    if (map[slot] != failed_node) continue;
    if (slot == n) return "backup_lost";  // no working load on the backup slot
    Recovery rec = apply_recovery(vn.enhanced, slot + 1);
    // Post-recovery loads must fit the envelope the embedding reserved.
    for (int j = 0; j < vn.enhanced.slot_count(); ++j)
      if (rec.cpu[j] > vn.enhanced.c_e[j] + 1e-9) return "violation";
    for (int j = 0; j < vn.enhanced.slot_count(); ++j)
      for (int l = 0; l < vn.enhanced.slot_count(); ++l)
        if (rec.bw[j][l] > vn.enhanced.b_e[j][l] + 1e-9) return "violation";
    if (rec.allocation[slot] != -1) return "violation";  // failed slot must be vacated
    return "recovered";
  }
  return "";
}

}  // namespace

FailureOutcome inject_failure(SimState& state, const Event& event) {
  FailureOutcome outcome;
  if (event.kind == Event::Kind::kNodeFailure) {
    int node = event.id;
    state.failed_nodes.insert(node);
    bool any_backup = false;
    for (const auto& [id, vn] : state.live) {
      std::string r = recover_vn(vn, node);
      if (r.empty()) continue;
      ++outcome.affected_vns;
      if (r == "violation") outcome.violation = true;
      if (r == "backup_lost") any_backup = true;
    }
    if (outcome.violation)
      outcome.outcome = "violation";
    else if (outcome.affected_vns == 0)
      outcome.outcome = "noop";
    else
      outcome.outcome = any_backup && outcome.affected_vns == 1 ? "backup_lost" : "recovered";
  } else if (event.kind == Event::Kind::kLinkFailure) {
    for (const auto& [id, vn] : state.live) {
      bool uses = false;
      for (const auto& route : vn.embedding.routes)
        for (const auto& links : route.path_links)
          if (std::find(links.begin(), links.end(), event.id) != links.end()) uses = true;
      if (!uses) continue;
      ++outcome.affected_vns;
      if (!survives_link_failure(vn.embedding, event.id)) outcome.violation = true;
    }
    if (outcome.violation)
      outcome.outcome = "violation";
    else
      outcome.outcome = outcome.affected_vns ? "survived" : "noop";
  } else {
    throw std::invalid_argument("inject_failure: not a failure event");
  }
  return outcome;
}

SweepSummary sweep_node_failures(const SimState& state) {
  SweepSummary summary;
  for (const auto& node : state.substrate.nodes()) {
    bool occupied = false, working = false, violation = false;
    for (const auto& [id, vn] : state.live) {
      std::string r = recover_vn(vn, node.id);
      if (r.empty()) continue;
      occupied = true;
      if (r == "recovered") working = true;
      if (r == "violation") violation = true;
    }
    if (!occupied) continue;
    ++summary.swept;
    if (violation)
      ++summary.violations;
    else if (working)
      ++summary.plan_recoveries;
    else
      ++summary.backup_only;
  }
  return summary;
}

SweepSummary sweep_link_failures(const SimState& state) {
  SweepSummary summary;
  for (const auto& link : state.substrate.links()) {
    ++summary.swept;
    bool ok = true;
    for (const auto& [id, vn] : state.live)
      if (!survives_link_failure(vn.embedding, link.id)) ok = false;
    if (ok)
      ++summary.survived;
    else
      ++summary.violations;
  }
  return summary;
}

Metrics compute_metrics(const std::vector<DecisionRow>& log, double total_cpu_capacity,
                        double total_bw_capacity) {
  Metrics metrics;
  metrics.total_cpu_capacity = total_cpu_capacity;
  metrics.total_bw_capacity = total_bw_capacity;
  double used_cpu = 0, used_bw = 0;
  for (const auto& entry : log) {
    DecisionRow row = entry;
    if (entry.event == "arrive") {
      ++metrics.submitted;
      if (entry.outcome == "accept") {
        ++metrics.accepted;
        used_cpu += entry.cpu_used;
        used_bw += entry.bw_used;
        // Revenue is derived here from the arrival's recorded deltas in the
        // live run; replay just carries the cumulative column forward.
        metrics.revenue = entry.revenue_cum;
      }
    } else if (entry.event == "depart" && entry.outcome == "release") {
      used_cpu -= entry.cpu_used;
      used_bw -= entry.bw_used;
    }
    row.revenue_cum = metrics.revenue;
    row.accept_ratio = metrics.accept_ratio();
    row.util_cpu = total_cpu_capacity > 0 ? used_cpu / total_cpu_capacity : 0;
    row.util_bw = total_bw_capacity > 0 ? used_bw / total_bw_capacity : 0;
    metrics.rows.push_back(std::move(row));
  }
  return metrics;
}

std::pair<Metrics, Metrics> compare_strategies(const ScenarioConfig& config) {
  ScenarioConfig cnd_config = config;
  cnd_config.strategy = Strategy::kCnd;
  ScenarioConfig fip_config = config;
  fip_config.strategy = Strategy::kFip;
  return {run_scenario(cnd_config), run_scenario(fip_config)};
}

namespace {

void append_row(std::string& out, const DecisionRow& row) {
  out += format_double(row.time);
  out += ',';
  out += std::to_string(row.vn_id);
  out += ',';
  out += row.event;
  out += ',';
  out += row.outcome;
  out += ',';
  out += format_double(row.objective);
  out += ',';
  out += format_double(row.cpu_used);
  out += ',';
  out += format_double(row.bw_used);
  out += ',';
  out += format_double(row.revenue_cum);
  out += ',';
  out += format_double(row.accept_ratio);
  out += ',';
  out += format_double(row.util_cpu);
  out += ',';
  out += format_double(row.util_bw);
  out += '\n';
}

constexpr const char* kDecisionHeader =
    "time,vn_id,event,outcome,objective,cpu_used,bw_used,revenue_cum,accept_ratio,util_cpu,"
    "util_bw";

}  // namespace

std::string decision_csv(const Metrics& metrics) {
  std::string out = std::string(kDecisionHeader) + "\n";
  for (const auto& row : metrics.rows) append_row(out, row);
  return out;
}

std::string comparison_csv(const Metrics& cnd, const Metrics& fip) {
  std::string out = std::string("strategy,") + kDecisionHeader + "\n";
  for (const auto& row : cnd.rows) {
    out += "cnd,";
    append_row(out, row);
  }
  for (const auto& row : fip.rows) {
    out += "fip,";
    append_row(out, row);
  }
  return out;
}

}  // namespace svne
