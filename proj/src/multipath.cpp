#include "svne/multipath.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include "svne/assignment.hpp"

namespace svne {

namespace {

constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::optional<PathSet> disjoint_paths(const SubstrateNetwork& net, int k, int l, int eta,
                                      double min_band) {
  if (k == l) throw std::invalid_argument("disjoint_paths: identical endpoints");
  if (eta < 2) throw std::invalid_argument("disjoint_paths: eta must be at least 2");
  if (k < 0 || k >= net.node_count() || l < 0 || l >= net.node_count())
    throw std::invalid_argument("disjoint_paths: unknown endpoint");

  const int nodes = net.node_count();
  std::vector<char> usable(net.link_count());
  for (int e = 0; e < net.link_count(); ++e) usable[e] = net.link(e).bw_free >= min_band;

  // flow[e] in {-1, 0, +1}; +1 means one unit along from->to.
  std::vector<int> flow(net.link_count(), 0);

  for (int round = 0; round < eta; ++round) {
    // SPFA over the residual graph (cancellation arcs have cost -1, never a
    // negative cycle for a min-cost flow).
    std::vector<double> dist(nodes, kInf);
    std::vector<int> pred_link(nodes, -1), pred_dir(nodes, 0);
    std::vector<char> in_queue(nodes, false);
    std::deque<int> queue;
    dist[k] = 0;
    queue.push_back(k);
    in_queue[k] = true;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      in_queue[u] = false;
      for (int lid : net.links_of(u)) {
        if (!usable[lid]) continue;
        const auto& link = net.link(lid);
        int w = link.from == u ? link.to : link.from;
        int dir = link.from == u ? +1 : -1;
        double cost;
        if (flow[lid] == 0)
          cost = 1.0;
        else if (flow[lid] == -dir)
          cost = -1.0;  // cancel the opposing unit
        else
          continue;  // link already carries a unit this way
        if (dist[u] + cost < dist[w] - kTol) {
          dist[w] = dist[u] + cost;
          pred_link[w] = lid;
          pred_dir[w] = dir;
          if (!in_queue[w]) {
            queue.push_back(w);
            in_queue[w] = true;
          }
        }
      }
    }
    if (dist[l] == kInf) return std::nullopt;  // max-flow bound reached
    for (int u = l; u != k;) {
      int lid = pred_link[u];
      flow[lid] += pred_dir[u];
      const auto& link = net.link(lid);
      u = link.from == u ? link.to : link.from;
    }
  }

  // Decompose the (acyclic) flow into eta simple paths; out-arcs taken in
  // link-id order for determinism.
  std::vector<std::vector<std::pair<int, int>>> out(nodes);  // (link, head)
  for (int e = 0; e < net.link_count(); ++e) {
    if (flow[e] == 0) continue;
    const auto& link = net.link(e);
    int tail = flow[e] > 0 ? link.from : link.to;
    int head = flow[e] > 0 ? link.to : link.from;
    out[tail].emplace_back(e, head);
  }
  for (auto& v : out) std::sort(v.begin(), v.end());

  PathSet ps;
  ps.k = k;
  ps.l = l;
  std::vector<char> used(net.link_count(), false);
  for (int p = 0; p < eta; ++p) {
    std::vector<int> path{k}, links;
    int u = k;
    while (u != l) {
      bool advanced = false;
      for (auto& [e, head] : out[u]) {
        if (used[e]) continue;
        used[e] = true;
        links.push_back(e);
        path.push_back(head);
        u = head;
        advanced = true;
        break;
      }
      if (!advanced) throw std::logic_error("disjoint_paths: flow decomposition failed");
    }
    ps.length += static_cast<int>(links.size());
    ps.paths.push_back(std::move(path));
    ps.path_links.push_back(std::move(links));
  }
  ps.band = kInf;
  for (const auto& links : ps.path_links)
    for (int e : links) ps.band = std::min(ps.band, net.link(e).bw_free);
  return ps;
}

PathTable build_path_table(const SubstrateNetwork& net,
                           const std::vector<std::pair<int, int>>& pairs, int eta,
                           double min_band) {
  PathTable table;
  for (auto [a, b] : pairs) {
    auto key = std::minmax(a, b);
    if (table.count(key)) continue;
    auto ps = disjoint_paths(net, key.first, key.second, eta, min_band);
    if (ps) table.emplace(key, std::move(*ps));
  }
  return table;
}

std::vector<std::vector<int>> select_candidates(const SubstrateNetwork& net,
                                                const EnhancedVn& enhanced, int cap_per_slot) {
  int nu = enhanced.slot_count();
  if (cap_per_slot <= 0) cap_per_slot = 2 * nu;
  std::vector<double> adjacent_bw(net.node_count(), 0.0);
  for (const auto& node : net.nodes())
    for (int lid : net.links_of(node.id)) adjacent_bw[node.id] += net.link(lid).bw_free;

  std::vector<std::vector<int>> candidates(nu);
  for (int slot = 0; slot < nu; ++slot) {
    std::vector<std::pair<double, int>> ranked;
    for (const auto& node : net.nodes()) {
      if (node.cpu_free + kTol < enhanced.c_e[slot]) continue;
      ranked.emplace_back(node.cpu_free * adjacent_bw[node.id], node.id);
    }
    // Highest rank first; node id breaks ties for determinism.
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (int t = 0; t < std::min<int>(cap_per_slot, ranked.size()); ++t)
      candidates[slot].push_back(ranked[t].second);
  }
  return candidates;
}

std::optional<EmbeddingProblem> build_embedding_lp(
    const EnhancedVn& enhanced, const SubstrateNetwork& net, int eta, const PathTable& table,
    const std::vector<std::vector<int>>& candidates, std::string* reason) {
  const int nu = enhanced.slot_count();
  if (static_cast<int>(candidates.size()) != nu)
    throw std::invalid_argument("build_embedding_lp: candidate list shape");
  if (eta < 2) throw std::invalid_argument("build_embedding_lp: eta must be at least 2");

  EmbeddingProblem prob;
  prob.eta = eta;
  prob.candidates = candidates;
  prob.x_offset.resize(nu);
  int next_var = 0;
  for (int slot = 0; slot < nu; ++slot) {
    if (candidates[slot].empty()) {
      if (reason) *reason = "slot " + std::to_string(slot) + " has no candidate node";
      return std::nullopt;
    }
    prob.x_offset[slot] = next_var;
    next_var += static_cast<int>(candidates[slot].size());
  }
  const int x_count = next_var;

  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j)
      if (enhanced.b_e[i][j] > 0) prob.links.push_back({i, j, enhanced.b_e[i][j], -1});

  GeneralFormLp& lp = prob.lp;
  std::vector<double> cost(x_count, 0.0);
  // Y variables: one per (link, usable candidate pair).
  for (std::size_t li = 0; li < prob.links.size(); ++li) {
    auto& link = prob.links[li];
    bool any = false;
    for (int ti = 0; ti < static_cast<int>(candidates[link.i].size()); ++ti)
      for (int tj = 0; tj < static_cast<int>(candidates[link.j].size()); ++tj) {
        int a = candidates[link.i][ti], b = candidates[link.j][tj];
        if (a == b) continue;  // both ends on one node is never injective
        auto it = table.find(std::minmax(a, b));
        if (it == table.end()) continue;  // no eta-disjoint system for this pair
        prob.y_vars.push_back({static_cast<int>(li), ti, tj, next_var++});
        cost.push_back(it->second.length * link.demand);
        any = true;
      }
    if (!any) {
      if (reason)
        *reason = "virtual link (" + std::to_string(link.i) + "," + std::to_string(link.j) +
                  ") has no usable candidate pair";
      return std::nullopt;
    }
  }

  lp.d1 = std::move(cost);
  SparseMatrix ineq(0, lp.n1());
  std::vector<double> r1;
  // CPU admission rows: (c_k^s - c_i^e) x_ik >= 0 on live residuals.
  for (int slot = 0; slot < nu; ++slot)
    for (int t = 0; t < static_cast<int>(candidates[slot].size()); ++t) {
      double margin = net.node(candidates[slot][t]).cpu_free - enhanced.c_e[slot];
      ineq.add(prob.x_var(slot, t), margin);
      ineq.close_row();
      r1.push_back(0.0);
    }
  // Path bandwidth rows: (Band - demand/(eta-1)) y >= 0.
  for (const auto& yv : prob.y_vars) {
    const auto& link = prob.links[yv.link];
    int a = candidates[link.i][yv.ti], b = candidates[link.j][yv.tj];
    double band = table.at(std::minmax(a, b)).band;
    ineq.add(yv.var, band - link.demand / (eta - 1));
    ineq.close_row();
    r1.push_back(0.0);
  }
  // Coupling: x_ik + x_jl - 2 y >= 0 and y - x_ik - x_jl >= -1.
  for (const auto& yv : prob.y_vars) {
    const auto& link = prob.links[yv.link];
    ineq.add(prob.x_var(link.i, yv.ti), 1.0);
    ineq.add(prob.x_var(link.j, yv.tj), 1.0);
    ineq.add(yv.var, -2.0);
    ineq.close_row();
    r1.push_back(0.0);
  }
  for (const auto& yv : prob.y_vars) {
    const auto& link = prob.links[yv.link];
    ineq.add(yv.var, 1.0);
    ineq.add(prob.x_var(link.i, yv.ti), -1.0);
    ineq.add(prob.x_var(link.j, yv.tj), -1.0);
    ineq.close_row();
    r1.push_back(-1.0);
  }
  // Occupancy: each substrate node hosts at most one slot of this VN.
  {
    std::map<int, std::vector<int>> node_vars;
    for (int slot = 0; slot < nu; ++slot)
      for (int t = 0; t < static_cast<int>(candidates[slot].size()); ++t)
        node_vars[candidates[slot][t]].push_back(prob.x_var(slot, t));
    for (const auto& [node, vars] : node_vars) {
      if (vars.size() < 2) continue;  // vacuous
      for (int var : vars) ineq.add(var, -1.0);
      ineq.close_row();
      r1.push_back(-1.0);
    }
  }

  SparseMatrix eq(0, lp.n1());
  std::vector<double> r2;
  for (int slot = 0; slot < nu; ++slot) {
    for (int t = 0; t < static_cast<int>(candidates[slot].size()); ++t)
      eq.add(prob.x_var(slot, t), 1.0);
    eq.close_row();
    r2.push_back(1.0);
  }
  // Unit linearization mass per virtual link.
  for (std::size_t li = 0; li < prob.links.size(); ++li) {
    for (const auto& yv : prob.y_vars)
      if (yv.link == static_cast<int>(li)) eq.add(yv.var, 1.0);
    eq.close_row();
    prob.links[li].sum_row = static_cast<int>(r2.size());
    r2.push_back(1.0);
  }

  lp.m11 = std::move(ineq);
  lp.m21 = std::move(eq);
  lp.m12 = SparseMatrix(lp.m11.rows(), 0);
  for (int r = 0; r < lp.m11.rows(); ++r) lp.m12.close_row();
  lp.m22 = SparseMatrix(lp.m21.rows(), 0);
  for (int r = 0; r < lp.m21.rows(); ++r) lp.m22.close_row();
  lp.r1 = std::move(r1);
  lp.r2 = std::move(r2);
  lp.relaxed01.resize(lp.n1());
  for (int i = 0; i < lp.n1(); ++i) lp.relaxed01[i] = i;
  lp.validate();
  return prob;
}

double realized_cost(const std::vector<int>& node_map, const EnhancedVn& enhanced,
                     const PathTable& table, int eta) {
  double cost = 0.0;
  int nu = enhanced.slot_count();
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j) {
      double b = enhanced.b_e[i][j];
      if (b <= 0) continue;
      auto it = table.find(std::minmax(node_map[i], node_map[j]));
      if (it == table.end() || it->second.band + kTol < b / (eta - 1)) return kInf;
      cost += it->second.length * b;
    }
  return cost;
}

namespace {

// Violations = slots whose node lacks CPU headroom plus virtual links whose
// mapped pair lacks a usable path system.
int violation_count(const std::vector<int>& node_map, const EnhancedVn& enhanced,
                    const SubstrateNetwork& net, const PathTable& table, int eta) {
  int bad = 0;
  int nu = enhanced.slot_count();
  for (int i = 0; i < nu; ++i)
    if (net.node(node_map[i]).cpu_free + kTol < enhanced.c_e[i]) ++bad;
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j) {
      double b = enhanced.b_e[i][j];
      if (b <= 0) continue;
      auto it = table.find(std::minmax(node_map[i], node_map[j]));
      if (it == table.end() || it->second.band + kTol < b / (eta - 1)) ++bad;
    }
  return bad;
}

}  // namespace

std::optional<std::vector<int>> round_assignment(std::span<const double> relaxed_primal,
                                                 const EmbeddingProblem& problem,
                                                 const EnhancedVn& enhanced,
                                                 const SubstrateNetwork& net,
                                                 const PathTable& table) {
  const int nu = enhanced.slot_count();
  const int eta = problem.eta;
  // Distinct candidate nodes form the matching's column space.
  std::vector<int> pool;
  for (const auto& list : problem.candidates)
    for (int node : list) pool.push_back(node);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::map<int, int> column_of;
  for (std::size_t c = 0; c < pool.size(); ++c) column_of[pool[c]] = static_cast<int>(c);

  // Primary weight is the relaxed x value; a vanishing true-cost term breaks
  // ties, so a totally uninformative (uniform) relaxation still degrades to a
  // cost-driven assignment.
  std::vector<std::vector<double>> proxy(nu, std::vector<double>(pool.size(), 0.0));
  double proxy_max = 1.0;
  for (int slot = 0; slot < nu; ++slot)
    for (int t = 0; t < static_cast<int>(problem.candidates[slot].size()); ++t) {
      int node = problem.candidates[slot][t];
      double cost = 0.0;
      for (const auto& link : problem.links) {
        if (link.i != slot && link.j != slot) continue;
        int other = link.i == slot ? link.j : link.i;
        double best = kInf;
        for (int peer : problem.candidates[other]) {
          if (peer == node) continue;
          auto it = table.find(std::minmax(node, peer));
          if (it != table.end()) best = std::min(best, static_cast<double>(it->second.length));
        }
        cost += std::isfinite(best) ? best * link.demand : 1e6;
      }
      proxy[slot][column_of[node]] = cost;
      proxy_max = std::max(proxy_max, cost);
    }
  std::vector<std::vector<double>> weight(nu,
                                          std::vector<double>(pool.size(), -kAssignForbidden));
  for (int slot = 0; slot < nu; ++slot)
    for (int t = 0; t < static_cast<int>(problem.candidates[slot].size()); ++t) {
      int col = column_of[problem.candidates[slot][t]];
      weight[slot][col] =
          relaxed_primal[problem.x_var(slot, t)] - 1e-6 * proxy[slot][col] / proxy_max;
    }
  auto match = max_weight_assignment(weight);
  if (!match) return std::nullopt;
  std::vector<int> node_map(nu);
  for (int slot = 0; slot < nu; ++slot) node_map[slot] = pool[(*match)[slot]];

  // Bounded local repair: move one slot to an unused candidate (or swap two
  // slots) while it strictly reduces the violation count.
  int violations = violation_count(node_map, enhanced, net, table, eta);
  int budget = 4 * nu;
  while (violations > 0 && budget-- > 0) {
    int best_violations = violations;
    double best_cost = kInf;
    std::vector<int> best_map;
    std::set<int> in_use(node_map.begin(), node_map.end());
    for (int slot = 0; slot < nu; ++slot) {
      for (int candidate : problem.candidates[slot]) {
        if (in_use.count(candidate)) continue;
        auto trial = node_map;
        trial[slot] = candidate;
        int tv = violation_count(trial, enhanced, net, table, eta);
        double tc = realized_cost(trial, enhanced, table, eta);
        if (tv < best_violations ||
            (tv == best_violations && tv < violations && tc < best_cost)) {
          best_violations = tv;
          best_cost = tc;
          best_map = trial;
        }
      }
      for (int other = slot + 1; other < nu; ++other) {
        auto trial = node_map;
        std::swap(trial[slot], trial[other]);
        // A swap is admissible only if each node is a candidate of its new slot.
        auto ok = [&](int s) {
          const auto& c = problem.candidates[s];
          return std::find(c.begin(), c.end(), trial[s]) != c.end();
        };
        if (!ok(slot) || !ok(other)) continue;
        int tv = violation_count(trial, enhanced, net, table, eta);
        double tc = realized_cost(trial, enhanced, table, eta);
        if (tv < best_violations ||
            (tv == best_violations && tv < violations && tc < best_cost)) {
          best_violations = tv;
          best_cost = tc;
          best_map = trial;
        }
      }
    }
    if (best_violations >= violations) return std::nullopt;  // repair stalled
    node_map = std::move(best_map);
    violations = best_violations;
  }
  if (violations > 0) return std::nullopt;
  return node_map;
}

std::optional<Embedding> allocate_embedding(SubstrateNetwork& net, const EnhancedVn& enhanced,
                                            const std::vector<int>& node_map, int eta,
                                            const PathTable& table,
                                            std::string* reject_reason) {
  const int nu = enhanced.slot_count();
  if (static_cast<int>(node_map.size()) != nu)
    throw std::invalid_argument("allocate_embedding: node map shape");
  {
    std::set<int> uniq(node_map.begin(), node_map.end());
    if (static_cast<int>(uniq.size()) != nu)
      throw std::invalid_argument("allocate_embedding: node map not injective");
  }

  Embedding emb;
  emb.vn_id = enhanced.base.id;
  emb.eta = eta;
  emb.node_map = node_map;
  emb.ledger.vn_id = enhanced.base.id;
  for (int slot = 0; slot < nu; ++slot)
    if (enhanced.c_e[slot] > 0)
      emb.ledger.node_cpu.emplace_back(node_map[slot], enhanced.c_e[slot]);

  std::map<int, double> bw_usage;
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j) {
      double b = enhanced.b_e[i][j];
      if (b <= 0) continue;
      auto it = table.find(std::minmax(node_map[i], node_map[j]));
      if (it == table.end()) {
        if (reject_reason)
          *reject_reason = "no path set for virtual link (" + std::to_string(i) + "," +
                           std::to_string(j) + ")";
        return std::nullopt;
      }
      const PathSet& ps = it->second;
      Embedding::Route route;
      route.i = i;
      route.j = j;
      route.demand = b;
      route.per_path_bw = b / (eta - 1);
      route.paths = ps.paths;
      route.path_links = ps.path_links;
      for (const auto& links : ps.path_links)
        for (int e : links) bw_usage[e] += route.per_path_bw;
      emb.objective += ps.length * b;
      emb.routes.push_back(std::move(route));
    }
  for (const auto& [link, amount] : bw_usage) emb.ledger.link_bw.emplace_back(link, amount);

  if (auto failure = allocate(net, emb.ledger)) {
    if (reject_reason) *reject_reason = "insufficient residual on " + failure->resource;
    return std::nullopt;
  }
  return emb;
}

bool survives_link_failure(const Embedding& embedding, int failed_link_id) {
  for (const auto& route : embedding.routes) {
    double surviving = 0.0;
    for (const auto& links : route.path_links) {
      bool hit = std::find(links.begin(), links.end(), failed_link_id) != links.end();
      if (!hit) surviving += route.per_path_bw;
    }
    if (surviving + kTol < route.demand) return false;
  }
  return true;
}

}  // namespace svne
