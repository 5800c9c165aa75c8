#include <doctest.h>

#include <cmath>
#include <set>

#include "support/maxflow_oracle.hpp"
#include "svne/multipath.hpp"
#include "svne/netmodel.hpp"
#include "svne/rng.hpp"

using namespace svne;

namespace {

SubstrateNetwork diamond() {
  // Two parallel 2-hop routes 0-1-3 and 0-2-3.
  SubstrateNetwork net;
  for (int i = 0; i < 4; ++i) net.add_node(0, 0, 100);
  net.add_link(0, 1, 50);
  net.add_link(1, 3, 50);
  net.add_link(0, 2, 50);
  net.add_link(2, 3, 50);
  return net;
}

SubstrateNetwork bridge() {
  // Triangles {0,1,2} and {3,4,5} joined by the single cut edge 2-3.
  SubstrateNetwork net;
  for (int i = 0; i < 6; ++i) net.add_node(0, 0, 100);
  net.add_link(0, 1, 50);
  net.add_link(1, 2, 50);
  net.add_link(0, 2, 50);
  net.add_link(3, 4, 50);
  net.add_link(4, 5, 50);
  net.add_link(3, 5, 50);
  net.add_link(2, 3, 50);
  return net;
}

bool paths_edge_disjoint(const PathSet& ps) {
  std::set<int> used;
  for (const auto& links : ps.path_links)
    for (int e : links)
      if (!used.insert(e).second) return false;
  return true;
}

bool path_simple(const std::vector<int>& path) {
  std::set<int> seen(path.begin(), path.end());
  return seen.size() == path.size();
}

// Hand-made enhanced view used by the embedding tests: slot demands plus a
// symmetric slot-to-slot bandwidth matrix.
EnhancedVn fake_enhanced(std::vector<double> c_e,
                         std::vector<std::tuple<int, int, double>> links) {
  EnhancedVn e;
  int nu = static_cast<int>(c_e.size());
  e.base.cpu.assign(nu - 1, 1.0);
  e.base.bw.assign(nu - 1, std::vector<double>(nu - 1, 0.0));
  e.c_e = std::move(c_e);
  e.b_e.assign(nu, std::vector<double>(nu, 0.0));
  for (auto [i, j, b] : links) {
    e.b_e[i][j] = b;
    e.b_e[j][i] = b;
  }
  return e;
}

}  // namespace

TEST_CASE("disjoint paths: forced parallel routes") {
  auto net = diamond();
  auto ps = disjoint_paths(net, 0, 3, 2, 0.0);
  REQUIRE(ps.has_value());
  CHECK(ps->paths.size() == 2);
  CHECK(ps->length == 4);
  CHECK(ps->band == doctest::Approx(50.0));
  CHECK(paths_edge_disjoint(*ps));
  for (const auto& p : ps->paths) {
    CHECK(p.front() == 0);
    CHECK(p.back() == 3);
    CHECK(path_simple(p));
  }
}

TEST_CASE("disjoint paths: a bridge bounds the system at one") {
  auto net = bridge();
  CHECK(!disjoint_paths(net, 0, 5, 2, 0.0).has_value());
  CHECK(oracle::unit_max_flow(net, 0, 5) == 1);
}

TEST_CASE("disjoint paths: parameter validation") {
  auto net = diamond();
  CHECK_THROWS_AS(disjoint_paths(net, 0, 0, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(disjoint_paths(net, 0, 3, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(disjoint_paths(net, 0, 9, 2, 0.0), std::invalid_argument);
}

TEST_CASE("disjoint paths: saturated links are filtered by min_band") {
  auto net = diamond();
  net.consume_bw(0, 45.0);  // link 0-1 drops to 5 free
  auto ps = disjoint_paths(net, 0, 3, 2, 10.0);
  CHECK(!ps.has_value());  // only one route clears the bandwidth bar
  auto loose = disjoint_paths(net, 0, 3, 2, 1.0);
  REQUIRE(loose.has_value());
  CHECK(loose->band == doctest::Approx(5.0));
}

TEST_CASE("disjoint paths agree with the max-flow oracle on random graphs") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    auto net = waxman_generate(20, 30 + static_cast<int>(rng.uniform_int(0, 20)), 10, 100,
                               {100}, 0.4, 0.4, 7000 + trial);
    int a = static_cast<int>(rng.uniform_int(0, 19));
    int b = static_cast<int>(rng.uniform_int(0, 19));
    if (a == b) continue;
    for (int eta = 2; eta <= 4; ++eta) {
      int flow = oracle::unit_max_flow(net, a, b);
      auto ps = disjoint_paths(net, a, b, eta, 0.0);
      if (flow >= eta) {
        REQUIRE(ps.has_value());
        CHECK(static_cast<int>(ps->paths.size()) == eta);
        CHECK(paths_edge_disjoint(*ps));
        int hops = 0;
        for (const auto& p : ps->paths) {
          CHECK(path_simple(p));
          hops += static_cast<int>(p.size()) - 1;
        }
        CHECK(hops == ps->length);
      } else {
        CHECK(!ps.has_value());
      }
    }
  }
}

TEST_CASE("path table: empty, singleton, and consistency with direct calls") {
  auto net = diamond();
  CHECK(build_path_table(net, {}, 2).empty());
  auto table = build_path_table(net, {{0, 3}}, 2);
  REQUIRE(table.size() == 1);
  auto direct = disjoint_paths(net, 0, 3, 2, 0.0);
  CHECK(table.at({0, 3}).length == direct->length);
  CHECK(table.at({0, 3}).band == doctest::Approx(direct->band));
  // unreachable pairs stay absent
  auto b = bridge();
  auto t2 = build_path_table(b, {{0, 5}, {0, 1}}, 2);
  CHECK(t2.count({0, 5}) == 0);
  CHECK(t2.count({0, 1}) == 1);
}

TEST_CASE("candidate selection: cpu-feasible, ranked, capped") {
  auto net = diamond();
  net.consume_cpu(1, 95.0);  // node 1 down to 5 free
  auto enhanced = fake_enhanced({60, 40}, {{0, 1, 10}});
  auto candidates = select_candidates(net, enhanced, 2);
  REQUIRE(candidates.size() == 2);
  for (int slot = 0; slot < 2; ++slot) {
    CHECK(static_cast<int>(candidates[slot].size()) <= 2);
    for (int node : candidates[slot]) {
      CHECK(net.node(node).cpu_free >= enhanced.c_e[slot]);
      CHECK(node != 1);
    }
  }
}

TEST_CASE("embedding LP: a linkless enhanced network costs exactly zero") {
  auto net = diamond();
  auto enhanced = fake_enhanced({50, 50}, {});
  auto candidates = select_candidates(net, enhanced, 3);
  PathTable table;
  auto problem = build_embedding_lp(enhanced, net, 3, table, candidates);
  REQUIRE(problem.has_value());
  for (double c : problem->lp.d1) CHECK(c == 0.0);
  CHECK(problem->y_vars.empty());
}

TEST_CASE("embedding LP: relaxation optimum equals the best injective map") {
  // 5-node substrate so three candidates see distinct path lengths.
  SubstrateNetwork net;
  for (int i = 0; i < 5; ++i) net.add_node(0, 0, 100);
  net.add_link(0, 1, 50);
  net.add_link(1, 2, 50);
  net.add_link(2, 3, 50);
  net.add_link(3, 4, 50);
  net.add_link(4, 0, 50);
  net.add_link(1, 3, 50);

  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 4.0}});
  std::vector<std::vector<int>> candidates{{0, 1, 2}, {0, 1, 2}};
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {1, 2}};
  auto table = build_path_table(net, pairs, 2, 0.0);
  REQUIRE(table.size() == 3);
  auto problem = build_embedding_lp(enhanced, net, 2, table, candidates);
  REQUIRE(problem.has_value());

  double best = 1e30;
  for (int a : candidates[0])
    for (int b : candidates[1]) {
      if (a == b) continue;
      best = std::min(best, table.at(std::minmax(a, b)).length * 4.0);
    }
  SolverConfig config;
  config.max_steps = 300000;
  auto sol = solve_lp(problem->lp, config);
  REQUIRE(sol.report.converged);
  CHECK(std::fabs(sol.objective - best) <= 1e-3 * std::max(1.0, best));
}

TEST_CASE("embedding LP: empty candidate set or dead link refuses construction") {
  auto net = diamond();
  auto enhanced = fake_enhanced({50, 50}, {{0, 1, 10}});
  std::string reason;
  auto no_cands = build_embedding_lp(enhanced, net, 3, PathTable{},
                                     {{0, 1}, {}}, &reason);
  CHECK(!no_cands.has_value());
  CHECK(reason.find("no candidate") != std::string::npos);
  // candidates exist but the table offers no pair for the link
  auto no_pairs = build_embedding_lp(enhanced, net, 3, PathTable{}, {{0}, {3}}, &reason);
  CHECK(!no_pairs.has_value());
  CHECK(reason.find("no usable candidate pair") != std::string::npos);
}

TEST_CASE("full-scale shape: candidate pruning bounds the variable count") {
  auto net = waxman_generate(100, 500, 50, 150, {3720, 5320}, 0.15, 0.2, 99);
  auto vn = generate_vn_request(20, 20, 0.5, {2500, 2000, 1000, 500}, 1, 50, 99);
  auto enhanced = fip_enhance(vn);
  int nu = enhanced.slot_count();
  int cap = 2 * nu;
  auto candidates = select_candidates(net, enhanced, cap);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j)
      if (enhanced.b_e[i][j] > 0)
        for (int a : candidates[i])
          for (int b : candidates[j])
            if (a != b) pairs.push_back(std::minmax(a, b));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  auto table = build_path_table(net, pairs, 3, 1.0);
  auto problem = build_embedding_lp(enhanced, net, 3, table, candidates);
  REQUIRE(problem.has_value());
  long links = 0;
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j)
      if (enhanced.b_e[i][j] > 0) ++links;
  CHECK(static_cast<long>(problem->y_vars.size()) <= links * cap * cap);
  long x_count = 0;
  for (const auto& c : problem->candidates) x_count += static_cast<long>(c.size());
  CHECK(x_count <= static_cast<long>(nu) * cap);
}

TEST_CASE("rounding: integral relaxed block is returned unchanged") {
  auto net = diamond();
  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 4.0}});
  std::vector<std::vector<int>> candidates{{0, 1}, {2, 3}};
  auto table = build_path_table(net, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, 2, 0.0);
  auto problem = build_embedding_lp(enhanced, net, 2, table, candidates);
  REQUIRE(problem.has_value());
  std::vector<double> primal(problem->lp.num_vars(), 0.0);
  primal[problem->x_var(0, 1)] = 1.0;  // slot 0 -> node 1
  primal[problem->x_var(1, 0)] = 1.0;  // slot 1 -> node 2
  auto map = round_assignment(primal, *problem, enhanced, net, table);
  REQUIRE(map.has_value());
  CHECK((*map)[0] == 1);
  CHECK((*map)[1] == 2);
}

TEST_CASE("rounding: uniform relaxed block falls back to true-cost assignment") {
  SubstrateNetwork net;
  for (int i = 0; i < 5; ++i) net.add_node(0, 0, 100);
  net.add_link(0, 1, 50);
  net.add_link(1, 2, 50);
  net.add_link(2, 3, 50);
  net.add_link(3, 4, 50);
  net.add_link(4, 0, 50);
  net.add_link(1, 3, 50);
  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 4.0}});
  // slot 0 pinned to node 0; slot 1 chooses among 1..4 by true cost
  std::vector<std::vector<int>> candidates{{0}, {1, 2, 3, 4}};
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  auto table = build_path_table(net, pairs, 2, 0.0);
  auto problem = build_embedding_lp(enhanced, net, 2, table, candidates);
  REQUIRE(problem.has_value());
  std::vector<double> uniform(problem->lp.num_vars(), 0.0);
  for (int slot = 0; slot < 2; ++slot)
    for (std::size_t t = 0; t < candidates[slot].size(); ++t)
      uniform[problem->x_var(slot, static_cast<int>(t))] = 0.5;
  auto map = round_assignment(uniform, *problem, enhanced, net, table);
  REQUIRE(map.has_value());
  double got = realized_cost(*map, enhanced, table, 2);
  double best = 1e30;
  for (int node : candidates[1])
    best = std::min(best, table.at(std::minmax(0, node)).length * 4.0);
  CHECK(got == doctest::Approx(best));
}

TEST_CASE("rounding: swap repair rescues a cpu-infeasible favourite") {
  auto net = diamond();
  net.consume_cpu(0, 95.0);  // node 0 cannot host the demand any more
  auto enhanced = fake_enhanced({50, 50}, {{0, 1, 4.0}});
  // caller passes stale candidates that still include node 0
  std::vector<std::vector<int>> candidates{{0, 2}, {1, 3}};
  auto table = build_path_table(net, {{0, 1}, {0, 3}, {2, 1}, {2, 3}}, 2, 0.0);
  auto problem = build_embedding_lp(enhanced, net, 2, table, candidates);
  REQUIRE(problem.has_value());
  std::vector<double> primal(problem->lp.num_vars(), 0.0);
  primal[problem->x_var(0, 0)] = 0.9;  // favours the infeasible node 0
  primal[problem->x_var(0, 1)] = 0.1;
  primal[problem->x_var(1, 0)] = 0.9;
  primal[problem->x_var(1, 1)] = 0.1;
  auto map = round_assignment(primal, *problem, enhanced, net, table);
  REQUIRE(map.has_value());
  CHECK((*map)[0] == 2);  // repaired to the feasible second-best
}

TEST_CASE("allocation: per-path reservation follows demand/(eta-1)") {
  auto net = diamond();
  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 10.0}});
  auto table = build_path_table(net, {{0, 3}}, 2, 0.0);
  auto emb = allocate_embedding(net, enhanced, {0, 3}, 2, table);
  REQUIRE(emb.has_value());
  REQUIRE(emb->routes.size() == 1);
  CHECK(emb->routes[0].per_path_bw == doctest::Approx(10.0));  // eta=2: full duplication
  CHECK(emb->ledger.total_bw() == doctest::Approx(40.0));      // 2 paths x 2 hops x 10
  CHECK(net.used_bw() == doctest::Approx(40.0));
  CHECK(net.used_cpu() == doctest::Approx(20.0));
  release(net, emb->ledger);
  CHECK(net.used_bw() == doctest::Approx(0.0));
}

TEST_CASE("allocation: eta=3 splits into demand/2") {
  // 3 disjoint routes 0-1-4, 0-2-4, 0-3-4
  SubstrateNetwork net;
  for (int i = 0; i < 5; ++i) net.add_node(0, 0, 100);
  net.add_link(0, 1, 50);
  net.add_link(1, 4, 50);
  net.add_link(0, 2, 50);
  net.add_link(2, 4, 50);
  net.add_link(0, 3, 50);
  net.add_link(3, 4, 50);
  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 10.0}});
  auto table = build_path_table(net, {{0, 4}}, 3, 0.0);
  auto emb = allocate_embedding(net, enhanced, {0, 4}, 3, table);
  REQUIRE(emb.has_value());
  CHECK(emb->routes[0].per_path_bw == doctest::Approx(5.0));
  CHECK(emb->routes[0].paths.size() == 3);
  CHECK(net.used_bw() == doctest::Approx(30.0));  // 3 paths x 2 hops x 5
}

TEST_CASE("allocation: shortfall rolls back completely") {
  auto net = diamond();
  net.consume_bw(1, 45.0);  // link 1-3 has 5 free: pathset band is stale soon
  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 12.0}});
  auto table = build_path_table(net, {{0, 3}}, 2, 0.0);
  REQUIRE(table.count({0, 3}) == 1);
  double used_before = net.used_bw();
  std::string reason;
  auto emb = allocate_embedding(net, enhanced, {0, 3}, 2, table, &reason);
  CHECK(!emb.has_value());
  CHECK(net.used_bw() == doctest::Approx(used_before));
  CHECK(reason.find("link") != std::string::npos);
}

TEST_CASE("survivability: any single link failure leaves full demand") {
  auto net = diamond();
  auto enhanced = fake_enhanced({10, 10}, {{0, 1, 10.0}});
  auto table = build_path_table(net, {{0, 3}}, 2, 0.0);
  auto emb = allocate_embedding(net, enhanced, {0, 3}, 2, table);
  REQUIRE(emb.has_value());
  for (int e = 0; e < net.link_count(); ++e) CHECK(survives_link_failure(*emb, e));
  // corrupt: both paths squeezed onto the same link
  auto corrupted = *emb;
  corrupted.routes[0].path_links[1] = corrupted.routes[0].path_links[0];
  int shared = corrupted.routes[0].path_links[0][0];
  CHECK(!survives_link_failure(corrupted, shared));
}

TEST_CASE("cost consistency and LP lower bound on a random instance") {
  Rng rng(31);
  auto net = waxman_generate(12, 22, 20, 80, {200, 300}, 0.4, 0.4, 808);
  auto vn = generate_vn_request(2, 3, 0.7, {50, 80}, 2, 9, 808);
  auto enhanced = fip_enhance(vn);
  int nu = enhanced.slot_count();
  auto candidates = select_candidates(net, enhanced, 2 * nu);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j)
      if (enhanced.b_e[i][j] > 0)
        for (int a : candidates[i])
          for (int b : candidates[j])
            if (a != b) pairs.push_back(std::minmax(a, b));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  auto table = build_path_table(net, pairs, 3, 0.5);
  auto problem = build_embedding_lp(enhanced, net, 3, table, candidates);
  REQUIRE(problem.has_value());
  SolverConfig config;
  config.max_steps = 60000;
  auto sol = solve_lp(problem->lp, config);
  auto map = round_assignment(sol.z, *problem, enhanced, net, table);
  REQUIRE(map.has_value());
  double realized = realized_cost(*map, enhanced, table, 3);
  auto emb = allocate_embedding(net, enhanced, *map, 3, table);
  REQUIRE(emb.has_value());
  CHECK(emb->objective == doctest::Approx(realized));
  // relaxation lower-bounds the rounded cost (allow solver slack)
  CHECK(sol.objective <= realized + 1e-3 * std::max(1.0, realized));
}
