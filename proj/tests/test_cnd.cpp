#include <doctest.h>

#include <cmath>

#include "support/test_instances.hpp"
#include "svne/cnd.hpp"
#include "svne/rng.hpp"

using namespace svne;

namespace {

// n1 relaxed-binary cost coordinates and no constraints: fitness quantizes
// each coordinate to {0,1} and prices it.
GeneralFormLp box_lp(int n) {
  GeneralFormLp lp;
  lp.d1.assign(n, 1.0);
  lp.m11 = SparseMatrix(0, n);
  lp.m21 = SparseMatrix(0, n);
  lp.m12 = SparseMatrix(0, 0);
  lp.m22 = SparseMatrix(0, 0);
  for (int i = 0; i < n; ++i) lp.relaxed01.push_back(i);
  return lp;
}

Rounder quantizing_rounder(const GeneralFormLp& lp) {
  return [&lp](std::span<const double> primal) {
    double total = 0;
    for (int i = 0; i < lp.n1(); ++i) total += lp.d1[i] * (primal[i] >= 0.5 ? 1.0 : 0.0);
    return total;
  };
}

}  // namespace

TEST_CASE("init_swarm: determinism, shape, and uniform positions") {
  auto lp = box_lp(100);
  CndConfig config;
  config.swarm_size = 100;
  config.seed = 7;
  auto a = init_swarm(lp, config);
  auto b = init_swarm(lp, config);
  REQUIRE(a.particles.size() == 100);
  CHECK(a.particles[12].position == b.particles[12].position);

  double sum = 0;
  int low = 0, total = 0;
  for (const auto& p : a.particles)
    for (double v : p.position) {
      sum += v;
      low += v < 0.25;
      ++total;
    }
  REQUIRE(total == 10000);
  CHECK(std::fabs(sum / total - 0.5) < 0.015);          // mean of 1e4 uniforms
  CHECK(std::fabs(low / 10000.0 - 0.25) < 0.02);        // lower-quartile mass
  for (const auto& p : a.particles)
    for (double v : p.velocity) CHECK(v == 0.0);

  CndConfig bad = config;
  bad.swarm_size = 0;
  CHECK_THROWS_AS(init_swarm(lp, bad), std::invalid_argument);
}

TEST_CASE("init_swarm with a rounder seeds pbest and gbest") {
  auto lp = box_lp(4);
  CndConfig config;
  config.swarm_size = 5;
  config.seed = 3;
  auto rounder = quantizing_rounder(lp);
  auto swarm = init_swarm(lp, config, &rounder);
  double best = 1e30;
  for (const auto& p : swarm.particles) {
    CHECK(std::isfinite(p.pbest_objective));
    best = std::min(best, p.pbest_objective);
  }
  CHECK(swarm.gbest_objective == doctest::Approx(best));
}

TEST_CASE("local_refine: a particle at the optimum stays put") {
  auto lp = testgen::tiny_lp();
  Particle p;
  p.position = {1.0};
  p.velocity = {0.0};
  p.dual = {1.0};
  Rounder identity = [&lp](std::span<const double> primal) { return lp.d1[0] * primal[0]; };
  local_refine(p, lp, SolverConfig{}, identity);
  CHECK(p.position[0] == 1.0);
  CHECK(p.pbest_objective == doctest::Approx(1.0));
  double before = p.pbest_objective;
  local_refine(p, lp, SolverConfig{}, identity);
  CHECK(p.pbest_objective == before);
}

TEST_CASE("local_refine never worsens pbest") {
  Rng rng(41);
  auto lp = testgen::random_bounded_feasible_lp(rng, 5, 4);
  Rounder identity = [&lp](std::span<const double> primal) {
    double v = 0;
    for (int i = 0; i < lp.n1(); ++i) v += lp.d1[i] * primal[i];
    return v;
  };
  Particle p;
  p.position.assign(lp.num_vars(), 0.3);
  p.velocity.assign(lp.num_vars(), 0.0);
  p.dual.assign(lp.num_ineq() + lp.num_eq(), 0.0);
  SolverConfig solver;
  solver.max_steps = 500;
  for (int round = 0; round < 5; ++round) {
    double before = p.pbest_objective;
    local_refine(p, lp, solver, identity);
    CHECK(p.pbest_objective <= before);
  }
}

TEST_CASE("local_refine equals solve_lp from the same start") {
  Rng rng(43);
  auto lp = testgen::random_bounded_feasible_lp(rng, 5, 4);
  std::vector<double> start(lp.num_vars());
  for (auto& v : start) v = rng.uniform01();
  Particle p;
  p.position = start;
  p.velocity.assign(lp.num_vars(), 0.0);
  p.dual.assign(lp.num_ineq() + lp.num_eq(), 0.0);
  SolverConfig solver;
  solver.max_steps = 2000;
  Rounder identity = [](std::span<const double>) { return 0.0; };
  local_refine(p, lp, solver, identity);
  auto sol = solve_lp(lp, solver, &start);
  CHECK(p.position == sol.z);
  CHECK(p.dual == sol.xi);
}

TEST_CASE("pso_step: zero constants freeze the swarm") {
  auto lp = box_lp(6);
  CndConfig config;
  config.swarm_size = 3;
  config.inertia = 0.0;
  config.c1 = 0.0;
  config.c2 = 0.0;
  config.seed = 5;
  auto rounder = quantizing_rounder(lp);
  auto swarm = init_swarm(lp, config, &rounder);
  auto positions_before = swarm.particles;
  pso_step(swarm, lp, config);
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    CHECK(swarm.particles[i].position == positions_before[i].position);
    for (double v : swarm.particles[i].velocity) CHECK(v == 0.0);
  }
}

TEST_CASE("pso_step: a lone particle at gbest drifts by inertia only") {
  auto lp = box_lp(2);
  CndConfig config;
  config.swarm_size = 1;
  config.inertia = 0.5;
  config.c1 = 0.0;
  config.c2 = 2.0;
  config.seed = 9;
  auto swarm = init_swarm(lp, config);
  auto& p = swarm.particles[0];
  p.position = {0.4, 0.6};
  p.velocity = {0.2, -0.1};
  p.pbest_primal = p.position;  // particle sits exactly at its best
  p.pbest_objective = 1.0;
  swarm.refresh_gbest();
  pso_step(swarm, lp, config);
  CHECK(p.velocity[0] == doctest::Approx(0.1));
  CHECK(p.velocity[1] == doctest::Approx(-0.05));
  CHECK(p.position[0] == doctest::Approx(0.5));
  CHECK(p.position[1] == doctest::Approx(0.55));
}

TEST_CASE("pso_step reproduces a hand-stepped two-particle trace bit for bit") {
  auto lp = box_lp(2);
  CndConfig config;
  config.swarm_size = 2;
  config.inertia = 0.7;
  config.c1 = 1.5;
  config.c2 = 1.5;
  config.seed = 123;
  auto swarm = init_swarm(lp, config);
  swarm.particles[0].pbest_primal = {0.9, 0.1};
  swarm.particles[0].pbest_objective = 2.0;
  swarm.particles[1].pbest_primal = {0.2, 0.8};
  swarm.particles[1].pbest_objective = 1.0;  // global best
  swarm.refresh_gbest();
  REQUIRE(swarm.gbest_index == 1);
  auto before = swarm.particles;

  // Independent replay of the update equations with the same named stream:
  // init_swarm consumed 2 coordinates per particle, then each step draws
  // r1, r2 per particle.
  Rng replay = Rng::stream(config.seed, "swarm");
  for (int skip = 0; skip < 4; ++skip) replay.uniform01();
  pso_step(swarm, lp, config);
  for (int i = 0; i < 2; ++i) {
    double r1 = replay.uniform01();
    double r2 = replay.uniform01();
    const auto& gbest = before[1].pbest_primal;
    for (int c = 0; c < 2; ++c) {
      double v = config.inertia * before[i].velocity[c] +
                 config.c1 * r1 * (before[i].pbest_primal[c] - before[i].position[c]) +
                 config.c2 * r2 * (gbest[c] - before[i].position[c]);
      v = std::clamp(v, -1.0, 1.0);
      double x = before[i].position[c] + v;
      if (x < 0.0) {
        x = 0.0;
        v = 0.0;
      } else if (x > 1.0) {
        x = 1.0;
        v = 0.0;
      }
      CHECK(swarm.particles[i].velocity[c] == v);
      CHECK(swarm.particles[i].position[c] == x);
    }
  }
}

TEST_CASE("cnd_solve: degenerate collective is exactly solve_lp plus rounding") {
  Rng rng(51);
  auto lp = testgen::random_bounded_feasible_lp(rng, 5, 4);
  for (int i = 0; i < lp.n1(); ++i) lp.relaxed01.push_back(i);
  CndConfig config;
  config.swarm_size = 1;
  config.outer_rounds = 1;
  config.inertia = 0.0;
  config.c1 = 0.0;
  config.c2 = 0.0;
  config.seed = 77;
  SolverConfig solver;
  solver.max_steps = 3000;
  Rounder rounder = [&lp](std::span<const double> primal) {
    double v = 0;
    for (int i = 0; i < lp.n1(); ++i) v += lp.d1[i] * (primal[i] >= 0.5 ? 1.0 : 0.0);
    return v;
  };
  auto result = cnd_solve(lp, config, solver, rounder);
  auto start = init_swarm(lp, config).particles[0].position;
  auto sol = solve_lp(lp, solver, &start);
  CHECK(result.best_primal == sol.z);
  CHECK(result.best_objective == rounder(sol.z));
  CHECK(!result.fallback_used);
}

TEST_CASE("cnd_solve: gbest trace is nonincreasing and reaches the box optimum") {
  auto lp = box_lp(8);
  CndConfig config;
  config.swarm_size = 6;
  config.outer_rounds = 12;
  config.stall_rounds = 12;  // run every round
  config.seed = 15;
  SolverConfig solver;
  solver.max_steps = 60;
  auto result = cnd_solve(lp, config, solver, quantizing_rounder(lp));
  REQUIRE(!result.gbest_trace.empty());
  for (std::size_t i = 1; i < result.gbest_trace.size(); ++i)
    CHECK(result.gbest_trace[i] <= result.gbest_trace[i - 1]);
  // minimizing the flow drives every coordinate to 0
  CHECK(result.best_objective == doctest::Approx(0.0));
}

TEST_CASE("cnd_solve: stall cuts the run short") {
  auto lp = box_lp(4);
  CndConfig config;
  config.swarm_size = 2;
  config.outer_rounds = 30;
  config.stall_rounds = 2;
  config.seed = 1;
  SolverConfig solver;
  solver.max_steps = 50;
  auto result = cnd_solve(lp, config, solver, quantizing_rounder(lp));
  CHECK(result.rounds < 30);
}

TEST_CASE("cnd_solve: total divergence falls back to the single solver") {
  GeneralFormLp lp;
  lp.d1 = {1e200, 1e200};
  lp.m11 = SparseMatrix(0, 2);
  lp.m21 = SparseMatrix(0, 2);
  lp.m12 = SparseMatrix(0, 0);
  lp.m22 = SparseMatrix(0, 0);
  lp.relaxed01 = {0, 1};
  CndConfig config;
  config.swarm_size = 2;
  config.outer_rounds = 2;
  config.seed = 2;
  SolverConfig solver;
  solver.max_steps = 100;
  Rounder rounder = [](std::span<const double> primal) {
    double v = 0;
    for (double x : primal) v += x >= 0.5 ? 1.0 : 0.0;
    return v;
  };
  auto result = cnd_solve(lp, config, solver, rounder);
  CHECK(result.fallback_used);
  CHECK(result.best_objective == doctest::Approx(0.0));  // zero start rounds to zero
}
