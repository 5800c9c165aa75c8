#include "svne/cnd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace svne {

void Swarm::refresh_gbest() {
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].pbest_objective < gbest_objective) {
      gbest_objective = particles[i].pbest_objective;
      gbest_index = static_cast<int>(i);
    }
  }
}

Swarm init_swarm(const GeneralFormLp& lp, const CndConfig& config, const Rounder* rounder) {
  if (config.swarm_size < 1) throw std::invalid_argument("init_swarm: swarm_size < 1");
  if (config.inertia < 0 || config.c1 < 0 || config.c2 < 0)
    throw std::invalid_argument("init_swarm: negative PSO constant");
  lp.validate();
  Swarm swarm{Rng::stream(config.seed, "swarm")};
  swarm.particles.resize(config.swarm_size);
  for (auto& p : swarm.particles) {
    p.position.assign(lp.num_vars(), 0.0);
    p.velocity.assign(lp.num_vars(), 0.0);
    p.dual.assign(lp.num_ineq() + lp.num_eq(), 0.0);
    for (int idx : lp.relaxed01) p.position[idx] = swarm.rng.uniform01();
    if (rounder) {
      p.pbest_primal = p.position;
      p.pbest_objective = (*rounder)(p.position);
      p.last_objective = p.pbest_objective;
    }
  }
  swarm.refresh_gbest();
  return swarm;
}

void local_refine(Particle& particle, const GeneralFormLp& lp, const SolverConfig& solver,
                  const Rounder& rounder) {
  NeuroState u(lp.state_dim(), 0.0);
  std::copy(particle.position.begin(), particle.position.end(), u.begin());
  std::copy(particle.dual.begin(), particle.dual.end(), u.begin() + lp.num_vars());
  auto [state, report] = integrate_flow(lp, std::move(u), solver);
  particle.diverged = report.diverged;
  if (report.diverged) {
    particle.last_objective = std::numeric_limits<double>::infinity();
    return;
  }
  particle.position.assign(state.begin(), state.begin() + lp.num_vars());
  particle.dual.assign(state.begin() + lp.num_vars(), state.end());
  double objective = rounder(particle.position);
  particle.last_objective = objective;
  if (objective < particle.pbest_objective) {
    particle.pbest_objective = objective;
    particle.pbest_primal = particle.position;
  }
}

void pso_step(Swarm& swarm, const GeneralFormLp& lp, const CndConfig& config) {
  std::vector<char> relaxed(lp.num_vars(), false);
  for (int idx : lp.relaxed01) relaxed[idx] = true;
  const std::vector<double>* gbest = nullptr;
  if (swarm.gbest_index >= 0 && !swarm.particles[swarm.gbest_index].pbest_primal.empty())
    gbest = &swarm.particles[swarm.gbest_index].pbest_primal;

  for (auto& p : swarm.particles) {
    double r1 = swarm.rng.uniform01();
    double r2 = swarm.rng.uniform01();
    const std::vector<double>* pbest = p.pbest_primal.empty() ? nullptr : &p.pbest_primal;
    for (int i = 0; i < lp.num_vars(); ++i) {
      double v = config.inertia * p.velocity[i];
      if (pbest) v += config.c1 * r1 * ((*pbest)[i] - p.position[i]);
      if (gbest) v += config.c2 * r2 * ((*gbest)[i] - p.position[i]);
      v = std::clamp(v, -1.0, 1.0);
      double x = p.position[i] + v;
      if (relaxed[i]) {
        if (x < 0.0) {
          x = 0.0;
          v = 0.0;
        } else if (x > 1.0) {
          x = 1.0;
          v = 0.0;
        }
      }
      p.velocity[i] = v;
      p.position[i] = x;
    }
  }
  swarm.refresh_gbest();
}

CndResult cnd_solve(const GeneralFormLp& lp, const CndConfig& cnd_config,
                    const SolverConfig& solver_config, const Rounder& rounder) {
  // pbest/gbest are seeded by the first refinement, not the raw initial
  // positions, so a degenerate collective (one particle, one round, zero PSO
  // constants) reduces exactly to solve_lp followed by rounding.
  Swarm swarm = init_swarm(lp, cnd_config, nullptr);
  CndResult result;
  int stall = 0;
  double last_gbest = swarm.gbest_objective;
  for (int round = 0; round < cnd_config.outer_rounds; ++round) {
    for (auto& p : swarm.particles) local_refine(p, lp, solver_config, rounder);
    swarm.refresh_gbest();
    result.rounds = round + 1;
    result.gbest_trace.push_back(swarm.gbest_objective);
    double mean = 0;
    int finite = 0;
    for (const auto& p : swarm.particles)
      if (std::isfinite(p.last_objective)) {
        mean += p.last_objective;
        ++finite;
      }
    result.round_stats.emplace_back(swarm.gbest_objective, finite ? mean / finite : 0.0);
    if (swarm.gbest_objective < last_gbest) {
      stall = 0;
      last_gbest = swarm.gbest_objective;
    } else {
      ++stall;
    }
    if (stall >= cnd_config.stall_rounds) break;
    if (round + 1 < cnd_config.outer_rounds) pso_step(swarm, lp, cnd_config);
  }

  if (swarm.gbest_index < 0 ||
      !std::isfinite(swarm.gbest_objective)) {
    // Every particle diverged or never produced a usable rounding: fall back
    // to the plain single-solver path.
    LpSolution sol = solve_lp(lp, solver_config);
    result.best_primal = sol.z;
    result.best_objective = rounder(sol.z);
    result.fallback_used = true;
    return result;
  }
  result.best_primal = swarm.particles[swarm.gbest_index].pbest_primal;
  result.best_objective = swarm.gbest_objective;
  return result;
}

void write_round_csv(const CndResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_round_csv: cannot open " + path);
  out.precision(12);
  out << "round,gbest_objective,mean_objective\n";
  for (std::size_t i = 0; i < result.round_stats.size(); ++i)
    out << i << "," << result.round_stats[i].first << "," << result.round_stats[i].second
        << "\n";
}

}  // namespace svne
