#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "svne/neurolp.hpp"
#include "svne/rng.hpp"

namespace svne {

// Maps a (generally fractional) primal vector to the objective of the rounded
// and repaired solution the system would actually use; +infinity on
// rejection. Must be deterministic: the winning payload is recovered by
// re-rounding the best primal.
using Rounder = std::function<double(std::span<const double>)>;

struct CndConfig {
  int swarm_size = 10;
  double inertia = 0.7;  // w
  double c1 = 1.5, c2 = 1.5;
  int outer_rounds = 30;
  int stall_rounds = 5;
  std::uint64_t seed = 0;
};

struct Particle {
  std::vector<double> position;      // primal decision vector
  std::vector<double> velocity;
  std::vector<double> dual;          // warm start for the next refinement
  std::vector<double> pbest_primal;  // raw refined primal achieving pbest
  double pbest_objective = std::numeric_limits<double>::infinity();
  double last_objective = std::numeric_limits<double>::infinity();
  bool diverged = false;
};

struct Swarm {
  explicit Swarm(Rng rng) : rng(rng) {}
  std::vector<Particle> particles;
  int gbest_index = -1;
  double gbest_objective = std::numeric_limits<double>::infinity();
  Rng rng;

  void refresh_gbest();
};

// Particles start at independent uniform positions on the relaxed 0/1
// coordinates (zero elsewhere) with zero velocity. When a rounder is given,
// initial fitnesses seed pbest/gbest immediately.
Swarm init_swarm(const GeneralFormLp& lp, const CndConfig& config,
                 const Rounder* rounder = nullptr);

// One neurodynamic refinement: gradient flow from the particle's position
// (duals warm-started), position replaced by the refined primal, pbest
// updated when the rounded objective improves.
void local_refine(Particle& particle, const GeneralFormLp& lp, const SolverConfig& solver,
                  const Rounder& rounder);

// Velocity/position update of every particle:
//   V <- w V + c1 r1 (pbest - X) + c2 r2 (gbest - X);  X <- X + V
// with r1, r2 fresh uniforms per particle, velocities clamped to [-1, 1], and
// relaxed 0/1 coordinates clamped to [0, 1] (velocity zeroed on clamp).
void pso_step(Swarm& swarm, const GeneralFormLp& lp, const CndConfig& config);

struct CndResult {
  std::vector<double> best_primal;
  double best_objective = std::numeric_limits<double>::infinity();
  bool fallback_used = false;
  int rounds = 0;
  std::vector<double> gbest_trace;                  // per round
  std::vector<std::pair<double, double>> round_stats;  // (gbest, mean objective)
};

CndResult cnd_solve(const GeneralFormLp& lp, const CndConfig& cnd_config,
                    const SolverConfig& solver_config, const Rounder& rounder);

void write_round_csv(const CndResult& result, const std::string& path);

}  // namespace svne
