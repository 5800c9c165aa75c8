#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svne/sparse.hpp"

namespace svne {

// General-form linear program
//
//   minimize    d1'z1 + d2'z2
//   subject to  M11 z1 + M12 z2 >= r1
//               M21 z1 + M22 z2  = r2
//               z1 >= 0,  z2 free
//
// with the dual
//
//   maximize    r1'xi1 + r2'xi2
//   subject to  M11'xi1 + M21'xi2 <= d1
//               M12'xi1 + M22'xi2  = d2
//               xi1 >= 0, xi2 free.
//
// relaxed01 marks the coordinates that stand for relaxed 0/1 decision
// variables; the swarm layer samples and clamps those to [0, 1].
struct GeneralFormLp {
  SparseMatrix m11, m12, m21, m22;
  std::vector<double> d1, d2;
  std::vector<double> r1, r2;
  std::vector<int> relaxed01;

  int n1() const { return static_cast<int>(d1.size()); }
  int n2() const { return static_cast<int>(d2.size()); }
  int num_vars() const { return n1() + n2(); }
  int num_ineq() const { return static_cast<int>(r1.size()); }
  int num_eq() const { return static_cast<int>(r2.size()); }
  int state_dim() const { return num_vars() + num_ineq() + num_eq(); }

  void validate() const;  // throws on inconsistent block dimensions
};

struct SolverConfig {
  double beta = 1.0;            // flow rate scale
  double step_size = 1e-3;      // initial integrator step
  long max_steps = 2'000'000;
  double kkt_tolerance = 1e-6;
  enum class Integrator { kEuler, kRk4 } integrator = Integrator::kEuler;
  double step_floor = 1e-12;    // halving stops here
  double step_growth = 1.05;    // cautious growth after accepted steps
  bool record_trace = false;
  long trace_stride = 100;
  // Stiff instances (active-set condition ratios beyond 1e8) stall any
  // explicit integrator. For small problems the flow is finished by damped
  // semismooth Newton steps on grad E; same fixed points, every step still
  // subject to the energy-decrease acceptance rule.
  bool newton_finish = true;
  int newton_dim_limit = 600;
};

struct SolveReport {
  bool converged = false;
  bool diverged = false;
  double kkt_residual = 0.0;
  double duality_gap = 0.0;
  double final_energy = 0.0;
  std::string dominant_violation;  // largest residual term at the final state
  long steps = 0;
  std::vector<std::array<double, 3>> trace;  // (step, energy, kkt)
};

// State vector u = (z, xi) with z = (z1, z2), xi = (xi1, xi2).
using NeuroState = std::vector<double>;

double energy(const GeneralFormLp& lp, std::span<const double> u);
void energy_gradient(const GeneralFormLp& lp, std::span<const double> u, std::span<double> grad);

struct KktBreakdown {
  double primal_ineq = 0, primal_eq = 0, primal_sign = 0;
  double dual_ineq = 0, dual_eq = 0, dual_sign = 0;
  double gap = 0;
  double max() const;
  std::string dominant() const;
};

KktBreakdown kkt_breakdown(const GeneralFormLp& lp, std::span<const double> u);
double kkt_residual(const GeneralFormLp& lp, std::span<const double> u);

std::pair<NeuroState, SolveReport> integrate_flow(const GeneralFormLp& lp, NeuroState u0,
                                                  const SolverConfig& config);

struct LpSolution {
  std::vector<double> z;
  std::vector<double> xi;
  SolveReport report;
  double objective = 0.0;  // d'z at the final state
};

// Gradient-flow solve from a zero start (or the given primal warm start with
// zero duals).
LpSolution solve_lp(const GeneralFormLp& lp, const SolverConfig& config,
                    const std::vector<double>* initial_primal = nullptr);

// Exact optimum by enumeration of basic solutions of the slack-augmented
// system. Intended for tiny test instances only.
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct OracleResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> z;
};

OracleResult vertex_oracle(const GeneralFormLp& lp);

void write_trace_csv(const SolveReport& report, const std::string& path);

}  // namespace svne
