#pragma once

#include <string>
#include <vector>

#include "svne/cnd.hpp"
#include "svne/netmodel.hpp"
#include "svne/neurolp.hpp"

namespace svne {

// Enhanced virtual network: the base request plus one backup slot, a recovery
// permutation per single-node-failure scenario, and the resource envelope
// that covers the initial allocation and every recovery.
//
// Slot indexing is 0-based: slots 0..n-1 carry the base nodes initially, slot
// n is the backup. plans[k][i] = j means the content of slot i moves to slot
// j when scenario k (failure of the substrate node hosting slot k) fires;
// plans[k][n] == k always, so the failed slot ends up holding the empty
// backup marker.
struct EnhancedVn {
  VirtualNetwork base;
  std::vector<double> c_e;               // length n+1
  std::vector<std::vector<double>> b_e;  // (n+1) x (n+1), symmetric
  std::vector<std::vector<int>> plans;   // n permutations of 0..n
  double alpha = 1.0;
  bool fip_fallback = false;

  int slot_count() const { return static_cast<int>(c_e.size()); }
  // Total CPU plus alpha times total bandwidth, each undirected link counted
  // once.
  double objective() const;

  // Base demands padded to n+1 slots (backup slot demands are zero).
  std::vector<double> padded_cpu() const;
  std::vector<std::vector<double>> padded_bw() const;
};

// Enhancement LP variable layout: z = (C^e, B^e, Y, X), all nonnegative.
struct EnhancementVars {
  explicit EnhancementVars(int base_nodes) : n(base_nodes), nu(base_nodes + 1) {}
  int n, nu;
  int c_offset() const { return 0; }
  int b_offset() const { return nu; }
  int y_offset() const { return nu + nu * nu; }
  int x_offset() const { return y_offset() + n * nu * nu * nu * nu; }
  int total() const { return x_offset() + n * nu * nu; }
  int idx_c(int i) const { return i; }
  int idx_b(int i, int j) const { return b_offset() + i * nu + j; }
  int idx_y(int k, int l, int i, int m, int j) const {
    return y_offset() + (((k * nu + l) * nu + i) * nu + m) * nu + j;
  }
  int idx_x(int k, int i, int j) const { return x_offset() + (k * nu + i) * nu + j; }
};

// Linearized enhancement problem over (C^e, B^e, Y, X) with the per-scenario
// permutation structure relaxed to nonnegativity.
GeneralFormLp build_enhancement_lp(const VirtualNetwork& vn, double alpha);

// Rounds the relaxed X blocks to one pinned permutation per scenario
// (maximum-weight assignment); the envelope is then recomputed exactly.
std::vector<std::vector<int>> round_enhancement_plans(const VirtualNetwork& vn,
                                                      std::span<const double> primal);

// Bounded repair pass on a plan tuple: best-improvement transposition
// hill-climb on the exact envelope objective, pins untouched. kicks > 0 adds
// deterministic perturb-and-reclimb restarts seeded from the tuple itself.
void improve_plans(const VirtualNetwork& vn, std::vector<std::vector<int>>& plans, double alpha,
                   int max_passes = 5, int kicks = 0);

// Exact envelope for a given plan tuple (covers the initial allocation).
EnhancedVn enhanced_from_plans(const VirtualNetwork& vn, std::vector<std::vector<int>> plans,
                               double alpha);

// Collective neurodynamic enhancement. Falls back to the FIP plans when the
// collective fails outright, and never returns a worse envelope than FIP.
EnhancedVn enhance_vn(const VirtualNetwork& vn, double alpha, const SolverConfig& solver,
                      const CndConfig& swarm, CndResult* stats = nullptr);

// Global optimum over all constrained plan tuples; n <= 5 only.
EnhancedVn brute_force_enhance(const VirtualNetwork& vn, double alpha);

// Failure-independent protection: one backup that swaps in for any failed
// slot.
EnhancedVn fip_enhance(const VirtualNetwork& vn, double alpha = 1.0);

struct Recovery {
  std::vector<int> allocation;           // A^k: slot -> base node, -1 = empty
  std::vector<double> cpu;               // C^k
  std::vector<std::vector<double>> bw;   // B^k
};

// Recovery state for scenario k (1-based, 1 <= k <= n).
Recovery apply_recovery(const EnhancedVn& enhanced, int k);

struct RestorabilityReport {
  bool ok = true;
  std::string violation;  // first violated (scenario, slot / slot pair)
};

RestorabilityReport verify_restorability(const EnhancedVn& enhanced);

}  // namespace svne
