#include "svne/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "svne/assignment.hpp"

namespace svne {

namespace {

constexpr double kTol = 1e-9;

std::vector<int> inverse_permutation(const std::vector<int>& sigma) {
  std::vector<int> inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) inv[sigma[i]] = static_cast<int>(i);
  return inv;
}

bool is_permutation(const std::vector<int>& sigma) {
  std::vector<char> seen(sigma.size(), false);
  for (int v : sigma) {
    if (v < 0 || v >= static_cast<int>(sigma.size()) || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

double envelope_objective(const std::vector<double>& c_env,
                          const std::vector<std::vector<double>>& b_env, double alpha) {
  double obj = std::accumulate(c_env.begin(), c_env.end(), 0.0);
  int nu = static_cast<int>(c_env.size());
  for (int i = 0; i < nu; ++i)
    for (int j = i + 1; j < nu; ++j) obj += alpha * b_env[i][j];
  return obj;
}

// Fold scenario k of the given plan into the running envelope.
void fold_scenario(const std::vector<double>& c0, const std::vector<std::vector<double>>& b0,
                   const std::vector<int>& sigma, std::vector<double>& c_env,
                   std::vector<std::vector<double>>& b_env) {
  int nu = static_cast<int>(c0.size());
  std::vector<int> inv = inverse_permutation(sigma);
  for (int j = 0; j < nu; ++j) c_env[j] = std::max(c_env[j], c0[inv[j]]);
  for (int j = 0; j < nu; ++j)
    for (int l = 0; l < nu; ++l) b_env[j][l] = std::max(b_env[j][l], b0[inv[j]][inv[l]]);
}

}  // namespace

double EnhancedVn::objective() const { return envelope_objective(c_e, b_e, alpha); }

std::vector<double> EnhancedVn::padded_cpu() const {
  std::vector<double> c0 = base.cpu;
  c0.push_back(0.0);
  return c0;
}

std::vector<std::vector<double>> EnhancedVn::padded_bw() const {
  int n = base.node_count();
  std::vector<std::vector<double>> b0(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b0[i][j] = base.bw[i][j];
  return b0;
}

GeneralFormLp build_enhancement_lp(const VirtualNetwork& vn, double alpha) {
  vn.validate();
  const int n = vn.node_count();
  const EnhancementVars v(n);
  const int nu = v.nu;

  std::vector<double> c0 = vn.cpu;
  c0.push_back(0.0);
  std::vector<std::vector<double>> b0(nu, std::vector<double>(nu, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b0[i][j] = vn.bw[i][j];

  GeneralFormLp lp;
  lp.d1.assign(v.total(), 0.0);
  for (int i = 0; i < nu; ++i) lp.d1[v.idx_c(i)] = 1.0;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nu; ++j) lp.d1[v.idx_b(i, j)] = alpha;

  SparseMatrix ineq(0, v.total());
  std::vector<double> r1;
  // CPU envelope rows: c^e_j >= sum_i c0_i x_{ij}^k.
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < nu; ++j) {
      ineq.add(v.idx_c(j), 1.0);
      for (int i = 0; i < nu; ++i)
        if (c0[i] != 0.0) ineq.add(v.idx_x(k, i, j), -c0[i]);
      ineq.close_row();
      r1.push_back(0.0);
    }
  // Bandwidth envelope rows: b^e_{ij} >= sum_{l,m} b0_{lm} y_{limjk}.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < nu; ++j) {
        ineq.add(v.idx_b(i, j), 1.0);
        for (int l = 0; l < nu; ++l)
          for (int m = 0; m < nu; ++m)
            if (b0[l][m] != 0.0) ineq.add(v.idx_y(k, l, i, m, j), -b0[l][m]);
        ineq.close_row();
        r1.push_back(0.0);
      }
  // Linearization coupling: x_{li}^k + x_{mj}^k - 2 y_{limjk} >= 0.
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < nu; ++l)
      for (int i = 0; i < nu; ++i)
        for (int m = 0; m < nu; ++m)
          for (int j = 0; j < nu; ++j) {
            ineq.add(v.idx_x(k, l, i), 1.0);
            ineq.add(v.idx_x(k, m, j), 1.0);
            ineq.add(v.idx_y(k, l, i, m, j), -2.0);
            ineq.close_row();
            r1.push_back(0.0);
          }
  // Initial-allocation coverage: the enhanced network must host the base
  // allocation from time zero, not just the recovery scenarios.
  for (int i = 0; i < nu; ++i) {
    ineq.add(v.idx_c(i), 1.0);
    ineq.close_row();
    r1.push_back(c0[i]);
  }
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nu; ++j)
      if (b0[i][j] > 0.0) {
        ineq.add(v.idx_b(i, j), 1.0);
        ineq.close_row();
        r1.push_back(b0[i][j]);
      }

  SparseMatrix eq(0, v.total());
  std::vector<double> r2;
  // Total linearization mass per scenario.
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < nu; ++l)
      for (int i = 0; i < nu; ++i)
        for (int m = 0; m < nu; ++m)
          for (int j = 0; j < nu; ++j) eq.add(v.idx_y(k, l, i, m, j), 1.0);
    eq.close_row();
    r2.push_back(static_cast<double>(nu) * nu);
  }
  // Row/column sums of each permutation block.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nu; ++j) eq.add(v.idx_x(k, i, j), 1.0);
      eq.close_row();
      r2.push_back(1.0);
    }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < nu; ++j) {
      for (int i = 0; i < nu; ++i) eq.add(v.idx_x(k, i, j), 1.0);
      eq.close_row();
      r2.push_back(1.0);
    }
  // Pinned backup-row entry: the vacated slot receives the empty marker.
  for (int k = 0; k < n; ++k) {
    eq.add(v.idx_x(k, n, k), 1.0);
    eq.close_row();
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
  for (int idx = v.y_offset(); idx < v.total(); ++idx) lp.relaxed01.push_back(idx);
  lp.validate();
  return lp;
}

std::vector<std::vector<int>> round_enhancement_plans(const VirtualNetwork& vn,
                                                      std::span<const double> primal) {
  const int n = vn.node_count();
  const EnhancementVars v(n);
  if (static_cast<int>(primal.size()) < v.total())
    throw std::invalid_argument("round_enhancement_plans: primal too short");
  std::vector<std::vector<int>> plans;
  plans.reserve(n);
  for (int k = 0; k < n; ++k) {
    // Pin content n -> slot k, then assign the remaining contents to the
    // remaining slots by maximum relaxed weight.
    std::vector<int> columns;
    for (int j = 0; j < v.nu; ++j)
      if (j != k) columns.push_back(j);
    std::vector<std::vector<double>> weight(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (std::size_t c = 0; c < columns.size(); ++c)
        weight[i][c] = primal[v.idx_x(k, i, columns[c])];
    auto match = max_weight_assignment(weight);
    if (!match) throw std::logic_error("round_enhancement_plans: assignment infeasible");
    std::vector<int> sigma(v.nu);
    sigma[n] = k;
    for (int i = 0; i < n; ++i) sigma[i] = columns[(*match)[i]];
    plans.push_back(std::move(sigma));
  }
  return plans;
}

namespace {

double climb_plans(const VirtualNetwork& vn, std::vector<std::vector<int>>& plans, double alpha,
                   int max_passes) {
  const int n = vn.node_count();
  double best = enhanced_from_plans(vn, plans, alpha).objective();
  for (int pass = 0; pass < max_passes; ++pass) {
    double pass_best = best;
    int best_k = -1, best_a = -1, best_b = -1;
    for (int k = 0; k < n; ++k) {
      // Destinations of the working contents may swap; the pinned backup row
      // must stay on column k.
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          std::swap(plans[k][a], plans[k][b]);
          double obj = enhanced_from_plans(vn, plans, alpha).objective();
          std::swap(plans[k][a], plans[k][b]);
          if (obj < pass_best - 1e-9) {
            pass_best = obj;
            best_k = k;
            best_a = a;
            best_b = b;
          }
        }
    }
    if (best_k < 0) break;
    std::swap(plans[best_k][best_a], plans[best_k][best_b]);
    best = pass_best;
  }
  return best;
}

}  // namespace

void improve_plans(const VirtualNetwork& vn, std::vector<std::vector<int>>& plans, double alpha,
                   int max_passes, int kicks) {
  const int n = vn.node_count();
  double best = climb_plans(vn, plans, alpha, max_passes);
  if (kicks <= 0 || n < 2) return;
  // Restart seed derived from the tuple itself, so repeated calls on the
  // same input stay bit-identical.
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& sigma : plans)
    for (int v : sigma) h = (h ^ static_cast<std::uint64_t>(v + 1)) * 0x100000001b3ULL;
  Rng rng(h);
  for (int kick = 0; kick < kicks; ++kick) {
    auto candidate = plans;
    for (int jolt = 0; jolt < 2; ++jolt) {
      int k = static_cast<int>(rng.uniform_int(0, n - 1));
      int a = static_cast<int>(rng.uniform_int(0, n - 1));
      int b = static_cast<int>(rng.uniform_int(0, n - 1));
      if (a != b) std::swap(candidate[k][a], candidate[k][b]);
    }
    double obj = climb_plans(vn, candidate, alpha, max_passes);
    if (obj < best - 1e-9) {
      best = obj;
      plans = std::move(candidate);
    }
  }
}

EnhancedVn enhanced_from_plans(const VirtualNetwork& vn, std::vector<std::vector<int>> plans,
                               double alpha) {
  const int n = vn.node_count();
  if (static_cast<int>(plans.size()) != n)
    throw std::invalid_argument("enhanced_from_plans: need one plan per scenario");
  EnhancedVn e;
  e.base = vn;
  e.alpha = alpha;
  e.plans = std::move(plans);
  e.c_e = e.padded_cpu();
  e.b_e = e.padded_bw();
  auto c0 = e.padded_cpu();
  auto b0 = e.padded_bw();
  for (const auto& sigma : e.plans) fold_scenario(c0, b0, sigma, e.c_e, e.b_e);
  return e;
}

EnhancedVn fip_enhance(const VirtualNetwork& vn, double alpha) {
  vn.validate();
  const int n = vn.node_count();
  std::vector<std::vector<int>> plans(n);
  for (int k = 0; k < n; ++k) {
    std::vector<int>& sigma = plans[k];
    sigma.resize(n + 1);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::swap(sigma[k], sigma[n]);
  }
  return enhanced_from_plans(vn, std::move(plans), alpha);
}

EnhancedVn enhance_vn(const VirtualNetwork& vn, double alpha, const SolverConfig& solver,
                      const CndConfig& swarm, CndResult* stats) {
  vn.validate();
  GeneralFormLp lp = build_enhancement_lp(vn, alpha);
  Rounder rounder = [&vn, alpha](std::span<const double> primal) {
    auto plans = round_enhancement_plans(vn, primal);
    improve_plans(vn, plans, alpha, 5, 4);
    return enhanced_from_plans(vn, std::move(plans), alpha).objective();
  };
  CndResult result = cnd_solve(lp, swarm, solver, rounder);
  if (stats) *stats = result;
  EnhancedVn fip = fip_enhance(vn, alpha);
  // The swap tuple is itself a valid starting point for the repair pass and
  // often descends further; it also guarantees the returned envelope never
  // exceeds the failure-independent one.
  auto fip_improved_plans = fip.plans;
  improve_plans(vn, fip_improved_plans, alpha, 5, 8);
  EnhancedVn fip_improved = enhanced_from_plans(vn, std::move(fip_improved_plans), alpha);
  if (!std::isfinite(result.best_objective)) {
    fip_improved.fip_fallback = true;
    return fip_improved;
  }
  auto best_plans = round_enhancement_plans(vn, result.best_primal);
  improve_plans(vn, best_plans, alpha, 5, 8);
  EnhancedVn best = enhanced_from_plans(vn, std::move(best_plans), alpha);
  best.fip_fallback = result.fallback_used;
  if (fip_improved.objective() < best.objective()) {
    fip_improved.fip_fallback = best.fip_fallback;
    return fip_improved;
  }
  return best;
}

EnhancedVn brute_force_enhance(const VirtualNetwork& vn, double alpha) {
  vn.validate();
  const int n = vn.node_count();
  if (n > 5) throw std::invalid_argument("brute_force_enhance: n > 5 is intractable");
  const int nu = n + 1;

  std::vector<double> c0 = vn.cpu;
  c0.push_back(0.0);
  std::vector<std::vector<double>> b0(nu, std::vector<double>(nu, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b0[i][j] = vn.bw[i][j];

  // Candidate permutations per scenario: all sigma with sigma[n] = k.
  std::vector<std::vector<std::vector<int>>> candidates(n);
  for (int k = 0; k < n; ++k) {
    std::vector<int> dest;
    for (int j = 0; j < nu; ++j)
      if (j != k) dest.push_back(j);
    std::sort(dest.begin(), dest.end());
    do {
      std::vector<int> sigma(nu);
      for (int i = 0; i < n; ++i) sigma[i] = dest[i];
      sigma[n] = k;
      candidates[k].push_back(sigma);
    } while (std::next_permutation(dest.begin(), dest.end()));
  }

  // Depth-first search over scenarios with envelope-growth pruning; the swap
  // plans seed the incumbent.
  EnhancedVn incumbent = fip_enhance(vn, alpha);
  double best = incumbent.objective();
  std::vector<std::vector<int>> chosen(n), best_plans = incumbent.plans;

  std::function<void(int, const std::vector<double>&, const std::vector<std::vector<double>>&)>
      dfs = [&](int k, const std::vector<double>& c_cur,
                const std::vector<std::vector<double>>& b_cur) {
        // The envelope only grows with each scenario, so a partial tuple at
        // or above the incumbent can be cut.
        if (envelope_objective(c_cur, b_cur, alpha) >= best - kTol) return;
        if (k == n) {
          best = envelope_objective(c_cur, b_cur, alpha);
          best_plans = chosen;
          return;
        }
        for (const auto& sigma : candidates[k]) {
          auto c_next = c_cur;
          auto b_next = b_cur;
          fold_scenario(c0, b0, sigma, c_next, b_next);
          chosen[k] = sigma;
          dfs(k + 1, c_next, b_next);
        }
      };
  dfs(0, c0, b0);
  return enhanced_from_plans(vn, std::move(best_plans), alpha);
}

Recovery apply_recovery(const EnhancedVn& enhanced, int k) {
  const int n = enhanced.base.node_count();
  if (k < 1 || k > n) throw std::out_of_range("apply_recovery: scenario out of range");
  const auto& sigma = enhanced.plans.at(k - 1);
  const int nu = n + 1;
  std::vector<int> inv = inverse_permutation(sigma);
  Recovery rec;
  rec.allocation.resize(nu);
  rec.cpu.resize(nu);
  rec.bw.assign(nu, std::vector<double>(nu, 0.0));
  auto c0 = enhanced.padded_cpu();
  auto b0 = enhanced.padded_bw();
  for (int j = 0; j < nu; ++j) {
    int origin = inv[j];
    rec.allocation[j] = origin < n ? origin : -1;  // -1 = empty backup marker
    rec.cpu[j] = c0[origin];
    for (int l = 0; l < nu; ++l) rec.bw[j][l] = b0[origin][inv[l]];
  }
  return rec;
}

RestorabilityReport verify_restorability(const EnhancedVn& enhanced) {
  const int n = enhanced.base.node_count();
  const int nu = n + 1;
  if (static_cast<int>(enhanced.plans.size()) != n)
    return {false, "plan count != n"};
  auto c0 = enhanced.padded_cpu();
  auto b0 = enhanced.padded_bw();
  for (int k = 0; k < n; ++k) {
    const auto& sigma = enhanced.plans[k];
    if (static_cast<int>(sigma.size()) != nu || !is_permutation(sigma))
      return {false, "scenario " + std::to_string(k + 1) + ": not a permutation"};
    if (sigma[n] != k)
      return {false, "scenario " + std::to_string(k + 1) + ": backup row not pinned"};
    std::vector<int> inv = inverse_permutation(sigma);
    for (int j = 0; j < nu; ++j)
      if (c0[inv[j]] > enhanced.c_e[j] + kTol)
        return {false, "scenario " + std::to_string(k + 1) + " slot " + std::to_string(j) +
                           ": cpu exceeds envelope"};
    for (int j = 0; j < nu; ++j)
      for (int l = 0; l < nu; ++l)
        if (b0[inv[j]][inv[l]] > enhanced.b_e[j][l] + kTol)
          return {false, "scenario " + std::to_string(k + 1) + " slots (" + std::to_string(j) +
                             "," + std::to_string(l) + "): bandwidth exceeds envelope"};
  }
  for (int i = 0; i < nu; ++i)
    if (c0[i] > enhanced.c_e[i] + kTol)
      return {false, "initial allocation slot " + std::to_string(i) + ": cpu exceeds envelope"};
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nu; ++j)
      if (b0[i][j] > enhanced.b_e[i][j] + kTol)
        return {false, "initial allocation slots (" + std::to_string(i) + "," +
                           std::to_string(j) + "): bandwidth exceeds envelope"};
  return {true, ""};
}

}  // namespace svne
