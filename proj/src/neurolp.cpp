#include "svne/neurolp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace svne {

namespace {

// phi(t) = t - |t| = 2 min(t, 0). Derivative convention at the kink: 0.
inline double phi(double t) { return t - std::fabs(t); }

struct Parts {
  std::span<const double> z1, z2, xi1, xi2;
};

Parts split(const GeneralFormLp& lp, std::span<const double> u) {
  int n1 = lp.n1(), n2 = lp.n2(), p1 = lp.num_ineq(), p2 = lp.num_eq();
  if (static_cast<int>(u.size()) != n1 + n2 + p1 + p2)
    throw std::invalid_argument("neurolp: state dimension mismatch");
  return {u.subspan(0, n1), u.subspan(n1, n2), u.subspan(n1 + n2, p1),
          u.subspan(n1 + n2 + p1, p2)};
}

// Shared matrix-vector products at one state. Everything the energy, its
// gradient and the KKT residual need is derived from these.
struct Workspace {
  std::vector<double> ineq_res;   // M1 z - r1
  std::vector<double> eq_res;     // M2 z - r2
  std::vector<double> dual_slack; // d1 - M3 xi
  std::vector<double> dual_res;   // M4 xi - d2
  std::vector<double> pv, pw;     // phi buffers
  double gap = 0.0;

  void resize(const GeneralFormLp& lp) {
    ineq_res.resize(lp.num_ineq());
    eq_res.resize(lp.num_eq());
    dual_slack.resize(lp.n1());
    dual_res.resize(lp.n2());
    pv.resize(lp.num_ineq());
    pw.resize(lp.n1());
  }

  void products(const GeneralFormLp& lp, std::span<const double> u) {
    auto [z1, z2, xi1, xi2] = split(lp, u);
    lp.m11.multiply(z1, ineq_res, false);
    lp.m12.multiply(z2, ineq_res, true);
    for (int i = 0; i < lp.num_ineq(); ++i) ineq_res[i] -= lp.r1[i];
    lp.m21.multiply(z1, eq_res, false);
    lp.m22.multiply(z2, eq_res, true);
    for (int i = 0; i < lp.num_eq(); ++i) eq_res[i] -= lp.r2[i];
    lp.m11.multiply_transpose(xi1, dual_slack, false);
    lp.m21.multiply_transpose(xi2, dual_slack, true);
    for (int i = 0; i < lp.n1(); ++i) dual_slack[i] = lp.d1[i] - dual_slack[i];
    lp.m12.multiply_transpose(xi1, dual_res, false);
    lp.m22.multiply_transpose(xi2, dual_res, true);
    for (int i = 0; i < lp.n2(); ++i) dual_res[i] -= lp.d2[i];
    gap = 0.0;
    for (int i = 0; i < lp.n1(); ++i) gap += lp.d1[i] * z1[i];
    for (int i = 0; i < lp.n2(); ++i) gap += lp.d2[i] * z2[i];
    for (int i = 0; i < lp.num_ineq(); ++i) gap -= lp.r1[i] * xi1[i];
    for (int i = 0; i < lp.num_eq(); ++i) gap -= lp.r2[i] * xi2[i];
  }

  double energy(const GeneralFormLp& lp, std::span<const double> u) const {
    auto [z1, z2, xi1, xi2] = split(lp, u);
    (void)z2;
    double e = 0.5 * gap * gap;
    for (double v : z1) e += 0.5 * v * phi(v);
    for (double v : xi1) e += 0.5 * v * phi(v);
    for (double v : eq_res) e += 0.5 * v * v;
    for (double v : dual_res) e += 0.5 * v * v;
    for (double v : ineq_res) e += 0.5 * v * phi(v);
    for (double v : dual_slack) e += 0.5 * v * phi(v);
    return e;
  }

  void gradient(const GeneralFormLp& lp, std::span<const double> u, std::span<double> g) {
    auto [z1, z2, xi1, xi2] = split(lp, u);
    (void)z2;
    int n1 = lp.n1(), n2 = lp.n2(), p1 = lp.num_ineq(), p2 = lp.num_eq();
    auto gz1 = g.subspan(0, n1);
    auto gz2 = g.subspan(n1, n2);
    auto gxi1 = g.subspan(n1 + n2, p1);
    auto gxi2 = g.subspan(n1 + n2 + p1, p2);
    for (int i = 0; i < p1; ++i) pv[i] = phi(ineq_res[i]);
    for (int i = 0; i < n1; ++i) pw[i] = -phi(dual_slack[i]);

    for (int i = 0; i < n1; ++i) gz1[i] = gap * lp.d1[i] + phi(z1[i]);
    lp.m21.multiply_transpose(eq_res, gz1, true);
    lp.m11.multiply_transpose(pv, gz1, true);

    for (int i = 0; i < n2; ++i) gz2[i] = gap * lp.d2[i];
    lp.m22.multiply_transpose(eq_res, gz2, true);
    lp.m12.multiply_transpose(pv, gz2, true);

    for (int i = 0; i < p1; ++i) gxi1[i] = -gap * lp.r1[i] + phi(xi1[i]);
    lp.m12.multiply(dual_res, gxi1, true);
    lp.m11.multiply(pw, gxi1, true);

    for (int i = 0; i < p2; ++i) gxi2[i] = -gap * lp.r2[i];
    lp.m22.multiply(dual_res, gxi2, true);
    lp.m21.multiply(pw, gxi2, true);
  }

  KktBreakdown kkt(const GeneralFormLp& lp, std::span<const double> u) const {
    auto [z1, z2, xi1, xi2] = split(lp, u);
    (void)z2;
    KktBreakdown b;
    for (double v : ineq_res) b.primal_ineq = std::max(b.primal_ineq, -v);
    for (double v : eq_res) b.primal_eq = std::max(b.primal_eq, std::fabs(v));
    for (double v : z1) b.primal_sign = std::max(b.primal_sign, -v);
    for (double v : dual_slack) b.dual_ineq = std::max(b.dual_ineq, -v);
    for (double v : dual_res) b.dual_eq = std::max(b.dual_eq, std::fabs(v));
    for (double v : xi1) b.dual_sign = std::max(b.dual_sign, -v);
    b.gap = std::fabs(gap);
    b.primal_ineq = std::max(b.primal_ineq, 0.0);
    b.primal_sign = std::max(b.primal_sign, 0.0);
    b.dual_ineq = std::max(b.dual_ineq, 0.0);
    b.dual_sign = std::max(b.dual_sign, 0.0);
    return b;
  }
};

}  // namespace

namespace {

bool newton_solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-14) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

std::vector<std::vector<double>> densify_block(const SparseMatrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols(), 0.0));
  for (int r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) out[r][cols[k]] += vals[k];
  }
  return out;
}

// Hessian of the active quadratic piece of the energy at u (the energy is C1
// and piecewise quadratic; one-sided terms contribute 2 on their active side).
struct NewtonContext {
  std::vector<std::vector<double>> d11, d12, d21, d22;
  bool ready = false;

  void prepare(const GeneralFormLp& lp) {
    if (ready) return;
    d11 = densify_block(lp.m11);
    d12 = densify_block(lp.m12);
    d21 = densify_block(lp.m21);
    d22 = densify_block(lp.m22);
    ready = true;
  }

  std::vector<std::vector<double>> hessian(const GeneralFormLp& lp,
                                           std::span<const double> u,
                                           const std::vector<double>& ineq_res,
                                           const std::vector<double>& dual_slack) {
    const int n1 = lp.n1(), n2 = lp.n2(), p1 = lp.num_ineq(), p2 = lp.num_eq();
    const int dim = n1 + n2 + p1 + p2;
    const int xi1_off = n1 + n2, xi2_off = n1 + n2 + p1;
    std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
    std::vector<double> vec(dim, 0.0);
    auto add_outer = [&](double scale) {
      for (int a = 0; a < dim; ++a) {
        if (vec[a] == 0.0) continue;
        double va = scale * vec[a];
        for (int b = 0; b < dim; ++b) h[a][b] += va * vec[b];
      }
    };
    // duality-gap term
    std::fill(vec.begin(), vec.end(), 0.0);
    for (int i = 0; i < n1; ++i) vec[i] = lp.d1[i];
    for (int i = 0; i < n2; ++i) vec[n1 + i] = lp.d2[i];
    for (int r = 0; r < p1; ++r) vec[xi1_off + r] = -lp.r1[r];
    for (int r = 0; r < p2; ++r) vec[xi2_off + r] = -lp.r2[r];
    add_outer(1.0);
    // sign penalties
    for (int i = 0; i < n1; ++i)
      if (u[i] < 0) h[i][i] += 2.0;
    for (int r = 0; r < p1; ++r)
      if (u[xi1_off + r] < 0) h[xi1_off + r][xi1_off + r] += 2.0;
    // primal equality rows
    for (int r = 0; r < p2; ++r) {
      std::fill(vec.begin(), vec.end(), 0.0);
      for (int i = 0; i < n1; ++i) vec[i] = d21[r][i];
      for (int i = 0; i < n2; ++i) vec[n1 + i] = d22[r][i];
      add_outer(1.0);
    }
    // dual equality rows
    for (int j = 0; j < n2; ++j) {
      std::fill(vec.begin(), vec.end(), 0.0);
      for (int r = 0; r < p1; ++r) vec[xi1_off + r] = d12[r][j];
      for (int r = 0; r < p2; ++r) vec[xi2_off + r] = d22[r][j];
      add_outer(1.0);
    }
    // active primal inequality rows
    for (int r = 0; r < p1; ++r) {
      if (ineq_res[r] >= 0) continue;
      std::fill(vec.begin(), vec.end(), 0.0);
      for (int i = 0; i < n1; ++i) vec[i] = d11[r][i];
      for (int i = 0; i < n2; ++i) vec[n1 + i] = d12[r][i];
      add_outer(2.0);
    }
    // active dual slack rows
    for (int i = 0; i < n1; ++i) {
      if (dual_slack[i] >= 0) continue;
      std::fill(vec.begin(), vec.end(), 0.0);
      for (int r = 0; r < p1; ++r) vec[xi1_off + r] = d11[r][i];
      for (int r = 0; r < p2; ++r) vec[xi2_off + r] = d21[r][i];
      add_outer(2.0);
    }
    return h;
  }
};

}  // namespace

void GeneralFormLp::validate() const {
  if (m11.rows() != num_ineq() || m21.rows() != num_eq())
    throw std::invalid_argument("GeneralFormLp: z1-block row mismatch");
  if (m11.cols() != n1() || m21.cols() != n1())
    throw std::invalid_argument("GeneralFormLp: z1-block column mismatch");
  if (n2() > 0 || m12.nnz() > 0 || m22.nnz() > 0) {
    if (m12.rows() != num_ineq() || m22.rows() != num_eq() || m12.cols() != n2() ||
        m22.cols() != n2())
      throw std::invalid_argument("GeneralFormLp: z2-block shape mismatch");
  }
  for (int idx : relaxed01)
    if (idx < 0 || idx >= num_vars())
      throw std::invalid_argument("GeneralFormLp: relaxed01 index out of range");
}

double KktBreakdown::max() const {
  return std::max({primal_ineq, primal_eq, primal_sign, dual_ineq, dual_eq, dual_sign, gap});
}

std::string KktBreakdown::dominant() const {
  double m = max();
  if (m == gap) return "duality_gap";
  if (m == primal_ineq) return "primal_inequality";
  if (m == primal_eq) return "primal_equality";
  if (m == primal_sign) return "primal_sign";
  if (m == dual_ineq) return "dual_inequality";
  if (m == dual_eq) return "dual_equality";
  return "dual_sign";
}

double energy(const GeneralFormLp& lp, std::span<const double> u) {
  Workspace ws;
  ws.resize(lp);
  ws.products(lp, u);
  return ws.energy(lp, u);
}

void energy_gradient(const GeneralFormLp& lp, std::span<const double> u, std::span<double> grad) {
  if (grad.size() != u.size()) throw std::invalid_argument("energy_gradient: output size");
  Workspace ws;
  ws.resize(lp);
  ws.products(lp, u);
  ws.gradient(lp, u, grad);
}

KktBreakdown kkt_breakdown(const GeneralFormLp& lp, std::span<const double> u) {
  Workspace ws;
  ws.resize(lp);
  ws.products(lp, u);
  return ws.kkt(lp, u);
}

double kkt_residual(const GeneralFormLp& lp, std::span<const double> u) {
  return kkt_breakdown(lp, u).max();
}

std::pair<NeuroState, SolveReport> integrate_flow(const GeneralFormLp& lp, NeuroState u0,
                                                  const SolverConfig& config) {
  if (config.step_size <= 0) throw std::invalid_argument("integrate_flow: step_size <= 0");
  lp.validate();
  const int dim = lp.state_dim();
  if (static_cast<int>(u0.size()) != dim)
    throw std::invalid_argument("integrate_flow: state dimension mismatch");

  SolveReport report;
  Workspace ws;
  ws.resize(lp);
  NeuroState u = std::move(u0);
  std::vector<double> grad(dim), trial(dim);
  std::vector<double> k2, k3, k4, stage;  // RK4 only
  const bool rk4 = config.integrator == SolverConfig::Integrator::kRk4;
  if (rk4) {
    k2.resize(dim);
    k3.resize(dim);
    k4.resize(dim);
    stage.resize(dim);
  }

  ws.products(lp, u);
  double e = ws.energy(lp, u);
  if (!std::isfinite(e)) {
    report.diverged = true;
    report.final_energy = e;
    return {std::move(u), report};
  }
  double kkt = ws.kkt(lp, u).max();
  auto record = [&](long step) {
    if (config.record_trace &&
        (step % std::max<long>(1, config.trace_stride) == 0 || kkt <= config.kkt_tolerance))
      report.trace.push_back({static_cast<double>(step), e, kkt});
  };
  record(0);
  if (kkt <= config.kkt_tolerance) {
    report.converged = true;
    report.kkt_residual = kkt;
    report.dominant_violation = ws.kkt(lp, u).dominant();
    report.duality_gap = std::fabs(ws.gap);
    report.final_energy = e;
    return {std::move(u), report};
  }

  // Halving on energy ascent is the stability control; the growth cap only
  // guards against overflow, so flat valleys can be crossed with huge steps.
  double h = config.step_size;
  const double h_max = config.step_size * 1e15;
  ws.gradient(lp, u, grad);

  // Damped semismooth Newton on grad E finishes stiff instances the explicit
  // flow cannot traverse in reasonable time; fixed points are unchanged and
  // every step obeys the same energy-decrease acceptance rule.
  NewtonContext newton;
  const bool newton_enabled = config.newton_finish && dim <= config.newton_dim_limit;
  const long newton_stride = 2000;
  long next_newton = newton_stride;
  auto newton_phase = [&]() -> bool {
    newton.prepare(lp);
    bool any_progress = false;
    for (int iter = 0; iter < 50 && report.steps < config.max_steps; ++iter) {
      if (kkt <= config.kkt_tolerance) break;
      auto hess = newton.hessian(lp, u, ws.ineq_res, ws.dual_slack);
      double trace = 0;
      for (int i = 0; i < dim; ++i) trace += hess[i][i];
      double mu = 1e-10 * (1.0 + trace / dim);
      std::vector<double> rhs(dim), delta;
      for (int i = 0; i < dim; ++i) rhs[i] = -grad[i];
      bool accepted = false;
      for (int lm = 0; lm < 16 && !accepted; ++lm) {
        auto damped = hess;
        for (int i = 0; i < dim; ++i) damped[i][i] += mu;
        if (!newton_solve_square(std::move(damped), rhs, delta)) {
          mu = std::max(mu * 10, 1e-12);
          continue;
        }
        for (int i = 0; i < dim; ++i) trial[i] = u[i] + delta[i];
        ws.products(lp, trial);
        double e_trial = ws.energy(lp, trial);
        if (std::isfinite(e_trial) && e_trial <= e) {
          u.swap(trial);
          e = e_trial;
          ++report.steps;
          kkt = ws.kkt(lp, u).max();
          record(report.steps);
          ws.gradient(lp, u, grad);
          accepted = true;
          any_progress = true;
        } else {
          mu = std::max(mu * 10, 1e-12);
        }
      }
      if (!accepted) break;
    }
    if (!any_progress) ws.products(lp, u);  // restore for the explicit loop
    return any_progress;
  };

  while (report.steps < config.max_steps) {
    if (newton_enabled && report.steps >= next_newton && kkt > config.kkt_tolerance) {
      newton_phase();
      next_newton = report.steps + newton_stride;
      if (kkt <= config.kkt_tolerance) {
        report.converged = true;
        break;
      }
    }
    if (rk4) {
      // Classic RK4 on du/dt = -beta * grad E(u); grad already holds k1.
      double bh = config.beta * h;
      for (int i = 0; i < dim; ++i) stage[i] = u[i] - 0.5 * bh * grad[i];
      ws.products(lp, stage);
      ws.gradient(lp, stage, k2);
      for (int i = 0; i < dim; ++i) stage[i] = u[i] - 0.5 * bh * k2[i];
      ws.products(lp, stage);
      ws.gradient(lp, stage, k3);
      for (int i = 0; i < dim; ++i) stage[i] = u[i] - bh * k3[i];
      ws.products(lp, stage);
      ws.gradient(lp, stage, k4);
      for (int i = 0; i < dim; ++i)
        trial[i] = u[i] - bh / 6.0 * (grad[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    } else {
      double bh = config.beta * h;
      for (int i = 0; i < dim; ++i) trial[i] = u[i] - bh * grad[i];
    }
    ws.products(lp, trial);
    double e_trial = ws.energy(lp, trial);
    if (!std::isfinite(e_trial)) {
      if (h <= config.step_floor) {
        report.diverged = true;
        break;
      }
      h = std::max(h * 0.5, config.step_floor);
      ws.products(lp, u);  // restore products for the next trial from u
      continue;
    }
    if (e_trial > e) {
      if (h <= config.step_floor) {
        // Stalled at the floor: one Newton rescue attempt before giving up.
        ws.products(lp, u);
        if (newton_enabled && newton_phase()) {
          if (kkt <= config.kkt_tolerance) {
            report.converged = true;
            break;
          }
          h = config.step_size;
          continue;
        }
        break;  // keep the best state we have
      }
      h = std::max(h * 0.5, config.step_floor);
      ws.products(lp, u);
      continue;
    }
    u.swap(trial);
    e = e_trial;
    ++report.steps;
    kkt = ws.kkt(lp, u).max();
    record(report.steps);
    if (kkt <= config.kkt_tolerance) {
      report.converged = true;
      break;
    }
    ws.gradient(lp, u, grad);
    h = std::min(h * config.step_growth, h_max);
  }

  ws.products(lp, u);
  auto final_breakdown = ws.kkt(lp, u);
  report.kkt_residual = final_breakdown.max();
  report.dominant_violation = final_breakdown.dominant();
  report.duality_gap = std::fabs(ws.gap);
  report.final_energy = ws.energy(lp, u);
  if (config.record_trace)
    report.trace.push_back({static_cast<double>(report.steps), report.final_energy,
                            report.kkt_residual});
  return {std::move(u), report};
}

LpSolution solve_lp(const GeneralFormLp& lp, const SolverConfig& config,
                    const std::vector<double>* initial_primal) {
  NeuroState u(lp.state_dim(), 0.0);
  if (initial_primal) {
    if (static_cast<int>(initial_primal->size()) != lp.num_vars())
      throw std::invalid_argument("solve_lp: initial guess dimension mismatch");
    std::copy(initial_primal->begin(), initial_primal->end(), u.begin());
  }
  auto [state, report] = integrate_flow(lp, std::move(u), config);
  LpSolution sol;
  sol.z.assign(state.begin(), state.begin() + lp.num_vars());
  sol.xi.assign(state.begin() + lp.num_vars(), state.end());
  sol.report = report;
  sol.objective = 0.0;
  for (int i = 0; i < lp.n1(); ++i) sol.objective += lp.d1[i] * sol.z[i];
  for (int i = 0; i < lp.n2(); ++i) sol.objective += lp.d2[i] * sol.z[lp.n1() + i];
  return sol;
}

namespace {

// Dense Gaussian elimination helpers for the vertex oracle.
int reduce_rows(std::vector<std::vector<double>>& a, std::vector<double>& b, bool* inconsistent) {
  const double tol = 1e-9;
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    double best = tol;
    for (int r = rank; r < rows; ++r)
      if (std::fabs(a[r][col]) > best) {
        best = std::fabs(a[r][col]);
        pivot = r;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    std::swap(b[rank], b[pivot]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || std::fabs(a[r][col]) < tol / 10) continue;
      double f = a[r][col] / a[rank][col];
      for (int c = 0; c < cols; ++c) a[r][c] -= f * a[rank][c];
      b[r] -= f * b[rank];
    }
    ++rank;
  }
  *inconsistent = false;
  for (int r = rank; r < rows; ++r)
    if (std::fabs(b[r]) > 1e-7) *inconsistent = true;
  a.resize(rank);
  b.resize(rank);
  return rank;
}

bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-10) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

void dense_row(const SparseMatrix& m, int r, std::vector<double>& out, int offset) {
  auto cols = m.row_cols(r);
  auto vals = m.row_values(r);
  for (std::size_t k = 0; k < cols.size(); ++k) out[offset + cols[k]] = vals[k];
}

}  // namespace

OracleResult vertex_oracle(const GeneralFormLp& lp) {
  lp.validate();
  int n1 = lp.n1(), n2 = lp.n2(), p1 = lp.num_ineq(), p2 = lp.num_eq();
  // Standard form: columns are (z1, z2+, z2-, slacks); all nonnegative.
  int ncols = n1 + 2 * n2 + p1;
  std::vector<std::vector<double>> a(p1 + p2, std::vector<double>(ncols, 0.0));
  std::vector<double> b(p1 + p2, 0.0);
  std::vector<double> cost(ncols, 0.0);
  for (int r = 0; r < p1; ++r) {
    dense_row(lp.m11, r, a[r], 0);
    if (n2) {
      dense_row(lp.m12, r, a[r], n1);
      for (int j = 0; j < n2; ++j) a[r][n1 + n2 + j] = -a[r][n1 + j];
    }
    a[r][n1 + 2 * n2 + r] = -1.0;  // M1 z - s = r1
    b[r] = lp.r1[r];
  }
  for (int r = 0; r < p2; ++r) {
    dense_row(lp.m21, r, a[p1 + r], 0);
    if (n2) {
      dense_row(lp.m22, r, a[p1 + r], n1);
      for (int j = 0; j < n2; ++j) a[p1 + r][n1 + n2 + j] = -a[p1 + r][n1 + j];
    }
    b[p1 + r] = lp.r2[r];
  }
  for (int j = 0; j < n1; ++j) cost[j] = lp.d1[j];
  for (int j = 0; j < n2; ++j) {
    cost[n1 + j] = lp.d2[j];
    cost[n1 + n2 + j] = -lp.d2[j];
  }

  bool inconsistent = false;
  int rank = reduce_rows(a, b, &inconsistent);
  if (inconsistent) return {LpStatus::kInfeasible, 0.0, {}};

  // Work bound: refuse instances whose basis enumeration would explode.
  double combos = 1.0;
  for (int i = 0; i < rank; ++i) combos *= static_cast<double>(ncols - i) / (i + 1);
  if (combos > 5e6)
    throw std::invalid_argument("vertex_oracle: instance too large for basis enumeration");

  std::vector<int> basis(rank);
  for (int i = 0; i < rank; ++i) basis[i] = i;
  bool any_feasible = false, unbounded = false;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;

  auto visit = [&](const std::vector<int>& cols_sel) {
    std::vector<std::vector<double>> ab(rank, std::vector<double>(rank));
    for (int r = 0; r < rank; ++r)
      for (int c = 0; c < rank; ++c) ab[r][c] = a[r][cols_sel[c]];
    std::vector<double> xb;
    if (!solve_square(ab, b, xb)) return;
    for (double v : xb)
      if (v < -1e-8) return;
    any_feasible = true;
    double obj = 0;
    for (int c = 0; c < rank; ++c) obj += cost[cols_sel[c]] * xb[c];
    // Unbounded-edge check: an improving nonbasic direction with a
    // nonnegative basic update has no blocking constraint.
    std::vector<char> in_basis(ncols, false);
    for (int c : cols_sel) in_basis[c] = true;
    for (int j = 0; j < ncols && !unbounded; ++j) {
      if (in_basis[j]) continue;
      std::vector<double> col(rank), dir;
      for (int r = 0; r < rank; ++r) col[r] = a[r][j];
      std::vector<std::vector<double>> ab2(rank, std::vector<double>(rank));
      for (int r = 0; r < rank; ++r)
        for (int c = 0; c < rank; ++c) ab2[r][c] = a[r][cols_sel[c]];
      if (!solve_square(ab2, col, dir)) continue;
      double reduced = cost[j];
      bool ray = true;
      for (int r = 0; r < rank; ++r) {
        reduced -= cost[cols_sel[r]] * dir[r];
        if (dir[r] > 1e-9) ray = false;  // blocking basic variable exists
      }
      if (ray && reduced < -1e-9) unbounded = true;
    }
    if (obj < best) {
      best = obj;
      best_x.assign(ncols, 0.0);
      for (int c = 0; c < rank; ++c) best_x[cols_sel[c]] = std::max(xb[c], 0.0);
    }
  };

  if (rank == 0) {
    visit({});
  } else {
    while (true) {
      visit(basis);
      int i = rank - 1;
      while (i >= 0 && basis[i] == ncols - rank + i) --i;
      if (i < 0) break;
      ++basis[i];
      for (int j = i + 1; j < rank; ++j) basis[j] = basis[j - 1] + 1;
    }
  }

  if (!any_feasible) return {LpStatus::kInfeasible, 0.0, {}};
  if (unbounded) return {LpStatus::kUnbounded, -std::numeric_limits<double>::infinity(), {}};
  OracleResult res;
  res.status = LpStatus::kOptimal;
  res.objective = best;
  res.z.assign(n1 + n2, 0.0);
  for (int j = 0; j < n1; ++j) res.z[j] = best_x[j];
  for (int j = 0; j < n2; ++j) res.z[n1 + j] = best_x[n1 + j] - best_x[n1 + n2 + j];
  return res;
}

void write_trace_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out.precision(12);
  out << "step,energy,kkt_residual\n";
  for (const auto& row : report.trace)
    out << static_cast<long>(row[0]) << "," << row[1] << "," << row[2] << "\n";
}

}  // namespace svne
