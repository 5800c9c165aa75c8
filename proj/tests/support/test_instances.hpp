#pragma once

// Shared random-instance generators for the solver tests and the acceptance
// suite.

#include <vector>

#include "svne/neurolp.hpp"
#include "svne/rng.hpp"

namespace testgen {

struct LpShape {
  int n1 = 0, n2 = 0, p1 = 0, p2 = 0;
};

// Arbitrary dense-ish general-form instance; no feasibility guarantee. Used
// for energy/gradient math checks.
inline svne::GeneralFormLp random_lp(svne::Rng& rng, const LpShape& shape, double density = 0.5) {
  svne::GeneralFormLp lp;
  lp.d1.resize(shape.n1);
  lp.d2.resize(shape.n2);
  for (auto& v : lp.d1) v = rng.uniform(-2, 2);
  for (auto& v : lp.d2) v = rng.uniform(-2, 2);
  auto fill = [&](svne::SparseMatrix& m, int rows, int cols) {
    m = svne::SparseMatrix(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c)
        if (rng.uniform01() < density) m.add(c, rng.uniform(-2, 2));
      m.close_row();
    }
  };
  fill(lp.m11, shape.p1, shape.n1);
  fill(lp.m12, shape.p1, shape.n2);
  fill(lp.m21, shape.p2, shape.n1);
  fill(lp.m22, shape.p2, shape.n2);
  lp.r1.resize(shape.p1);
  lp.r2.resize(shape.p2);
  for (auto& v : lp.r1) v = rng.uniform(-2, 2);
  for (auto& v : lp.r2) v = rng.uniform(-2, 2);
  return lp;
}

// Bounded-feasible instance: all variables in z1 with nonnegative costs
// (objective bounded below by 0 over the cone), and rhs built from a known
// interior point so the feasible set is nonempty.
inline svne::GeneralFormLp random_bounded_feasible_lp(svne::Rng& rng, int max_vars = 6,
                                                      int max_rows = 6) {
  int n1 = 2 + static_cast<int>(rng.uniform_int(0, max_vars - 2));
  int p1 = 1 + static_cast<int>(rng.uniform_int(0, max_rows - 1));
  int p2 = static_cast<int>(rng.uniform_int(0, std::min(2, n1 - 1)));
  svne::GeneralFormLp lp;
  lp.d1.resize(n1);
  for (auto& v : lp.d1) v = rng.uniform(0.1, 2.0);
  std::vector<double> feasible(n1);
  for (auto& v : feasible) v = rng.uniform(0.0, 2.0);

  lp.m11 = svne::SparseMatrix(p1, n1);
  lp.r1.resize(p1);
  for (int r = 0; r < p1; ++r) {
    double row_dot = 0;
    for (int c = 0; c < n1; ++c)
      if (rng.uniform01() < 0.7) {
        double v = rng.uniform(-1.5, 1.5);
        lp.m11.add(c, v);
        row_dot += v * feasible[c];
      }
    lp.m11.close_row();
    lp.r1[r] = row_dot - rng.uniform(0.0, 1.0);  // slack at the witness point
  }
  lp.m21 = svne::SparseMatrix(p2, n1);
  lp.r2.resize(p2);
  for (int r = 0; r < p2; ++r) {
    double row_dot = 0;
    for (int c = 0; c < n1; ++c)
      if (rng.uniform01() < 0.7) {
        double v = rng.uniform(-1.5, 1.5);
        lp.m21.add(c, v);
        row_dot += v * feasible[c];
      }
    lp.m21.close_row();
    lp.r2[r] = row_dot;
  }
  lp.m12 = svne::SparseMatrix(p1, 0);
  for (int r = 0; r < p1; ++r) lp.m12.close_row();
  lp.m22 = svne::SparseMatrix(p2, 0);
  for (int r = 0; r < p2; ++r) lp.m22.close_row();
  return lp;
}

inline std::vector<double> random_state(svne::Rng& rng, const svne::GeneralFormLp& lp,
                                        double scale = 1.0) {
  std::vector<double> u(lp.state_dim());
  for (auto& v : u) v = rng.uniform(-scale, scale);
  return u;
}

// min x subject to x >= 1: the canonical tiny instance with optimum
// (z, xi) = (1, 1).
inline svne::GeneralFormLp tiny_lp() {
  svne::GeneralFormLp lp;
  lp.d1 = {1.0};
  lp.m11 = svne::SparseMatrix(1, 1);
  lp.m11.add(0, 1.0);
  lp.m11.close_row();
  lp.r1 = {1.0};
  lp.m12 = svne::SparseMatrix(1, 0);
  lp.m12.close_row();
  lp.m21 = svne::SparseMatrix(0, 1);
  lp.m22 = svne::SparseMatrix(0, 0);
  return lp;
}

}  // namespace testgen
