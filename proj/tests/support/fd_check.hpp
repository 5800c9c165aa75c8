#pragma once

// Central finite-difference check of the energy gradient, with coordinates
// adjacent to penalty kinks excluded (the subgradient convention there is
// sign(0) = 0, which finite differences cannot reproduce).

#include <cmath>
#include <vector>

#include "dense_lp_oracle.hpp"
#include "svne/neurolp.hpp"

namespace oracle {

inline std::vector<double> penalty_arguments(const svne::GeneralFormLp& lp,
                                             const std::vector<double>& u) {
  const int n1 = lp.n1(), n2 = lp.n2(), p1 = lp.num_ineq(), p2 = lp.num_eq();
  auto m11 = densify(lp.m11), m12 = densify(lp.m12), m21 = densify(lp.m21);
  std::vector<double> args;
  for (int i = 0; i < n1; ++i) args.push_back(u[i]);                       // z1
  for (int i = 0; i < p1; ++i) args.push_back(u[n1 + n2 + i]);             // xi1
  for (int r = 0; r < p1; ++r) {                                           // M1 z - r1
    double v = -lp.r1[r];
    for (int c = 0; c < n1; ++c) v += m11[r][c] * u[c];
    for (int c = 0; c < n2; ++c) v += m12[r][c] * u[n1 + c];
    args.push_back(v);
  }
  for (int c = 0; c < n1; ++c) {                                           // d1 - M3 xi
    double v = lp.d1[c];
    for (int r = 0; r < p1; ++r) v -= m11[r][c] * u[n1 + n2 + r];
    for (int r = 0; r < p2; ++r) v -= m21[r][c] * u[n1 + n2 + p1 + r];
    args.push_back(v);
  }
  return args;
}

inline bool near_kink(const svne::GeneralFormLp& lp, const std::vector<double>& u,
                      double threshold) {
  for (double a : penalty_arguments(lp, u))
    if (std::fabs(a) < threshold) return true;
  return false;
}

struct FdCheckResult {
  int checked = 0;
  int skipped = 0;
  int failures = 0;
  double worst = 0.0;  // worst relative deviation among checked coordinates
};

inline FdCheckResult check_gradient_fd(const svne::GeneralFormLp& lp, std::vector<double> u,
                                       double h, double tol) {
  FdCheckResult result;
  std::vector<double> grad(u.size());
  svne::energy_gradient(lp, u, grad);
  for (std::size_t j = 0; j < u.size(); ++j) {
    double saved = u[j];
    u[j] = saved + h;
    bool kink_hi = near_kink(lp, u, 20 * h);
    double e_hi = dense_energy(lp, u);
    u[j] = saved - h;
    bool kink_lo = near_kink(lp, u, 20 * h);
    double e_lo = dense_energy(lp, u);
    u[j] = saved;
    if (kink_hi || kink_lo) {
      ++result.skipped;
      continue;
    }
    double fd = (e_hi - e_lo) / (2 * h);
    double rel = std::fabs(fd - grad[j]) / std::max(1.0, std::fabs(fd));
    result.worst = std::max(result.worst, rel);
    ++result.checked;
    if (rel > tol) ++result.failures;
  }
  return result;
}

}  // namespace oracle
