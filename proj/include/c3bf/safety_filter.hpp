#pragma once

#include "c3bf/barriers.hpp"
#include "c3bf/types.hpp"

#include <cstddef>
#include <span>

namespace c3bf {

/// Linear class-K function kappa(h) = gamma h.
struct ClassKappa {
  double gamma = 1.0;

  double operator()(double h) const { return gamma * h; }
};

inline constexpr double kDefaultEpsGrad = 1e-10;

struct FilterOutput {
  ControlInput u_star;
  ControlInput u_safe;
  double psi = 0.0;
  bool active = false;    // psi < 0
  bool feasible = true;   // false when active with |lg_h|^2 <= eps_grad
  std::size_t binding = 0;  // index of the eval with minimum psi
};

/// psi = lf_h + lg_h . u_des + kappa(h)
double psi(const BarrierEval& eval, const ControlInput& u_des, const ClassKappa& kappa);

/// Closed-form minimiser of |u - u_des|^2 subject to lf_h + lg_h u + kappa(h) >= 0.
FilterOutput filter(const BarrierEval& eval, const ControlInput& u_des, const ClassKappa& kappa,
                    double eps_grad = kDefaultEpsGrad);

/// Solves the same QP through its KKT system. Reference for testing `filter`.
/// Throws Infeasible if lg_h = 0 and the constraint is violated at u_des.
ControlInput qp_reference_solve(const BarrierEval& eval, const ControlInput& u_des, const ClassKappa& kappa);

/// Filters against the constraint with the smallest psi. `evals` must be non-empty.
FilterOutput compose_obstacles(std::span<const BarrierEval> evals, const ControlInput& u_des,
                               const ClassKappa& kappa, double eps_grad = kDefaultEpsGrad);

}  // namespace c3bf
