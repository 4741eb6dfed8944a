#include "c3bf/safety_filter.hpp"

#include "c3bf/errors.hpp"

#include <stdexcept>

namespace c3bf {

double psi(const BarrierEval& eval, const ControlInput& u_des, const ClassKappa& kappa) {
  return eval.hdot(u_des) + kappa(eval.h);
}

FilterOutput filter(const BarrierEval& eval, const ControlInput& u_des, const ClassKappa& kappa,
                    double eps_grad) {
  FilterOutput out;
  out.psi = psi(eval, u_des, kappa);
  out.u_star = u_des;
  if (out.psi >= 0.0) return out;

  out.active = true;
  const double grad_sq = eval.lg_h.squaredNorm();
  if (grad_sq <= eps_grad) {
    out.feasible = false;
    return out;
  }
  const Vec3 u_safe = -eval.lg_h * (out.psi / grad_sq);
  out.u_safe = ControlInput::from_vector(u_safe);
  out.u_star = ControlInput::from_vector(u_des.as_vector() + u_safe);
  return out;
}

ControlInput qp_reference_solve(const BarrierEval& eval, const ControlInput& u_des, const ClassKappa& kappa) {
  const Vec3 a = eval.lg_h;
  const double b = eval.lf_h + kappa(eval.h);
  const Vec3 u0 = u_des.as_vector();
  if (a.dot(u0) + b >= 0.0) return u_des;
  if (a.squaredNorm() == 0.0) throw Infeasible("constraint violated with zero input gradient");

  // Stationarity 2(u - u_des) - mu a = 0 with the constraint active: a.u = -b.
  Eigen::Matrix4d kkt = Eigen::Matrix4d::Zero();
  kkt.topLeftCorner<3, 3>() = 2.0 * Eigen::Matrix3d::Identity();
  kkt.block<3, 1>(0, 3) = -a;
  kkt.block<1, 3>(3, 0) = a.transpose();
  Eigen::Vector4d rhs;
  rhs << 2.0 * u0, -b;
  const Eigen::Vector4d sol = kkt.fullPivLu().solve(rhs);
  if (sol[3] < 0.0) throw Infeasible("negative multiplier in the active-constraint solution");
  return ControlInput::from_vector(sol.head<3>());
}

FilterOutput compose_obstacles(std::span<const BarrierEval> evals, const ControlInput& u_des,
                               const ClassKappa& kappa, double eps_grad) {
  if (evals.empty()) throw std::invalid_argument("compose_obstacles needs at least one barrier");
  std::size_t best = 0;
  double best_psi = psi(evals[0], u_des, kappa);
  for (std::size_t i = 1; i < evals.size(); ++i) {
    const double value = psi(evals[i], u_des, kappa);
    if (value < best_psi) {
      best_psi = value;
      best = i;
    }
  }
  FilterOutput out = filter(evals[best], u_des, kappa, eps_grad);
  out.binding = best;
  return out;
}

}  // namespace c3bf
