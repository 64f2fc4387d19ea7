#include "roadfield/evolve.hpp"

#include <cmath>
#include <stdexcept>

namespace roadfield {

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

ImplicitStepper::ImplicitStepper(const SparseMatrix& A, double dt,
                                 LinearSolver kind)
    : dt_(dt), factor_(affine_identity(A, dt, 1.0), kind) {
  if (!(dt > 0.0)) throw SolveError("time step must be positive");
  const double floor = A.gershgorin_floor();
  if (floor < 0.0 && dt * (-floor) >= 1.0)
    throw SolveError(
        "I + dt A may be singular: dt * |negative Gershgorin floor| >= 1; "
        "reduce dt below " + std::to_string(1.0 / (-floor)));
  if (!factor_.ok()) throw SolveError("factorization of I + dt A failed");
}

std::vector<double> ImplicitStepper::step(std::span<const double> x) const {
  return factor_.solve(x);
}

std::vector<double> step_implicit(std::span<const double> x, double dt,
                                  const SparseMatrix& A) {
  return ImplicitStepper(A, dt).step(x);
}

Trajectory run_trajectory(const SparseMatrix& A, std::span<const double> x0,
                          double dt, int steps, LinearSolver kind) {
  ImplicitStepper stepper(A, dt, kind);
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.sup_norms.reserve(steps + 1);
  std::vector<double> x(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.sup_norms.push_back(sup_norm(x));
  for (int i = 1; i <= steps; ++i) {
    x = stepper.step(x);
    traj.times.push_back(i * dt);
    traj.sup_norms.push_back(sup_norm(x));
  }
  traj.state_final = std::move(x);
  return traj;
}

double decay_rate(const Trajectory& traj, double burn_in_fraction) {
  if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
    throw std::invalid_argument("burn-in fraction must be in [0, 1)");
  const std::size_t total = traj.times.size();
  const std::size_t start = (std::size_t)(burn_in_fraction * total);
  const std::size_t m = total - start;
  if (m < 10)
    throw std::invalid_argument("need at least 10 snapshots after burn-in");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = start; i < total; ++i) {
    const double t = traj.times[i];
    const double y = std::log(traj.sup_norms[i]);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double slope = (m * sty - st * sy) / (m * stt - st * st);
  return -slope;
}

}  // namespace roadfield
