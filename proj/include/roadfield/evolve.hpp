#ifndef ROADFIELD_EVOLVE_HPP
#define ROADFIELD_EVOLVE_HPP

#include <span>
#include <vector>

#include "roadfield/eigsolve.hpp"
#include "roadfield/sparse.hpp"

namespace roadfield {

struct Trajectory {
  std::vector<double> times;       // strictly increasing, starts at 0
  std::vector<double> sup_norms;   // |state|_inf per snapshot
  std::vector<double> state_final;
};

// Implicit Euler for dx/dt = -A x: each step solves (I + dt A) x' = x.
// For a Z-matrix A the resolvent is entrywise nonnegative, so nonnegative
// data stays nonnegative.
class ImplicitStepper {
 public:
  ImplicitStepper(const SparseMatrix& A, double dt,
                  LinearSolver kind = LinearSolver::Auto);
  std::vector<double> step(std::span<const double> x) const;
  double dt() const { return dt_; }

 private:
  double dt_;
  SparseFactor factor_;
};

std::vector<double> step_implicit(std::span<const double> x, double dt,
                                  const SparseMatrix& A);

Trajectory run_trajectory(const SparseMatrix& A, std::span<const double> x0,
                          double dt, int steps,
                          LinearSolver kind = LinearSolver::Auto);

// Least-squares slope of log sup_norms vs time after discarding the burn-in
// prefix; returns the negated slope, an estimate of lambda_1^R. Requires at
// least 10 snapshots after burn-in.
double decay_rate(const Trajectory& traj, double burn_in_fraction);

}  // namespace roadfield

#endif
