#ifndef ROADFIELD_EIGSOLVE_HPP
#define ROADFIELD_EIGSOLVE_HPP

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadfield/assembly.hpp"
#include "roadfield/sparse.hpp"

namespace roadfield {

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LinearSolver { Auto, Direct, Krylov };

LinearSolver linear_solver_from_string(const std::string& s);
std::string to_string(LinearSolver s);

struct SolverConfig {
  double tol = 1e-10;                 // residual tolerance |Ax - lambda x|_inf
  int max_iter = 10000;
  std::optional<double> shift;        // absent = auto via shift_floor
  LinearSolver linear_solver = LinearSolver::Auto;
  double krylov_inner_tol = 1e-12;
  // After the floor-shift phase localizes the eigenvalue, a Rayleigh-shifted
  // refinement finishes the last digits in a handful of solves.
  bool rayleigh_refine = true;
  double refine_threshold = 1e-3;
  // start vector override (default all ones); used to probe invariance
  std::vector<double> start;
};

struct EigenResult {
  double lambda = 0.0;
  std::vector<double> vector;         // sup-normalized, strictly positive
  double residual = 0.0;              // |Ax - lambda x|_inf / |x|_inf
  int iterations = 0;                 // linear solves performed
  double positivity_margin = 0.0;     // min component after normalization
  std::optional<double> spectral_gap_hint;
  // Collatz-Wielandt bracket for lambda from the last floor-shift iterate
  std::optional<double> bracket_low, bracket_high;
};

// alpha * A + beta * I
SparseMatrix affine_identity(const SparseMatrix& A, double alpha, double beta);

// s = 1 + max(0, -gershgorin_floor(A)); A + s I is then strictly diagonally
// dominant with positive diagonal, hence a nonsingular M-matrix whenever A
// is a Z-matrix.
double shift_floor(const SparseMatrix& A);
inline double shift_floor(const SystemMatrix& A) { return shift_floor(A.A); }

// Reusable factorization (or preconditioned Krylov context) for M x = b.
class SparseFactor {
 public:
  SparseFactor(const SparseMatrix& M, LinearSolver kind = LinearSolver::Auto,
               double inner_tol = 1e-12);
  ~SparseFactor();
  SparseFactor(SparseFactor&&) noexcept;
  SparseFactor& operator=(SparseFactor&&) noexcept;

  bool ok() const;                    // factorization succeeded
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Positivity-preserving shifted inverse power iteration from the all-ones
// start: x <- (A + sI)^{-1} x, sup-normalized, with the eigenvalue estimated
// by the Rayleigh ratio. Fails loudly on positivity loss, which signals a
// broken Z-matrix assumption upstream.
EigenResult principal_eig(const SparseMatrix& A, const SolverConfig& cfg = {},
                          bool expect_positive = true);
inline EigenResult principal_eig(const SystemMatrix& A,
                                 const SolverConfig& cfg = {}) {
  return principal_eig(A.A, cfg);
}

// Dense oracle: full unsymmetric eigendecomposition, minimal-real-part
// eigenvalue. Verifies it is real, simple, and carries a sign-definite
// eigenvector; reports the spectral gap. Requires n <= 2000.
EigenResult dense_principal_eig(const SparseMatrix& A);
inline EigenResult dense_principal_eig(const SystemMatrix& A) {
  return dense_principal_eig(A.A);
}

// Smallest eigenvalue of the symmetric pencil K x = lambda B x with B
// diagonal positive, by shifted inverse iteration.
EigenResult symmetric_principal_eig(const SparseMatrix& K,
                                    std::span<const double> mass,
                                    const SolverConfig& cfg = {});
inline EigenResult symmetric_principal_eig(const Pencil& p,
                                           const SolverConfig& cfg = {}) {
  return symmetric_principal_eig(p.K, p.mass, cfg);
}

}  // namespace roadfield

#endif
