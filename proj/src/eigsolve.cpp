#include "roadfield/eigsolve.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace roadfield {

namespace {

using ESparse = Eigen::SparseMatrix<double>;

ESparse to_eigen(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.nnz());
  const auto row = m.row_offsets();
  const auto col = m.col_indices();
  const auto val = m.values();
  for (int r = 0; r < m.n(); ++r)
    for (int p = row[r]; p < row[r + 1]; ++p)
      trips.emplace_back(r, col[p], val[p]);
  ESparse e(m.n(), m.n());
  e.setFromTriplets(trips.begin(), trips.end());
  e.makeCompressed();
  return e;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

int argmax_abs(std::span<const double> v) {
  int best = 0;
  double bm = -1.0;
  for (int i = 0; i < (int)v.size(); ++i)
    if (std::fabs(v[i]) > bm) {
      bm = std::fabs(v[i]);
      best = i;
    }
  return best;
}

}  // namespace

LinearSolver linear_solver_from_string(const std::string& s) {
  if (s == "auto") return LinearSolver::Auto;
  if (s == "direct") return LinearSolver::Direct;
  if (s == "krylov") return LinearSolver::Krylov;
  throw SolveError("unknown linear solver '" + s + "'");
}

std::string to_string(LinearSolver s) {
  switch (s) {
    case LinearSolver::Direct: return "direct";
    case LinearSolver::Krylov: return "krylov";
    default: return "auto";
  }
}

SparseMatrix affine_identity(const SparseMatrix& A, double alpha, double beta) {
  SparseMatrix::Builder b(A.n());
  const auto row = A.row_offsets();
  const auto col = A.col_indices();
  const auto val = A.values();
  for (int r = 0; r < A.n(); ++r)
    for (int p = row[r]; p < row[r + 1]; ++p)
      b.add(r, col[p], alpha * val[p]);
  for (int r = 0; r < A.n(); ++r) b.add(r, r, beta);
  return b.build();
}

double shift_floor(const SparseMatrix& A) {
  return 1.0 + std::max(0.0, -A.gershgorin_floor());
}

// direct-vs-Krylov switchover, per the solver sizing decision
constexpr int kDirectLimit = 300000;

struct SparseFactor::Impl {
  ESparse M;
  Eigen::SparseLU<ESparse> lu;
  std::unique_ptr<Eigen::BiCGSTAB<ESparse, Eigen::IncompleteLUT<double>>> krylov;
  bool use_direct = true;
  bool ok = false;
};

SparseFactor::SparseFactor(const SparseMatrix& M, LinearSolver kind,
                           double inner_tol)
    : impl_(std::make_unique<Impl>()) {
  impl_->M = to_eigen(M);
  impl_->use_direct = kind == LinearSolver::Direct ||
                      (kind == LinearSolver::Auto && M.n() <= kDirectLimit);
  if (impl_->use_direct) {
    impl_->lu.compute(impl_->M);
    impl_->ok = impl_->lu.info() == Eigen::Success;
  } else {
    impl_->krylov =
        std::make_unique<Eigen::BiCGSTAB<ESparse, Eigen::IncompleteLUT<double>>>();
    impl_->krylov->setTolerance(inner_tol);
    impl_->krylov->compute(impl_->M);
    impl_->ok = impl_->krylov->info() == Eigen::Success;
  }
}

SparseFactor::~SparseFactor() = default;
SparseFactor::SparseFactor(SparseFactor&&) noexcept = default;
SparseFactor& SparseFactor::operator=(SparseFactor&&) noexcept = default;

bool SparseFactor::ok() const { return impl_->ok; }

std::vector<double> SparseFactor::solve(std::span<const double> b) const {
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), (Eigen::Index)b.size());
  Eigen::VectorXd x;
  if (impl_->use_direct) {
    x = impl_->lu.solve(bv);
  } else {
    x = impl_->krylov->solve(bv);
    if (impl_->krylov->info() != Eigen::Success)
      throw SolveError("Krylov linear solve failed to converge");
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

namespace {

struct IterState {
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
};

IterState rayleigh_state(const SparseMatrix& A, std::span<const double> x) {
  const auto Ax = A.multiply(x);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < A.n(); ++i) {
    num += x[i] * Ax[i];
    den += x[i] * x[i];
  }
  IterState st;
  st.lambda = num / den;
  double r = 0.0;
  for (int i = 0; i < A.n(); ++i)
    r = std::max(r, std::fabs(Ax[i] - st.lambda * x[i]));
  st.residual = r / sup_norm(x);
  return st;
}

void sign_normalize(std::vector<double>& x) {
  const int im = argmax_abs(x);
  const double m = std::fabs(x[im]);
  const double s = x[im] < 0.0 ? -1.0 / m : 1.0 / m;
  for (double& v : x) v *= s;
}

}  // namespace

EigenResult principal_eig(const SparseMatrix& A, const SolverConfig& cfg,
                          bool expect_positive) {
  if (cfg.tol <= 0.0 || cfg.max_iter < 1)
    throw SolveError("invalid solver configuration");
  const int n = A.n();
  const double s = cfg.shift.value_or(shift_floor(A));
  SparseFactor factor(affine_identity(A, 1.0, s), cfg.linear_solver,
                      cfg.krylov_inner_tol);
  if (!factor.ok()) throw SolveError("factorization of A + sI failed");

  EigenResult out;
  std::vector<double> x(n, 1.0);
  if (!cfg.start.empty()) {
    if ((int)cfg.start.size() != n)
      throw SolveError("start vector size mismatch");
    x = cfg.start;
  }
  std::vector<double> history;
  IterState st;
  int it = 0;

  // floor-shift phase; also resumed as the safe fallback after refinement
  auto floor_iterate = [&](bool allow_refine_exit) {
    while (it < cfg.max_iter) {
      std::vector<double> y = factor.solve(x);
      ++it;
      // Collatz-Wielandt bracket for the Perron value of (A + sI)^{-1},
      // mapped back to the lambda scale
      double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
      bool bracket_valid = true;
      for (int i = 0; i < n; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) {
          bracket_valid = false;
          break;
        }
        const double ratio = y[i] / x[i];
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
      }
      if (bracket_valid && rmin > 0.0) {
        out.bracket_low = 1.0 / rmax - s;
        out.bracket_high = 1.0 / rmin - s;
      }
      const double m = sup_norm(y);
      if (!(m > 0.0) || !std::isfinite(m))
        throw SolveError("inverse iteration produced a degenerate iterate");
      for (double& v : y) v /= m;
      x = std::move(y);
      st = rayleigh_state(A, x);
      history.push_back(st.residual);
      if (st.residual <= cfg.tol) return;
      if (allow_refine_exit &&
          st.residual <= cfg.refine_threshold * (1.0 + std::fabs(st.lambda)))
        return;
    }
  };

  floor_iterate(cfg.rayleigh_refine);

  if (st.residual > cfg.tol && cfg.rayleigh_refine && it < cfg.max_iter) {
    // Rayleigh-shifted refinement: refactorize with the shift tightened from
    // the current residual, so the contraction sharpens every round.
    const std::vector<double> entry_x = x;
    const IterState entry_st = st;
    double cushion = 10.0 * st.residual;
    for (int round = 0; round < 8 && st.residual > cfg.tol && it < cfg.max_iter;
         ++round) {
      const double sigma =
          st.lambda - std::max(cushion, 1e-14 * (1.0 + std::fabs(st.lambda)));
      SparseFactor refine(affine_identity(A, 1.0, -sigma), cfg.linear_solver,
                          cfg.krylov_inner_tol);
      if (!refine.ok()) {
        cushion *= 10.0;  // singular hit: back away and retry
        continue;
      }
      for (int k = 0; k < 4 && it < cfg.max_iter; ++k) {
        std::vector<double> y = refine.solve(x);
        ++it;
        sign_normalize(y);
        x = std::move(y);
        st = rayleigh_state(A, x);
        history.push_back(st.residual);
        if (st.residual <= cfg.tol) break;
      }
      cushion = 10.0 * st.residual;
    }
    const bool positive_ok =
        !expect_positive || *std::min_element(x.begin(), x.end()) > 0.0;
    if (st.residual > cfg.tol || !positive_ok) {
      // refinement drifted toward a non-principal pair or stalled; resume
      // the positivity-safe floor iteration from the last good iterate
      x = entry_x;
      st = entry_st;
      floor_iterate(false);
    }
  }

  if (st.residual > cfg.tol) {
    std::ostringstream os;
    os << "principal_eig did not reach tol " << cfg.tol << " in " << it
       << " solves; residual history tail:";
    for (std::size_t i = history.size() > 8 ? history.size() - 8 : 0;
         i < history.size(); ++i)
      os << ' ' << history[i];
    throw SolveError(os.str());
  }

  sign_normalize(x);
  out.lambda = st.lambda;
  out.residual = st.residual;
  out.iterations = it;
  out.positivity_margin = *std::min_element(x.begin(), x.end());
  out.vector = std::move(x);
  if (expect_positive && !(out.positivity_margin > 0.0))
    throw SolveError(
        "positivity loss: converged eigenvector has a non-positive component "
        "(broken Z-matrix assumption?)");
  return out;
}

EigenResult dense_principal_eig(const SparseMatrix& A) {
  const int n = A.n();
  if (n > 2000) throw SolveError("dense oracle limited to N <= 2000");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const auto row = A.row_offsets();
  const auto col = A.col_indices();
  const auto val = A.values();
  for (int r = 0; r < n; ++r)
    for (int p = row[r]; p < row[r + 1]; ++p) M(r, col[p]) = val[p];

  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw SolveError("dense eigendecomposition failed");
  const auto& w = es.eigenvalues();

  int imin = 0;
  for (int i = 1; i < n; ++i)
    if (w[i].real() < w[imin].real()) imin = i;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(w[i]));

  if (std::fabs(w[imin].imag()) > 1e-8 * scale)
    throw SolveError("minimal-real-part eigenvalue is complex (assembly bug?)");

  double gap = std::numeric_limits<double>::infinity();
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (i == imin) continue;
    gap = std::min(gap, w[i].real() - w[imin].real());
    sep = std::min(sep, std::abs(w[i] - w[imin]));
  }
  if (n > 1 && sep <= 1e-9 * scale)
    throw SolveError("minimal eigenvalue is not simple");

  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = es.eigenvectors().col(imin)[i].real();
  sign_normalize(v);
  double margin = *std::min_element(v.begin(), v.end());
  if (!(margin > 0.0))
    throw SolveError(
        "dense principal eigenvector is sign-indefinite (assembly bug?)");

  EigenResult out;
  out.lambda = w[imin].real();
  out.vector = std::move(v);
  out.iterations = 0;
  out.positivity_margin = margin;
  if (n > 1) out.spectral_gap_hint = gap;
  {
    const auto Ax = A.multiply(out.vector);
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      r = std::max(r, std::fabs(Ax[i] - out.lambda * out.vector[i]));
    out.residual = r;
  }
  return out;
}

EigenResult symmetric_principal_eig(const SparseMatrix& K,
                                    std::span<const double> mass,
                                    const SolverConfig& cfg) {
  const int n = K.n();
  if ((int)mass.size() != n) throw SolveError("mass size mismatch");
  for (double m : mass)
    if (!(m > 0.0)) throw SolveError("pencil mass must be strictly positive");

  // Gershgorin floor of B^{-1} K gives a shift below the whole spectrum.
  double floor = std::numeric_limits<double>::infinity();
  {
    const auto row = K.row_offsets();
    const auto col = K.col_indices();
    const auto val = K.values();
    for (int r = 0; r < n; ++r) {
      double diag = 0.0, off = 0.0;
      for (int p = row[r]; p < row[r + 1]; ++p) {
        if (col[p] == r)
          diag = val[p];
        else
          off += std::fabs(val[p]);
      }
      floor = std::min(floor, (diag - off) / mass[r]);
    }
  }

  auto shifted = [&](double sigma) {
    SparseMatrix::Builder b(n);
    const auto row = K.row_offsets();
    const auto col = K.col_indices();
    const auto val = K.values();
    for (int r = 0; r < n; ++r)
      for (int p = row[r]; p < row[r + 1]; ++p) b.add(r, col[p], val[p]);
    for (int r = 0; r < n; ++r) b.add(r, r, -sigma * mass[r]);
    return b.build();
  };

  double sigma = floor - 1.0;
  auto factor = std::make_unique<SparseFactor>(shifted(sigma), cfg.linear_solver,
                                               cfg.krylov_inner_tol);
  if (!factor->ok()) {
    sigma -= 1.0;  // re-shift and retry once
    factor = std::make_unique<SparseFactor>(shifted(sigma), cfg.linear_solver,
                                            cfg.krylov_inner_tol);
    if (!factor->ok()) throw SolveError("pencil factorization failed twice");
  }

  std::vector<double> x(n, 1.0), bx(n);
  double lambda = 0.0, resid = std::numeric_limits<double>::infinity();
  int it = 0;
  bool refined = false;
  while (it < cfg.max_iter) {
    for (int i = 0; i < n; ++i) bx[i] = mass[i] * x[i];
    std::vector<double> y = factor->solve(bx);
    ++it;
    const double m = sup_norm(y);
    if (!(m > 0.0) || !std::isfinite(m))
      throw SolveError("pencil iteration produced a degenerate iterate");
    for (double& v : y) v /= m;
    x = std::move(y);
    const auto Kx = K.multiply(x);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += x[i] * Kx[i];
      den += x[i] * mass[i] * x[i];
    }
    lambda = num / den;
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      r = std::max(r, std::fabs(Kx[i] - lambda * mass[i] * x[i]));
    resid = r / sup_norm(x);
    if (resid <= cfg.tol * (1.0 + std::fabs(lambda))) break;
    if (cfg.rayleigh_refine && !refined &&
        resid <= cfg.refine_threshold * (1.0 + std::fabs(lambda))) {
      refined = true;
      const double offset =
          std::max(100.0 * resid, 1e-10 * (1.0 + std::fabs(lambda)));
      sigma = lambda - offset;
      factor = std::make_unique<SparseFactor>(shifted(sigma), cfg.linear_solver,
                                              cfg.krylov_inner_tol);
      if (!factor->ok()) {
        sigma = lambda - 10.0 * offset;
        factor = std::make_unique<SparseFactor>(
            shifted(sigma), cfg.linear_solver, cfg.krylov_inner_tol);
        if (!factor->ok()) throw SolveError("pencil re-shift failed");
      }
    }
  }
  if (resid > cfg.tol * (1.0 + std::fabs(lambda)))
    throw SolveError("symmetric_principal_eig did not converge");

  sign_normalize(x);
  EigenResult out;
  out.lambda = lambda;
  out.residual = resid;
  out.iterations = it;
  out.positivity_margin = *std::min_element(x.begin(), x.end());
  out.vector = std::move(x);
  return out;
}

}  // namespace roadfield
