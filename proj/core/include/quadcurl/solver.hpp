#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "quadcurl/assembly.hpp"

namespace quadcurl {

struct SolveReport {
  std::string method;
  int iterations = 0;  // 0 for direct factorizations
  double relative_residual = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // Krylov path only
};

struct SolveOptions {
  /// auto | schur | lu | minres.  `schur` solves the two SPD reductions
  /// (W-Laplacian for p, gamma-augmented A for u) and needs the gradient
  /// injection; `lu` factorizes the full saddle operator; `minres` is the
  /// Krylov path with a block-diagonal preconditioner.  `auto` tries schur,
  /// then lu, then minres, accepting the first that meets the tolerance.
  std::string method = "auto";
  double tol = 1e-10;
  int max_iterations = 50000;
  const Eigen::VectorXd* initial_guess = nullptr;
};

/// Solve the saddle system to the requested relative residual.  The solution
/// vector is [u; p].  `grad_inj` (columns = U-dofs of grad psi_q) enables the
/// Schur path; pass nullptr to skip it.
std::pair<Eigen::VectorXd, SolveReport> solve(const SparseSystem& sys, const SolveOptions& opt,
                                              const Eigen::SparseMatrix<double>* grad_inj);

}  // namespace quadcurl
