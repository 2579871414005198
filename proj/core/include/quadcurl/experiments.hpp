#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "quadcurl/analytic_fields.hpp"
#include "quadcurl/assembly.hpp"
#include "quadcurl/interpolation.hpp"
#include "quadcurl/solver.hpp"

namespace quadcurl {

/// Relative errors ||u - u_h||_0 / ||u||_0, likewise for curl and for the
/// elementwise grad curl (Frobenius).
struct ErrorTriple {
  double l2 = 0.0;
  double curl = 0.0;
  double grad_curl = 0.0;
};

/// Elementwise quadrature of degree 2(k+1)+8 for numerator and denominator;
/// u_h derivatives are exact polynomial derivatives, the exact field is
/// differentiated by jets.  Also returns ||u_h||_0 for constraint ratios.
ErrorTriple compute_errors(const Mesh& mesh, const ElementCache& cache, const DofMap& dm,
                           const Eigen::VectorXd& u_coeffs, const AnalyticField& exact,
                           double* uh_l2 = nullptr);

struct ConvergenceRow {
  int N = 0;
  double h = 0.0;
  ErrorTriple err;
  double rate_l2 = 0.0, rate_curl = 0.0, rate_gc = 0.0;  // NaN on the first row
  int n_U = 0, n_W = 0;
  SolveReport solver;
  double p_over_u = 0.0;   // ||p_h||_1 / ||u_h||_0
  double bu_over_u = 0.0;  // max_q |b(u_h, psi_q)| / ||u_h||_0
};

struct ConvergenceReport {
  int example = 1;
  int k = 1;
  std::vector<ConvergenceRow> rows;
  std::map<std::string, std::string> config;  // echoed into output headers

  /// CSV: '#'-prefixed config header, then
  /// N,h,E_L2,rate_L2,E_curl,rate_curl,E_gradcurl,rate_gc with %.4e floats
  /// and %.2f rates (first-row rates empty).
  void write_csv(std::ostream& os) const;
  /// Markdown table in the layout of the reference convergence tables.
  void write_markdown(std::ostream& os) const;
};

struct ConvergenceOptions {
  int example = 1;
  int k = 1;
  std::vector<int> levels = {8, 10, 12};
  double tol = 1e-10;
  std::string solver_method = "auto";
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = library default
};

/// One mixed solve per level; rows hold errors, observed rates, and the
/// multiplier/constraint diagnostics.
ConvergenceReport run_convergence(const ConvergenceOptions& opt);

/// Same table for the dof interpolant instead of the discrete solution
/// (no solves; the boundary condition plays no role).
ConvergenceReport run_interpolation_study(const ConvergenceOptions& opt);

}  // namespace quadcurl
