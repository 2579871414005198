#include "quadcurl/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace quadcurl {

namespace {

double relative_residual(const SparseSystem& sys, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = sys.rhs() - sys.apply(x);
  const double bn = sys.rhs().norm();
  return r.norm() / (bn > 0 ? bn : 1.0);
}

Eigen::SparseMatrix<double> full_operator(const SparseSystem& sys) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.A.nonZeros() + 2 * sys.B.nonZeros() + sys.n_W);
  for (int j = 0; j < sys.A.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, j); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < sys.B.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, j); it; ++it) {
      trips.emplace_back(sys.n_U + it.row(), it.col(), it.value());
      trips.emplace_back(it.col(), sys.n_U + it.row(), it.value());
    }
  for (int q = 0; q < sys.n_W; ++q)
    if (sys.w_constrained[q]) trips.emplace_back(sys.n_U + q, sys.n_U + q, 1.0);
  Eigen::SparseMatrix<double> K(sys.size(), sys.size());
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

// Constraint-preconditioned CG (null-space CG): solves A u = F - B^T p on
// ker(B) after eliminating p through the W-Laplacian, using the projector
// induced by [diag(A)  B^T; B 0].  The Schur complement B diag(A)^{-1} B^T is
// W-sized and cheap to factor, so each iteration costs one A-matvec plus one
// small triangular solve.
bool solve_pcg(const SparseSystem& sys, const Eigen::SparseMatrix<double>& G, double tol,
               int max_iter, const Eigen::VectorXd* guess, Eigen::VectorXd& x, SolveReport& rep) {
  rep.method = "pcg-constraint";

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> lap(sys.W_laplacian);
  if (lap.info() != Eigen::Success) return false;
  const Eigen::VectorXd gf = G.transpose() * sys.F;
  Eigen::VectorXd p = lap.solve(gf);
  p += lap.solve(gf - sys.W_laplacian * p);

  Eigen::VectorXd D = sys.A.diagonal();
  for (int i = 0; i < sys.n_U; ++i)
    if (!(D(i) > 0)) D(i) = 1.0;
  const Eigen::VectorXd Dinv = D.cwiseInverse();

  const Eigen::SparseMatrix<double> Bt = sys.B.transpose();
  Eigen::SparseMatrix<double> S = sys.B * Dinv.asDiagonal() * Bt;
  {
    std::vector<Eigen::Triplet<double>> idt;
    for (int q = 0; q < sys.n_W; ++q)
      if (sys.w_constrained[q]) idt.emplace_back(q, q, 1.0);
    Eigen::SparseMatrix<double> ibc(sys.n_W, sys.n_W);
    ibc.setFromTriplets(idt.begin(), idt.end());
    S += ibc;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sfac(S);
  if (sfac.info() != Eigen::Success) return false;

  auto reproject = [&](Eigen::VectorXd& u) { u += G * lap.solve(sys.G - sys.B * u); };

  Eigen::VectorXd u;
  if (guess && guess->size() == sys.size()) {
    u = guess->head(sys.n_U);
  } else {
    u = Eigen::VectorXd::Zero(sys.n_U);
    for (int i = 0; i < sys.n_U; ++i)
      if (sys.u_constrained[i]) u(i) = sys.u_bc_values(i);
  }
  reproject(u);

  const Eigen::VectorXd Ft = sys.F - Bt * p;
  const double rhs_norm = std::max(sys.rhs().norm(), 1e-300);
  Eigen::VectorXd r = Ft - sys.A * u;

  auto apply_prec = [&](const Eigen::VectorXd& rr) {
    const Eigen::VectorXd y = sfac.solve(sys.B * (Dinv.asDiagonal() * rr));
    return (Dinv.asDiagonal() * (rr - Bt * y)).eval();
  };

  rep.residual_history.assign(1, r.norm() / rhs_norm);
  int total_it = 0;
  double target = 0.02 * tol * rhs_norm;
  for (int round = 0; round < 3 && total_it < max_iter; ++round) {
    Eigen::VectorXd z = apply_prec(r);
    Eigen::VectorXd d = z;
    double rz = r.dot(z);
    while (total_it < max_iter) {
      ++total_it;
      const Eigen::VectorXd Ad = sys.A * d;
      const double dAd = d.dot(Ad);
      if (!(dAd > 0)) break;  // kernel direction: operator not SPD here
      const double alpha = rz / dAd;
      u += alpha * d;
      r -= alpha * Ad;
      rep.residual_history.push_back(r.norm() / rhs_norm);
      if (r.norm() <= target) break;
      const Eigen::VectorXd z2 = apply_prec(r);
      const double rz2 = r.dot(z2);
      d = z2 + (rz2 / rz) * d;
      rz = rz2;
      if (total_it % 100 == 0) {
        reproject(u);
        r = Ft - sys.A * u;
      }
    }
    reproject(u);
    x.resize(sys.size());
    x.head(sys.n_U) = u;
    x.tail(sys.n_W) = p;
    rep.relative_residual = relative_residual(sys, x);
    if (rep.relative_residual <= tol) break;
    r = Ft - sys.A * u;
    target *= 0.1;
  }
  rep.iterations = total_it;
  rep.converged = rep.relative_residual <= tol;
  return rep.converged;
}

bool solve_schur(const SparseSystem& sys, const Eigen::SparseMatrix<double>& G, double tol,
                 Eigen::VectorXd& x, SolveReport& rep) {
  rep.method = "ldlt-schur";
  // multiplier first: (B G) p = G^T F, and B G equals the W-Laplacian on the
  // free block because A G = 0 and the boundary rows of G vanish
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> lap(sys.W_laplacian);
  if (lap.info() != Eigen::Success) return false;
  const Eigen::VectorXd gf = G.transpose() * sys.F;
  Eigen::VectorXd p = lap.solve(gf);
  p += lap.solve(gf - sys.W_laplacian * p);

  // gamma-augmented SPD operator for u
  Eigen::VectorXd diagBtB = Eigen::VectorXd::Zero(sys.n_U);
  for (int j = 0; j < sys.B.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, j); it; ++it)
      diagBtB(it.col()) += it.value() * it.value();
  const double mean_a = sys.A.diagonal().sum() / sys.n_U;
  double mean_b = 0.0;
  int nb = 0;
  for (int i = 0; i < sys.n_U; ++i)
    if (diagBtB(i) > 0) {
      mean_b += diagBtB(i);
      ++nb;
    }
  mean_b = nb > 0 ? mean_b / nb : 1.0;
  const double gamma = mean_b > 0 ? mean_a / mean_b : 1.0;

  Eigen::SparseMatrix<double> K = sys.A + gamma * (sys.B.transpose() * sys.B).eval();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success) return false;
  const Eigen::VectorXd rhs_u =
      sys.F - sys.B.transpose() * p + gamma * (sys.B.transpose() * sys.G);
  Eigen::VectorXd u = ldlt.solve(rhs_u);
  for (int it = 0; it < 2; ++it) u += ldlt.solve(rhs_u - K * u);

  x.resize(sys.size());
  x.head(sys.n_U) = u;
  x.tail(sys.n_W) = p;
  rep.relative_residual = relative_residual(sys, x);
  rep.converged = rep.relative_residual <= tol;
  return rep.converged;
}

bool solve_lu(const SparseSystem& sys, double tol, Eigen::VectorXd& x, SolveReport& rep) {
  rep.method = "sparse-lu";
  const Eigen::SparseMatrix<double> K = full_operator(sys);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
  if (lu.info() != Eigen::Success) return false;
  const Eigen::VectorXd b = sys.rhs();
  x = lu.solve(b);
  for (int it = 0; it < 2; ++it) x += lu.solve(b - K * x);
  rep.relative_residual = relative_residual(sys, x);
  rep.converged = rep.relative_residual <= tol;
  return rep.converged;
}

bool solve_minres(const SparseSystem& sys, const Eigen::SparseMatrix<double>* G, double tol,
                  int max_iter, const Eigen::VectorXd* guess, Eigen::VectorXd& x,
                  SolveReport& rep) {
  (void)G;
  rep.method = "minres";
  const int n = sys.size();
  const Eigen::VectorXd b = sys.rhs();

  // block-diagonal SPD preconditioner: diag(A) + gamma diag(B^T B) for the
  // primal block (covers the gradient kernel of A) and the W-Laplacian
  // diagonal for the multiplier block
  Eigen::VectorXd diagBtB = Eigen::VectorXd::Zero(sys.n_U);
  for (int j = 0; j < sys.B.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, j); it; ++it)
      diagBtB(it.col()) += it.value() * it.value();
  const double mean_a = sys.A.diagonal().sum() / sys.n_U;
  double mean_b = 0.0;
  int nb = 0;
  for (int i = 0; i < sys.n_U; ++i)
    if (diagBtB(i) > 0) {
      mean_b += diagBtB(i);
      ++nb;
    }
  mean_b = nb > 0 ? mean_b / nb : 1.0;
  const double gamma_w = mean_b > 0 ? mean_a / mean_b : 1.0;

  Eigen::VectorXd dinv(n);
  for (int i = 0; i < sys.n_U; ++i) {
    const double d = sys.A.coeff(i, i) + gamma_w * diagBtB(i);
    dinv(i) = d > 0 ? 1.0 / d : 1.0;
  }
  for (int q = 0; q < sys.n_W; ++q) {
    const double d = sys.W_laplacian.coeff(q, q);
    dinv(sys.n_U + q) = d > 0 ? 1.0 / d : 1.0;
  }

  x = (guess && guess->size() == n) ? *guess : Eigen::VectorXd::Zero(n);

  // Paige--Saunders MINRES with preconditioned residual chain
  Eigen::VectorXd r1 = b - sys.apply(x);
  Eigen::VectorXd y = dinv.asDiagonal() * r1;
  const double beta1 = std::sqrt(std::max(r1.dot(y), 0.0));
  rep.residual_history.assign(1, 1.0);
  if (beta1 == 0.0) {
    rep.iterations = 0;
    rep.relative_residual = relative_residual(sys, x);
    rep.converged = rep.relative_residual <= tol;
    return rep.converged;
  }

  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n), w2 = Eigen::VectorXd::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;
  int itn = 0;
  while (itn < max_iter) {
    ++itn;
    const Eigen::VectorXd v = y / beta;
    y = sys.apply(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = dinv.asDiagonal() * r2;
    oldb = beta;
    beta = std::sqrt(std::max(r2.dot(y), 0.0));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::hypot(gbar, beta);
    gamma = std::max(gamma, 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.residual_history.push_back(phibar / beta1);
    if (phibar <= 0.05 * tol * beta1) break;
    if (beta <= 1e-300) break;
  }
  rep.iterations = itn;
  rep.relative_residual = relative_residual(sys, x);
  rep.converged = rep.relative_residual <= tol;
  return rep.converged;
}

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> solve(const SparseSystem& sys, const SolveOptions& opt,
                                              const Eigen::SparseMatrix<double>* grad_inj) {
  if (opt.tol < 1e-14) throw std::invalid_argument("solve: tol must be >= 1e-14");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  Eigen::VectorXd x;

  auto finish = [&](Eigen::VectorXd sol, SolveReport r) {
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::make_pair(std::move(sol), std::move(r));
  };

  // warm start: already-converged inputs return unchanged (idempotence)
  if (opt.initial_guess && opt.initial_guess->size() == sys.size()) {
    const double rr = relative_residual(sys, *opt.initial_guess);
    if (rr <= opt.tol) {
      rep.method = "warm-start";
      rep.iterations = 0;
      rep.relative_residual = rr;
      rep.converged = true;
      return finish(*opt.initial_guess, rep);
    }
  }

  if (opt.method == "schur" || (opt.method == "auto" && grad_inj)) {
    if (!grad_inj) throw std::invalid_argument("solve: schur method needs the gradient injection");
    if (solve_schur(sys, *grad_inj, opt.tol, x, rep)) return finish(x, rep);
    if (opt.method == "schur") {
      rep.converged = false;
      return finish(x, rep);
    }
  }
  if (opt.method == "lu" || opt.method == "auto") {
    SolveReport r2;
    if (solve_lu(sys, opt.tol, x, r2)) return finish(x, r2);
    if (opt.method == "lu") return finish(x, r2);
  }
  SolveReport r3;
  solve_minres(sys, grad_inj, opt.tol, opt.max_iterations, opt.initial_guess, x, r3);
  if (!r3.converged && opt.method == "minres") {
    // report with history; caller decides
  }
  return finish(x, r3);
}

}  // namespace quadcurl
