#include "quadcurl/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "quadcurl/entity_quadrature.hpp"
#include "quadcurl/parallel.hpp"

namespace quadcurl {

namespace {

int cache_slot(const Mesh& mesh, int t) {
  const int cls = mesh.tets[t].congruence_class;
  return (mesh.num_congruence_classes > 0 && cls >= 0) ? cls : t;
}

struct ErrorClassData {
  Eigen::MatrixXd V, C, Gm;              // nu x 3P / nu x 3P / nu x 9P
  std::vector<Eigen::Vector3d> offsets;  // quadrature offsets from the centroid
  std::vector<double> weights;
};

}  // namespace

ErrorTriple compute_errors(const Mesh& mesh, const ElementCache& cache, const DofMap& dm,
                           const Eigen::VectorXd& u_coeffs, const AnalyticField& exact,
                           double* uh_l2) {
  const int k = dm.k;
  const int qdeg = 2 * (k + 1) + 8;
  const int ntets = mesh.num_tets();
  const int slots = mesh.num_congruence_classes > 0 ? mesh.num_congruence_classes : ntets;

  std::vector<ErrorClassData> cls(slots);
  std::vector<bool> have(slots, false);
  for (int t = 0; t < ntets; ++t) {
    const int s = cache_slot(mesh, t);
    if (have[s]) continue;
    have[s] = true;
    ErrorClassData& cd = cls[s];
    const ElemGeom gm = cache.geom(t);
    const EntityQuad q = tet_quadrature(mesh, t, qdeg);
    const int P = q.size();
    cd.offsets.resize(P);
    cd.weights = q.weights;
    Eigen::Matrix3Xd X(3, P);
    for (int p = 0; p < P; ++p) {
      cd.offsets[p] = q.points[p] - gm.centroid;
      X.col(p) = cd.offsets[p] / gm.h;
    }
    cache.U(t).eval_batch(gm.h, X, &cd.V, &cd.C, &cd.Gm);
  }

  // per-tet partial sums, reduced serially so results do not depend on the
  // thread count
  Eigen::MatrixXd parts = Eigen::MatrixXd::Zero(7, ntets);
  parallel_for(0, ntets, [&](int t) {
    const ErrorClassData& cd = cls[cache_slot(mesh, t)];
    const std::vector<int> cdU = dm.cell_dofs_U(mesh, t);
    Eigen::VectorXd c(cdU.size());
    for (std::size_t i = 0; i < cdU.size(); ++i) c(static_cast<int>(i)) = u_coeffs(cdU[i]);

    const Eigen::VectorXd uh = cd.V.transpose() * c;    // 3P
    const Eigen::VectorXd ch = cd.C.transpose() * c;    // 3P
    const Eigen::VectorXd gh = cd.Gm.transpose() * c;   // 9P
    const Eigen::Vector3d cen = mesh.tets[t].centroid;

    double nl2 = 0, dl2 = 0, ncu = 0, dcu = 0, ngc = 0, dgc = 0, ul2 = 0;
    for (std::size_t p = 0; p < cd.offsets.size(); ++p) {
      const double w = cd.weights[p];
      const JetVec3 jets = exact.jets(cen + cd.offsets[p], 2);
      const Eigen::Vector3d u = jets.value();
      const JetVec3 cj = jets.curl();
      const Eigen::Vector3d cu = cj.value();
      const Eigen::Matrix3d gc = cj.jacobian();

      const Eigen::Vector3d uhp = uh.segment<3>(3 * p);
      const Eigen::Vector3d chp = ch.segment<3>(3 * p);
      Eigen::Matrix3d ghp;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) ghp(a, b) = gh(9 * p + 3 * a + b);

      nl2 += w * (u - uhp).squaredNorm();
      dl2 += w * u.squaredNorm();
      ncu += w * (cu - chp).squaredNorm();
      dcu += w * cu.squaredNorm();
      ngc += w * (gc - ghp).squaredNorm();
      dgc += w * gc.squaredNorm();
      ul2 += w * uhp.squaredNorm();
    }
    parts.col(t) << nl2, dl2, ncu, dcu, ngc, dgc, ul2;
  });

  Eigen::VectorXd tot = Eigen::VectorXd::Zero(7);
  for (int t = 0; t < ntets; ++t) tot += parts.col(t);
  if (!(tot(1) > 0 && tot(3) > 0 && tot(5) > 0))
    throw std::runtime_error("compute_errors: zero denominator");
  if (uh_l2) *uh_l2 = std::sqrt(tot(6));
  return {std::sqrt(tot(0) / tot(1)), std::sqrt(tot(2) / tot(3)), std::sqrt(tot(4) / tot(5))};
}

namespace {

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].rate_l2 = rows[i].rate_curl = rows[i].rate_gc = std::nan("");
      continue;
    }
    const double lh = std::log(rows[i - 1].h / rows[i].h);
    rows[i].rate_l2 = std::log(rows[i - 1].err.l2 / rows[i].err.l2) / lh;
    rows[i].rate_curl = std::log(rows[i - 1].err.curl / rows[i].err.curl) / lh;
    rows[i].rate_gc = std::log(rows[i - 1].err.grad_curl / rows[i].err.grad_curl) / lh;
  }
}

void check_levels(const std::vector<int>& levels) {
  if (levels.empty()) throw std::invalid_argument("levels must be non-empty");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("levels must be strictly ascending");
  if (levels.front() < 1) throw std::invalid_argument("levels must be positive");
}

std::map<std::string, std::string> base_config(const ConvergenceOptions& opt,
                                               const std::string& command) {
  std::map<std::string, std::string> cfg;
  cfg["command"] = command;
  cfg["example"] = std::to_string(opt.example);
  cfg["order"] = std::to_string(opt.k);
  std::string lv;
  for (std::size_t i = 0; i < opt.levels.size(); ++i)
    lv += (i ? "," : "") + std::to_string(opt.levels[i]);
  cfg["levels"] = lv;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", opt.tol);
  cfg["tol"] = buf;
  cfg["seed"] = std::to_string(opt.seed);
  cfg["threads"] = std::to_string(opt.threads > 0 ? opt.threads : get_num_threads());
  cfg["solver"] = opt.solver_method;
  return cfg;
}

}  // namespace

ConvergenceReport run_convergence(const ConvergenceOptions& opt) {
  check_levels(opt.levels);
  if (opt.threads > 0) set_num_threads(opt.threads);
  ConvergenceReport rep;
  rep.example = opt.example;
  rep.k = opt.k;
  rep.config = base_config(opt, "convergence");

  const auto exact = example_solution(opt.example);
  const CurlPowerField f(exact, 4);
  const BoundaryCondition bc{opt.example == 1 ? BoundaryCondition::Kind::Homogeneous
                                              : BoundaryCondition::Kind::Interpolated,
                             exact.get()};

  for (int N : opt.levels) {
    const Mesh mesh = build_cube_mesh(N);
    const ElementCache cache(mesh, opt.k);
    const DofMap dm = number_dofs(mesh, opt.k);
    SparseSystem sys = assemble_system(mesh, cache, dm, &f, bc);
    const Eigen::SparseMatrix<double> G = gradient_injection(mesh, cache, dm);

    SolveOptions sopt;
    sopt.method = opt.solver_method;
    sopt.tol = opt.tol;
    auto [x, srep] = solve(sys, sopt, &G);
    if (!srep.converged) {
      std::ostringstream os;
      os << "solver did not converge at N=" << N << " (method " << srep.method << ", residual "
         << srep.relative_residual << ")";
      throw std::runtime_error(os.str());
    }

    ConvergenceRow row;
    row.N = N;
    row.h = std::sqrt(3.0) / N;
    row.n_U = dm.n_U;
    row.n_W = dm.n_W;
    row.solver = srep;

    const Eigen::VectorXd u = x.head(dm.n_U);
    const Eigen::VectorXd p = x.tail(dm.n_W);
    double uh_l2 = 0.0;
    row.err = compute_errors(mesh, cache, dm, u, *exact, &uh_l2);

    const double p_h1 = std::sqrt(p.dot(sys.W_laplacian * p) + p.dot(sys.W_mass * p));
    row.p_over_u = p_h1 / uh_l2;
    const Eigen::VectorXd bu = sys.B * u - sys.G;
    row.bu_over_u = bu.cwiseAbs().maxCoeff() / uh_l2;

    rep.rows.push_back(std::move(row));
  }
  fill_rates(rep.rows);
  return rep;
}

ConvergenceReport run_interpolation_study(const ConvergenceOptions& opt) {
  check_levels(opt.levels);
  if (opt.threads > 0) set_num_threads(opt.threads);
  ConvergenceReport rep;
  rep.example = opt.example;
  rep.k = opt.k;
  rep.config = base_config(opt, "interp-study");

  const auto exact = example_solution(opt.example);
  for (int N : opt.levels) {
    const Mesh mesh = build_cube_mesh(N);
    const ElementCache cache(mesh, opt.k);
    const DofMap dm = number_dofs(mesh, opt.k);
    const Eigen::VectorXd u = interpolate_U(*exact, mesh, cache, dm);

    ConvergenceRow row;
    row.N = N;
    row.h = std::sqrt(3.0) / N;
    row.n_U = dm.n_U;
    row.n_W = dm.n_W;
    row.err = compute_errors(mesh, cache, dm, u, *exact, nullptr);
    rep.rows.push_back(std::move(row));
  }
  fill_rates(rep.rows);
  return rep;
}

void ConvergenceReport::write_csv(std::ostream& os) const {
  for (const auto& [key, val] : config) os << "# " << key << "=" << val << "\n";
  for (const auto& row : rows)
    os << "# solver N=" << row.N << " method=" << (row.solver.method.empty() ? "none" : row.solver.method)
       << " iterations=" << row.solver.iterations << " n_U=" << row.n_U << " n_W=" << row.n_W
       << "\n";
  os << "N,h,E_L2,rate_L2,E_curl,rate_curl,E_gradcurl,rate_gc\n";
  char buf[256];
  for (const auto& row : rows) {
    auto rate = [](double r) {
      if (std::isnan(r)) return std::string();
      char b[32];
      std::snprintf(b, sizeof b, "%.2f", r);
      return std::string(b);
    };
    std::snprintf(buf, sizeof buf, "%d,%.4e,%.4e,%s,%.4e,%s,%.4e,%s\n", row.N, row.h, row.err.l2,
                  rate(row.rate_l2).c_str(), row.err.curl, rate(row.rate_curl).c_str(),
                  row.err.grad_curl, rate(row.rate_gc).c_str());
    os << buf;
  }
}

void ConvergenceReport::write_markdown(std::ostream& os) const {
  os << "| N | h | E_L2 | rate | E_curl | rate | E_gradcurl | rate |\n";
  os << "|---|---|------|------|--------|------|------------|------|\n";
  char buf[256];
  for (const auto& row : rows) {
    auto rate = [](double r) {
      if (std::isnan(r)) return std::string();
      char b[32];
      std::snprintf(b, sizeof b, "%.2f", r);
      return std::string(b);
    };
    std::snprintf(buf, sizeof buf, "| %d | %.4f | %.3e | %s | %.3e | %s | %.3e | %s |\n", row.N,
                  row.h, row.err.l2, rate(row.rate_l2).c_str(), row.err.curl,
                  rate(row.rate_curl).c_str(), row.err.grad_curl, rate(row.rate_gc).c_str());
    os << buf;
  }
}

}  // namespace quadcurl
