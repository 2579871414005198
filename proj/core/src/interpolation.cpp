#include "quadcurl/interpolation.hpp"

#include <cmath>

#include "quadcurl/entity_quadrature.hpp"
#include "quadcurl/parallel.hpp"

namespace quadcurl {

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& global, const std::vector<int>& ids) {
  Eigen::VectorXd out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out(static_cast<int>(i)) = global(ids[i]);
  return out;
}

// deterministic uniform stream for sampling points
struct Rand {
  std::uint64_t s;
  double next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return double((s * 0x2545F4914F6CDD1DULL) >> 11) / 9007199254740992.0;
  }
};

Eigen::Vector3d random_point_in_tet(const Mesh& mesh, int t, Rand& rng) {
  // fold a uniform sample of the cube into the reference tet
  double a = rng.next(), b = rng.next(), c = rng.next();
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  if (b + c > 1.0) {
    const double tmp = c;
    c = 1.0 - a - b;
    b = 1.0 - tmp;
  } else if (a + b + c > 1.0) {
    const double tmp = c;
    c = a + b + c - 1.0;
    a = 1.0 - b - tmp;
  }
  const auto& tt = mesh.tets[t];
  return (1.0 - a - b - c) * mesh.vertices[tt.v[0]] + a * mesh.vertices[tt.v[1]] +
         b * mesh.vertices[tt.v[2]] + c * mesh.vertices[tt.v[3]];
}

Eigen::Vector3d random_point_on_face(const Mesh& mesh, int f, Rand& rng) {
  double a = rng.next(), b = rng.next();
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  const auto& fd = mesh.faces[f];
  return (1.0 - a - b) * mesh.vertices[fd.v[0]] + a * mesh.vertices[fd.v[1]] +
         b * mesh.vertices[fd.v[2]];
}

}  // namespace

Eigen::Vector3d DiscreteUField::value(int tet, const Eigen::Vector3d& x) const {
  const LocalElement& el = cache_->U(tet);
  Eigen::MatrixXd vals;
  el.eval(cache_->geom(tet), x, &vals, nullptr, nullptr);
  return vals.transpose() * gather(coeffs_, dm_->cell_dofs_U(*mesh_, tet));
}

Eigen::Vector3d DiscreteUField::curl(int tet, const Eigen::Vector3d& x) const {
  const LocalElement& el = cache_->U(tet);
  Eigen::MatrixXd curls;
  el.eval(cache_->geom(tet), x, nullptr, &curls, nullptr);
  return curls.transpose() * gather(coeffs_, dm_->cell_dofs_U(*mesh_, tet));
}

Eigen::Matrix3d DiscreteUField::grad_curl(int tet, const Eigen::Vector3d& x) const {
  const LocalElement& el = cache_->U(tet);
  Eigen::MatrixXd gcs;
  el.eval(cache_->geom(tet), x, nullptr, nullptr, &gcs);
  const Eigen::VectorXd g = gcs.transpose() * gather(coeffs_, dm_->cell_dofs_U(*mesh_, tet));
  Eigen::Matrix3d G;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) G(a, b) = g(3 * a + b);
  return G;
}

Eigen::Vector3d DiscreteVField::value(int tet, const Eigen::Vector3d& x) const {
  const LocalElement& el = cache_->V(tet);
  Eigen::MatrixXd vals;
  el.eval(cache_->geom(tet), x, &vals, nullptr, nullptr);
  return vals.transpose() * gather(coeffs_, dm_->cell_dofs_V(*mesh_, tet));
}

double DiscreteVField::divergence(int tet, const Eigen::Vector3d& x) const {
  const LocalElement& el = cache_->V(tet);
  const Eigen::VectorXd c = gather(coeffs_, dm_->cell_dofs_V(*mesh_, tet));
  const ElemGeom gm = cache_->geom(tet);
  const Eigen::Vector3d X = (x - gm.centroid) / gm.h;
  double div = 0.0;
  for (int j = 0; j < el.size(); ++j) div += c(j) * el.nodal[j].divergence().eval(X) / gm.h;
  return div;
}

Eigen::VectorXd interpolate_U(const AnalyticField& field, const Mesh& mesh,
                              const ElementCache& cache, const DofMap& dm) {
  const int k = dm.k;
  const int qdeg = 2 * k + 8;
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(dm.n_U);

  parallel_for(0, mesh.num_edges(), [&](int e) {
    const auto& ed = mesh.edges[e];
    const EntityQuad q = edge_quadrature(mesh, e, qdeg);
    for (int p = 0; p < q.size(); ++p) {
      const double ut = field.value(q.points[p]).dot(ed.tangent);
      const double s = (q.points[p] - ed.midpoint).dot(ed.tangent) / ed.length;
      double sp = 1.0;
      for (int j = 0; j <= k; ++j) {
        dofs(dm.u_edge_dof(e, j)) += q.weights[p] * ut * sp;
        sp *= s;
      }
    }
  });

  const MonomialBasis fm(2, k - 1);
  parallel_for(0, mesh.num_faces(), [&](int f) {
    const auto& fd = mesh.faces[f];
    const EntityQuad q = face_quadrature(mesh, f, qdeg);
    std::vector<double> mv;
    for (int p = 0; p < q.size(); ++p) {
      const Eigen::Vector3d un = field.value(q.points[p]).cross(fd.normal);
      const Eigen::Vector3d cn = field.curl(q.points[p]).cross(fd.normal);
      const double xi = (q.points[p] - fd.centroid).dot(fd.t1) / fd.diameter;
      const double eta = (q.points[p] - fd.centroid).dot(fd.t2) / fd.diameter;
      fm.eval({xi, eta, 0.0}, mv);
      for (int ti = 0; ti < dm.layout.per_face_tan; ++ti) {
        const Eigen::Vector3d dir = (ti % 2) == 0 ? fd.t1 : fd.t2;
        dofs(dm.u_face_tan_dof(f, ti)) += q.weights[p] * un.dot(dir) * mv[ti / 2];
        dofs(dm.u_face_curl_dof(f, ti)) += q.weights[p] * cn.dot(dir) * mv[ti / 2];
      }
    }
  });

  if (dm.layout.interior > 0) {
    const MonomialBasis vm(3, k - 2);
    parallel_for(0, mesh.num_tets(), [&](int t) {
      const EntityQuad q = tet_quadrature(mesh, t, qdeg);
      const ElemGeom gm = cache.geom(t);
      std::vector<double> mv;
      for (int p = 0; p < q.size(); ++p) {
        const Eigen::Vector3d val = field.value(q.points[p]);
        const Eigen::Vector3d X = (q.points[p] - gm.centroid) / gm.h;
        vm.eval({X[0], X[1], X[2]}, mv);
        for (int ti = 0; ti < dm.layout.interior; ++ti)
          dofs(dm.u_interior_dof(t, ti)) += q.weights[p] * val[ti % 3] * mv[ti / 3];
      }
    });
  }
  return dofs;
}

Eigen::VectorXd interpolate_V(const AnalyticField& field, const Mesh& mesh,
                              const ElementCache& cache, const VDofMap& dm) {
  const int k = dm.k;
  const int qdeg = 2 * k + 8;
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(dm.n_V);

  const MonomialBasis fm_n(2, k);
  const MonomialBasis fm_t(2, k - 1);
  parallel_for(0, mesh.num_faces(), [&](int f) {
    const auto& fd = mesh.faces[f];
    const EntityQuad q = face_quadrature(mesh, f, qdeg);
    std::vector<double> mvn, mvt;
    for (int p = 0; p < q.size(); ++p) {
      const Eigen::Vector3d val = field.value(q.points[p]);
      const double xi = (q.points[p] - fd.centroid).dot(fd.t1) / fd.diameter;
      const double eta = (q.points[p] - fd.centroid).dot(fd.t2) / fd.diameter;
      fm_n.eval({xi, eta, 0.0}, mvn);
      fm_t.eval({xi, eta, 0.0}, mvt);
      const double vn = val.dot(fd.normal);
      const Eigen::Vector3d vx = val.cross(fd.normal);
      for (int ti = 0; ti < dm.layout.per_face_normal; ++ti)
        dofs(dm.v_face_normal_dof(f, ti)) += q.weights[p] * vn * mvn[ti];
      for (int ti = 0; ti < dm.layout.per_face_tan; ++ti) {
        const Eigen::Vector3d dir = (ti % 2) == 0 ? fd.t1 : fd.t2;
        dofs(dm.v_face_tan_dof(f, ti)) += q.weights[p] * vx.dot(dir) * mvt[ti / 2];
      }
    }
  });

  if (dm.layout.interior > 0) {
    const ShapeBasis& nb = nedelec_basis(k - 2);
    parallel_for(0, mesh.num_tets(), [&](int t) {
      const EntityQuad q = tet_quadrature(mesh, t, qdeg);
      const ElemGeom gm = cache.geom(t);
      for (int p = 0; p < q.size(); ++p) {
        const Eigen::Vector3d val = field.value(q.points[p]);
        const Eigen::Vector3d X = (q.points[p] - gm.centroid) / gm.h;
        for (int ti = 0; ti < dm.layout.interior; ++ti)
          dofs(dm.v_interior_dof(t, ti)) += q.weights[p] * val.dot(nb.functions[ti].eval(X));
      }
    });
  }
  return dofs;
}

double commuting_check(const AnalyticField& field, const Mesh& mesh, const ElementCache& cache,
                       const DofMap& dm, const VDofMap& vdm, int points_per_tet,
                       std::uint64_t seed) {
  const Eigen::VectorXd u_dofs = interpolate_U(field, mesh, cache, dm);
  CurlPowerField curl_field(
      std::shared_ptr<const AnalyticField>(&field, [](const AnalyticField*) {}), 1);
  const Eigen::VectorXd v_dofs = interpolate_V(curl_field, mesh, cache, vdm);
  const DiscreteUField uh(mesh, cache, dm, u_dofs);
  const DiscreteVField vh(mesh, cache, vdm, v_dofs);

  Rand rng{seed ^ 0x9E3779B97F4A7C15ULL};
  double max_disc = 0.0, scale = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int p = 0; p < points_per_tet; ++p) {
      const Eigen::Vector3d x = random_point_in_tet(mesh, t, rng);
      const Eigen::Vector3d a = uh.curl(t, x);
      const Eigen::Vector3d b = vh.value(t, x);
      max_disc = std::max(max_disc, (a - b).norm());
      scale = std::max({scale, a.norm(), b.norm()});
    }
  return max_disc / std::max(scale, 1e-30);
}

double max_tangential_jump(const DiscreteUField& u, const Mesh& mesh, const ElementCache& cache,
                           int points_per_face, std::uint64_t seed) {
  (void)cache;
  Rand rng{seed ^ 0xA24BAED4963EE407ULL};
  double max_jump = 0.0, scale = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fd = mesh.faces[f];
    if (fd.boundary) continue;
    for (int p = 0; p < points_per_face; ++p) {
      const Eigen::Vector3d x = random_point_on_face(mesh, f, rng);
      const Eigen::Vector3d up = u.value(fd.tets[0], x);
      const Eigen::Vector3d um = u.value(fd.tets[1], x);
      max_jump = std::max(max_jump, ((up - um).cross(fd.normal)).norm());
      scale = std::max({scale, up.norm(), um.norm()});
    }
  }
  return max_jump / std::max(scale, 1e-30);
}

double max_normal_jump(const DiscreteVField& v, const Mesh& mesh, const ElementCache& cache,
                       int points_per_face, std::uint64_t seed) {
  (void)cache;
  Rand rng{seed ^ 0xD1B54A32D192ED03ULL};
  double max_jump = 0.0, scale = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fd = mesh.faces[f];
    if (fd.boundary) continue;
    for (int p = 0; p < points_per_face; ++p) {
      const Eigen::Vector3d x = random_point_on_face(mesh, f, rng);
      const Eigen::Vector3d vp = v.value(fd.tets[0], x);
      const Eigen::Vector3d vm = v.value(fd.tets[1], x);
      max_jump = std::max(max_jump, std::abs((vp - vm).dot(fd.normal)));
      scale = std::max({scale, vp.norm(), vm.norm()});
    }
  }
  return max_jump / std::max(scale, 1e-30);
}

double max_curl_jump_moment(const DiscreteUField& u, const Mesh& mesh, const ElementCache& cache,
                            int k) {
  (void)cache;
  const int qdeg = 2 * k + 8;
  const MonomialBasis fm(2, k - 1);
  double worst = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fd = mesh.faces[f];
    if (fd.boundary) continue;
    const EntityQuad q = face_quadrature(mesh, f, qdeg);
    const int nm = fm.size();
    // moments for chi = dir * monomial, dir in {t1, t2, n}
    Eigen::MatrixXd mom = Eigen::MatrixXd::Zero(3, nm);
    double curl_l2 = 0.0, area = 0.0;
    std::vector<double> mv;
    for (int p = 0; p < q.size(); ++p) {
      const Eigen::Vector3d x = q.points[p];
      const Eigen::Vector3d jump = u.curl(fd.tets[0], x) - u.curl(fd.tets[1], x);
      const double xi = (x - fd.centroid).dot(fd.t1) / fd.diameter;
      const double eta = (x - fd.centroid).dot(fd.t2) / fd.diameter;
      fm.eval({xi, eta, 0.0}, mv);
      const double dirs[3] = {jump.dot(fd.t1), jump.dot(fd.t2), jump.dot(fd.normal)};
      for (int d = 0; d < 3; ++d)
        for (int m = 0; m < nm; ++m) mom(d, m) += q.weights[p] * dirs[d] * mv[m];
      curl_l2 += q.weights[p] * u.curl(fd.tets[0], x).squaredNorm();
      area += q.weights[p];
    }
    // normalize against ||curl u||_F * ||chi||_F ~ sqrt(curl_l2) * sqrt(area)
    const double denom = std::sqrt(std::max(curl_l2, 1e-60)) * std::sqrt(area);
    worst = std::max(worst, mom.cwiseAbs().maxCoeff() / denom);
  }
  return worst;
}

}  // namespace quadcurl
