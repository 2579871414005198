#include "quadcurl/element_checks.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "quadcurl/local_spaces.hpp"
#include "quadcurl/mesh.hpp"

namespace quadcurl {

namespace {

struct Rand {
  std::uint64_t s;
  double next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return double((s * 0x2545F4914F6CDD1DULL) >> 11) / 9007199254740992.0;
  }
};

Eigen::Vector3d point_on_face(const Mesh& mesh, int face, Rand& rng) {
  double a = rng.next(), b = rng.next();
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  const auto& f = mesh.faces[face];
  return (1.0 - a - b) * mesh.vertices[f.v[0]] + a * mesh.vertices[f.v[1]] +
         b * mesh.vertices[f.v[2]];
}

Eigen::Vector3d point_in_tet(const Mesh& mesh, int t, Rand& rng) {
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

// local edges of the local face opposite vertex f (edges not touching f)
const std::array<int, 3>& face_edges(int f) {
  static const std::array<std::array<int, 3>, 4> tbl{{{3, 4, 5}, {1, 2, 5}, {0, 2, 4}, {0, 1, 3}}};
  return tbl[f];
}

}  // namespace

std::vector<ElementCheckResult> verify_element_checks(int k, int trials, std::uint64_t seed) {
  const UDofLayout lay(k);
  const int expected_U = lay.total();
  const int expected_QF = 2 * static_cast<int>(monomial_count(3, k - 1)) -
                          (k >= 2 ? 2 * static_cast<int>(monomial_count(3, k - 2)) : 0);

  ElementCheckResult dims{"space dimensions (U, V, Q_F)", true, 0.0, 0.0};
  ElementCheckResult dd{"dof matrix inverse (D*Dinv = I)", true, 0.0, 1e-10};
  ElementCheckResult rec{"reconstruction from dof values", true, 0.0, 1e-9};
  ElementCheckResult dsum{"direct sum rank of shape basis", true, 0.0, 0.0};
  ElementCheckResult trace{"tangential trace determined by face dofs", true, 0.0, 1e-9};
  ElementCheckResult ctrace{"curl-trace identity of bubble generators", true, 0.0, 1e-9};
  ElementCheckResult imom{"interior moments of bubble block vanish", true, 0.0, 1e-10};

  Rand rng{seed * 0x9E3779B97F4A7C15ULL + 0x853C49E6748FEA9BULL};

  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t st = rng.s;
    const auto verts = random_tet(st);
    rng.s = st;
    const Mesh mesh = make_single_tet_mesh(verts);
    const LocalElement U = build_U(k, mesh, 0);
    const LocalElement V = build_V(k, mesh, 0);
    const ElemGeom gm{mesh.tets[0].centroid, mesh.tets[0].diameter};
    const int n = U.size();

    if (U.size() != expected_U) dims.pass = false;
    if (V.size() != VDofLayout(k).total()) dims.pass = false;
    for (int f = 0; f < 4; ++f)
      if (static_cast<int>(build_QF(k, mesh, 0, f).size()) != expected_QF) dims.pass = false;

    dd.worst = std::max(dd.worst, (U.dof_matrix * U.dof_inverse -
                                   Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());

    // reconstruction: shape-space member -> dof values -> nodal expansion
    {
      Eigen::VectorXd a(n);
      for (int i = 0; i < n; ++i) a(i) = 2.0 * rng.next() - 1.0;
      const Eigen::VectorXd dofvals = U.dof_matrix * a;
      double scale = 0.0, err = 0.0;
      for (int p = 0; p < 10; ++p) {
        const Eigen::Vector3d x = point_in_tet(mesh, 0, rng);
        const Eigen::Vector3d X = (x - gm.centroid) / gm.h;
        Eigen::Vector3d direct = Eigen::Vector3d::Zero();
        for (int j = 0; j < n; ++j) direct += a(j) * U.shapes.functions[j].eval(X);
        Eigen::MatrixXd vals;
        U.eval(gm, x, &vals, nullptr, nullptr);
        const Eigen::Vector3d rebuilt = vals.transpose() * dofvals;
        err = std::max(err, (direct - rebuilt).norm());
        scale = std::max(scale, direct.norm());
      }
      rec.worst = std::max(rec.worst, err / std::max(scale, 1e-12));
    }

    // direct sum: stacked shape coefficients have full row rank
    {
      const int M = static_cast<int>(monomial_count(3, U.shapes.degree));
      Eigen::MatrixXd S(n, 3 * M);
      S.setZero();
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < 3; ++c) {
          const auto& coef = U.shapes.functions[j].comp[c].coeffs();
          for (std::size_t i = 0; i < coef.size(); ++i)
            S(j, c * M + static_cast<int>(i)) = coef[i];
        }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
      const double thresh = 1e-10 * svd.singularValues()(0);
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++rank;
      if (rank != n) dsum.pass = false;
    }

    // trace determination: zero the dofs of one face closure, the remaining
    // member must have vanishing tangential trace there
    for (int f = 0; f < 4; ++f) {
      Eigen::VectorXd c(n);
      for (int i = 0; i < n; ++i) c(i) = 2.0 * rng.next() - 1.0;
      const auto& fe = face_edges(f);
      for (int i = 0; i < n; ++i) {
        const auto& d = U.dofs[i];
        const bool on_face =
            ((d.kind == DofKind::FaceTangent || d.kind == DofKind::CurlFace) &&
             d.local_entity == f) ||
            (d.kind == DofKind::EdgeTangent &&
             (d.local_entity == fe[0] || d.local_entity == fe[1] || d.local_entity == fe[2]));
        if (on_face) c(i) = 0.0;
      }
      const auto& fd = mesh.faces[mesh.tets[0].faces[f]];
      double err = 0.0, scale = 0.0;
      for (int p = 0; p < 50; ++p) {
        const Eigen::Vector3d x = point_on_face(mesh, mesh.tets[0].faces[f], rng);
        Eigen::MatrixXd vals;
        U.eval(gm, x, &vals, nullptr, nullptr);
        const Eigen::Vector3d u = vals.transpose() * c;
        err = std::max(err, u.cross(fd.normal).norm());
        scale = std::max(scale, vals.cwiseAbs().maxCoeff());
      }
      trace.worst = std::max(trace.worst, err / std::max(scale, 1e-12));
    }

    // curl-trace identity (curl of b_K b_F v against -a_F b_F^2 v on F)
    const auto& tt = mesh.tets[0];
    for (int f = 0; f < 4; ++f) {
      const auto qf = build_QF(k, mesh, 0, f);
      std::array<Poly3, 4> lambda;
      for (int i = 0; i < 4; ++i)
        lambda[i] = Poly3::affine(tt.lambda0[i] + tt.grad_lambda[i].dot(tt.centroid),
                                  tt.diameter * tt.grad_lambda[i]);
      Poly3 w = lambda[0] * lambda[1] * lambda[2] * lambda[3];
      for (int i = 0; i < 4; ++i)
        if (i != f) w = w * lambda[i];
      const Eigen::Vector3d n_out =
          tt.face_outward[f] ? mesh.faces[tt.faces[f]].normal
                             : Eigen::Vector3d(-mesh.faces[tt.faces[f]].normal);
      const double a_F = tt.grad_lambda[f].norm();
      for (const VecPoly3& v : qf) {
        const VecPoly3 z = v * w;
        const VecPoly3 zc = z.curl();
        double err = 0.0, scale = 0.0;
        for (int p = 0; p < 50; ++p) {
          const Eigen::Vector3d x = point_on_face(mesh, tt.faces[f], rng);
          const Eigen::Vector3d X = (x - gm.centroid) / gm.h;
          const Eigen::Vector3d lhs = (zc.eval(X) / gm.h).cross(n_out);
          double bK = 0.0;
          std::array<double, 4> bf{}, af{};
          mesh.bubble_eval(0, x, bK, bf, af);
          const Eigen::Vector3d rhs = -a_F * bf[f] * bf[f] * v.eval(X);
          err = std::max(err, (lhs - rhs).norm());
          scale = std::max(scale, rhs.norm());
        }
        ctrace.worst = std::max(ctrace.worst, err / std::max(scale, 1e-12));
      }
    }

    // interior moments of bubble shapes (k = 2): the dof matrix columns of
    // the bubble block vanish at the interior rows
    if (lay.interior > 0) {
      const int nned = nedelec_dimension(k);
      double dscale = U.dof_matrix.cwiseAbs().maxCoeff();
      for (int i = 0; i < n; ++i) {
        if (U.dofs[i].kind != DofKind::Interior) continue;
        for (int j = nned; j < n; ++j)
          imom.worst = std::max(imom.worst, std::abs(U.dof_matrix(i, j)) / dscale);
      }
    }
  }

  auto tolpass = [](ElementCheckResult& r) { r.pass = r.pass && r.worst <= r.tolerance; };
  tolpass(dd);
  tolpass(rec);
  tolpass(trace);
  tolpass(ctrace);
  tolpass(imom);
  if (trials == 0) {
    for (ElementCheckResult* r : {&dims, &dd, &rec, &dsum, &trace, &ctrace, &imom}) r->pass = true;
  }

  std::vector<ElementCheckResult> out{dims, dd, rec, dsum, trace, ctrace, imom};
  return out;
}

}  // namespace quadcurl
