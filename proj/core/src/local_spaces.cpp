#include "quadcurl/local_spaces.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "quadcurl/analytic_fields.hpp"
#include "quadcurl/entity_quadrature.hpp"

namespace quadcurl {

namespace {

int dim_P3(int deg) { return deg < 0 ? 0 : static_cast<int>(monomial_count(3, deg)); }
int dim_P2(int deg) { return deg < 0 ? 0 : static_cast<int>(monomial_count(2, deg)); }

// quadrature degree used while building elements and dof matrices: exact for
// every polynomial integrand that appears (shape degree k+6, tests degree <= k)
int build_quad_degree(int k) { return 2 * (k + 1) + 8; }

// barycentric coordinates of the tet as affine polynomials of the local
// scaled coordinate X = (x - centroid)/h
std::array<Poly3, 4> local_barycentric(const Mesh& mesh, int tet) {
  const auto& t = mesh.tets[tet];
  std::array<Poly3, 4> l;
  for (int i = 0; i < 4; ++i)
    l[i] = Poly3::affine(t.lambda0[i] + t.grad_lambda[i].dot(t.centroid),
                         t.diameter * t.grad_lambda[i]);
  return l;
}

// Generic evaluator abstraction for dof application: value and (physical)
// curl of the target function at a physical point.
struct FieldEval {
  const AnalyticField* field = nullptr;
  const VecPoly3* poly = nullptr;  // in local coordinates
  VecPoly3 poly_curl;              // local curl of poly
  ElemGeom geom;

  Eigen::Vector3d value(const Eigen::Vector3d& x) const {
    if (field) return field->value(x);
    return poly->eval((x - geom.centroid) / geom.h);
  }
  Eigen::Vector3d curl(const Eigen::Vector3d& x) const {
    if (field) return field->curl(x);
    return poly_curl.eval((x - geom.centroid) / geom.h) / geom.h;
  }
};

// 2D monomial exponent tables for face test polynomials
const MonomialBasis& face_monomials(int deg) {
  static std::vector<MonomialBasis> cache = [] {
    std::vector<MonomialBasis> v;
    for (int d = 0; d <= 16; ++d) v.emplace_back(2, d);
    return v;
  }();
  return cache.at(deg);
}

const MonomialBasis& volume_monomials(int deg) {
  static std::vector<MonomialBasis> cache = [] {
    std::vector<MonomialBasis> v;
    for (int d = 0; d <= 16; ++d) v.emplace_back(3, d);
    return v;
  }();
  return cache.at(deg);
}

}  // namespace

UDofLayout::UDofLayout(int kk)
    : k(kk),
      per_edge(kk + 1),
      per_face_tan(2 * dim_P2(kk - 1)),
      per_face_curl(2 * dim_P2(kk - 1)),
      interior(3 * dim_P3(kk - 2)) {}

VDofLayout::VDofLayout(int kk)
    : k(kk),
      per_face_normal(dim_P2(kk)),
      per_face_tan(2 * dim_P2(kk - 1)),
      interior(kk >= 2 ? nedelec_dimension(kk - 2) : 0) {}

int nedelec_dimension(int k) {
  if (k == 0) return 6;
  return (k + 1) * (k + 3) * (k + 4) / 2;
}

const ShapeBasis& nedelec_basis(int k) {
  static std::vector<ShapeBasis> cache(3);
  static std::vector<bool> built(3, false);
  if (k < 0 || k > 2) throw std::invalid_argument("nedelec_basis: k must be 0, 1, or 2");
  if (built[k]) return cache[k];

  ShapeBasis basis;
  basis.degree = k + 1;
  // full polynomial part P^k(K)^3
  const MonomialBasis& monos = volume_monomials(std::max(k, 0));
  if (k >= 0)
    for (int m = 0; m < dim_P3(k); ++m)
      for (int c = 0; c < 3; ++c) {
        VecPoly3 v(k);
        const auto& e = monos.exponent(m);
        v.comp[c].at(e[0], e[1], e[2]) = 1.0;
        basis.functions.push_back(v);
      }

  // homogeneous part: null space of v -> v.X over vector monomials of
  // homogeneous degree k+1
  const MonomialBasis hi(3, k + 1);
  const int lo_off = dim_P3(k);            // first index of the top-degree block
  const int nh = dim_P3(k + 1) - lo_off;   // # homogeneous monomials of degree k+1
  const MonomialBasis target(3, k + 2);
  const int t_off = dim_P3(k + 1);
  const int nt = dim_P3(k + 2) - t_off;

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nt, 3 * nh);
  for (int i = 0; i < nh; ++i) {
    const auto& e = hi.exponent(lo_off + i);
    for (int c = 0; c < 3; ++c) {
      std::array<int, 3> ee = e;
      ee[c] += 1;
      C(target.index(ee) - t_off, 3 * i + c) = 1.0;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const double thresh = 1e-10 * svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++rank;
  const int nullity = 3 * nh - rank;
  for (int j = 0; j < nullity; ++j) {
    const Eigen::VectorXd col = svd.matrixV().col(3 * nh - 1 - j);
    VecPoly3 v(k + 1);
    for (int i = 0; i < nh; ++i) {
      const auto& e = hi.exponent(lo_off + i);
      for (int c = 0; c < 3; ++c) v.comp[c].at(e[0], e[1], e[2]) = col(3 * i + c);
    }
    basis.functions.push_back(v);
  }
  if (static_cast<int>(basis.functions.size()) != nedelec_dimension(k)) {
    std::ostringstream os;
    os << "nedelec_basis: rank deficiency, got " << basis.functions.size() << " expected "
       << nedelec_dimension(k);
    throw std::runtime_error(os.str());
  }
  cache[k] = std::move(basis);
  built[k] = true;
  return cache[k];
}

std::vector<VecPoly3> build_QF(int k, const Mesh& mesh, int tet, int local_face) {
  if (k < 1 || k > 2) throw std::invalid_argument("build_QF: k must be 1 or 2");
  const auto& f = mesh.faces[mesh.tets[tet].faces[local_face]];

  // tangential generating set {t1, t2} x P_{k-1}(K) in local coordinates
  const MonomialBasis& monos = volume_monomials(k - 1);
  std::vector<VecPoly3> gen;
  for (int m = 0; m < dim_P3(k - 1); ++m)
    for (int d = 0; d < 2; ++d) {
      const Eigen::Vector3d dir = d == 0 ? f.t1 : f.t2;
      VecPoly3 v(k - 1);
      const auto& e = monos.exponent(m);
      for (int c = 0; c < 3; ++c) v.comp[c].at(e[0], e[1], e[2]) = dir[c];
      gen.push_back(v);
    }
  if (k == 1) return gen;  // no constraints: P^{-1} is empty

  // constraints: (q, b_K b_F w)_K = 0 for w in {t1,t2} x P_{k-2}(K)
  const auto lambda = local_barycentric(mesh, tet);
  Poly3 weight = lambda[0] * lambda[1] * lambda[2] * lambda[3];  // b_K
  for (int i = 0; i < 4; ++i)
    if (i != local_face) weight = weight * lambda[i];  // * b_F

  const MonomialBasis& wmonos = volume_monomials(k - 2);
  const int ncon = 2 * dim_P3(k - 2);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ncon, static_cast<int>(gen.size()));
  const EntityQuad tq = tet_quadrature(mesh, tet, build_quad_degree(k));
  const ElemGeom gm{mesh.tets[tet].centroid, mesh.tets[tet].diameter};
  for (std::size_t p = 0; p < tq.points.size(); ++p) {
    const Eigen::Vector3d X = (tq.points[p] - gm.centroid) / gm.h;
    const double wgt = tq.weights[p] * weight.eval(X);
    std::vector<double> mv;
    wmonos.eval({X[0], X[1], X[2]}, mv);
    for (std::size_t j = 0; j < gen.size(); ++j) {
      const Eigen::Vector3d qv = gen[j].eval(X);
      for (int wm = 0; wm < dim_P3(k - 2); ++wm)
        for (int d = 0; d < 2; ++d) {
          const Eigen::Vector3d dir = d == 0 ? f.t1 : f.t2;
          G(2 * wm + d, static_cast<int>(j)) += wgt * mv[wm] * dir.dot(qv);
        }
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullV);
  const double thresh = 1e-10 * svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++rank;
  const int expected = static_cast<int>(gen.size()) - 2 * dim_P3(k - 2);
  const int nullity = static_cast<int>(gen.size()) - rank;
  if (nullity != expected) {
    std::ostringstream os;
    os << "build_QF: null space dimension " << nullity << " != expected " << expected;
    throw std::runtime_error(os.str());
  }
  std::vector<VecPoly3> out;
  for (int j = 0; j < nullity; ++j) {
    const Eigen::VectorXd col = svd.matrixV().col(gen.size() - 1 - j);
    VecPoly3 v(k - 1);
    for (std::size_t i = 0; i < gen.size(); ++i)
      for (int c = 0; c < 3; ++c) v.comp[c] += gen[i].comp[c] * col(static_cast<int>(i));
    out.push_back(v);
  }
  return out;
}

namespace {

// Accumulate dof values of a target function into `out`.
void apply_dofs(const std::vector<DofDescriptor>& dofs, const Mesh& mesh, int tet, int k,
                int quad_degree, const FieldEval& fe, Eigen::VectorXd& out) {
  const auto& tt = mesh.tets[tet];
  const ElemGeom gm{tt.centroid, tt.diameter};
  out = Eigen::VectorXd::Zero(static_cast<int>(dofs.size()));

  // group by (kind, entity) so each entity's quadrature is generated once
  for (std::size_t start = 0; start < dofs.size();) {
    std::size_t end = start;
    while (end < dofs.size() && dofs[end].kind == dofs[start].kind &&
           dofs[end].local_entity == dofs[start].local_entity)
      ++end;
    const DofDescriptor& d0 = dofs[start];

    switch (d0.kind) {
      case DofKind::EdgeTangent: {
        const int ge = tt.edges[d0.local_entity];
        const auto& e = mesh.edges[ge];
        const EntityQuad q = edge_quadrature(mesh, ge, quad_degree);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
          const double ut = fe.value(q.points[p]).dot(e.tangent);
          const double s = (q.points[p] - e.midpoint).dot(e.tangent) / e.length;
          for (std::size_t i = start; i < end; ++i) {
            double sp = 1.0;  // test_index is the power of s
            for (int r = 0; r < dofs[i].test_index; ++r) sp *= s;
            out(static_cast<int>(i)) += q.weights[p] * ut * sp;
          }
        }
        break;
      }
      case DofKind::FaceTangent:
      case DofKind::CurlFace: {
        const int gf = tt.faces[d0.local_entity];
        const auto& f = mesh.faces[gf];
        const EntityQuad q = face_quadrature(mesh, gf, quad_degree);
        const MonomialBasis& fm = face_monomials(k - 1);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
          const Eigen::Vector3d val =
              d0.kind == DofKind::FaceTangent ? fe.value(q.points[p]) : fe.curl(q.points[p]);
          const Eigen::Vector3d cr = val.cross(f.normal);
          const double xi = (q.points[p] - f.centroid).dot(f.t1) / f.diameter;
          const double eta = (q.points[p] - f.centroid).dot(f.t2) / f.diameter;
          std::vector<double> mv;
          fm.eval({xi, eta, 0.0}, mv);
          for (std::size_t i = start; i < end; ++i) {
            const int ti = dofs[i].test_index;
            const Eigen::Vector3d dir = (ti % 2) == 0 ? f.t1 : f.t2;
            out(static_cast<int>(i)) += q.weights[p] * cr.dot(dir) * mv[ti / 2];
          }
        }
        break;
      }
      case DofKind::Interior: {
        const EntityQuad q = tet_quadrature(mesh, tet, quad_degree);
        const MonomialBasis& vm = volume_monomials(k - 2);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
          const Eigen::Vector3d val = fe.value(q.points[p]);
          const Eigen::Vector3d X = (q.points[p] - gm.centroid) / gm.h;
          std::vector<double> mv;
          vm.eval({X[0], X[1], X[2]}, mv);
          for (std::size_t i = start; i < end; ++i) {
            const int ti = dofs[i].test_index;
            out(static_cast<int>(i)) += q.weights[p] * val[ti % 3] * mv[ti / 3];
          }
        }
        break;
      }
      case DofKind::FaceNormal: {
        const int gf = tt.faces[d0.local_entity];
        const auto& f = mesh.faces[gf];
        const EntityQuad q = face_quadrature(mesh, gf, quad_degree);
        const MonomialBasis& fm = face_monomials(k);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
          const double vn = fe.value(q.points[p]).dot(f.normal);
          const double xi = (q.points[p] - f.centroid).dot(f.t1) / f.diameter;
          const double eta = (q.points[p] - f.centroid).dot(f.t2) / f.diameter;
          std::vector<double> mv;
          fm.eval({xi, eta, 0.0}, mv);
          for (std::size_t i = start; i < end; ++i)
            out(static_cast<int>(i)) += q.weights[p] * vn * mv[dofs[i].test_index];
        }
        break;
      }
      case DofKind::InteriorNedelec: {
        const EntityQuad q = tet_quadrature(mesh, tet, quad_degree);
        const ShapeBasis& nb = nedelec_basis(k - 2);
        for (std::size_t p = 0; p < q.points.size(); ++p) {
          const Eigen::Vector3d val = fe.value(q.points[p]);
          const Eigen::Vector3d X = (q.points[p] - gm.centroid) / gm.h;
          for (std::size_t i = start; i < end; ++i) {
            const Eigen::Vector3d rho = nb.functions[dofs[i].test_index].eval(X);
            out(static_cast<int>(i)) += q.weights[p] * val.dot(rho);
          }
        }
        break;
      }
    }
    start = end;
  }
}

}  // namespace

Eigen::VectorXd apply_dofs_to_poly(const LocalElement& elem, const Mesh& mesh, int tet,
                                   const VecPoly3& poly) {
  FieldEval fe;
  fe.poly = &poly;
  fe.poly_curl = poly.curl();
  fe.geom = {mesh.tets[tet].centroid, mesh.tets[tet].diameter};
  Eigen::VectorXd out;
  apply_dofs(elem.dofs, mesh, tet, elem.k, build_quad_degree(elem.k), fe, out);
  return out;
}

Eigen::VectorXd apply_dofs_to_field(const LocalElement& elem, const Mesh& mesh, int tet,
                                    const AnalyticField& field) {
  FieldEval fe;
  fe.field = &field;
  Eigen::VectorXd out;
  apply_dofs(elem.dofs, mesh, tet, elem.k, 2 * elem.k + 8, fe, out);
  return out;
}

namespace {

void build_dof_matrix_and_invert(LocalElement& el, const Mesh& mesh, int tet) {
  const int n = el.size();
  if (static_cast<int>(el.shapes.functions.size()) != n) {
    std::ostringstream os;
    os << "element on tet " << tet << ": " << el.shapes.functions.size() << " shapes vs " << n
       << " dofs";
    throw std::runtime_error(os.str());
  }
  el.dof_matrix.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd col = apply_dofs_to_poly(el, mesh, tet, el.shapes.functions[j]);
    el.dof_matrix.col(j) = col;
  }
  // column equilibration: rescale each shape function to unit dof-column
  // norm (element-internal, so shared-dof values are untouched)
  for (int j = 0; j < n; ++j) {
    const double s = el.dof_matrix.col(j).norm();
    if (s <= 0.0) {
      std::ostringstream os;
      os << "unisolvency failure on tet " << tet << ": zero dof column " << j;
      throw std::runtime_error(os.str());
    }
    el.dof_matrix.col(j) /= s;
    for (int c = 0; c < 3; ++c) el.shapes.functions[j].comp[c] = el.shapes.functions[j].comp[c] * (1.0 / s);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(el.dof_matrix);
  if (lu.rank() < n) {
    std::ostringstream os;
    os << "unisolvency failure on tet " << tet << ": dof matrix rank " << lu.rank() << " of " << n;
    throw std::runtime_error(os.str());
  }
  el.dof_inverse = lu.inverse();
  // one Newton step squares the inversion residual
  el.dof_inverse = el.dof_inverse * (2.0 * Eigen::MatrixXd::Identity(n, n) -
                                     el.dof_matrix * el.dof_inverse);
  el.condition = el.dof_matrix.cwiseAbs().colwise().sum().maxCoeff() *
                 el.dof_inverse.cwiseAbs().colwise().sum().maxCoeff();
  const double err = (el.dof_matrix * el.dof_inverse - Eigen::MatrixXd::Identity(n, n))
                         .cwiseAbs()
                         .maxCoeff();
  if (!(err < 1e-8)) {
    std::ostringstream os;
    os << "unisolvency failure on tet " << tet << ": D*Dinv deviates from identity by " << err
       << " (condition " << el.condition << ")";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

void LocalElement::finalize() {
  const int n = size();
  const int deg = shapes.degree;
  const int M = dim_P3(deg);

  // nodal_j = sum_m Dinv(m, j) shape_m, assembled on coefficient matrices
  Eigen::MatrixXd S[3];
  for (int c = 0; c < 3; ++c) S[c] = Eigen::MatrixXd::Zero(n, M);
  for (int m = 0; m < n; ++m)
    for (int c = 0; c < 3; ++c) {
      const auto& coef = shapes.functions[m].comp[c].coeffs();
      for (std::size_t i = 0; i < coef.size(); ++i) S[c](m, static_cast<int>(i)) = coef[i];
    }
  for (int c = 0; c < 3; ++c) val_coeffs_[c] = dof_inverse.transpose() * S[c];

  nodal.assign(n, VecPoly3(deg));
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < M; ++i) nodal[j].comp[c].coeffs()[i] = val_coeffs_[c](j, i);

  const int Mc = dim_P3(deg - 1);
  const int Mg = dim_P3(std::max(deg - 2, 0));
  for (int c = 0; c < 3; ++c) curl_coeffs_[c] = Eigen::MatrixXd::Zero(n, Mc);
  for (int c = 0; c < 9; ++c) gc_coeffs_[c] = Eigen::MatrixXd::Zero(n, Mg);
  for (int j = 0; j < n; ++j) {
    const VecPoly3 cl = nodal[j].curl();  // local-coordinate curl
    for (int c = 0; c < 3; ++c) {
      const auto& coef = cl.comp[c].coeffs();
      for (std::size_t i = 0; i < coef.size() && static_cast<int>(i) < Mc; ++i)
        curl_coeffs_[c](j, static_cast<int>(i)) = coef[i];
      for (int d = 0; d < 3; ++d) {
        const Poly3 g = cl.comp[c].derivative(d);
        const auto& gc = g.coeffs();
        for (std::size_t i = 0; i < gc.size() && static_cast<int>(i) < Mg; ++i)
          gc_coeffs_[3 * c + d](j, static_cast<int>(i)) = gc[i];
      }
    }
  }
}

void LocalElement::eval(const ElemGeom& geom, const Eigen::Vector3d& x, Eigen::MatrixXd* values,
                        Eigen::MatrixXd* curls, Eigen::MatrixXd* grad_curls) const {
  Eigen::Matrix3Xd pt(3, 1);
  pt.col(0) = (x - geom.centroid) / geom.h;
  Eigen::MatrixXd v, c, g;
  eval_batch(geom.h, pt, values ? &v : nullptr, curls ? &c : nullptr, grad_curls ? &g : nullptr);
  const int n = size();
  if (values) {
    values->resize(n, 3);
    for (int a = 0; a < 3; ++a) values->col(a) = v.col(a);
  }
  if (curls) {
    curls->resize(n, 3);
    for (int a = 0; a < 3; ++a) curls->col(a) = c.col(a);
  }
  if (grad_curls) {
    grad_curls->resize(n, 9);
    for (int a = 0; a < 9; ++a) grad_curls->col(a) = g.col(a);
  }
}

void LocalElement::eval_batch(double h, const Eigen::Matrix3Xd& local_points,
                              Eigen::MatrixXd* values, Eigen::MatrixXd* curls,
                              Eigen::MatrixXd* grad_curls) const {
  const int P = static_cast<int>(local_points.cols());
  const int deg = shapes.degree;
  auto monomial_matrix = [&](int d) {
    const MonomialBasis& mb = volume_monomials(d);
    Eigen::MatrixXd M(mb.size(), P);
    std::vector<double> mv;
    for (int p = 0; p < P; ++p) {
      mb.eval({local_points(0, p), local_points(1, p), local_points(2, p)}, mv);
      for (int i = 0; i < mb.size(); ++i) M(i, p) = mv[i];
    }
    return M;
  };
  const int n = size();
  if (values) {
    const Eigen::MatrixXd M = monomial_matrix(deg);
    values->resize(n, 3 * P);
    for (int c = 0; c < 3; ++c) {
      const Eigen::MatrixXd R = val_coeffs_[c] * M;  // n x P
      for (int p = 0; p < P; ++p) values->col(3 * p + c) = R.col(p);
    }
  }
  if (curls) {
    const Eigen::MatrixXd M = monomial_matrix(deg - 1);
    curls->resize(n, 3 * P);
    for (int c = 0; c < 3; ++c) {
      const Eigen::MatrixXd R = (curl_coeffs_[c] * M) / h;
      for (int p = 0; p < P; ++p) curls->col(3 * p + c) = R.col(p);
    }
  }
  if (grad_curls) {
    const Eigen::MatrixXd M = monomial_matrix(std::max(deg - 2, 0));
    grad_curls->resize(n, 9 * P);
    for (int c = 0; c < 9; ++c) {
      const Eigen::MatrixXd R = (gc_coeffs_[c] * M) / (h * h);
      for (int p = 0; p < P; ++p) grad_curls->col(9 * p + c) = R.col(p);
    }
  }
}

LocalElement build_U(int k, const Mesh& mesh, int tet) {
  if (k < 1 || k > 2) throw std::invalid_argument("build_U: k must be 1 or 2");
  LocalElement el;
  el.k = k;
  el.rep_tet = tet;

  el.shapes.functions = nedelec_basis(k).functions;
  el.shapes.degree = k + 6;  // bubble part: 4 (b_K) + 3 (b_F) + (k-1)
  const auto lambda = local_barycentric(mesh, tet);
  const Poly3 bK = lambda[0] * lambda[1] * lambda[2] * lambda[3];
  for (int f = 0; f < 4; ++f) {
    Poly3 bF = Poly3::constant(1.0);
    for (int i = 0; i < 4; ++i)
      if (i != f) bF = bF * lambda[i];
    const Poly3 w = bK * bF;
    for (const VecPoly3& q : build_QF(k, mesh, tet, f)) el.shapes.functions.push_back(q * w);
  }

  const UDofLayout lay(k);
  for (int le = 0; le < 6; ++le)
    for (int j = 0; j <= k; ++j) el.dofs.push_back({DofKind::EdgeTangent, le, j});
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < lay.per_face_tan; ++ti)
      el.dofs.push_back({DofKind::FaceTangent, lf, ti});
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < lay.per_face_curl; ++ti)
      el.dofs.push_back({DofKind::CurlFace, lf, ti});
  for (int ti = 0; ti < lay.interior; ++ti) el.dofs.push_back({DofKind::Interior, -1, ti});

  build_dof_matrix_and_invert(el, mesh, tet);
  el.finalize();
  return el;
}

LocalElement build_V(int k, const Mesh& mesh, int tet) {
  if (k < 1 || k > 2) throw std::invalid_argument("build_V: k must be 1 or 2");
  LocalElement el;
  el.k = k;
  el.rep_tet = tet;

  el.shapes.degree = k + 5;
  const MonomialBasis& monos = volume_monomials(k);
  for (int m = 0; m < dim_P3(k); ++m)
    for (int c = 0; c < 3; ++c) {
      VecPoly3 v(k);
      const auto& e = monos.exponent(m);
      v.comp[c].at(e[0], e[1], e[2]) = 1.0;
      el.shapes.functions.push_back(v);
    }
  const auto lambda = local_barycentric(mesh, tet);
  const Poly3 bK = lambda[0] * lambda[1] * lambda[2] * lambda[3];
  for (int f = 0; f < 4; ++f) {
    Poly3 bF = Poly3::constant(1.0);
    for (int i = 0; i < 4; ++i)
      if (i != f) bF = bF * lambda[i];
    const Poly3 w = bK * bF;
    for (const VecPoly3& q : build_QF(k, mesh, tet, f))
      el.shapes.functions.push_back((q * w).curl());
  }

  const VDofLayout lay(k);
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < lay.per_face_normal; ++ti)
      el.dofs.push_back({DofKind::FaceNormal, lf, ti});
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < lay.per_face_tan; ++ti)
      el.dofs.push_back({DofKind::FaceTangent, lf, ti});
  for (int ti = 0; ti < lay.interior; ++ti) el.dofs.push_back({DofKind::InteriorNedelec, -1, ti});

  build_dof_matrix_and_invert(el, mesh, tet);
  el.finalize();
  return el;
}

void LagrangeElement::eval(const ElemGeom& geom, const Eigen::Vector3d& x, Eigen::VectorXd* values,
                           Eigen::MatrixXd* gradients) const {
  const Eigen::Vector3d X = (x - geom.centroid) / geom.h;
  const int n = size();
  if (values) {
    values->resize(n);
    for (int i = 0; i < n; ++i) (*values)(i) = nodal[i].eval(X);
  }
  if (gradients) {
    gradients->resize(n, 3);
    for (int i = 0; i < n; ++i) gradients->row(i) = nodal[i].gradient(X).transpose() / geom.h;
  }
}

LagrangeElement build_lagrange(int degree, const Mesh& mesh, int tet) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("build_lagrange: degree must be 1, 2, or 3");
  LagrangeElement el;
  el.degree = degree;
  el.rep_tet = tet;
  const auto& tt = mesh.tets[tet];

  for (int v = 0; v < 4; ++v)
    el.nodes.push_back({0, v, 0, mesh.vertices[tt.v[v]]});
  if (degree >= 2) {
    for (int le = 0; le < 6; ++le) {
      const auto& e = mesh.edges[tt.edges[le]];
      const Eigen::Vector3d a = mesh.vertices[e.v[0]], b = mesh.vertices[e.v[1]];
      for (int s = 0; s + 2 <= degree; ++s) {
        const double frac = double(s + 1) / degree;  // measured from the lower-id vertex
        el.nodes.push_back({1, le, s, a + frac * (b - a)});
      }
    }
  }
  if (degree >= 3)
    for (int lf = 0; lf < 4; ++lf)
      el.nodes.push_back({2, lf, 0, mesh.faces[tt.faces[lf]].centroid});

  const int n = el.size();
  if (n != dim_P3(degree)) throw std::logic_error("build_lagrange: node count mismatch");

  const ElemGeom gm{tt.centroid, tt.diameter};
  const MonomialBasis& mb = volume_monomials(degree);
  Eigen::MatrixXd V(n, n);
  std::vector<double> mv;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d X = (el.nodes[i].position - gm.centroid) / gm.h;
    mb.eval({X[0], X[1], X[2]}, mv);
    for (int j = 0; j < n; ++j) V(i, j) = mv[j];
  }
  const Eigen::MatrixXd C = V.inverse();
  for (int i = 0; i < n; ++i) {
    Poly3 p(degree);
    for (int j = 0; j < n; ++j) p.coeffs()[j] = C(j, i);
    el.nodal.push_back(p);
  }
  return el;
}

ElementCache::ElementCache(const Mesh& mesh, int k) : mesh_(&mesh), k_(k) {
  const int slots = mesh.num_congruence_classes > 0 ? mesh.num_congruence_classes : mesh.num_tets();
  u_cache_.resize(slots);
  v_cache_.resize(slots);
  w_cache_.resize(slots);
  // eager build: afterwards the cache is immutable and safe to share
  std::vector<int> rep(slots, -1);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const int s = slot(t);
    if (rep[s] < 0) rep[s] = t;
  }
  for (int s = 0; s < slots; ++s) {
    if (rep[s] < 0) continue;
    u_cache_[s] = std::make_unique<LocalElement>(build_U(k, mesh, rep[s]));
    v_cache_[s] = std::make_unique<LocalElement>(build_V(k, mesh, rep[s]));
    w_cache_[s] = std::make_unique<LagrangeElement>(build_lagrange(k + 1, mesh, rep[s]));
  }
}

int ElementCache::slot(int tet) const {
  const int cls = mesh_->tets[tet].congruence_class;
  return (mesh_->num_congruence_classes > 0 && cls >= 0) ? cls : tet;
}

const LocalElement& ElementCache::U(int tet) const { return *u_cache_[slot(tet)]; }
const LocalElement& ElementCache::V(int tet) const { return *v_cache_[slot(tet)]; }
const LagrangeElement& ElementCache::W(int tet) const { return *w_cache_[slot(tet)]; }

}  // namespace quadcurl
