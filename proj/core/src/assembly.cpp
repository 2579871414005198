#include "quadcurl/assembly.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "quadcurl/entity_quadrature.hpp"
#include "quadcurl/parallel.hpp"

namespace quadcurl {

DofMap number_dofs(const Mesh& mesh, int k) {
  if (k < 1 || k > 2) throw std::invalid_argument("number_dofs: k must be 1 or 2");
  DofMap dm;
  dm.k = k;
  dm.layout = UDofLayout(k);
  dm.num_edges = mesh.num_edges();
  dm.num_faces = mesh.num_faces();
  dm.num_tets = mesh.num_tets();
  dm.num_vertices = mesh.num_vertices();

  dm.off_face_tan = dm.num_edges * dm.layout.per_edge;
  dm.off_face_curl = dm.off_face_tan + dm.num_faces * dm.layout.per_face_tan;
  dm.off_interior = dm.off_face_curl + dm.num_faces * dm.layout.per_face_curl;
  dm.n_U = dm.off_interior + dm.num_tets * dm.layout.interior;

  const int wdeg = k + 1;
  dm.w_nodes_per_edge = wdeg - 1;
  dm.w_nodes_per_face = wdeg >= 3 ? 1 : 0;
  dm.w_off_edge = dm.num_vertices;
  dm.w_off_face = dm.w_off_edge + dm.num_edges * dm.w_nodes_per_edge;
  dm.n_W = dm.w_off_face + dm.num_faces * dm.w_nodes_per_face;

  dm.u_boundary.assign(dm.n_U, false);
  for (int e = 0; e < dm.num_edges; ++e)
    if (mesh.edges[e].boundary)
      for (int j = 0; j < dm.layout.per_edge; ++j) dm.u_boundary[dm.u_edge_dof(e, j)] = true;
  for (int f = 0; f < dm.num_faces; ++f)
    if (mesh.faces[f].boundary) {
      for (int ti = 0; ti < dm.layout.per_face_tan; ++ti)
        dm.u_boundary[dm.u_face_tan_dof(f, ti)] = true;
      for (int ti = 0; ti < dm.layout.per_face_curl; ++ti)
        dm.u_boundary[dm.u_face_curl_dof(f, ti)] = true;
    }

  dm.w_boundary.assign(dm.n_W, false);
  for (int v = 0; v < dm.num_vertices; ++v)
    if (mesh.vertex_boundary[v]) dm.w_boundary[dm.w_vertex_dof(v)] = true;
  for (int e = 0; e < dm.num_edges; ++e)
    if (mesh.edges[e].boundary)
      for (int s = 0; s < dm.w_nodes_per_edge; ++s) dm.w_boundary[dm.w_edge_dof(e, s)] = true;
  for (int f = 0; f < dm.num_faces; ++f)
    if (mesh.faces[f].boundary && dm.w_nodes_per_face > 0) dm.w_boundary[dm.w_face_dof(f)] = true;
  return dm;
}

std::vector<int> DofMap::cell_dofs_U(const Mesh& mesh, int t) const {
  const auto& tet = mesh.tets[t];
  std::vector<int> out;
  out.reserve(layout.total());
  for (int le = 0; le < 6; ++le)
    for (int j = 0; j < layout.per_edge; ++j) out.push_back(u_edge_dof(tet.edges[le], j));
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < layout.per_face_tan; ++ti)
      out.push_back(u_face_tan_dof(tet.faces[lf], ti));
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < layout.per_face_curl; ++ti)
      out.push_back(u_face_curl_dof(tet.faces[lf], ti));
  for (int ti = 0; ti < layout.interior; ++ti) out.push_back(u_interior_dof(t, ti));
  return out;
}

std::vector<int> DofMap::cell_dofs_W(const Mesh& mesh, int t) const {
  const auto& tet = mesh.tets[t];
  std::vector<int> out;
  for (int v = 0; v < 4; ++v) out.push_back(w_vertex_dof(tet.v[v]));
  for (int le = 0; le < 6; ++le)
    for (int s = 0; s < w_nodes_per_edge; ++s) out.push_back(w_edge_dof(tet.edges[le], s));
  if (w_nodes_per_face > 0)
    for (int lf = 0; lf < 4; ++lf) out.push_back(w_face_dof(tet.faces[lf]));
  return out;
}

VDofMap number_V_dofs(const Mesh& mesh, int k) {
  if (k < 1 || k > 2) throw std::invalid_argument("number_V_dofs: k must be 1 or 2");
  VDofMap dm;
  dm.k = k;
  dm.layout = VDofLayout(k);
  dm.num_faces = mesh.num_faces();
  dm.num_tets = mesh.num_tets();
  dm.off_face_tan = dm.num_faces * dm.layout.per_face_normal;
  dm.off_interior = dm.off_face_tan + dm.num_faces * dm.layout.per_face_tan;
  dm.n_V = dm.off_interior + dm.num_tets * dm.layout.interior;
  return dm;
}

std::vector<int> VDofMap::cell_dofs_V(const Mesh& mesh, int t) const {
  const auto& tet = mesh.tets[t];
  std::vector<int> out;
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < layout.per_face_normal; ++ti)
      out.push_back(v_face_normal_dof(tet.faces[lf], ti));
  for (int lf = 0; lf < 4; ++lf)
    for (int ti = 0; ti < layout.per_face_tan; ++ti)
      out.push_back(v_face_tan_dof(tet.faces[lf], ti));
  for (int ti = 0; ti < layout.interior; ++ti) out.push_back(v_interior_dof(t, ti));
  return out;
}

Eigen::VectorXd SparseSystem::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(size());
  const Eigen::VectorXd xu = x.head(n_U), xw = x.tail(n_W);
  y.head(n_U) = A * xu + B.transpose() * xw;
  y.tail(n_W) = B * xu;
  for (int q = 0; q < n_W; ++q)
    if (w_constrained[q]) y(n_U + q) += xw(q);
  return y;
}

Eigen::VectorXd SparseSystem::rhs() const {
  Eigen::VectorXd r(size());
  r.head(n_U) = F;
  r.tail(n_W) = G;
  return r;
}

void SparseSystem::write_matrix_market(std::ostream& os) const {
  std::vector<Eigen::Triplet<double>> trips;
  for (int j = 0; j < A.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, j); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < B.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(B, j); it; ++it) {
      trips.emplace_back(n_U + it.row(), it.col(), it.value());
      trips.emplace_back(it.col(), n_U + it.row(), it.value());
    }
  for (int q = 0; q < n_W; ++q)
    if (w_constrained[q]) trips.emplace_back(n_U + q, n_U + q, 1.0);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << size() << " " << size() << " " << trips.size() << "\n";
  for (const auto& t : trips) os << t.row() + 1 << " " << t.col() + 1 << " " << t.value() << "\n";
}

namespace {

int cache_slot(const Mesh& mesh, int t) {
  const int cls = mesh.tets[t].congruence_class;
  return (mesh.num_congruence_classes > 0 && cls >= 0) ? cls : t;
}

std::vector<int> class_representatives(const Mesh& mesh) {
  const int slots =
      mesh.num_congruence_classes > 0 ? mesh.num_congruence_classes : mesh.num_tets();
  std::vector<int> rep(slots, -1);
  for (int t = 0; t < mesh.num_tets(); ++t)
    if (rep[cache_slot(mesh, t)] < 0) rep[cache_slot(mesh, t)] = t;
  return rep;
}

struct ClassData {
  Eigen::MatrixXd A_K, B_K, L_K, M_K;
  Eigen::MatrixXd Uval;  // nu x 3P, basis values at the quadrature points
  std::vector<Eigen::Vector3d> offsets;  // quadrature points relative to the centroid
  std::vector<double> weights;
};

ClassData build_class_data(const Mesh& mesh, const ElementCache& cache, int rep) {
  ClassData cd;
  const int k = cache.order();
  const LocalElement& U = cache.U(rep);
  const LagrangeElement& W = cache.W(rep);
  const ElemGeom gm = cache.geom(rep);
  const EntityQuad q = tet_quadrature(mesh, rep, 2 * (k + 1) + 8);
  const int P = q.size();
  const int nu = U.size(), nw = W.size();

  cd.offsets.resize(P);
  cd.weights = q.weights;
  Eigen::Matrix3Xd X(3, P);
  for (int p = 0; p < P; ++p) {
    cd.offsets[p] = q.points[p] - gm.centroid;
    X.col(p) = cd.offsets[p] / gm.h;
  }

  Eigen::MatrixXd gcs;
  U.eval_batch(gm.h, X, &cd.Uval, nullptr, &gcs);

  Eigen::MatrixXd gcw = gcs;
  for (int p = 0; p < P; ++p) gcw.middleCols(9 * p, 9) *= std::sqrt(q.weights[p]);
  cd.A_K = gcw * gcw.transpose();

  cd.B_K = Eigen::MatrixXd::Zero(nw, nu);
  cd.L_K = Eigen::MatrixXd::Zero(nw, nw);
  cd.M_K = Eigen::MatrixXd::Zero(nw, nw);
  Eigen::VectorXd wv;
  Eigen::MatrixXd wg;
  for (int p = 0; p < P; ++p) {
    W.eval(gm, q.points[p], &wv, &wg);
    const double wgt = q.weights[p];
    for (int c = 0; c < 3; ++c)
      cd.B_K += wgt * wg.col(c) * cd.Uval.col(3 * p + c).transpose();
    cd.L_K += wgt * wg * wg.transpose();
    cd.M_K += wgt * wv * wv.transpose();
  }
  return cd;
}

}  // namespace

Eigen::VectorXd boundary_dof_values(const Mesh& mesh, const ElementCache& cache,
                                    const DofMap& dofmap, const BoundaryCondition& bc) {
  Eigen::VectorXd u_bc = Eigen::VectorXd::Zero(dofmap.n_U);
  if (bc.kind == BoundaryCondition::Kind::Homogeneous) return u_bc;
  if (!bc.exact) throw std::invalid_argument("boundary_dof_values: interpolated bc needs a field");
  const int k = dofmap.k;
  const int qdeg = 2 * k + 8;
  const auto& field = *bc.exact;

  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edges[e].boundary) continue;
    const auto& ed = mesh.edges[e];
    const EntityQuad q = edge_quadrature(mesh, e, qdeg);
    for (int p = 0; p < q.size(); ++p) {
      const double ut = field.value(q.points[p]).dot(ed.tangent);
      const double s = (q.points[p] - ed.midpoint).dot(ed.tangent) / ed.length;
      double sp = 1.0;
      for (int j = 0; j <= k; ++j) {
        u_bc(dofmap.u_edge_dof(e, j)) += q.weights[p] * ut * sp;
        sp *= s;
      }
    }
  }
  const MonomialBasis fm(2, k - 1);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.faces[f].boundary) continue;
    const auto& fd = mesh.faces[f];
    const EntityQuad q = face_quadrature(mesh, f, qdeg);
    for (int p = 0; p < q.size(); ++p) {
      const Eigen::Vector3d un = field.value(q.points[p]).cross(fd.normal);
      const Eigen::Vector3d cn = field.curl(q.points[p]).cross(fd.normal);
      const double xi = (q.points[p] - fd.centroid).dot(fd.t1) / fd.diameter;
      const double eta = (q.points[p] - fd.centroid).dot(fd.t2) / fd.diameter;
      std::vector<double> mv;
      fm.eval({xi, eta, 0.0}, mv);
      for (int ti = 0; ti < dofmap.layout.per_face_tan; ++ti) {
        const Eigen::Vector3d dir = (ti % 2) == 0 ? fd.t1 : fd.t2;
        u_bc(dofmap.u_face_tan_dof(f, ti)) += q.weights[p] * un.dot(dir) * mv[ti / 2];
        u_bc(dofmap.u_face_curl_dof(f, ti)) += q.weights[p] * cn.dot(dir) * mv[ti / 2];
      }
    }
  }
  return u_bc;
}

SparseSystem assemble_system(const Mesh& mesh, const ElementCache& cache, const DofMap& dofmap,
                             const AnalyticField* f, const BoundaryCondition& bc) {
  const int k = dofmap.k;
  if (cache.order() != k) throw std::invalid_argument("assemble_system: cache order mismatch");
  const int ntets = mesh.num_tets();

  const std::vector<int> reps = class_representatives(mesh);
  std::vector<ClassData> cls(reps.size());
  for (std::size_t s = 0; s < reps.size(); ++s)
    if (reps[s] >= 0) cls[s] = build_class_data(mesh, cache, reps[s]);

  const int nu = UDofLayout(k).total();

  // load vector contributions, computed in parallel into per-tet slots so the
  // final reduction order (and the output bytes) do not depend on the thread
  // count
  Eigen::MatrixXd Floc = Eigen::MatrixXd::Zero(nu, ntets);
  if (f) {
    std::vector<std::string> errors(ntets);
    parallel_for(0, ntets, [&](int t) {
      const ClassData& cd = cls[cache_slot(mesh, t)];
      const Eigen::Vector3d c = mesh.tets[t].centroid;
      Eigen::VectorXd fk = Eigen::VectorXd::Zero(nu);
      for (std::size_t p = 0; p < cd.offsets.size(); ++p) {
        const Eigen::Vector3d x = c + cd.offsets[p];
        const Eigen::Vector3d fv = f->value(x);
        if (!fv.allFinite()) {
          std::ostringstream os;
          os << "assemble_system: load not finite at (" << x.transpose() << ")";
          errors[t] = os.str();
          return;
        }
        const double w = cd.weights[p];
        fk += w * (fv[0] * cd.Uval.col(3 * p) + fv[1] * cd.Uval.col(3 * p + 1) +
                   fv[2] * cd.Uval.col(3 * p + 2));
      }
      Floc.col(t) = fk;
    });
    for (const auto& e : errors)
      if (!e.empty()) throw std::runtime_error(e);
  }

  std::vector<Eigen::Triplet<double>> tA, tB, tL, tM;
  tA.reserve(std::size_t(ntets) * nu * nu);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofmap.n_U);
  for (int t = 0; t < ntets; ++t) {
    const ClassData& cd = cls[cache_slot(mesh, t)];
    const std::vector<int> cdU = dofmap.cell_dofs_U(mesh, t);
    const std::vector<int> cdW = dofmap.cell_dofs_W(mesh, t);
    for (int i = 0; i < nu; ++i) {
      F(cdU[i]) += Floc(i, t);
      for (int j = 0; j < nu; ++j) tA.emplace_back(cdU[i], cdU[j], cd.A_K(i, j));
    }
    for (std::size_t q = 0; q < cdW.size(); ++q) {
      for (int j = 0; j < nu; ++j) tB.emplace_back(cdW[q], cdU[j], cd.B_K(q, j));
      for (std::size_t r = 0; r < cdW.size(); ++r) {
        tL.emplace_back(cdW[q], cdW[r], cd.L_K(q, r));
        tM.emplace_back(cdW[q], cdW[r], cd.M_K(q, r));
      }
    }
  }

  Eigen::SparseMatrix<double> A_raw(dofmap.n_U, dofmap.n_U), B_raw(dofmap.n_W, dofmap.n_U),
      L_raw(dofmap.n_W, dofmap.n_W), M_raw(dofmap.n_W, dofmap.n_W);
  A_raw.setFromTriplets(tA.begin(), tA.end());
  B_raw.setFromTriplets(tB.begin(), tB.end());
  L_raw.setFromTriplets(tL.begin(), tL.end());
  M_raw.setFromTriplets(tM.begin(), tM.end());
  tA.clear();
  tA.shrink_to_fit();

  SparseSystem sys;
  sys.n_U = dofmap.n_U;
  sys.n_W = dofmap.n_W;
  sys.u_constrained = dofmap.u_boundary;
  sys.w_constrained = dofmap.w_boundary;
  sys.u_bc_values = boundary_dof_values(mesh, cache, dofmap, bc);
  sys.W_mass = M_raw;

  // essential rows/columns -> identity, boundary data folded into the rhs
  sys.F = F - A_raw * sys.u_bc_values;
  sys.G = -(B_raw * sys.u_bc_values);
  for (int i = 0; i < dofmap.n_U; ++i)
    if (dofmap.u_boundary[i]) sys.F(i) = sys.u_bc_values(i);
  for (int q = 0; q < dofmap.n_W; ++q)
    if (dofmap.w_boundary[q]) sys.G(q) = 0.0;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A_raw.nonZeros());
  for (int j = 0; j < A_raw.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A_raw, j); it; ++it)
      if (!dofmap.u_boundary[it.row()] && !dofmap.u_boundary[it.col()])
        trips.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < dofmap.n_U; ++i)
    if (dofmap.u_boundary[i]) trips.emplace_back(i, i, 1.0);
  sys.A.resize(dofmap.n_U, dofmap.n_U);
  sys.A.setFromTriplets(trips.begin(), trips.end());

  trips.clear();
  for (int j = 0; j < B_raw.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(B_raw, j); it; ++it)
      if (!dofmap.w_boundary[it.row()] && !dofmap.u_boundary[it.col()])
        trips.emplace_back(it.row(), it.col(), it.value());
  sys.B.resize(dofmap.n_W, dofmap.n_U);
  sys.B.setFromTriplets(trips.begin(), trips.end());

  trips.clear();
  for (int j = 0; j < L_raw.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(L_raw, j); it; ++it)
      if (!dofmap.w_boundary[it.row()] && !dofmap.w_boundary[it.col()])
        trips.emplace_back(it.row(), it.col(), it.value());
  for (int q = 0; q < dofmap.n_W; ++q)
    if (dofmap.w_boundary[q]) trips.emplace_back(q, q, 1.0);
  sys.W_laplacian.resize(dofmap.n_W, dofmap.n_W);
  sys.W_laplacian.setFromTriplets(trips.begin(), trips.end());

  return sys;
}

Eigen::SparseMatrix<double> gradient_injection(const Mesh& mesh, const ElementCache& cache,
                                               const DofMap& dofmap) {
  const int k = dofmap.k;
  const std::vector<int> reps = class_representatives(mesh);
  const int nu = UDofLayout(k).total();

  // per-class dof values of grad psi_q, plus a pointwise residual check on
  // the class representative
  std::vector<Eigen::MatrixXd> cls(reps.size());
  for (std::size_t s = 0; s < reps.size(); ++s) {
    const int rep = reps[s];
    if (rep < 0) continue;
    const LocalElement& U = cache.U(rep);
    const LagrangeElement& W = cache.W(rep);
    const ElemGeom gm = cache.geom(rep);
    Eigen::MatrixXd Gk(nu, W.size());
    for (int q = 0; q < W.size(); ++q) {
      VecPoly3 grad;
      for (int c = 0; c < 3; ++c) grad.comp[c] = W.nodal[q].derivative(c) * (1.0 / gm.h);
      Gk.col(q) = apply_dofs_to_poly(U, mesh, rep, grad);

      // reconstruction residual at a few interior points
      const auto& tt = mesh.tets[rep];
      for (int s2 = 0; s2 < 4; ++s2) {
        Eigen::Vector4d l(0.1 + 0.05 * s2, 0.2, 0.3, 0.0);
        l(3) = 1.0 - l(0) - l(1) - l(2);
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        for (int v = 0; v < 4; ++v) x += l(v) * mesh.vertices[tt.v[v]];
        Eigen::MatrixXd vals;
        U.eval(gm, x, &vals, nullptr, nullptr);
        const Eigen::Vector3d rec = vals.transpose() * Gk.col(q);
        const Eigen::Vector3d ref = grad.eval((x - gm.centroid) / gm.h);
        if ((rec - ref).norm() > 1e-9 * std::max(1.0, ref.norm())) {
          std::ostringstream os;
          os << "gradient_injection: residual " << (rec - ref).norm() << " on tet " << rep
             << " node " << q;
          throw std::runtime_error(os.str());
        }
      }
    }
    cls[s] = Gk;
  }

  std::vector<Eigen::Triplet<double>> sums, counts;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Eigen::MatrixXd& Gk = cls[cache_slot(mesh, t)];
    const std::vector<int> cdU = dofmap.cell_dofs_U(mesh, t);
    const std::vector<int> cdW = dofmap.cell_dofs_W(mesh, t);
    for (int q = 0; q < static_cast<int>(cdW.size()); ++q)
      for (int i = 0; i < nu; ++i) {
        if (dofmap.u_boundary[cdU[i]] || dofmap.w_boundary[cdW[q]]) continue;
        sums.emplace_back(cdU[i], cdW[q], Gk(i, q));
        counts.emplace_back(cdU[i], cdW[q], 1.0);
      }
  }
  Eigen::SparseMatrix<double> S(dofmap.n_U, dofmap.n_W), C(dofmap.n_U, dofmap.n_W);
  S.setFromTriplets(sums.begin(), sums.end());
  C.setFromTriplets(counts.begin(), counts.end());
  // shared dofs were accumulated once per incident element; average the
  // (identical up to roundoff) contributions
  for (int j = 0; j < S.outerSize(); ++j) {
    Eigen::SparseMatrix<double>::InnerIterator itc(C, j);
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, j); it; ++it, ++itc)
      it.valueRef() /= itc.value();
  }
  return S;
}

}  // namespace quadcurl
