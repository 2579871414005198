#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "quadcurl/analytic_fields.hpp"
#include "quadcurl/local_spaces.hpp"
#include "quadcurl/mesh.hpp"

namespace quadcurl {

/// Global numbering for the enriched H(curl) space U_h (edge, face-tangent,
/// curl-face, interior blocks) and the Lagrange multiplier space W_h
/// (vertex, edge, face node blocks of degree k+1).
struct DofMap {
  int k = 1;
  int num_edges = 0, num_faces = 0, num_tets = 0, num_vertices = 0;
  UDofLayout layout{1};
  int n_U = 0;
  int off_face_tan = 0, off_face_curl = 0, off_interior = 0;

  int w_nodes_per_edge = 0, w_nodes_per_face = 0;
  int n_W = 0;
  int w_off_edge = 0, w_off_face = 0;

  std::vector<bool> u_boundary;  // essential dofs of U_{h,0}
  std::vector<bool> w_boundary;

  int u_edge_dof(int e, int j) const { return e * layout.per_edge + j; }
  int u_face_tan_dof(int f, int ti) const { return off_face_tan + f * layout.per_face_tan + ti; }
  int u_face_curl_dof(int f, int ti) const { return off_face_curl + f * layout.per_face_curl + ti; }
  int u_interior_dof(int t, int ti) const { return off_interior + t * layout.interior + ti; }

  int w_vertex_dof(int v) const { return v; }
  int w_edge_dof(int e, int s) const { return w_off_edge + e * w_nodes_per_edge + s; }
  int w_face_dof(int f) const { return w_off_face + f; }

  /// Global ids of an element's U dofs in the LocalElement dof order.
  std::vector<int> cell_dofs_U(const Mesh& mesh, int t) const;
  /// Global ids of an element's W nodes in the LagrangeElement node order.
  std::vector<int> cell_dofs_W(const Mesh& mesh, int t) const;
};

DofMap number_dofs(const Mesh& mesh, int k);

/// Numbering for the curl-image space V_h (used by the interpolation module).
struct VDofMap {
  int k = 1;
  int num_faces = 0, num_tets = 0;
  VDofLayout layout{1};
  int n_V = 0;
  int off_face_tan = 0, off_interior = 0;

  int v_face_normal_dof(int f, int ti) const { return f * layout.per_face_normal + ti; }
  int v_face_tan_dof(int f, int ti) const { return off_face_tan + f * layout.per_face_tan + ti; }
  int v_interior_dof(int t, int ti) const { return off_interior + t * layout.interior + ti; }

  std::vector<int> cell_dofs_V(const Mesh& mesh, int t) const;
};

VDofMap number_V_dofs(const Mesh& mesh, int k);

/// Essential boundary data for the saddle problem.
struct BoundaryCondition {
  enum class Kind { Homogeneous, Interpolated } kind = Kind::Homogeneous;
  const AnalyticField* exact = nullptr;  // required for Interpolated
};

/// Assembled mixed system
///   [ A  B^T ] [u]   [F]
///   [ B  0   ] [p] = [G]
/// with essential rows/columns replaced by identity (A) or zeroed (B) and the
/// boundary values folded into the right-hand sides.  W_laplacian and W_mass
/// support the solver's Schur path and the multiplier norm.
struct SparseSystem {
  int n_U = 0, n_W = 0;
  Eigen::SparseMatrix<double> A;  // n_U x n_U, symmetric
  Eigen::SparseMatrix<double> B;  // n_W x n_U
  Eigen::VectorXd F;              // n_U
  Eigen::VectorXd G;              // n_W
  std::vector<bool> u_constrained, w_constrained;
  Eigen::VectorXd u_bc_values;

  Eigen::SparseMatrix<double> W_laplacian;  // identity rows/cols at constrained W dofs
  Eigen::SparseMatrix<double> W_mass;       // raw mass matrix

  int size() const { return n_U + n_W; }
  /// y = [A B^T; B C] x with C the identity on constrained W rows.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd rhs() const;

  /// MatrixMarket coordinate dump of the full saddle operator.
  void write_matrix_market(std::ostream& os) const;
};

/// Assemble stiffness a_h(u,v) = (grad_h curl u, grad_h curl v), the mixed
/// form b(v,q) = (v, grad q), and the load (f, v).  `f` may be null (zero
/// load).  Element matrices reuse one computation per congruence class.
SparseSystem assemble_system(const Mesh& mesh, const ElementCache& cache, const DofMap& dofmap,
                             const AnalyticField* f, const BoundaryCondition& bc);

/// Injection matrix G with grad W_{h,0} contained in U_{h,0}: column q holds
/// the U-dof values of grad psi_q.  Boundary U rows and boundary W columns
/// are zero.  Throws if the pointwise injection residual exceeds tolerance.
Eigen::SparseMatrix<double> gradient_injection(const Mesh& mesh, const ElementCache& cache,
                                               const DofMap& dofmap);

/// U-dof values of the essential boundary data: zero, or the dof functionals
/// of the exact solution (edge/face-tangent moments of u, curl-face moments
/// of curl u) on boundary entities.
Eigen::VectorXd boundary_dof_values(const Mesh& mesh, const ElementCache& cache,
                                    const DofMap& dofmap, const BoundaryCondition& bc);

}  // namespace quadcurl
