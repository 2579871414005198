#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "quadcurl/mesh.hpp"
#include "quadcurl/polynomial.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl {

/// Kinds of degree-of-freedom functionals.  Entity indices are local to the
/// element; every functional is defined through the *global* orientation data
/// of the mesh entity (tangent, normal, face frame, test monomials around the
/// entity center), so the two elements sharing an entity apply the identical
/// functional.
enum class DofKind {
  EdgeTangent,      // <u.t_e, s^j>_e,           s arc-length/|e| centered at midpoint
  FaceTangent,      // <u x n_F, t_d m(xi,eta)>_F
  CurlFace,         // <(curl u) x n_F, t_d m>_F
  Interior,         // (u, e_c m(X))_K,          m monomial of P^{k-2} in local coords
  FaceNormal,       // <v.n_F, m(xi,eta)>_F      (curl-image element only)
  InteriorNedelec,  // (v, rho)_K, rho in N^{k-2}(K)
};

struct DofDescriptor {
  DofKind kind;
  int local_entity;  // local edge 0..5, local face 0..3, or -1
  int test_index;
};

/// Geometry needed to map a physical point into element-local scaled
/// coordinates X = (x - centroid)/h.
struct ElemGeom {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  double h = 1.0;
};

/// Shape basis over element-local scaled coordinates.  Constructing nodal
/// bases per physical element (rather than pulling back a reference element)
/// keeps the curl-face moments exactly dual: a covariant Piola map would not
/// commute with them.
struct ShapeBasis {
  std::vector<VecPoly3> functions;
  int degree = 0;
};

class LocalElement {
public:
  int k = 1;
  int rep_tet = -1;  // tet this element was built on
  ShapeBasis shapes;
  std::vector<DofDescriptor> dofs;
  Eigen::MatrixXd dof_matrix;      // D_ij = dof_i(shape_j)
  Eigen::MatrixXd dof_inverse;     // D^{-1}
  double condition = 0.0;          // 1-norm condition estimate of D
  std::vector<VecPoly3> nodal;     // nodal basis, dual to `dofs`

  int size() const { return static_cast<int>(dofs.size()); }

  /// Values (n x 3), curls (n x 3) and grad-curls (n x 9, entry 3a+b holding
  /// d_b (curl u)_a) of all nodal functions at a physical point.  Null
  /// pointers skip the corresponding output.  Derivatives are exact
  /// (coefficient differentiation with the 1/h chain factors).
  void eval(const ElemGeom& geom, const Eigen::Vector3d& x, Eigen::MatrixXd* values,
            Eigen::MatrixXd* curls, Eigen::MatrixXd* grad_curls) const;

private:
  friend LocalElement build_U(int, const Mesh&, int);
  friend LocalElement build_V(int, const Mesh&, int);
  void finalize();  // differentiate nodal functions, build fast-eval tables

  // per-component nodal coefficient matrices for batched evaluation
  Eigen::MatrixXd val_coeffs_[3];   // n x M(deg)
  Eigen::MatrixXd curl_coeffs_[3];  // n x M(deg-1), local-coordinate curl
  Eigen::MatrixXd gc_coeffs_[9];    // n x M(deg-2), local grad of local curl

public:
  /// Batched evaluation at many points (columns of `local_points` are X
  /// coordinates).  Outputs are n x (3*npts) / n x (9*npts) with the
  /// component index varying fastest; physical scaling included via `h`.
  void eval_batch(double h, const Eigen::Matrix3Xd& local_points, Eigen::MatrixXd* values,
                  Eigen::MatrixXd* curls, Eigen::MatrixXd* grad_curls) const;
};

/// Local Nedelec space of the first kind in scaled coordinates:
/// P^k(K)^3 + {homogeneous v of degree k+1 : v.X = 0}.  The homogeneous part
/// is the SVD null space of the coefficient map v -> v.X.  Valid for k >= 0
/// (k = 0 is the Whitney space a + b x X).
const ShapeBasis& nedelec_basis(int k);

/// Dimension (k+1)(k+3)(k+4)/2 of the Nedelec space for k >= 1, 6 for k = 0.
int nedelec_dimension(int k);

/// Basis of Q_F^{k-1}(K) for a local face: tangential polynomial fields
/// t1 p + t2 r with p, r of degree <= k-1, (b_K b_F)-orthogonal to the same
/// span of degree <= k-2.  Computed as a weighted-Gram null space.
std::vector<VecPoly3> build_QF(int k, const Mesh& mesh, int tet, int local_face);

/// The enriched H(curl) element U^k(K) = N^k(K) + b_K sum_F b_F Q_F^{k-1}(K)
/// with edge, face-tangent, curl-face and interior moments.
LocalElement build_U(int k, const Mesh& mesh, int tet);

/// The curl-image element V^k(K) = P^k(K)^3 + curl(b_K Q^{k-1}(K)) with
/// face-normal, face-tangent and interior Nedelec moments.
LocalElement build_V(int k, const Mesh& mesh, int tet);

/// Number of element dofs per entity for U^k.
struct UDofLayout {
  int k;
  int per_edge;      // k+1
  int per_face_tan;  // 2 * dim P_{k-1}(F)
  int per_face_curl; // same
  int interior;      // 3 * dim P_{k-2}(K)
  explicit UDofLayout(int k);
  int total() const { return 6 * per_edge + 4 * (per_face_tan + per_face_curl) + interior; }
};

struct VDofLayout {
  int k;
  int per_face_normal;  // dim P_k(F)
  int per_face_tan;     // 2 * dim P_{k-1}(F)
  int interior;         // dim N^{k-2}(K)
  explicit VDofLayout(int k);
  int total() const { return 4 * (per_face_normal + per_face_tan) + interior; }
};

/// Continuous Lagrange element of degree k+1 (the multiplier space).  Nodes
/// are vertices, then equispaced interior edge nodes ordered along the global
/// edge direction, then face centroids (degree 3).  Degree <= 3 supported.
class LagrangeElement {
public:
  int degree = 2;
  int rep_tet = -1;
  struct Node {
    int kind;          // 0 vertex, 1 edge, 2 face
    int local_entity;
    int sub_index;     // position along the global edge direction
    Eigen::Vector3d position;
  };
  std::vector<Node> nodes;
  std::vector<Poly3> nodal;  // scalar nodal basis in local coordinates

  int size() const { return static_cast<int>(nodes.size()); }

  /// Values (n) and physical gradients (n x 3) at a point.
  void eval(const ElemGeom& geom, const Eigen::Vector3d& x, Eigen::VectorXd* values,
            Eigen::MatrixXd* gradients) const;
};

LagrangeElement build_lagrange(int degree, const Mesh& mesh, int tet);

/// Per-mesh element cache.  Structured cube meshes reuse one element per
/// congruence class (the six Kuhn tets repeat by translation, and the global
/// orientation conventions translate with them).
class ElementCache {
public:
  ElementCache(const Mesh& mesh, int k);

  const Mesh& mesh() const { return *mesh_; }
  int order() const { return k_; }

  const LocalElement& U(int tet) const;
  const LocalElement& V(int tet) const;
  const LagrangeElement& W(int tet) const;
  ElemGeom geom(int tet) const {
    return {mesh_->tets[tet].centroid, mesh_->tets[tet].diameter};
  }

private:
  const Mesh* mesh_;
  int k_;
  mutable std::vector<std::unique_ptr<LocalElement>> u_cache_, v_cache_;
  mutable std::vector<std::unique_ptr<LagrangeElement>> w_cache_;
  int slot(int tet) const;
};

/// Apply every dof functional of `elem` to an arbitrary vector polynomial
/// given in the element's local coordinates (used by gradient injection and
/// the dof-matrix construction itself).
Eigen::VectorXd apply_dofs_to_poly(const LocalElement& elem, const Mesh& mesh, int tet,
                                   const VecPoly3& poly);

class AnalyticField;

/// Apply every dof functional to an analytic field; entity quadrature of
/// degree 2k+8.
Eigen::VectorXd apply_dofs_to_field(const LocalElement& elem, const Mesh& mesh, int tet,
                                    const AnalyticField& field);

}  // namespace quadcurl
