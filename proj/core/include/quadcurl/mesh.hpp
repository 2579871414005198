#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <vector>

namespace quadcurl {

/// Tetrahedral mesh with globally oriented edges and faces.
///
/// Orientation contract (shared degrees of freedom depend on it):
///  - edge tangent t_e points from the lower to the higher vertex id;
///  - face vertex triples are sorted ascending and the unit normal n_F is
///    (v1-v0) x (v2-v0) normalized (right-hand rule on the sorted triple);
///  - the face frame is t1 = normalized(v1-v0), t2 = n_F x t1.
/// Both tets incident to a face therefore see identical t_e, n_F, t1, t2.
struct Mesh {
  struct Edge {
    std::array<int, 2> v;      // sorted vertex ids
    Eigen::Vector3d tangent;   // unit, v[0] -> v[1]
    Eigen::Vector3d midpoint;
    double length = 0.0;
    bool boundary = false;
  };

  struct Face {
    std::array<int, 3> v;      // sorted vertex ids
    Eigen::Vector3d normal;    // unit, right-hand rule on sorted triple
    Eigen::Vector3d t1, t2;    // tangential frame
    Eigen::Vector3d centroid;
    double area = 0.0;
    double diameter = 0.0;
    std::array<int, 3> edges{};  // edges (v0,v1), (v0,v2), (v1,v2)
    std::array<int, 2> tets{-1, -1};
    bool boundary = false;
  };

  struct Tet {
    std::array<int, 4> v;            // positive orientation
    std::array<int, 6> edges{};      // local pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
    std::array<int, 6> edge_sign{};  // +1 if global tangent runs local-low -> local-high
    std::array<int, 4> faces{};      // face i opposite vertex i
    std::array<bool, 4> face_outward{};  // true if global n_F is outward here
    Eigen::Vector3d centroid;
    double volume = 0.0;
    double diameter = 0.0;                  // h_K
    std::array<Eigen::Vector3d, 4> grad_lambda;  // constant barycentric gradients
    std::array<double, 4> lambda0;               // lambda_i(x) = lambda0_i + grad_lambda_i . x
    int congruence_class = -1;  // >= 0 when this tet is a translate of a class representative
  };

  std::vector<Eigen::Vector3d> vertices;
  std::vector<Tet> tets;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<bool> vertex_boundary;
  int cube_divisions = 0;  // N for the structured cube mesh, 0 otherwise
  int num_congruence_classes = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }

  /// max_K h_K
  double mesh_size() const;

  /// Barycentric coordinates of a point with respect to tet t.
  std::array<double, 4> barycentric(int t, const Eigen::Vector3d& p) const;

  /// Element bubble b_K, face bubbles b_F (local face order) and the
  /// barycentric gradient magnitudes a_F = |grad lambda_F| at a point.
  void bubble_eval(int t, const Eigen::Vector3d& p, double& b_K,
                   std::array<double, 4>& b_F, std::array<double, 4>& a_F) const;

  /// Plain-text dump: `vertices <n>` block then `tets <n>` block, 0-based ids.
  void dump(std::ostream& os) const;
};

/// Structured mesh of the unit cube: N^3 subcubes, each split into the six
/// Kuhn tetrahedra sharing the main diagonal.  h = sqrt(3)/N.
Mesh build_cube_mesh(int N);

/// Single-tet mesh around four given vertices (reordered to positive
/// orientation if needed); used by the per-element verification paths.
Mesh make_single_tet_mesh(const std::array<Eigen::Vector3d, 4>& verts);

/// Uniformly random non-degenerate tet in the unit cube (volume bounded away
/// from zero), deterministic in the generator state.
std::array<Eigen::Vector3d, 4> random_tet(std::uint64_t& state);

}  // namespace quadcurl
