#pragma once

#include <Eigen/Core>
#include <vector>

#include "quadcurl/mesh.hpp"
#include "quadcurl/quadrature.hpp"

namespace quadcurl {

/// Quadrature points mapped onto a physical mesh entity; weights carry the
/// physical measure (length, area, volume).
struct EntityQuad {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

EntityQuad edge_quadrature(const Mesh& mesh, int edge, int degree);
EntityQuad face_quadrature(const Mesh& mesh, int face, int degree);
EntityQuad tet_quadrature(const Mesh& mesh, int tet, int degree);

}  // namespace quadcurl
