#include "quadcurl/entity_quadrature.hpp"

namespace quadcurl {

EntityQuad edge_quadrature(const Mesh& mesh, int edge, int degree) {
  const QuadratureRule& rule = cached_rule(1, degree);
  const auto& e = mesh.edges[edge];
  const Eigen::Vector3d a = mesh.vertices[e.v[0]], b = mesh.vertices[e.v[1]];
  EntityQuad q;
  for (int i = 0; i < rule.size(); ++i) {
    q.points.push_back(rule.points[i][0] * a + rule.points[i][1] * b);
    q.weights.push_back(rule.weights[i] * e.length);
  }
  return q;
}

EntityQuad face_quadrature(const Mesh& mesh, int face, int degree) {
  const QuadratureRule& rule = cached_rule(2, degree);
  const auto& f = mesh.faces[face];
  const Eigen::Vector3d a = mesh.vertices[f.v[0]], b = mesh.vertices[f.v[1]],
                        c = mesh.vertices[f.v[2]];
  EntityQuad q;
  for (int i = 0; i < rule.size(); ++i) {
    q.points.push_back(rule.points[i][0] * a + rule.points[i][1] * b + rule.points[i][2] * c);
    q.weights.push_back(rule.weights[i] * 2.0 * f.area);
  }
  return q;
}

EntityQuad tet_quadrature(const Mesh& mesh, int tet, int degree) {
  const QuadratureRule& rule = cached_rule(3, degree);
  const auto& t = mesh.tets[tet];
  const Eigen::Vector3d a = mesh.vertices[t.v[0]], b = mesh.vertices[t.v[1]],
                        c = mesh.vertices[t.v[2]], d = mesh.vertices[t.v[3]];
  EntityQuad q;
  for (int i = 0; i < rule.size(); ++i) {
    q.points.push_back(rule.points[i][0] * a + rule.points[i][1] * b + rule.points[i][2] * c +
                       rule.points[i][3] * d);
    q.weights.push_back(rule.weights[i] * 6.0 * t.volume);
  }
  return q;
}

}  // namespace quadcurl
