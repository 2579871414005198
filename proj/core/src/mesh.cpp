#include "quadcurl/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace quadcurl {

namespace {

double signed_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c, const Eigen::Vector3d& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

constexpr int kLocalEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

void finish_mesh(Mesh& mesh) {
  // collect edges and faces with deterministic (sorted-key) ids
  std::map<std::array<int, 2>, int> edge_ids;
  std::map<std::array<int, 3>, int> face_ids;
  for (const auto& tet : mesh.tets) {
    for (const auto& le : kLocalEdges) {
      std::array<int, 2> key{tet.v[le[0]], tet.v[le[1]]};
      std::sort(key.begin(), key.end());
      edge_ids.emplace(key, 0);
    }
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> key;
      int n = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) key[n++] = tet.v[j];
      std::sort(key.begin(), key.end());
      face_ids.emplace(key, 0);
    }
  }
  {
    int id = 0;
    for (auto& kv : edge_ids) kv.second = id++;
    id = 0;
    for (auto& kv : face_ids) kv.second = id++;
  }

  mesh.edges.resize(edge_ids.size());
  for (const auto& [key, id] : edge_ids) {
    Mesh::Edge& e = mesh.edges[id];
    e.v = key;
    const Eigen::Vector3d a = mesh.vertices[key[0]], b = mesh.vertices[key[1]];
    e.length = (b - a).norm();
    e.tangent = (b - a) / e.length;
    e.midpoint = 0.5 * (a + b);
  }

  mesh.faces.resize(face_ids.size());
  for (const auto& [key, id] : face_ids) {
    Mesh::Face& f = mesh.faces[id];
    f.v = key;
    const Eigen::Vector3d a = mesh.vertices[key[0]], b = mesh.vertices[key[1]],
                          c = mesh.vertices[key[2]];
    Eigen::Vector3d nn = (b - a).cross(c - a);
    f.area = 0.5 * nn.norm();
    f.normal = nn.normalized();
    f.t1 = (b - a).normalized();
    f.t2 = f.normal.cross(f.t1);
    f.centroid = (a + b + c) / 3.0;
    f.diameter = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
    f.edges = {edge_ids.at({key[0], key[1]}), edge_ids.at({key[0], key[2]}),
               edge_ids.at({key[1], key[2]})};
  }

  for (int t = 0; t < mesh.num_tets(); ++t) {
    Mesh::Tet& tet = mesh.tets[t];
    const Eigen::Vector3d p0 = mesh.vertices[tet.v[0]], p1 = mesh.vertices[tet.v[1]],
                          p2 = mesh.vertices[tet.v[2]], p3 = mesh.vertices[tet.v[3]];
    tet.volume = signed_volume(p0, p1, p2, p3);
    if (tet.volume <= 0.0) throw std::logic_error("mesh: non-positive tet volume");
    tet.centroid = 0.25 * (p0 + p1 + p2 + p3);
    tet.diameter = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        tet.diameter = std::max(tet.diameter,
                                (mesh.vertices[tet.v[i]] - mesh.vertices[tet.v[j]]).norm());

    // barycentric gradients: lambda_i affine, lambda_i(v_j) = delta_ij
    Eigen::Matrix3d J;
    J.col(0) = p1 - p0;
    J.col(1) = p2 - p0;
    J.col(2) = p3 - p0;
    const Eigen::Matrix3d Jinv = J.inverse();
    for (int i = 1; i < 4; ++i) {
      tet.grad_lambda[i] = Jinv.row(i - 1).transpose();
      tet.lambda0[i] = -tet.grad_lambda[i].dot(p0);
    }
    tet.grad_lambda[0] = -(tet.grad_lambda[1] + tet.grad_lambda[2] + tet.grad_lambda[3]);
    tet.lambda0[0] = 1.0 - tet.lambda0[1] - tet.lambda0[2] - tet.lambda0[3];

    for (int le = 0; le < 6; ++le) {
      std::array<int, 2> key{tet.v[kLocalEdges[le][0]], tet.v[kLocalEdges[le][1]]};
      const bool flipped = key[0] > key[1];
      if (flipped) std::swap(key[0], key[1]);
      tet.edges[le] = edge_ids.at(key);
      tet.edge_sign[le] = flipped ? -1 : 1;
    }
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> key;
      int n = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) key[n++] = tet.v[j];
      std::sort(key.begin(), key.end());
      const int fid = face_ids.at(key);
      tet.faces[i] = fid;
      Mesh::Face& f = mesh.faces[fid];
      if (f.tets[0] < 0)
        f.tets[0] = t;
      else if (f.tets[1] < 0)
        f.tets[1] = t;
      else
        throw std::logic_error("mesh: face with more than two tets");
      tet.face_outward[i] = f.normal.dot(f.centroid - tet.centroid) > 0.0;
    }
  }

  for (auto& f : mesh.faces) f.boundary = f.tets[1] < 0;
  mesh.vertex_boundary.assign(mesh.vertices.size(), false);
  for (auto& e : mesh.edges) e.boundary = false;
  for (const auto& f : mesh.faces)
    if (f.boundary) {
      for (int v : f.v) mesh.vertex_boundary[v] = true;
      for (int e : f.edges) mesh.edges[e].boundary = true;
    }
}

}  // namespace

double Mesh::mesh_size() const {
  double h = 0.0;
  for (const auto& t : tets) h = std::max(h, t.diameter);
  return h;
}

std::array<double, 4> Mesh::barycentric(int t, const Eigen::Vector3d& p) const {
  const Tet& tet = tets[t];
  std::array<double, 4> l;
  for (int i = 0; i < 4; ++i) l[i] = tet.lambda0[i] + tet.grad_lambda[i].dot(p);
  return l;
}

void Mesh::bubble_eval(int t, const Eigen::Vector3d& p, double& b_K,
                       std::array<double, 4>& b_F, std::array<double, 4>& a_F) const {
  const auto l = barycentric(t, p);
  b_K = l[0] * l[1] * l[2] * l[3];
  for (int f = 0; f < 4; ++f) {
    // local face f is opposite vertex f, so lambda_F = lambda_f
    b_F[f] = 1.0;
    for (int i = 0; i < 4; ++i)
      if (i != f) b_F[f] *= l[i];
    a_F[f] = tets[t].grad_lambda[f].norm();
  }
}

void Mesh::dump(std::ostream& os) const {
  os << "vertices " << num_vertices() << "\n";
  for (const auto& v : vertices) os << v[0] << " " << v[1] << " " << v[2] << "\n";
  os << "tets " << num_tets() << "\n";
  for (const auto& t : tets) os << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << t.v[3] << "\n";
}

Mesh build_cube_mesh(int N) {
  if (N < 1) throw std::invalid_argument("build_cube_mesh: N must be >= 1");
  Mesh mesh;
  mesh.cube_divisions = N;
  const int n1 = N + 1;
  auto vid = [n1](int i, int j, int k) { return i + n1 * (j + n1 * k); };

  mesh.vertices.reserve(static_cast<std::size_t>(n1) * n1 * n1);
  for (int k = 0; k < n1; ++k)
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n1; ++i)
        mesh.vertices.emplace_back(double(i) / N, double(j) / N, double(k) / N);

  // six permutations of the axes; each gives the Kuhn tet
  // {0, e_p0, e_p0+e_p1, (1,1,1)} within a subcube
  constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tets.reserve(static_cast<std::size_t>(6) * N * N * N);
  for (int ck = 0; ck < N; ++ck)
    for (int cj = 0; cj < N; ++cj)
      for (int ci = 0; ci < N; ++ci)
        for (int p = 0; p < 6; ++p) {
          int d[3] = {0, 0, 0};
          std::array<int, 4> corners;
          corners[0] = vid(ci, cj, ck);
          d[kPerms[p][0]] = 1;
          corners[1] = vid(ci + d[0], cj + d[1], ck + d[2]);
          d[kPerms[p][1]] = 1;
          corners[2] = vid(ci + d[0], cj + d[1], ck + d[2]);
          corners[3] = vid(ci + 1, cj + 1, ck + 1);
          Mesh::Tet tet;
          tet.v = corners;
          if (signed_volume(mesh.vertices[corners[0]], mesh.vertices[corners[1]],
                            mesh.vertices[corners[2]], mesh.vertices[corners[3]]) < 0.0)
            std::swap(tet.v[1], tet.v[2]);
          tet.congruence_class = p;
          mesh.tets.push_back(tet);
        }
  mesh.num_congruence_classes = 6;
  finish_mesh(mesh);
  return mesh;
}

Mesh make_single_tet_mesh(const std::array<Eigen::Vector3d, 4>& verts) {
  Mesh mesh;
  mesh.vertices.assign(verts.begin(), verts.end());
  Mesh::Tet tet;
  tet.v = {0, 1, 2, 3};
  if (signed_volume(verts[0], verts[1], verts[2], verts[3]) < 0.0) std::swap(tet.v[1], tet.v[2]);
  mesh.tets.push_back(tet);
  finish_mesh(mesh);
  return mesh;
}

std::array<Eigen::Vector3d, 4> random_tet(std::uint64_t& state) {
  auto next = [&state]() {
    // xorshift64*; plenty for test geometry
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return double((state * 0x2545F4914F6CDD1DULL) >> 11) / 9007199254740992.0;
  };
  while (true) {
    std::array<Eigen::Vector3d, 4> v;
    for (auto& p : v) p = Eigen::Vector3d(next(), next(), next());
    double diam = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) diam = std::max(diam, (v[i] - v[j]).norm());
    const double vol = std::abs(signed_volume(v[0], v[1], v[2], v[3]));
    if (vol > 0.02 * diam * diam * diam) return v;
  }
}

}  // namespace quadcurl
