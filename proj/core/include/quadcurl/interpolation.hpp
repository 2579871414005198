#pragma once

#include <Eigen/Core>

#include "quadcurl/analytic_fields.hpp"
#include "quadcurl/assembly.hpp"
#include "quadcurl/local_spaces.hpp"
#include "quadcurl/mesh.hpp"

namespace quadcurl {

/// Global dof coefficients of a piecewise-polynomial field in U_h, with
/// element-local evaluation through the dual bases.
class DiscreteUField {
public:
  DiscreteUField(const Mesh& mesh, const ElementCache& cache, const DofMap& dm,
                 Eigen::VectorXd coeffs)
      : mesh_(&mesh), cache_(&cache), dm_(&dm), coeffs_(std::move(coeffs)) {}

  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  Eigen::Vector3d value(int tet, const Eigen::Vector3d& x) const;
  Eigen::Vector3d curl(int tet, const Eigen::Vector3d& x) const;
  Eigen::Matrix3d grad_curl(int tet, const Eigen::Vector3d& x) const;

private:
  const Mesh* mesh_;
  const ElementCache* cache_;
  const DofMap* dm_;
  Eigen::VectorXd coeffs_;
};

/// Same for the curl-image space V_h.
class DiscreteVField {
public:
  DiscreteVField(const Mesh& mesh, const ElementCache& cache, const VDofMap& dm,
                 Eigen::VectorXd coeffs)
      : mesh_(&mesh), cache_(&cache), dm_(&dm), coeffs_(std::move(coeffs)) {}

  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  Eigen::Vector3d value(int tet, const Eigen::Vector3d& x) const;
  double divergence(int tet, const Eigen::Vector3d& x) const;

private:
  const Mesh* mesh_;
  const ElementCache* cache_;
  const VDofMap* dm_;
  Eigen::VectorXd coeffs_;
};

/// Dof interpolation into U_h: every global dof value is the dof functional
/// applied to the field by entity quadrature of degree 2k+8.  Shared-entity
/// dofs are computed once, so the result is single-valued by construction.
Eigen::VectorXd interpolate_U(const AnalyticField& field, const Mesh& mesh,
                              const ElementCache& cache, const DofMap& dm);

/// Dof interpolation into V_h (normal, tangential and interior moments).
Eigen::VectorXd interpolate_V(const AnalyticField& field, const Mesh& mesh,
                              const ElementCache& cache, const VDofMap& dm);

/// Commuting-diagram discrepancy: max over sampled interior points of
/// |curl(Pi_U u) - Pi_V(curl u)| relative to the field scale.
double commuting_check(const AnalyticField& field, const Mesh& mesh, const ElementCache& cache,
                       const DofMap& dm, const VDofMap& vdm, int points_per_tet = 20,
                       std::uint64_t seed = 42);

/// Max tangential jump |[[u_h x n]]| over sampled interior-face points,
/// relative to the field scale at the samples.
double max_tangential_jump(const DiscreteUField& u, const Mesh& mesh, const ElementCache& cache,
                           int points_per_face = 5, std::uint64_t seed = 42);

/// Max normalized curl jump moment <[[curl u_h]], chi>_F over interior faces,
/// chi running through {t1, t2, n} x P_{k-1}(F) monomials.
double max_curl_jump_moment(const DiscreteUField& u, const Mesh& mesh, const ElementCache& cache,
                            int k);

/// Max normal jump |[[v_h . n]]| of a V_h field over sampled interior-face
/// points (relative).
double max_normal_jump(const DiscreteVField& v, const Mesh& mesh, const ElementCache& cache,
                       int points_per_face = 5, std::uint64_t seed = 42);

}  // namespace quadcurl
