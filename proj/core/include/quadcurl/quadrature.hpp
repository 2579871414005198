#pragma once

#include <array>
#include <vector>

#include "quadcurl/monomials.hpp"

namespace quadcurl {

/// Quadrature rule on the reference simplex of the given dimension:
/// edge [0,1] (measure 1), triangle x,y>=0, x+y<=1 (measure 1/2),
/// tetrahedron x,y,z>=0, x+y+z<=1 (measure 1/6).
///
/// Points are stored as barycentric coordinates (dimension+1 per point,
/// lambda_0 = 1 - sum of cartesian coordinates first) and weights are scaled
/// so they sum to the reference measure.
struct QuadratureRule {
  int dimension = 0;
  int degree = 0;  // every polynomial up to this total degree is integrated exactly
  std::vector<std::array<double, 4>> points;  // barycentric, unused entries zero
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }

  /// Cartesian coordinates of point i on the reference simplex
  /// (x_d = lambda_{d+1}).
  std::array<double, 3> reference_point(int i) const {
    return {points[i][1], dimension > 1 ? points[i][2] : 0.0,
            dimension > 2 ? points[i][3] : 0.0};
  }
};

inline double reference_simplex_measure(int dimension) {
  return dimension == 1 ? 1.0 : (dimension == 2 ? 0.5 : 1.0 / 6.0);
}

/// Conical-product (collapsed-coordinate Gauss--Jacobi) rule exact to
/// `degree` on the reference simplex.  Supported range: 1 <= dimension <= 3,
/// 0 <= degree <= 14; anything else throws ("degree out of range" rather
/// than a silent downgrade).
QuadratureRule make_rule(int dimension, int degree);

/// Shared immutable rule instance (all supported rules are built on first
/// use; safe for concurrent readers afterwards).
const QuadratureRule& cached_rule(int dimension, int degree);

/// Exact integral over the reference simplex of the barycentric monomial
/// prod_i lambda_i^{alpha_i}:  (prod alpha_i!) * d! * |S| / (|alpha| + d)!.
/// `exponents` holds dimension+1 entries.
double integrate_monomial(int simplex_dimension, const std::vector<int>& exponents);

/// Values (and optionally gradients) of all monomials of `basis` at `point`.
/// Thin wrappers so callers do not need to know the layout.
std::vector<double> eval_monomials(const MonomialBasis& basis, const std::array<double, 3>& point);
void eval_monomials(const MonomialBasis& basis, const std::array<double, 3>& point,
                    std::vector<double>& values, std::vector<double>& gradients);

}  // namespace quadcurl
