#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "quadcurl/monomials.hpp"

namespace quadcurl {

/// Dense trivariate polynomial, coefficients over the graded monomial
/// ordering of MonomialBasis(3, degree).  Degrees stay small (<= 14), so a
/// dense representation is the simple and fast choice.
class Poly3 {
public:
  Poly3() : degree_(0), coeffs_(1, 0.0) {}
  explicit Poly3(int degree)
      : degree_(degree), coeffs_(static_cast<std::size_t>(monomial_count(3, degree)), 0.0) {}

  static Poly3 constant(double c);
  /// Affine polynomial c + g.x
  static Poly3 affine(double c, const Eigen::Vector3d& g);

  int degree() const { return degree_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  double& at(int a, int b, int c) { return coeffs_[monomial_index_3d(a, b, c)]; }
  double at(int a, int b, int c) const {
    const int i = monomial_index_3d(a, b, c);
    return i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0;
  }

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(const Poly3& o) const;
  Poly3 operator*(double s) const;
  Poly3& operator+=(const Poly3& o);

  /// Partial derivative with respect to variable d (0,1,2).
  Poly3 derivative(int d) const;

  double eval(const Eigen::Vector3d& p) const;
  Eigen::Vector3d gradient(const Eigen::Vector3d& p) const;

  /// Largest coefficient magnitude.
  double max_abs_coeff() const;

private:
  int degree_;
  std::vector<double> coeffs_;
};

/// Vector-valued trivariate polynomial (3 components).
struct VecPoly3 {
  std::array<Poly3, 3> comp;

  VecPoly3() = default;
  explicit VecPoly3(int degree) : comp{Poly3(degree), Poly3(degree), Poly3(degree)} {}

  VecPoly3 curl() const;
  Poly3 divergence() const;
  Eigen::Vector3d eval(const Eigen::Vector3d& p) const {
    return {comp[0].eval(p), comp[1].eval(p), comp[2].eval(p)};
  }
  VecPoly3 operator*(const Poly3& s) const {
    VecPoly3 r;
    for (int c = 0; c < 3; ++c) r.comp[c] = comp[c] * s;
    return r;
  }
  VecPoly3 operator+(const VecPoly3& o) const {
    VecPoly3 r;
    for (int c = 0; c < 3; ++c) r.comp[c] = comp[c] + o.comp[c];
    return r;
  }
};

}  // namespace quadcurl
