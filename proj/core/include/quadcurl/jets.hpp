#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

#include "quadcurl/monomials.hpp"

namespace quadcurl {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kJet3Size = 35;  // monomial_count(3, 4)

/// Univariate truncated Taylor jet: f(x0+d) = sum_m c[m] d^m, m <= order.
/// c[m] is the scaled derivative f^(m)(x0)/m!.
struct Jet1 {
  int order = kMaxJetOrder;
  std::array<double, kMaxJetOrder + 1> c{};

  static Jet1 constant(double v, int order);
  /// Seed for the variable itself at x0.
  static Jet1 variable(double x0, int order);
  /// Jet of sin(w*x + phi) at x0 (closed-form derivatives).
  static Jet1 sin_wave(double w, double phi, double x0, int order);
  /// Jet of cos(w*x + phi) at x0.
  static Jet1 cos_wave(double w, double phi, double x0, int order);
  /// Jet of a univariate polynomial sum_k a_k x^k at x0.
  static Jet1 poly(const double* a, int npoly, double x0, int order);

  Jet1 operator*(const Jet1& o) const;
  Jet1 operator+(const Jet1& o) const;
  Jet1 operator*(double s) const;
};

/// Trivariate truncated Taylor jet of total order <= 4 (35 coefficients in
/// the shared graded monomial ordering).  c[alpha] = D^alpha f / alpha!.
struct Jet3 {
  int order = kMaxJetOrder;
  std::array<double, kJet3Size> c{};

  static Jet3 constant(double v, int order);
  static Jet3 variable(const Eigen::Vector3d& p, int axis, int order);
  /// Outer product of three univariate jets in x, y, z: for separable
  /// f(x)g(y)h(z) this is exact and much cheaper than generic products.
  static Jet3 separable(const Jet1& fx, const Jet1& gy, const Jet1& hz, int order);

  double value() const { return c[0]; }
  /// Derivative D^alpha f recovered from the stored scaled coefficient.
  double derivative(int a, int b, int cc) const;

  Jet3 operator+(const Jet3& o) const;
  Jet3 operator-(const Jet3& o) const;
  Jet3 operator*(const Jet3& o) const;
  Jet3 operator*(double s) const;
  Jet3& operator+=(const Jet3& o);

  /// Jet of the partial derivative along `axis`; result order is one lower.
  Jet3 partial(int axis) const;

  Jet3 sin() const;
  Jet3 cos() const;
};

/// 3-vector of trivariate jets with the vector calculus needed for
/// curl^m evaluation.
struct JetVec3 {
  std::array<Jet3, 3> comp;

  JetVec3 curl() const {
    JetVec3 r;
    r.comp[0] = comp[2].partial(1) - comp[1].partial(2);
    r.comp[1] = comp[0].partial(2) - comp[2].partial(0);
    r.comp[2] = comp[1].partial(0) - comp[0].partial(1);
    return r;
  }
  Jet3 divergence() const {
    Jet3 d = comp[0].partial(0);
    d += comp[1].partial(1);
    d += comp[2].partial(2);
    return d;
  }
  Eigen::Vector3d value() const {
    return {comp[0].value(), comp[1].value(), comp[2].value()};
  }
  /// Jacobian of the vector field: row i = gradient of component i.
  Eigen::Matrix3d jacobian() const {
    Eigen::Matrix3d J;
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 3; ++d) J(i, d) = comp[i].partial(d).value();
    return J;
  }
};

}  // namespace quadcurl
