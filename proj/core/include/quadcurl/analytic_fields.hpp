#pragma once

#include <Eigen/Core>
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "quadcurl/jets.hpp"
#include "quadcurl/polynomial.hpp"

namespace quadcurl {

/// Closed-form vector field evaluable together with all mixed partial
/// derivatives up to order 4 via truncated Taylor jets.  Order 4 is what the
/// quad-curl right-hand side f = curl^4 u consumes.
class AnalyticField {
public:
  virtual ~AnalyticField() = default;
  virtual std::string name() const = 0;

  /// Jets of the three components at p, truncated at `order` (0..4).
  virtual JetVec3 jets(const Eigen::Vector3d& p, int order) const = 0;

  Eigen::Vector3d value(const Eigen::Vector3d& p) const { return jets(p, 0).value(); }
  Eigen::Vector3d curl(const Eigen::Vector3d& p) const { return jets(p, 1).curl().value(); }
  /// G(i,j) = d_j (curl u)_i.
  Eigen::Matrix3d grad_curl(const Eigen::Vector3d& p) const {
    return jets(p, 2).curl().jacobian();
  }
  double divergence(const Eigen::Vector3d& p) const { return jets(p, 1).divergence().value(); }
};

/// (curl)^m u at a point, 1 <= m <= 4.  The right-hand side of the quad-curl
/// problem is curl_power(u, 4, .).
Eigen::Vector3d curl_power(const AnalyticField& field, int m, const Eigen::Vector3d& p);

/// The paper's two manufactured solutions on the unit cube:
///  1: the trig field with u x n = 0 and curl u = 0 on the whole boundary,
///  2: u = (sin y sin z, sin z sin x, sin x sin y) (nonhomogeneous traces).
std::shared_ptr<const AnalyticField> example_solution(int which);

/// Finite-difference oracle for D^alpha of a field component, |alpha| <= 4.
///
/// Orders 0-2 use nested 4th-order central differences of plain field values
/// (step 1e-4).  Orders 3-4 apply one 4th-order difference to the jet-based
/// derivative of order |alpha|-1: a pure 3rd/4th difference at step 1e-4 sits
/// below the double-precision noise floor (eps/h^3 and eps/h^4), so each jet
/// order is instead checked against the previously validated one.
double fd_oracle(const AnalyticField& field, int component, const std::array<int, 3>& alpha,
                 const Eigen::Vector3d& p, double step = 1e-4);

// --- concrete field families -------------------------------------------------

/// One trig wave sin(w*t + phi); cosines are phase-shifted sines.
struct Wave {
  double w = 0.0;
  double phi = 0.0;
};

/// coeff * Fx(x) * Gy(y) * Hz(z), with each univariate factor a product of
/// waves (empty factor = 1).  Separability keeps jet products univariate.
struct SeparableTerm {
  double coeff = 1.0;
  std::array<std::vector<Wave>, 3> factors;
};

class SeparableField final : public AnalyticField {
public:
  SeparableField(std::string name, std::array<std::vector<SeparableTerm>, 3> components)
      : name_(std::move(name)), components_(std::move(components)) {}

  std::string name() const override { return name_; }
  JetVec3 jets(const Eigen::Vector3d& p, int order) const override;

private:
  std::string name_;
  std::array<std::vector<SeparableTerm>, 3> components_;
};

/// Vector polynomial as an analytic field (exact-reproduction tests).
class PolynomialField final : public AnalyticField {
public:
  PolynomialField(std::string name, VecPoly3 poly);

  std::string name() const override { return name_; }
  JetVec3 jets(const Eigen::Vector3d& p, int order) const override;

private:
  std::string name_;
  VecPoly3 poly_;
  // derivative polynomials indexed per component by the order-4 monomial table
  std::array<std::vector<Poly3>, 3> derivs_;
};

/// Smooth random trig field (seeded, reproducible); low frequencies so that
/// interpolation-based identities are well resolved on coarse meshes.
std::shared_ptr<const AnalyticField> random_trig_field(std::uint64_t seed, int terms = 2);

/// (curl)^m of a base field, itself usable as a field.  Requesting jets of
/// order q consumes base jets of order q+m, so q+m <= 4.
class CurlPowerField final : public AnalyticField {
public:
  CurlPowerField(std::shared_ptr<const AnalyticField> base, int m) : base_(std::move(base)), m_(m) {}
  std::string name() const override { return base_->name() + "_curl" + std::to_string(m_); }
  JetVec3 jets(const Eigen::Vector3d& p, int order) const override {
    JetVec3 j = base_->jets(p, order + m_);
    for (int i = 0; i < m_; ++i) j = j.curl();
    return j;
  }

private:
  std::shared_ptr<const AnalyticField> base_;
  int m_;
};

}  // namespace quadcurl
