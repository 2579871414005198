#include "quadcurl/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace quadcurl {

namespace {
// Shared exponent tables per degree, built once.
const std::vector<std::array<int, 3>>& exponents_for(int degree) {
  static std::vector<MonomialBasis> cache = [] {
    std::vector<MonomialBasis> v;
    for (int d = 0; d <= 16; ++d) v.emplace_back(3, d);
    return v;
  }();
  return cache[degree].exponents();
}
}  // namespace

Poly3 Poly3::constant(double c) {
  Poly3 p(0);
  p.coeffs_[0] = c;
  return p;
}

Poly3 Poly3::affine(double c, const Eigen::Vector3d& g) {
  Poly3 p(1);
  p.coeffs_[0] = c;
  p.coeffs_[1] = g[0];
  p.coeffs_[2] = g[1];
  p.coeffs_[3] = g[2];
  return p;
}

Poly3 Poly3::operator+(const Poly3& o) const {
  const Poly3& hi = degree_ >= o.degree_ ? *this : o;
  const Poly3& lo = degree_ >= o.degree_ ? o : *this;
  Poly3 r = hi;
  for (std::size_t i = 0; i < lo.coeffs_.size(); ++i) r.coeffs_[i] += lo.coeffs_[i];
  return r;
}

Poly3& Poly3::operator+=(const Poly3& o) {
  *this = *this + o;
  return *this;
}

Poly3 Poly3::operator-(const Poly3& o) const { return *this + o * (-1.0); }

Poly3 Poly3::operator*(double s) const {
  Poly3 r = *this;
  for (double& c : r.coeffs_) c *= s;
  return r;
}

Poly3 Poly3::operator*(const Poly3& o) const {
  Poly3 r(degree_ + o.degree_);
  const auto& ea = exponents_for(degree_);
  const auto& eb = exponents_for(o.degree_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double ci = coeffs_[i];
    if (ci == 0.0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      const double cj = o.coeffs_[j];
      if (cj == 0.0) continue;
      r.coeffs_[monomial_index_3d(ea[i][0] + eb[j][0], ea[i][1] + eb[j][1],
                                  ea[i][2] + eb[j][2])] += ci * cj;
    }
  }
  return r;
}

Poly3 Poly3::derivative(int d) const {
  if (degree_ == 0) return Poly3(0);
  Poly3 r(degree_ - 1);
  const auto& ea = exponents_for(degree_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0 || ea[i][d] == 0) continue;
    std::array<int, 3> e = ea[i];
    const int p = e[d];
    e[d] -= 1;
    r.coeffs_[monomial_index_3d(e[0], e[1], e[2])] += p * coeffs_[i];
  }
  return r;
}

double Poly3::eval(const Eigen::Vector3d& p) const {
  const auto& ea = exponents_for(degree_);
  double pw[3][17];
  for (int d = 0; d < 3; ++d) {
    pw[d][0] = 1.0;
    for (int q = 1; q <= degree_; ++q) pw[d][q] = pw[d][q - 1] * p[d];
  }
  double v = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0.0) v += coeffs_[i] * pw[0][ea[i][0]] * pw[1][ea[i][1]] * pw[2][ea[i][2]];
  return v;
}

Eigen::Vector3d Poly3::gradient(const Eigen::Vector3d& p) const {
  return {derivative(0).eval(p), derivative(1).eval(p), derivative(2).eval(p)};
}

double Poly3::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

VecPoly3 VecPoly3::curl() const {
  VecPoly3 r;
  r.comp[0] = comp[2].derivative(1) - comp[1].derivative(2);
  r.comp[1] = comp[0].derivative(2) - comp[2].derivative(0);
  r.comp[2] = comp[1].derivative(0) - comp[0].derivative(1);
  return r;
}

Poly3 VecPoly3::divergence() const {
  return comp[0].derivative(0) + comp[1].derivative(1) + comp[2].derivative(2);
}

}  // namespace quadcurl
