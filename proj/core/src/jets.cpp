#include "quadcurl/jets.hpp"

#include <cmath>
#include <stdexcept>

namespace quadcurl {

namespace {

// Exponent table and index lookup for the 35 order-4 trivariate monomials.
struct Jet3Tables {
  std::array<std::array<int, 3>, kJet3Size> exp;
  // index by (a,b,c) packed as a*25+b*5+c
  std::array<int, 125> index;

  Jet3Tables() {
    MonomialBasis basis(3, kMaxJetOrder);
    for (int i = 0; i < kJet3Size; ++i) exp[i] = basis.exponent(i);
    index.fill(-1);
    for (int i = 0; i < kJet3Size; ++i)
      index[exp[i][0] * 25 + exp[i][1] * 5 + exp[i][2]] = i;
  }
  int idx(int a, int b, int c) const { return index[a * 25 + b * 5 + c]; }
};

const Jet3Tables& tables() {
  static Jet3Tables t;
  return t;
}

// Offsets of the degree blocks in the graded ordering: degree q occupies
// [block[q], block[q+1]).
constexpr int kBlock[6] = {0, 1, 4, 10, 20, 35};

inline double factorial(int n) {
  static const double f[5] = {1, 1, 2, 6, 24};
  return f[n];
}

}  // namespace

Jet1 Jet1::constant(double v, int order) {
  Jet1 j;
  j.order = order;
  j.c[0] = v;
  return j;
}

Jet1 Jet1::variable(double x0, int order) {
  Jet1 j;
  j.order = order;
  j.c[0] = x0;
  if (order >= 1) j.c[1] = 1.0;
  return j;
}

Jet1 Jet1::sin_wave(double w, double phi, double x0, int order) {
  Jet1 j;
  j.order = order;
  const double t = w * x0 + phi;
  const double s = std::sin(t), co = std::cos(t);
  const double d[4] = {s, co, -s, -co};  // cycle of derivatives of sin
  double wp = 1.0;
  for (int m = 0; m <= order; ++m) {
    j.c[m] = d[m % 4] * wp / factorial(m);
    wp *= w;
  }
  return j;
}

Jet1 Jet1::cos_wave(double w, double phi, double x0, int order) {
  return sin_wave(w, phi + M_PI / 2.0, x0, order);
}

Jet1 Jet1::poly(const double* a, int npoly, double x0, int order) {
  // Horner on jets would be fine; with tiny sizes just accumulate powers.
  Jet1 x = variable(x0, order);
  Jet1 r = constant(npoly > 0 ? a[0] : 0.0, order);
  Jet1 p = constant(1.0, order);
  for (int k = 1; k < npoly; ++k) {
    p = p * x;
    r = r + p * a[k];
  }
  return r;
}

Jet1 Jet1::operator*(const Jet1& o) const {
  Jet1 r;
  r.order = order;
  for (int m = 0; m <= order; ++m) {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += c[i] * o.c[m - i];
    r.c[m] = s;
  }
  return r;
}

Jet1 Jet1::operator+(const Jet1& o) const {
  Jet1 r;
  r.order = order;
  for (int m = 0; m <= order; ++m) r.c[m] = c[m] + o.c[m];
  return r;
}

Jet1 Jet1::operator*(double s) const {
  Jet1 r = *this;
  for (double& v : r.c) v *= s;
  return r;
}

Jet3 Jet3::constant(double v, int order) {
  Jet3 j;
  j.order = order;
  j.c[0] = v;
  return j;
}

Jet3 Jet3::variable(const Eigen::Vector3d& p, int axis, int order) {
  Jet3 j;
  j.order = order;
  j.c[0] = p[axis];
  if (order >= 1) j.c[1 + axis] = 1.0;  // block of degree 1 is x, y, z
  return j;
}

Jet3 Jet3::separable(const Jet1& fx, const Jet1& gy, const Jet1& hz, int order) {
  const auto& T = tables();
  Jet3 j;
  j.order = order;
  const int n = kBlock[order + 1];
  for (int i = 0; i < n; ++i) {
    const auto& e = T.exp[i];
    j.c[i] = fx.c[e[0]] * gy.c[e[1]] * hz.c[e[2]];
  }
  return j;
}

double Jet3::derivative(int a, int b, int cc) const {
  const auto& T = tables();
  return c[T.idx(a, b, cc)] * factorial(a) * factorial(b) * factorial(cc);
}

Jet3 Jet3::operator+(const Jet3& o) const {
  Jet3 r;
  r.order = order;
  const int n = kBlock[order + 1];
  for (int i = 0; i < n; ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

Jet3 Jet3::operator-(const Jet3& o) const {
  Jet3 r;
  r.order = order;
  const int n = kBlock[order + 1];
  for (int i = 0; i < n; ++i) r.c[i] = c[i] - o.c[i];
  return r;
}

Jet3& Jet3::operator+=(const Jet3& o) {
  const int n = kBlock[order + 1];
  for (int i = 0; i < n; ++i) c[i] += o.c[i];
  return *this;
}

Jet3 Jet3::operator*(double s) const {
  Jet3 r = *this;
  for (double& v : r.c) v *= s;
  return r;
}

Jet3 Jet3::operator*(const Jet3& o) const {
  const auto& T = tables();
  Jet3 r;
  r.order = order;
  for (int qa = 0; qa <= order; ++qa) {
    for (int i = kBlock[qa]; i < kBlock[qa + 1]; ++i) {
      const double ci = c[i];
      if (ci == 0.0) continue;
      const auto& ea = T.exp[i];
      const int qbmax = order - qa;
      for (int j = 0; j < kBlock[qbmax + 1]; ++j) {
        const double cj = o.c[j];
        if (cj == 0.0) continue;
        const auto& eb = T.exp[j];
        r.c[T.idx(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])] += ci * cj;
      }
    }
  }
  return r;
}

Jet3 Jet3::partial(int axis) const {
  if (order == 0) throw std::logic_error("Jet3::partial: order-0 jet has no derivatives");
  const auto& T = tables();
  Jet3 r;
  r.order = order - 1;
  for (int i = 0; i < kBlock[order + 1]; ++i) {
    if (c[i] == 0.0 || T.exp[i][axis] == 0) continue;
    auto e = T.exp[i];
    const int p = e[axis];
    e[axis] -= 1;
    r.c[T.idx(e[0], e[1], e[2])] = c[i] * p;
  }
  return r;
}

namespace {
// sin/cos composed with a jet: Taylor-expand around the jet's value and
// substitute the zero-constant remainder.
Jet3 compose_trig(const Jet3& g, bool is_sin) {
  const double a0 = g.c[0];
  Jet3 gh = g;
  gh.c[0] = 0.0;
  const double s = std::sin(a0), co = std::cos(a0);
  // derivative cycle at a0
  const double dsin[5] = {s, co, -s, -co, s};
  const double dcos[5] = {co, -s, -co, s, co};
  const double* d = is_sin ? dsin : dcos;
  Jet3 r = Jet3::constant(d[0], g.order);
  Jet3 p = Jet3::constant(1.0, g.order);
  for (int m = 1; m <= g.order; ++m) {
    p = p * gh;
    r += p * (d[m] / factorial(m));
  }
  return r;
}
}  // namespace

Jet3 Jet3::sin() const { return compose_trig(*this, true); }
Jet3 Jet3::cos() const { return compose_trig(*this, false); }

}  // namespace quadcurl
