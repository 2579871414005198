#include "quadcurl/analytic_fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace quadcurl {

Eigen::Vector3d curl_power(const AnalyticField& field, int m, const Eigen::Vector3d& p) {
  if (m < 1 || m > 4) throw std::invalid_argument("curl_power: m must be in 1..4");
  JetVec3 j = field.jets(p, m);
  for (int i = 0; i < m; ++i) j = j.curl();
  return j.value();
}

JetVec3 SeparableField::jets(const Eigen::Vector3d& p, int order) const {
  JetVec3 out;
  for (int c = 0; c < 3; ++c) {
    Jet3 acc = Jet3::constant(0.0, order);
    for (const SeparableTerm& term : components_[c]) {
      Jet1 f[3];
      for (int d = 0; d < 3; ++d) {
        f[d] = Jet1::constant(1.0, order);
        for (const Wave& w : term.factors[d]) f[d] = f[d] * Jet1::sin_wave(w.w, w.phi, p[d], order);
      }
      acc += Jet3::separable(f[0], f[1], f[2], order) * term.coeff;
    }
    out.comp[c] = acc;
  }
  return out;
}

namespace {

constexpr double kHalfPi = M_PI / 2.0;

std::vector<Wave> waves_sin_pow(double w, int p) {
  return std::vector<Wave>(p, Wave{w, 0.0});
}

std::vector<Wave> append_cos(std::vector<Wave> v, double w) {
  v.push_back(Wave{w, kHalfPi});
  return v;
}

std::shared_ptr<const AnalyticField> make_example1() {
  const double pi = M_PI;
  // u1 = sin(pi x)^3 sin(pi y)^2 cos(pi y) sin(pi z)^2 cos(pi z), cyclic in
  // u2, and u3 carries factor -2 so the field is divergence-free.
  std::array<std::vector<SeparableTerm>, 3> comps;
  {
    SeparableTerm t;
    t.coeff = 1.0;
    t.factors[0] = waves_sin_pow(pi, 3);
    t.factors[1] = append_cos(waves_sin_pow(pi, 2), pi);
    t.factors[2] = append_cos(waves_sin_pow(pi, 2), pi);
    comps[0].push_back(t);
  }
  {
    SeparableTerm t;
    t.coeff = 1.0;
    t.factors[1] = waves_sin_pow(pi, 3);
    t.factors[2] = append_cos(waves_sin_pow(pi, 2), pi);
    t.factors[0] = append_cos(waves_sin_pow(pi, 2), pi);
    comps[1].push_back(t);
  }
  {
    SeparableTerm t;
    t.coeff = -2.0;
    t.factors[2] = waves_sin_pow(pi, 3);
    t.factors[0] = append_cos(waves_sin_pow(pi, 2), pi);
    t.factors[1] = append_cos(waves_sin_pow(pi, 2), pi);
    comps[2].push_back(t);
  }
  return std::make_shared<SeparableField>("example1", std::move(comps));
}

std::shared_ptr<const AnalyticField> make_example2() {
  std::array<std::vector<SeparableTerm>, 3> comps;
  {
    SeparableTerm t;
    t.factors[1] = waves_sin_pow(1.0, 1);
    t.factors[2] = waves_sin_pow(1.0, 1);
    comps[0].push_back(t);
  }
  {
    SeparableTerm t;
    t.factors[2] = waves_sin_pow(1.0, 1);
    t.factors[0] = waves_sin_pow(1.0, 1);
    comps[1].push_back(t);
  }
  {
    SeparableTerm t;
    t.factors[0] = waves_sin_pow(1.0, 1);
    t.factors[1] = waves_sin_pow(1.0, 1);
    comps[2].push_back(t);
  }
  return std::make_shared<SeparableField>("example2", std::move(comps));
}

}  // namespace

std::shared_ptr<const AnalyticField> example_solution(int which) {
  if (which == 1) return make_example1();
  if (which == 2) return make_example2();
  throw std::invalid_argument("example_solution: which must be 1 or 2");
}

PolynomialField::PolynomialField(std::string name, VecPoly3 poly)
    : name_(std::move(name)), poly_(std::move(poly)) {
  MonomialBasis table(3, kMaxJetOrder);
  for (int c = 0; c < 3; ++c) {
    derivs_[c].reserve(table.size());
    for (int i = 0; i < table.size(); ++i) {
      const auto& e = table.exponent(i);
      Poly3 d = poly_.comp[c];
      for (int r = 0; r < e[0]; ++r) d = d.derivative(0);
      for (int r = 0; r < e[1]; ++r) d = d.derivative(1);
      for (int r = 0; r < e[2]; ++r) d = d.derivative(2);
      derivs_[c].push_back(d);
    }
  }
}

JetVec3 PolynomialField::jets(const Eigen::Vector3d& p, int order) const {
  static const MonomialBasis table(3, kMaxJetOrder);
  JetVec3 out;
  for (int c = 0; c < 3; ++c) {
    Jet3 j;
    j.order = order;
    for (int i = 0; i < table.size(); ++i) {
      const auto& e = table.exponent(i);
      if (e[0] + e[1] + e[2] > order) continue;
      double fact = 1.0;
      for (int d = 0; d < 3; ++d)
        for (int r = 2; r <= e[d]; ++r) fact *= r;
      j.c[i] = derivs_[c][i].eval(p) / fact;
    }
    out.comp[c] = j;
  }
  return out;
}

std::shared_ptr<const AnalyticField> random_trig_field(std::uint64_t seed, int terms) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(1, 2);
  std::uniform_int_distribution<int> phase(0, 1);
  std::array<std::vector<SeparableTerm>, 3> comps;
  for (int c = 0; c < 3; ++c)
    for (int t = 0; t < terms; ++t) {
      SeparableTerm term;
      term.coeff = amp(rng);
      for (int d = 0; d < 3; ++d)
        term.factors[d] = {Wave{static_cast<double>(freq(rng)), phase(rng) ? kHalfPi : 0.0}};
      comps[c].push_back(term);
    }
  return std::make_shared<SeparableField>("random_trig", std::move(comps));
}

namespace {

// 4th-order central difference of a callable along one axis.
template <typename F>
double central_diff(const F& f, const Eigen::Vector3d& p, int axis, double h) {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e[axis] = 1.0;
  return (f(p - 2 * h * e) - 8 * f(p - h * e) + 8 * f(p + h * e) - f(p + 2 * h * e)) / (12 * h);
}

double nested_fd(const AnalyticField& field, int component, std::array<int, 3> alpha,
                 const Eigen::Vector3d& p, double h) {
  int axis = -1;
  for (int d = 0; d < 3; ++d)
    if (alpha[d] > 0) {
      axis = d;
      break;
    }
  if (axis < 0) return field.value(p)[component];
  alpha[axis] -= 1;
  auto f = [&](const Eigen::Vector3d& q) { return nested_fd(field, component, alpha, q, h); };
  return central_diff(f, p, axis, h);
}

}  // namespace

double fd_oracle(const AnalyticField& field, int component, const std::array<int, 3>& alpha,
                 const Eigen::Vector3d& p, double step) {
  const int total = alpha[0] + alpha[1] + alpha[2];
  if (total < 0 || total > 4) throw std::invalid_argument("fd_oracle: order must be 0..4");
  if (total <= 2) return nested_fd(field, component, alpha, p, step);

  int axis = 0;
  for (int d = 0; d < 3; ++d)
    if (alpha[d] > 0) {
      axis = d;
      break;
    }
  std::array<int, 3> lower = alpha;
  lower[axis] -= 1;
  auto f = [&](const Eigen::Vector3d& q) {
    JetVec3 j = field.jets(q, total - 1);
    return j.comp[component].derivative(lower[0], lower[1], lower[2]);
  };
  return central_diff(f, p, axis, step);
}

}  // namespace quadcurl
