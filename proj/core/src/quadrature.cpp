#include "quadcurl/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace quadcurl {

namespace {

struct Gauss1D {
  std::vector<double> nodes;    // on [0,1]
  std::vector<double> weights;  // for weight function (1-t)^alpha on [0,1]
};

// Gauss--Jacobi rule for weight (1-t)^alpha on [0,1] via Golub--Welsch.
// Recurrence coefficients are those of Jacobi polynomials P^(alpha,0) on
// [-1,1]; nodes/weights are then mapped with t = (1+x)/2.
Gauss1D gauss_jacobi(int npoints, int alpha) {
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int n = 0; n < npoints; ++n) {
    const double s = 2 * n + a + b;
    double diag;
    if (n == 0 && a + b == 0.0)
      diag = 0.0;
    else
      diag = (b * b - a * a) / (s * (s + 2));
    J(n, n) = diag;
    if (n + 1 < npoints) {
      const double n1 = n + 1;
      const double t = 2 * n1 + a + b;
      const double num = 4 * n1 * (n1 + a) * (n1 + b) * (n1 + a + b);
      const double den = t * t * (t + 1) * (t - 1);
      const double off = std::sqrt(num / den);
      J(n, n + 1) = off;
      J(n + 1, n) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  // mu0 = int_{-1}^{1} (1-x)^a dx = 2^{a+1}/(a+1)
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  Gauss1D g;
  g.nodes.resize(npoints);
  g.weights.resize(npoints);
  for (int i = 0; i < npoints; ++i) {
    const double x = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    g.nodes[i] = 0.5 * (1.0 + x);
    // map weight: dx = 2 dt and (1-x)^a = 2^a (1-t)^a
    g.weights[i] = mu0 * v0 * v0 / std::pow(2.0, a + 1.0);
  }
  return g;
}

}  // namespace

QuadratureRule make_rule(int dimension, int degree) {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("make_rule: dimension must be 1, 2, or 3");
  if (degree < 0 || degree > 14)
    throw std::invalid_argument("make_rule: degree out of range (supported 0..14)");

  const int m = degree / 2 + 1;  // m-point Gauss is exact to degree 2m-1 >= degree

  QuadratureRule rule;
  rule.dimension = dimension;
  rule.degree = degree;

  if (dimension == 1) {
    Gauss1D g = gauss_jacobi(m, 0);
    for (int i = 0; i < m; ++i) {
      const double x = g.nodes[i];
      rule.points.push_back({1.0 - x, x, 0.0, 0.0});
      rule.weights.push_back(g.weights[i]);
    }
  } else if (dimension == 2) {
    Gauss1D g1 = gauss_jacobi(m, 1);
    Gauss1D g0 = gauss_jacobi(m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double x = g1.nodes[i];
        const double y = g0.nodes[j] * (1.0 - x);
        rule.points.push_back({1.0 - x - y, x, y, 0.0});
        rule.weights.push_back(g1.weights[i] * g0.weights[j]);
      }
  } else {
    Gauss1D g2 = gauss_jacobi(m, 2);
    Gauss1D g1 = gauss_jacobi(m, 1);
    Gauss1D g0 = gauss_jacobi(m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double x = g2.nodes[i];
          const double y = g1.nodes[j] * (1.0 - x);
          const double z = g0.nodes[k] * (1.0 - g2.nodes[i]) * (1.0 - g1.nodes[j]);
          rule.points.push_back({1.0 - x - y - z, x, y, z});
          rule.weights.push_back(g2.weights[i] * g1.weights[j] * g0.weights[k]);
        }
  }
  return rule;
}

const QuadratureRule& cached_rule(int dimension, int degree) {
  static const std::vector<std::vector<QuadratureRule>> all = [] {
    std::vector<std::vector<QuadratureRule>> v(4);
    for (int d = 1; d <= 3; ++d) {
      v[d].reserve(15);
      for (int q = 0; q <= 14; ++q) v[d].push_back(make_rule(d, q));
    }
    return v;
  }();
  if (dimension < 1 || dimension > 3 || degree < 0 || degree > 14)
    throw std::invalid_argument("cached_rule: degree out of range (supported 0..14)");
  return all[dimension][degree];
}

double integrate_monomial(int simplex_dimension, const std::vector<int>& exponents) {
  if (simplex_dimension < 1 || simplex_dimension > 3)
    throw std::invalid_argument("integrate_monomial: dimension must be 1, 2, or 3");
  if (static_cast<int>(exponents.size()) != simplex_dimension + 1)
    throw std::invalid_argument("integrate_monomial: need dimension+1 exponents");
  // int_S prod lambda_i^{a_i} = |S| d! prod a_i! / (|a| + d)!
  // Evaluate as a product of ratios to stay in double range.
  double value = reference_simplex_measure(simplex_dimension);
  int total = 0;
  for (int a : exponents) {
    if (a < 0) throw std::invalid_argument("integrate_monomial: negative exponent");
    total += a;
  }
  // d! / (|a|+d)! = 1 / ((d+1)(d+2)...(d+|a|))
  for (int i = 1; i <= total; ++i) value /= (simplex_dimension + i);
  for (int a : exponents)
    for (int i = 2; i <= a; ++i) value *= i;
  return value;
}

std::vector<double> eval_monomials(const MonomialBasis& basis, const std::array<double, 3>& point) {
  std::vector<double> values;
  basis.eval(point, values);
  return values;
}

void eval_monomials(const MonomialBasis& basis, const std::array<double, 3>& point,
                    std::vector<double>& values, std::vector<double>& gradients) {
  basis.eval(point, values, gradients);
}

}  // namespace quadcurl
