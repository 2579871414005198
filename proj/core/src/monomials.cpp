#include "quadcurl/monomials.hpp"

#include <cmath>
#include <stdexcept>

namespace quadcurl {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

MonomialBasis::MonomialBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("MonomialBasis: dim must be 1, 2, or 3");
  if (degree < 0) throw std::invalid_argument("MonomialBasis: negative degree");
  exponents_.reserve(static_cast<std::size_t>(monomial_count(dim, degree)));
  for (int q = 0; q <= degree; ++q) {
    if (dim == 1) {
      exponents_.push_back({q, 0, 0});
    } else if (dim == 2) {
      for (int a = q; a >= 0; --a) exponents_.push_back({a, q - a, 0});
    } else {
      for (int a = q; a >= 0; --a)
        for (int b = q - a; b >= 0; --b) exponents_.push_back({a, b, q - a - b});
    }
  }
}

int monomial_index_3d(int a, int b, int c) {
  const int q = a + b + c;
  const int m = q - a;
  // offset of the degree-q block, then position with a descending, b descending
  return static_cast<int>(binomial(q + 2, 3)) + m * (m + 1) / 2 + (m - b);
}

int MonomialBasis::index(const std::array<int, 3>& alpha) const {
  const int a = alpha[0], b = alpha[1], c = alpha[2];
  if (dim_ == 1) return a;
  if (dim_ == 2) {
    const int q = a + b;
    return q * (q + 1) / 2 + (q - a);
  }
  return monomial_index_3d(a, b, c);
}

void MonomialBasis::eval(const std::array<double, 3>& point, std::vector<double>& values) const {
  values.resize(exponents_.size());
  double pw[3][32];
  for (int d = 0; d < dim_; ++d) {
    pw[d][0] = 1.0;
    for (int p = 1; p <= degree_; ++p) pw[d][p] = pw[d][p - 1] * point[d];
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto& e = exponents_[i];
    double v = pw[0][e[0]];
    if (dim_ > 1) v *= pw[1][e[1]];
    if (dim_ > 2) v *= pw[2][e[2]];
    values[i] = v;
  }
}

void MonomialBasis::eval(const std::array<double, 3>& point, std::vector<double>& values,
                         std::vector<double>& gradients) const {
  eval(point, values);
  gradients.assign(exponents_.size() * dim_, 0.0);
  double pw[3][32];
  for (int d = 0; d < dim_; ++d) {
    pw[d][0] = 1.0;
    for (int p = 1; p <= degree_; ++p) pw[d][p] = pw[d][p - 1] * point[d];
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto& e = exponents_[i];
    for (int d = 0; d < dim_; ++d) {
      if (e[d] == 0) continue;
      double g = e[d] * pw[d][e[d] - 1];
      for (int o = 0; o < dim_; ++o)
        if (o != d) g *= pw[o][e[o]];
      gradients[i * dim_ + d] = g;
    }
  }
}

}  // namespace quadcurl
