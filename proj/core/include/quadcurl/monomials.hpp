#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace quadcurl {

/// binomial(n, k) as an exact 64-bit integer (small arguments only).
std::int64_t binomial(int n, int k);

/// Number of monomials in `dim` variables of total degree <= `degree`.
inline std::int64_t monomial_count(int dim, int degree) {
  return binomial(degree + dim, dim);
}

/// Ordered list of exponent multi-indices for polynomials in `dim` variables
/// (dim in {1,2,3}) of total degree <= `degree`.
///
/// Ordering: graded, degree ascending; within a degree block the first
/// exponent decreases, then the second, and so on.  For dim=3, degree=1 this
/// gives 1, x, y, z.  The ordering is a frozen contract: degree-of-freedom
/// matrices and stored shape-function coefficients depend on it.
class MonomialBasis {
public:
  MonomialBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::array<int, 3>& exponent(int i) const { return exponents_[i]; }
  const std::vector<std::array<int, 3>>& exponents() const { return exponents_; }

  /// Index of an exponent tuple in this ordering.  O(1), no search.
  int index(const std::array<int, 3>& alpha) const;

  /// Values of all monomials at `point` (only the first dim() coordinates of
  /// `point` are read), in basis order.
  void eval(const std::array<double, 3>& point, std::vector<double>& values) const;

  /// Values and gradients.  `gradients` is laid out [i*dim + d].
  void eval(const std::array<double, 3>& point, std::vector<double>& values,
            std::vector<double>& gradients) const;

private:
  int dim_;
  int degree_;
  std::vector<std::array<int, 3>> exponents_;
};

/// Index of a 3-variable exponent tuple in the graded ordering above.
int monomial_index_3d(int a, int b, int c);

}  // namespace quadcurl
