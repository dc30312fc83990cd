#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace psimoyal {

struct PotentialTerm {
  int a = 0;  // power of x
  int b = 0;  // power of v
  double coeff = 0.0;
};

/// U(x, v) = sum of coeff * x^a * v^b. Terms are kept merged and sorted by
/// (a, b); zero coefficients are dropped.
class PolynomialPotential {
 public:
  PolynomialPotential() = default;
  explicit PolynomialPotential(std::vector<PotentialTerm> terms);

  const std::vector<PotentialTerm>& terms() const { return terms_; }
  int degree() const;
  bool is_velocity_independent() const;

  double value(double x, double v) const;
  /// Exact d^nx/dx^nx d^nv/dv^nv U at (x, v).
  double derivative(int nx, int nv, double x, double v) const;
  /// True if the (nx, nv) partial vanishes identically.
  bool derivative_vanishes(int nx, int nv) const;

  PolynomialPotential scaled(double factor) const;

  static PolynomialPotential parse(std::string_view text);
  std::string to_text() const;

 private:
  std::vector<PotentialTerm> terms_;
};

}  // namespace psimoyal
