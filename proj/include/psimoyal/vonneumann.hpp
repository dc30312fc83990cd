#pragma once

#include <Eigen/Dense>
#include <vector>

#include "psimoyal/fields.hpp"

namespace psimoyal {

struct ModeSet {
  std::vector<complex> energies;
  std::vector<complex> coeffs;
  double hbar2 = 1.0;

  void validate() const;
};

struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  double t = 0.0;
};

/// C_n(t) = c_n exp(-i E_n t / hbar2).
std::vector<complex> coefficients_at(const ModeSet& modes, double t);

/// rho_kn = conj(C_n) C_k.
DensityMatrix density_matrix_at(const ModeSet& modes, double t);

/// Closed-form d rho_kn / dt = (i/hbar2)(conj(E_n) - E_k) rho_kn.
Eigen::MatrixXcd rho_time_derivative(const ModeSet& modes, double t);

struct VonNeumannResidual {
  double commutator = 0.0;   // max |closed form - (i/hbar2)(rho conj(H) - H rho)|
  double fd_absolute = 0.0;  // max |closed form - centred difference|
  double fd_relative = 0.0;  // fd_absolute / max |closed form|
};

VonNeumannResidual von_neumann_residual(const ModeSet& modes, double t, double dt = 1e-4);

/// max |rho - rho^H|.
double hermitian_defect(const Eigen::MatrixXcd& rho);

/// max |rho^2 - tr(rho) rho|.
double rank_one_defect(const Eigen::MatrixXcd& rho);

}  // namespace psimoyal
