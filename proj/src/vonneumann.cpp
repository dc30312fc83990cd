#include "psimoyal/vonneumann.hpp"

#include <cmath>

namespace psimoyal {

namespace {

const complex I(0.0, 1.0);

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

void ModeSet::validate() const {
  if (energies.empty() || energies.size() != coeffs.size())
    throw ValidationError("mode set needs matching, non-empty energy and coefficient lists");
  if (!(hbar2 > 0.0) || !std::isfinite(hbar2)) throw ValidationError("hbar2 must be positive");
  for (std::size_t i = 0; i < energies.size(); ++i)
    if (!std::isfinite(std::abs(energies[i])) || !std::isfinite(std::abs(coeffs[i])))
      throw ValidationError("mode " + std::to_string(i) + " is not finite");
}

std::vector<complex> coefficients_at(const ModeSet& modes, double t) {
  modes.validate();
  std::vector<complex> c(modes.coeffs.size());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = modes.coeffs[n] * std::exp(-I * modes.energies[n] * t / modes.hbar2);
  return c;
}

DensityMatrix density_matrix_at(const ModeSet& modes, double t) {
  const auto c = coefficients_at(modes, t);
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = c[static_cast<std::size_t>(i)];
  return {v * v.adjoint(), t};
}

Eigen::MatrixXcd rho_time_derivative(const ModeSet& modes, double t) {
  auto rho = density_matrix_at(modes, t).matrix;
  for (Eigen::Index k = 0; k < rho.rows(); ++k)
    for (Eigen::Index n = 0; n < rho.cols(); ++n)
      rho(k, n) *= (I / modes.hbar2) *
                   (std::conj(modes.energies[static_cast<std::size_t>(n)]) - modes.energies[static_cast<std::size_t>(k)]);
  return rho;
}

VonNeumannResidual von_neumann_residual(const ModeSet& modes, double t, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  const auto exact = rho_time_derivative(modes, t);
  const auto rho = density_matrix_at(modes, t).matrix;
  const auto n = static_cast<Eigen::Index>(modes.energies.size());
  Eigen::VectorXcd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = modes.energies[static_cast<std::size_t>(i)];
  const Eigen::MatrixXcd h = e.asDiagonal();
  const Eigen::MatrixXcd hbar = e.conjugate().asDiagonal();
  const Eigen::MatrixXcd rhs = (I / modes.hbar2) * (rho * hbar - h * rho);

  const auto plus = density_matrix_at(modes, t + dt).matrix;
  const auto minus = density_matrix_at(modes, t - dt).matrix;
  const Eigen::MatrixXcd fd = (plus - minus) / (2.0 * dt);

  VonNeumannResidual r;
  r.commutator = max_abs(exact - rhs);
  r.fd_absolute = max_abs(exact - fd);
  const double scale = max_abs(exact);
  r.fd_relative = scale > 0.0 ? r.fd_absolute / scale : r.fd_absolute;
  return r;
}

double hermitian_defect(const Eigen::MatrixXcd& rho) { return max_abs(rho - rho.adjoint()); }

double rank_one_defect(const Eigen::MatrixXcd& rho) { return max_abs(rho * rho - rho.trace() * rho); }

}  // namespace psimoyal
