#pragma once

#include <string>
#include <string_view>

#include "psimoyal/fields.hpp"
#include "psimoyal/potential.hpp"

namespace psimoyal {

/// Physical constants of the second-rank oscillator.
struct PhysParams {
  double m = 1.0;
  double hbar = 1.0;
  double hbar2 = 1.0;
  double omega = 1.0;
  double omega2 = 1.0;
  double e12 = 0.5;

  /// hbar2 = hbar*omega^2, omega2 = omega, e12 = hbar2*omega2/2.
  static PhysParams harmonic(double m = 1.0, double hbar = 1.0, double omega = 1.0);

  void validate() const;
  bool ho_consistent(double rel_tol = 1e-12) const;
};

complex psi12(double x, double v, double t, const PhysParams& p);

double potential_u12(double x, double v, const PhysParams& p);
PolynomialPotential as_polynomial(const PhysParams& p);

/// U1 = m omega^2 x^2 / 2.
PolynomialPotential harmonic_u1(const PhysParams& p);

double w1234_analytic(double x, double v, double vdot, double vddot, const PhysParams& p);
double w123_analytic(double x, double v, double vdot, const PhysParams& p);
double w124_analytic(double x, double v, double vddot, const PhysParams& p);
double w12_analytic(double x, double v, const PhysParams& p);

struct GammaForm {
  double value = 0.0;
  double dx = 0.0;
  double dv = 0.0;
  double dvdot = 0.0;
  double dvddot = 0.0;
};

GammaForm gamma_form(double x, double v, double vdot, double vddot, double omega);

double check_identity_b8(double x, double v, double vdot, double vddot, double omega);

enum class FluxKind { velocity_12, velocity_124, accel_123, accel_124, accel_1234 };

std::string to_string(FluxKind k);
FluxKind parse_flux_kind(std::string_view s);

double mean_flux_analytic(FluxKind which, double x, double v, const PhysParams& p);

struct RadiationPower {
  double n = 0.0;
  double dn_dx_over_m = 0.0;
};

RadiationPower radiation_power(double x, double v, const PhysParams& p, const PolynomialPotential& u1);

/// Value and first partials of the analytic rank-4 function through the
/// gamma chain rule. Higher orders are rejected.
DerivativeSource ho_exact_derivatives(const PhysParams& p);

}  // namespace psimoyal
