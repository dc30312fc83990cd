#include "psimoyal/ho_oracle.hpp"

#include <cmath>
#include <numbers>

namespace psimoyal {

namespace {

constexpr double pi = std::numbers::pi;

void require_ho(const PhysParams& p) {
  p.validate();
  if (!p.ho_consistent())
    throw ValidationError("oscillator closed forms need hbar2 = hbar*omega^2");
}

}  // namespace

PhysParams PhysParams::harmonic(double m, double hbar, double omega) {
  PhysParams p;
  p.m = m;
  p.hbar = hbar;
  p.omega = omega;
  p.hbar2 = hbar * omega * omega;
  p.omega2 = omega;
  p.e12 = p.hbar2 * p.omega2 / 2.0;
  p.validate();
  return p;
}

void PhysParams::validate() const {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!pos(m) || !pos(hbar) || !pos(hbar2) || !pos(omega))
    throw ValidationError("m, hbar, hbar2 and omega must be finite and positive");
  if (!std::isfinite(omega2) || !std::isfinite(e12))
    throw ValidationError("omega2 and e12 must be finite");
}

bool PhysParams::ho_consistent(double rel_tol) const {
  const double want = hbar * omega * omega;
  return std::abs(hbar2 - want) <= rel_tol * want;
}

complex psi12(double x, double v, double t, const PhysParams& p) {
  p.validate();
  const double w = p.omega;
  const double amp = std::sqrt(p.m / (pi * p.hbar));
  const double re = -(1.0 / (p.hbar * w)) * (p.m * v * v / 2.0 + p.m * w * w * x * x / 2.0);
  const double im = -(p.m * w * w * x * v / p.hbar2 + p.e12 * t / p.hbar2);
  return amp * std::exp(complex(re, im));
}

double potential_u12(double x, double v, const PhysParams& p) {
  return as_polynomial(p).value(x, v);
}

PolynomialPotential as_polynomial(const PhysParams& p) {
  require_ho(p);
  const double m = p.m, w = p.omega, h = p.hbar, h2 = p.hbar2;
  const double c00 = p.e12 - h2 * h2 / (2.0 * h * w);
  const double c02 = m * w * w * (1.0 + h2 * h2 / (2.0 * h * h * std::pow(w, 4)));
  const double c20 = -0.5 * m * std::pow(w, 4);
  return PolynomialPotential({{0, 0, c00}, {0, 2, c02}, {2, 0, c20}});
}

PolynomialPotential harmonic_u1(const PhysParams& p) {
  p.validate();
  return PolynomialPotential({{2, 0, 0.5 * p.m * p.omega * p.omega}});
}

double w1234_analytic(double x, double v, double vdot, double vddot, const PhysParams& p) {
  require_ho(p);
  const double w = p.omega, w2 = w * w;
  const double a = w2 * v - vddot;
  const double b = w2 * x + vdot;
  const double e = (v * v + w2 * x * x) + a * a / (w2 * w2) + b * b / w2;
  return std::exp(-(p.m / (p.hbar * w)) * e) / (pi * p.hbar2 * pi * p.hbar2);
}

double w123_analytic(double x, double v, double vdot, const PhysParams& p) {
  require_ho(p);
  const double w = p.omega, w2 = w * w;
  const double b = (w2 * x + vdot) / w;
  const double e = v * v + w2 * x * x + b * b;
  return std::sqrt(p.m / (pi * pi * pi * std::pow(p.hbar * w, 3))) * std::exp(-(p.m / (p.hbar * w)) * e);
}

double w124_analytic(double x, double v, double vddot, const PhysParams& p) {
  require_ho(p);
  const double w = p.omega, w2 = w * w;
  const double a = (vddot - w2 * v) / w2;
  const double e = v * v + w2 * x * x + a * a;
  return std::sqrt(p.m * w / (pi * pi * pi * std::pow(p.hbar2, 3))) * std::exp(-(p.m / (p.hbar * w)) * e);
}

double w12_analytic(double x, double v, const PhysParams& p) {
  require_ho(p);
  const double w = p.omega;
  return p.m / (pi * p.hbar) * std::exp(-(p.m / (p.hbar * w)) * (v * v + w * w * x * x));
}

GammaForm gamma_form(double x, double v, double vdot, double vddot, double omega) {
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
  const double w2 = omega * omega, w4 = w2 * w2;
  const double a = w2 * v - vddot;
  const double b = w2 * x + vdot;
  GammaForm g;
  g.value = v * v + w2 * x * x + a * a / w4 + b * b / w2;
  g.dx = 4.0 * w2 * x + 2.0 * vdot;
  g.dv = 4.0 * v - 2.0 * vddot / w2;
  g.dvdot = 2.0 * x + 2.0 * vdot / w2;
  g.dvddot = -2.0 * v / w2 + 2.0 * vddot / w4;
  return g;
}

double check_identity_b8(double x, double v, double vdot, double vddot, double omega) {
  const auto g = gamma_form(x, v, vdot, vddot, omega);
  const double w2 = omega * omega;
  return v * g.dx + vdot * g.dv + (vddot - 3.0 * w2 * v) * g.dvdot - w2 * w2 * x * g.dvddot;
}

std::string to_string(FluxKind k) {
  switch (k) {
    case FluxKind::velocity_12: return "vdot_12";
    case FluxKind::velocity_124: return "vdot_124";
    case FluxKind::accel_123: return "vddot_123";
    case FluxKind::accel_124: return "vddot_124";
    case FluxKind::accel_1234: return "vddot_1234";
  }
  return "?";
}

FluxKind parse_flux_kind(std::string_view s) {
  for (auto k : {FluxKind::velocity_12, FluxKind::velocity_124, FluxKind::accel_123,
                 FluxKind::accel_124, FluxKind::accel_1234})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown flux selector '" + std::string(s) + "'");
}

double mean_flux_analytic(FluxKind which, double x, double v, const PhysParams& p) {
  require_ho(p);
  const double w2 = p.omega * p.omega;
  switch (which) {
    case FluxKind::accel_123: return w2 * v;
    case FluxKind::accel_124:
    case FluxKind::accel_1234: return -w2 * w2 * x;
    case FluxKind::velocity_124:
    case FluxKind::velocity_12: return -w2 * x;
  }
  throw ValidationError("unknown flux selector");
}

RadiationPower radiation_power(double x, double v, const PhysParams& p, const PolynomialPotential& u1) {
  p.validate();
  if (!u1.is_velocity_independent())
    throw ValidationError("radiation power needs a velocity-independent potential");
  return {v * u1.derivative(1, 0, x, v), v * u1.derivative(2, 0, x, v) / p.m};
}

DerivativeSource ho_exact_derivatives(const PhysParams& p) {
  require_ho(p);
  return [p](std::span<const double> pt, std::span<const int> powers) {
    if (pt.size() != 4 || powers.size() != 4)
      throw ValidationError("exact oscillator derivatives are rank 4");
    int total = 0;
    for (int k : powers) total += k;
    const double w = w1234_analytic(pt[0], pt[1], pt[2], pt[3], p);
    if (total == 0) return w;
    if (total > 1) throw ValidationError("exact oscillator derivatives stop at first order");
    const auto g = gamma_form(pt[0], pt[1], pt[2], pt[3], p.omega);
    const double gq = powers[0] ? g.dx : powers[1] ? g.dv : powers[2] ? g.dvdot : g.dvddot;
    return -(p.m / (p.hbar * p.omega)) * w * gq;
  };
}

}  // namespace psimoyal
