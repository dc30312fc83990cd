#include <doctest.h>

#include "support.hpp"

using namespace psimoyal;
using testing::pi;

namespace {
const PhysParams unit = PhysParams::harmonic();

// Riemann sum of f over [-hw, hw) with n nodes.
template <class F>
double line_integral(F&& f, double hw = 12.0, int n = 512) {
  const double h = 2 * hw / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(-hw + i * h);
  return s * h;
}
}  // namespace

TEST_CASE("parameters") {
  auto p = PhysParams::harmonic(2.0, 0.5, 1.5);
  CHECK(p.hbar2 == doctest::Approx(0.5 * 1.5 * 1.5));
  CHECK(p.omega2 == 1.5);
  CHECK(p.e12 == doctest::Approx(p.hbar2 * 1.5 / 2));
  CHECK(p.ho_consistent());
  p.hbar2 *= 1.01;
  CHECK_FALSE(p.ho_consistent());
  CHECK_THROWS_AS(PhysParams::harmonic(0.0), ValidationError);
  CHECK_THROWS_AS(PhysParams::harmonic(1.0, -1.0), ValidationError);
}

TEST_CASE("wave function values") {
  CHECK(psi12(0, 0, 0, unit).real() == doctest::Approx(1 / std::sqrt(pi)).epsilon(1e-15));
  CHECK(psi12(0, 0, 0, unit).imag() == 0.0);
  const complex expect = std::exp(-1.0) / std::sqrt(pi) * complex(std::cos(1.0), -std::sin(1.0));
  CHECK(std::abs(psi12(1, 1, 0, unit) - expect) < 1e-15);
  CHECK(std::abs(psi12(1, 1, 0, unit)) == doctest::Approx(0.2075537).epsilon(1e-7));
  // stationary up to phase
  CHECK(std::abs(psi12(0.3, -0.4, 7.0, unit)) == doctest::Approx(std::abs(psi12(0.3, -0.4, 0.0, unit))));
}

TEST_CASE("wave function normalisation for non-unit parameters") {
  for (auto p : {unit, PhysParams::harmonic(2.0, 0.5, 1.5), PhysParams::harmonic(0.7, 1.3, 0.8)}) {
    const double total = line_integral([&](double x) {
      return line_integral([&](double v) { return std::norm(psi12(x, v, 0.0, p)); }, 12.0, 256);
    }, 12.0, 256);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("oscillator potential") {
  CHECK(potential_u12(0, 0, unit) == 0.0);
  auto p = PhysParams::harmonic(2.0, 0.5, 1.5);
  auto u = as_polynomial(p);
  const double w = p.omega;
  CHECK(u.derivative(0, 2, 0, 0) / 2 == doctest::Approx(1.5 * p.m * w * w));
  CHECK(u.derivative(2, 0, 0, 0) / 2 == doctest::Approx(-0.5 * p.m * std::pow(w, 4)));
  // (1/m) dU/dv = 3 w^2 v and (1/m) dU/dx = -w^4 x
  CHECK(u.derivative(0, 1, 0.3, 0.7) / p.m == doctest::Approx(3 * w * w * 0.7));
  CHECK(u.derivative(1, 0, 0.3, 0.7) / p.m == doctest::Approx(-std::pow(w, 4) * 0.3));
  CHECK(u.degree() == 2);
  auto u1 = harmonic_u1(p);
  CHECK(u1.is_velocity_independent());
  CHECK(u1.value(2.0, 9.0) == doctest::Approx(p.m * w * w * 2.0));
}

TEST_CASE("closed forms at known points") {
  CHECK(w1234_analytic(0, 0, 0, 0, unit) == doctest::Approx(1 / (pi * pi)).epsilon(1e-15));
  CHECK(w1234_analytic(0, 0, 0, 0, unit) == doctest::Approx(0.1013212).epsilon(1e-7));
  CHECK(w1234_analytic(0, 1, 0, 1, unit) == doctest::Approx(std::exp(-1.0) / (pi * pi)).epsilon(1e-15));
  CHECK(w1234_analytic(0, 1, 0, 1, unit) == doctest::Approx(0.0372740).epsilon(1e-6));
  CHECK(w123_analytic(0, 0, 0, unit) == doctest::Approx(std::pow(pi, -1.5)).epsilon(1e-15));
  CHECK(w123_analytic(0, 0, 0, unit) == doctest::Approx(0.1795871).epsilon(1e-7));
  CHECK(w12_analytic(0, 0, unit) == doctest::Approx(1 / pi).epsilon(1e-15));
  CHECK(w12_analytic(0.4, -1.1, unit) == doctest::Approx(std::norm(psi12(0.4, -1.1, 0, unit))).epsilon(1e-14));
}

TEST_CASE("closed forms need hbar2 = hbar omega^2") {
  auto p = unit;
  p.hbar2 = 2.0;
  CHECK_THROWS_AS(w1234_analytic(0, 0, 0, 0, p), ValidationError);
  CHECK_THROWS_AS(w123_analytic(0, 0, 0, p), ValidationError);
  CHECK_THROWS_AS(w124_analytic(0, 0, 0, p), ValidationError);
  CHECK_THROWS_AS(w12_analytic(0, 0, p), ValidationError);
  CHECK_THROWS_AS(as_polynomial(p), ValidationError);
  CHECK_THROWS_AS(mean_flux_analytic(FluxKind::accel_123, 0, 0, p), ValidationError);
}

TEST_CASE("marginals of the closed forms") {
  for (auto p : {unit, PhysParams::harmonic(2.0, 0.5, 1.5)}) {
    for (auto pt : testing::random_points(20, -1.5, 1.5, 7)) {
      const double x = pt[0], v = pt[1], a = pt[2], b = pt[3];
      const double to123 = p.m * line_integral([&](double s) { return w1234_analytic(x, v, a, s, p); }, 20.0, 1024);
      const double to124 = p.m * line_integral([&](double s) { return w1234_analytic(x, v, s, b, p); }, 20.0, 1024);
      CHECK(std::abs(to123 - w123_analytic(x, v, a, p)) <= 1e-9);
      CHECK(std::abs(to124 - w124_analytic(x, v, b, p)) <= 1e-9);
      const double from123 = p.m * line_integral([&](double s) { return w123_analytic(x, v, s, p); }, 20.0, 1024);
      const double from124 = p.m * line_integral([&](double s) { return w124_analytic(x, v, s, p); }, 20.0, 1024);
      CHECK(std::abs(from123 - w12_analytic(x, v, p)) <= 1e-9);
      CHECK(std::abs(from124 - w12_analytic(x, v, p)) <= 1e-9);
    }
  }
}

TEST_CASE("gamma form") {
  auto g = gamma_form(1, 0, 0, 0, 1.0);
  CHECK(g.dx == 4.0);
  CHECK(g.dv == 0.0);
  CHECK(g.dvdot == 2.0);
  CHECK(g.dvddot == 0.0);
  auto o = gamma_form(0, 0, 0, 0, 1.0);
  CHECK(o.value == 0.0);
  CHECK(o.dx == 0.0);
  CHECK(o.dv == 0.0);
  CHECK(o.dvdot == 0.0);
  CHECK(o.dvddot == 0.0);
  CHECK_THROWS_AS(gamma_form(0, 0, 0, 0, 0.0), ValidationError);
}

TEST_CASE("gamma partials match finite differences") {
  const double w = 1.3;
  for (auto pt : testing::random_points(50, -3, 3, 11)) {
    auto g = gamma_form(pt[0], pt[1], pt[2], pt[3], w);
    const double h = 1e-5;
    auto fd = [&](int k) {
      auto a = pt, b = pt;
      a[k] += h;
      b[k] -= h;
      return (gamma_form(a[0], a[1], a[2], a[3], w).value - gamma_form(b[0], b[1], b[2], b[3], w).value) / (2 * h);
    };
    CHECK(g.dx == doctest::Approx(fd(0)).epsilon(1e-7));
    CHECK(g.dv == doctest::Approx(fd(1)).epsilon(1e-7));
    CHECK(g.dvdot == doctest::Approx(fd(2)).epsilon(1e-7));
    CHECK(g.dvddot == doctest::Approx(fd(3)).epsilon(1e-7));
  }
}

TEST_CASE("identity on the gamma form") {
  CHECK(std::abs(check_identity_b8(1, 2, -0.5, 3, 1.0)) <= 1e-12);
  CHECK(check_identity_b8(0, 0, 0, 0, 1.0) == 0.0);
  double worst = 0.0;
  for (auto pt : testing::random_points(10000, -5, 5, 3))
    worst = std::max(worst, std::abs(check_identity_b8(pt[0], pt[1], pt[2], pt[3], 1.0)));
  CHECK(worst <= 1e-11);
  worst = 0.0;
  for (auto pt : testing::random_points(1000, -2, 2, 4))
    worst = std::max(worst, std::abs(check_identity_b8(pt[0], pt[1], pt[2], pt[3], 1.7)));
  CHECK(worst <= 1e-11);
}

TEST_CASE("exact derivative source") {
  auto p = PhysParams::harmonic(1.2, 0.8, 1.1);
  auto src = ho_exact_derivatives(p);
  for (auto pt : testing::random_points(30, -1, 1, 5)) {
    std::array<int, 4> zero{0, 0, 0, 0};
    CHECK(src(pt, zero) == doctest::Approx(w1234_analytic(pt[0], pt[1], pt[2], pt[3], p)).epsilon(1e-14));
    PointFunction f = [&](std::span<const double> c) { return w1234_analytic(c[0], c[1], c[2], c[3], p); };
    for (int k = 0; k < 4; ++k) {
      std::array<int, 4> pw{0, 0, 0, 0};
      pw[k] = 1;
      const double fd = derivative_at(f, pt, pw, {6, 1e-3});
      CHECK(src(pt, pw) == doctest::Approx(fd).epsilon(1e-8).scale(1e-3));
    }
  }
  std::array<double, 4> pt{0, 0, 0, 0};
  std::array<int, 4> two{2, 0, 0, 0};
  CHECK_THROWS_AS(src(pt, two), ValidationError);
}

TEST_CASE("analytic mean fluxes") {
  CHECK(mean_flux_analytic(FluxKind::accel_123, 0.3, 0.5, unit) == 0.5);
  CHECK(mean_flux_analytic(FluxKind::accel_124, 0.3, 12.0, unit) == -0.3);
  CHECK(mean_flux_analytic(FluxKind::velocity_124, 2.0, 0.0, unit) == -2.0);
  CHECK(mean_flux_analytic(FluxKind::velocity_12, 2.0, 0.0, unit) == -2.0);
  for (auto k : {FluxKind::velocity_12, FluxKind::velocity_124, FluxKind::accel_123, FluxKind::accel_124,
                 FluxKind::accel_1234})
    CHECK(parse_flux_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_flux_kind("vddot_9"), ValidationError);
}

TEST_CASE("radiation power") {
  auto r = radiation_power(0.7, 0.5, unit, harmonic_u1(unit));
  CHECK(r.n == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(r.dn_dx_over_m == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.dn_dx_over_m == doctest::Approx(mean_flux_analytic(FluxKind::accel_123, 0.7, 0.5, unit)));

  auto zero = radiation_power(0.7, 0.5, unit, PolynomialPotential{});
  CHECK(zero.n == 0.0);
  CHECK(zero.dn_dx_over_m == 0.0);

  auto quartic = radiation_power(1, 2, unit, PolynomialPotential({{4, 0, 0.25}}));
  CHECK(quartic.n == 2.0);
  CHECK(quartic.dn_dx_over_m == 6.0);

  CHECK_THROWS_AS(radiation_power(0, 0, unit, as_polynomial(unit)), ValidationError);
}
