#include "psimoyal/suite.hpp"

#include <sys/resource.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "psimoyal/moyal.hpp"
#include "psimoyal/vlasov.hpp"
#include "psimoyal/wigner.hpp"

namespace psimoyal {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

template <std::size_t R>
std::vector<std::array<double, R>> random_points(std::size_t count, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<std::array<double, R>> pts(count);
  for (auto& p : pts)
    for (auto& c : p) c = dist(gen);
  return pts;
}

double max_masked_error(const FluxField& f, const std::function<double(std::span<const double>)>& want) {
  double err = 0.0;
  for_each_index(f.values.axes(), [&](std::size_t i, std::span<const std::size_t>, std::span<const double> c) {
    if (f.support[i]) err = std::max(err, std::abs(f.values[i] - want(c)));
  });
  return err;
}

struct Shared {
  std::optional<ComplexField> psi;
  std::optional<RealField> w4;
};

CriterionResult transform_fidelity(const SuiteOptions& o, Shared& s) {
  CriterionResult r{1, "rank-4 transform matches the closed form", false, "", 0.0};
  const auto& p = o.params;
  const auto ax = make_axis("x", -o.half_width, o.half_width, static_cast<long long>(o.n));
  const auto av = make_axis("v", -o.half_width, o.half_width, static_cast<long long>(o.n));
  s.psi = sample_complex([&](auto c) { return psi12(c[0], c[1], 0.0, p); }, {ax, av});
  s.w4 = wigner4(*s.psi, p);
  double err = 0.0;
  for_each_index(s.w4->axes(), [&](std::size_t i, std::span<const std::size_t>, std::span<const double> c) {
    err = std::max(err, std::abs((*s.w4)[i] - w1234_analytic(c[0], c[1], c[2], c[3], p)));
  });
  const std::array<std::size_t, 4> origin = {o.n / 2, o.n / 2, o.n / 2, o.n / 2};
  const double peak = s.w4->at(origin);
  const double want = 1.0 / (std::numbers::pi * std::numbers::pi * p.hbar2 * p.hbar2);
  const double mb = static_cast<double>(peak_rss_bytes()) / (1024.0 * 1024.0);
  r.passed = err <= 1e-6 && std::abs(peak - want) <= 1e-6 && mb <= 600.0;
  r.detail = fmt("max err %.3e, value at origin %.7f, peak rss %.0f MB", err, peak, mb);
  return r;
}

CriterionResult marginal_tower(const SuiteOptions& o, Shared& s) {
  CriterionResult r{2, "marginal tower and normalization", false, "", 0.0};
  const auto& p = o.params;
  const auto to3 = wigner4_marginal_to_3(*s.w4, p);
  const auto to24 = wigner4_marginal_to_24(*s.w4, p);
  const auto d3 = wigner3(*s.psi, p);
  const auto d24 = wigner24(*s.psi, p);
  const auto rho = density(*s.psi);
  const auto a = marginal_to_2(to3, p);
  const auto b = marginal_to_2(to24, p);
  double e3 = 0.0, e24 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < to3.size(); ++i) e3 = std::max(e3, std::abs(to3[i] - d3[i]));
  for (std::size_t i = 0; i < to24.size(); ++i) e24 = std::max(e24, std::abs(to24[i] - d24[i]));
  for (std::size_t i = 0; i < rho.size(); ++i)
    e2 = std::max({e2, std::abs(a[i] - rho[i]), std::abs(b[i] - rho[i])});
  const double norm = integrate_total(rho);
  r.passed = e3 <= 1e-8 && e24 <= 1e-8 && e2 <= 1e-8 && std::abs(norm - 1.0) <= 1e-9;
  r.detail = fmt("to3 %.2e, to24 %.2e, to2 %.2e, |norm-1| %.2e", e3, e24, e2, std::abs(norm - 1.0));
  return r;
}

CriterionResult moyal_identity(const SuiteOptions& o) {
  CriterionResult r{3, "Psi-Moyal identity for the oscillator", false, "", 0.0};
  const auto& p = o.params;
  const auto u = as_polynomial(p);
  const auto pts = random_points<4>(o.random_points, -5.0, 5.0, o.seed);
  const auto exact = ho_exact_derivatives(p);
  double e_exact = 0.0;
  for (const auto& pt : pts) e_exact = std::max(e_exact, std::abs(psi_moyal_residual_at(exact, u, p, pt)));

  PointFunction w = [p](std::span<const double> c) { return w1234_analytic(c[0], c[1], c[2], c[3], p); };
  std::array<double, 3> res{};
  const std::array<double, 3> hs = {0.04, 0.02, 0.01};
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const auto src = finite_difference_source(w, StencilScheme{4, hs[k], false});
    for (const auto& pt : pts) res[k] = std::max(res[k], std::abs(psi_moyal_residual_at(src, u, p, pt)));
  }
  const double order = std::min(std::log2(res[0] / res[1]), std::log2(res[1] / res[2]));

  // potential of an oscillator at twice the frequency
  const auto wrong = as_polynomial(PhysParams::harmonic(p.m, p.hbar, 2.0 * p.omega));
  const auto near = random_points<4>(1000, -1.0, 1.0, o.seed + 1);
  double e_wrong = 0.0;
  for (const auto& pt : near) e_wrong = std::max(e_wrong, std::abs(psi_moyal_residual_at(exact, wrong, p, pt)));
  const double peak = w1234_analytic(0, 0, 0, 0, p);

  r.passed = e_exact <= 1e-12 && res[2] <= 1e-8 && order >= 3.5 && e_wrong >= 1e-2 * peak;
  r.detail = fmt("exact %.2e, h=0.01 %.2e, order %.2f, control/peak %.2e", e_exact, res[2], order, e_wrong / peak);
  return r;
}

CriterionResult identity_b8(const SuiteOptions& o) {
  CriterionResult r{4, "gamma identity", false, "", 0.0};
  const auto pts = random_points<4>(o.random_points, -5.0, 5.0, o.seed + 2);
  double e = 0.0;
  for (const auto& pt : pts) e = std::max(e, std::abs(check_identity_b8(pt[0], pt[1], pt[2], pt[3], o.params.omega)));
  r.passed = e <= 1e-11;
  r.detail = fmt("max residual %.2e", e);
  return r;
}

CriterionResult fluxes(const SuiteOptions& o, Shared& s) {
  CriterionResult r{5, "mean fluxes from the transform", false, "", 0.0};
  const auto& p = o.params;
  const double w2 = p.omega * p.omega;
  const auto u = as_polynomial(p);
  const StencilScheme scheme{4, std::nullopt, false};
  const auto a123 = mean_flux_from_w4(*s.w4, FluxKind::accel_123, p);
  const double e_a123 = max_masked_error(a123, [&](auto c) { return w2 * c[1]; });
  const auto v124 = mean_flux_from_w4(*s.w4, FluxKind::velocity_124, p);
  const double e_v124 = max_masked_error(v124, [&](auto c) { return -w2 * c[0]; });
  const auto w124 = wigner4_marginal_to_24(*s.w4, p);
  const auto a124 = vlasov_moyal_accel_flux(w124, u, p, scheme);
  const double e_a124 = max_masked_error(a124, [&](auto c) { return -w2 * w2 * c[0]; });
  const auto a124i = accel_124_from_w4_closure(*s.w4, u, p, scheme);
  const double e_a124i = max_masked_error(a124i, [&](auto c) { return -w2 * w2 * c[0]; });

  const auto u1 = harmonic_u1(p);
  double e_rad = 0.0;
  for (const auto& pt : random_points<2>(o.random_points, -5.0, 5.0, o.seed + 3)) {
    const auto n = radiation_power(pt[0], pt[1], p, u1);
    e_rad = std::max(e_rad, std::abs(n.dn_dx_over_m - mean_flux_analytic(FluxKind::accel_123, pt[0], pt[1], p)));
  }
  const double worst = std::max({e_a123, e_v124, e_a124, e_a124i});
  r.passed = worst <= 1e-6 && e_rad <= 1e-12;
  r.detail = fmt("vddot123 %.2e, vdot124 %.2e, vddot124 %.2e, radiation %.2e", e_a123, e_v124,
                 std::max(e_a124, e_a124i), e_rad);
  return r;
}

CriterionResult theorem2(const SuiteOptions& o) {
  CriterionResult r{6, "divergence form equals the Moyal series form", false, "", 0.0};
  const auto& p = o.params;
  const auto start = Clock::now();
  std::vector<AxisGrid> axes;
  for (const char* n : {"x", "v", "vdot", "vddot"}) axes.push_back(make_axis(n, -4.0, 4.0, 16));
  const auto f4 = sample_real([&](auto c) { return w1234_analytic(c[0], c[1], c[2], c[3], p); }, axes);
  const StencilScheme scheme{4, std::nullopt, true};
  double worst = 0.0;
  for (const auto& u1 : {harmonic_u1(p), PolynomialPotential({{3, 0, 1.0}}), PolynomialPotential({{4, 0, 0.25}})})
    worst = std::max(worst, theorem2_equivalence(u1, f4, p, scheme).relative);
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = worst <= 1e-10 && secs <= 10.0;
  r.detail = fmt("max relative %.2e in %.2f s", worst, secs);
  return r;
}

CriterionResult theorem3(const SuiteOptions& o) {
  CriterionResult r{7, "reduced chain residuals and dissipation", false, "", 0.0};
  const auto& p = o.params;
  const double w2 = p.omega * p.omega;
  const StencilScheme fd{4, 0.01, false};
  const std::size_t count = std::max<std::size_t>(o.random_points / 10, 100);

  VlasovPointInputs in123;
  in123.field = [p](std::span<const double> c) { return w123_analytic(c[0], c[1], c[2], p); };
  in123.accel_flux = [w2](std::span<const double> c) { return w2 * c[1]; };
  in123.potential = as_polynomial(p);
  VlasovPointInputs in124;
  in124.field = [p](std::span<const double> c) { return w124_analytic(c[0], c[1], c[2], p); };
  in124.velocity_flux = [w2](std::span<const double> c) { return -w2 * c[0]; };
  in124.accel_flux = [w2](std::span<const double> c) { return -w2 * w2 * c[0]; };
  VlasovPointInputs in12;
  in12.field = [p](std::span<const double> c) { return w12_analytic(c[0], c[1], p); };
  in12.velocity_flux = in124.velocity_flux;

  double e123 = 0.0, e124 = 0.0, e12 = 0.0;
  for (const auto& pt : random_points<3>(count, -5.0, 5.0, o.seed + 4)) {
    e123 = std::max(e123, std::abs(vlasov_residual_at(VlasovEquation::w123, in123, p, fd, pt)));
    e124 = std::max(e124, std::abs(vlasov_residual_at(VlasovEquation::w124, in124, p, fd, pt)));
    e12 = std::max(e12, std::abs(vlasov_residual_at(VlasovEquation::w12, in12, p,
                                                    fd, std::span<const double>(pt.data(), 2))));
  }

  const auto ax = make_axis("x", -o.half_width, o.half_width, static_cast<long long>(o.n));
  const auto av = make_axis("v", -o.half_width, o.half_width, static_cast<long long>(o.n));
  const auto aa = make_axis("vddot", -o.half_width, o.half_width, static_cast<long long>(o.n));
  DissipationInputs d{
      sample_real([&](auto c) { return w12_analytic(c[0], c[1], p); }, {ax, av}),
      sample_real([&](auto c) { return w124_analytic(c[0], c[1], c[2], p); }, {ax, av, aa}),
      RealField(), RealField(), RealField()};
  const StencilScheme grid{4, std::nullopt, false};
  d.flux12_v = vlasov_moyal_velocity_flux(d.w12, harmonic_u1(p), p, grid).values;
  d.flux124_v = sample_real([&](auto c) { return mean_flux_analytic(FluxKind::velocity_124, c[0], c[1], p); }, {ax, av, aa});
  d.flux124_a = sample_real([&](auto c) { return mean_flux_analytic(FluxKind::accel_124, c[0], c[1], p); }, {ax, av, aa});
  const auto rep = dissipation_report(d, grid);
  const double pi_res = std::max(rep.max_pi_residual_12, rep.max_pi_residual_124);

  r.passed = e123 <= 1e-8 && e124 <= 1e-8 && e12 <= 1e-8 && rep.max_q <= 1e-10 && pi_res <= 1e-8;
  r.detail = fmt("w123 %.2e, w124 %.2e, w12 %.2e, max Q %.2e", e123, e124, e12, rep.max_q);
  return r;
}

}  // namespace

std::size_t peak_rss_bytes() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return static_cast<std::size_t>(u.ru_maxrss) * 1024;
}

std::vector<CriterionResult> run_ho_suite(const SuiteOptions& opts,
                                          const std::function<void(const CriterionResult&)>& on_result) {
  opts.params.validate();
  if (!opts.params.ho_consistent()) throw ValidationError("the oscillator suite needs hbar2 = hbar*omega^2");
  Shared shared;
  std::vector<std::function<CriterionResult()>> steps = {
      [&] { return transform_fidelity(opts, shared); },
      [&] { return marginal_tower(opts, shared); },
      [&] { return moyal_identity(opts); },
      [&] { return identity_b8(opts); },
      [&] { return fluxes(opts, shared); },
      [&] { return theorem2(opts); },
      [&] { return theorem3(opts); },
  };
  std::vector<CriterionResult> out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto start = Clock::now();
    CriterionResult r;
    try {
      r = steps[k]();
    } catch (const std::exception& e) {
      r = CriterionResult{static_cast<int>(k + 1), "criterion " + std::to_string(k + 1), false,
                          std::string("error: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.id == 1 && r.seconds > 60.0) r.passed = false;
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace psimoyal
