// psimoyal command-line front end.
//
// Exit codes: 0 ok, 1 bad arguments or shapes, 2 file problems, 3 numeric
// failure or exceeded tolerance.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "psimoyal/io.hpp"
#include "psimoyal/moyal.hpp"
#include "psimoyal/suite.hpp"
#include "psimoyal/vlasov.hpp"
#include "psimoyal/vonneumann.hpp"
#include "psimoyal/wigner.hpp"

using namespace psimoyal;

namespace {

struct ParamFlags {
  double m = 1.0, hbar = 1.0, omega = 1.0;
  std::string hbar2 = "auto";

  void attach(CLI::App* app) {
    app->add_option("--m", m, "mass")->capture_default_str();
    app->add_option("--hbar", hbar, "first Planck-scale constant")->capture_default_str();
    app->add_option("--omega", omega, "oscillator frequency")->capture_default_str();
    app->add_option("--hbar2", hbar2, "second-rank constant, 'auto' = hbar*omega^2")->capture_default_str();
  }

  RunConfig config() const {
    RunConfig c;
    c.m = m;
    c.hbar = hbar;
    c.omega = omega;
    c.hbar2 = parse_hbar2(hbar2);
    return c;
  }
};

void print_axis(const AxisGrid& a) {
  std::printf("  %-6s n=%zu  [%.10g, %.10g)  step %.10g\n", a.name.c_str(), a.n, a.min, a.max, a.step());
}

double max_abs(const RealField& f) { return f.peak(); }

void report_residual(const char* what, const RealField& res, double peak, double masked, std::optional<double> tol) {
  const double m = max_abs(res);
  const double rel = peak > 0.0 ? m / peak : m;
  std::printf("%s: max|residual| %.6e  max|residual|/peak %.6e  masked fraction %.6f\n", what, m, rel, masked);
  if (tol && rel > *tol) throw NumericFailure("relative residual exceeds tolerance " + std::to_string(*tol));
}

int run(int argc, char** argv) {
  CLI::App app{"Rank-4 Wigner functions, Psi-Moyal residuals and Vlasov-chain fluxes"};
  app.require_subcommand(1);

  // gen-ho
  auto* gen = app.add_subcommand("gen-ho", "sample the oscillator wavefunction on (x, v)");
  ParamFlags gen_p;
  gen_p.attach(gen);
  double gen_t = 0.0, xmin = -8, xmax = 8, vmin = -8, vmax = 8;
  long long nx = 64, nv = 64;
  std::string gen_out;
  gen->add_option("--t", gen_t, "time")->capture_default_str();
  gen->add_option("--nx", nx)->capture_default_str();
  gen->add_option("--nv", nv)->capture_default_str();
  gen->add_option("--xmin", xmin)->capture_default_str();
  gen->add_option("--xmax", xmax)->capture_default_str();
  gen->add_option("--vmin", vmin)->capture_default_str();
  gen->add_option("--vmax", vmax)->capture_default_str();
  gen->add_option("--out", gen_out, "output field file")->required();

  // wigner
  auto* wig = app.add_subcommand("wigner", "generalized Wigner transform of a wavefunction file");
  ParamFlags wig_p;
  wig_p.attach(wig);
  std::string wig_in, wig_out, wig_rank = "4";
  wig->add_option("--in", wig_in)->required();
  wig->add_option("--rank", wig_rank, "4, 3 or 24")->check(CLI::IsMember({"4", "3", "24"}))->capture_default_str();
  wig->add_option("--out", wig_out)->required();

  // marginal
  auto* mar = app.add_subcommand("marginal", "m-weighted integral over vdot or vddot");
  ParamFlags mar_p;
  mar_p.attach(mar);
  std::string mar_in, mar_out, mar_axis;
  mar->add_option("--in", mar_in)->required();
  mar->add_option("--axis", mar_axis)->check(CLI::IsMember({"vdot", "vddot"}))->required();
  mar->add_option("--out", mar_out)->required();

  // residual
  auto* res = app.add_subcommand("residual", "Psi-Moyal or reduced Vlasov residual of a field");
  ParamFlags res_p;
  res_p.attach(res);
  std::string res_in, res_pot, res_mode;
  int res_order = 4;
  double res_mask = 1e-8;
  std::optional<double> res_tol;
  bool res_report = false;
  res->add_option("--in", res_in)->required();
  res->add_option("--potential", res_pot, "potential file, lines '<a> <b> <coeff>'");
  res->add_option("--mode", res_mode)
      ->check(CLI::IsMember({"psi-moyal", "vlasov12", "vlasov123", "vlasov124"}))
      ->required();
  res->add_option("--order", res_order, "stencil order")->check(CLI::IsMember({2, 4, 6}))->capture_default_str();
  res->add_option("--mask", res_mask, "flux mask threshold relative to peak")->capture_default_str();
  res->add_option("--tolerance", res_tol, "fail with exit 3 above this relative residual");
  res->add_flag("--report", res_report, "print grid, parameters and series terms");

  // fluxes
  auto* flx = app.add_subcommand("fluxes", "mean fluxes from a rank-4 field");
  ParamFlags flx_p;
  flx_p.attach(flx);
  std::string flx_in, flx_out, flx_which, flx_mask_out, flx_pot, flx_accel_out;
  double flx_mask = 1e-8;
  flx->add_option("--in", flx_in)->required();
  flx->add_option("--which", flx_which, "123, 124 or 12")->check(CLI::IsMember({"123", "124", "12"}))->required();
  flx->add_option("--out", flx_out, "flux values")->required();
  flx->add_option("--mask-out", flx_mask_out, "support mask (default <out>.mask)");
  flx->add_option("--mask", flx_mask, "mask threshold relative to peak")->capture_default_str();
  flx->add_option("--potential", flx_pot, "with --which 124, also write the closure acceleration");
  flx->add_option("--accel-out", flx_accel_out, "closure acceleration output (default <out>.accel)");

  // export-csv
  auto* csv = app.add_subcommand("export-csv", "write a 1D or 2D slice of a field as CSV");
  std::string csv_in, csv_slice, csv_out;
  csv->add_option("--in", csv_in)->required();
  csv->add_option("--slice", csv_slice, "axis=value,...");
  csv->add_option("--out", csv_out)->required();

  // vonneumann
  auto* vn = app.add_subcommand("vonneumann", "density-matrix evolution residuals for a mode file");
  std::string vn_modes;
  double vn_t = 0.0, vn_dt = 1e-4, vn_hbar2 = 1.0;
  vn->add_option("--modes", vn_modes, "lines '<ReE> <ImE> <Rec> <Imc>'")->required();
  vn->add_option("--t", vn_t)->capture_default_str();
  vn->add_option("--dt", vn_dt)->capture_default_str();
  vn->add_option("--hbar2", vn_hbar2)->capture_default_str();

  // check
  auto* chk = app.add_subcommand("check", "run the end-to-end oscillator checks");
  ParamFlags chk_p;
  chk_p.attach(chk);
  std::string suite;
  std::size_t chk_n = 64, chk_points = 10000;
  chk->add_option("--suite", suite)->check(CLI::IsMember({"ho"}))->required();
  chk->add_option("--n", chk_n, "grid points per axis")->capture_default_str();
  chk->add_option("--points", chk_points, "random points per pointwise check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*gen) {
    auto cfg = gen_p.config();
    const auto p = cfg.params();
    const auto ax = make_axis("x", xmin, xmax, nx);
    const auto av = make_axis("v", vmin, vmax, nv);
    const auto psi = sample_complex([&](auto c) { return psi12(c[0], c[1], gen_t, p); }, {ax, av});
    write_field(gen_out, psi);
    std::printf("wrote %s: complex rank 2, %zu x %zu\n", gen_out.c_str(), ax.n, av.n);
    return 0;
  }

  if (*wig) {
    const auto p = wig_p.config().params();
    const auto psi = read_complex_field(wig_in);
    const auto plan = make_plan(psi.axes(), p);
    RealField w;
    if (wig_rank == "4") w = wigner4(psi, p);
    else if (wig_rank == "3") w = wigner3(psi, p);
    else w = wigner24(psi, p);
    write_field(wig_out, w);
    std::printf("wrote %s: real rank %zu, peak %.10g\n", wig_out.c_str(), w.rank(), w.peak());
    std::printf("dual axes:\n");
    if (wig_rank != "24") print_axis(plan.vdot);
    if (wig_rank != "3") print_axis(plan.vddot);
    return 0;
  }

  if (*mar) {
    const auto p = mar_p.config().params();
    const auto f = read_real_field(mar_in);
    if (f.rank() != 4 && f.rank() != 3) throw ValidationError("marginal needs a rank-4 or rank-3 field");
    const auto out = integrate_axis(f, mar_axis, p.m);
    write_field(mar_out, out);
    std::printf("wrote %s: real rank %zu, peak %.10g\n", mar_out.c_str(), out.rank(), out.peak());
    return 0;
  }

  if (*res) {
    const auto p = res_p.config().params();
    const auto f = read_real_field(res_in);
    const StencilScheme scheme{res_order, std::nullopt, false};
    const FluxOptions fopts{res_mask, true};
    std::optional<PolynomialPotential> u;
    if (!res_pot.empty()) u = read_potential(res_pot);
    auto need_u = [&]() -> const PolynomialPotential& {
      if (!u) throw ValidationError("mode " + res_mode + " needs --potential");
      return *u;
    };
    if (res_report) {
      std::printf("input %s, rank %zu\n", res_in.c_str(), f.rank());
      for (const auto& a : f.axes()) print_axis(a);
      std::printf("m %.10g  hbar %.10g  hbar2 %.10g  omega %.10g  order %d\n", p.m, p.hbar, p.hbar2, p.omega,
                  res_order);
      if (u) {
        std::printf("potential:\n%s", u->to_text().c_str());
        for (const auto& t : build_term_table(*u, p))
          std::printf("  term l=%d n=%d coeff %.10g  U d^%d/dx d^%d/dv  W d^%d/dvddot d^%d/dvdot\n", t.l, t.n,
                      t.coefficient, t.u_dx, t.u_dv, t.w_dvddot, t.w_dvdot);
      }
    }
    if (res_mode == "psi-moyal") {
      const auto r = psi_moyal_residual(f, need_u(), p, scheme);
      report_residual("psi-moyal", r, f.peak(), 0.0, res_tol);
      return 0;
    }
    if (res_mode == "vlasov12" && f.rank() == 2) {
      const auto flux = vlasov_moyal_velocity_flux(f, need_u(), p, scheme, fopts);
      VlasovInputs in{f, flux.density, std::nullopt, std::nullopt, std::nullopt};
      report_residual("vlasov12", vlasov_residual(VlasovEquation::w12, in, p, scheme), f.peak(),
                      flux.masked_fraction, res_tol);
      return 0;
    }
    check_canonical_w4(f);
    if (res_mode == "vlasov12") {
      const auto flux = mean_flux_from_w4(f, FluxKind::velocity_12, p, fopts);
      const auto w12 = marginal_to_2(wigner4_marginal_to_3(f, p), p);
      VlasovInputs in{w12, flux.density, std::nullopt, std::nullopt, std::nullopt};
      report_residual("vlasov12", vlasov_residual(VlasovEquation::w12, in, p, scheme), w12.peak(),
                      flux.masked_fraction, res_tol);
    } else if (res_mode == "vlasov123") {
      const auto flux = mean_flux_from_w4(f, FluxKind::accel_123, p, fopts);
      const auto w123 = wigner4_marginal_to_3(f, p);
      VlasovInputs in{w123, std::nullopt, flux.density, need_u(), std::nullopt};
      report_residual("vlasov123", vlasov_residual(VlasovEquation::w123, in, p, scheme), w123.peak(),
                      flux.masked_fraction, res_tol);
    } else {
      const auto vflux = mean_flux_from_w4(f, FluxKind::velocity_124, p, fopts);
      const auto w124 = wigner4_marginal_to_24(f, p);
      const auto aflux = vlasov_moyal_accel_flux(w124, need_u(), p, scheme, fopts);
      VlasovInputs in{w124, vflux.density, aflux.density, std::nullopt, std::nullopt};
      report_residual("vlasov124", vlasov_residual(VlasovEquation::w124, in, p, scheme), w124.peak(),
                      std::max(vflux.masked_fraction, aflux.masked_fraction), res_tol);
    }
    return 0;
  }

  if (*flx) {
    const auto p = flx_p.config().params();
    const auto f = read_real_field(flx_in);
    const FluxOptions fopts{flx_mask, true};
    const FluxKind kind = flx_which == "123"   ? FluxKind::accel_123
                          : flx_which == "124" ? FluxKind::velocity_124
                                               : FluxKind::velocity_12;
    auto write_flux = [](const FluxField& fl, const std::string& out, const std::string& mask_out) {
      std::vector<double> m(fl.support.begin(), fl.support.end());
      write_field(out, fl.values);
      write_field(mask_out, RealField(fl.values.axes(), std::move(m)));
      std::printf("wrote %s (%s) and %s, masked fraction %.6f\n", out.c_str(), to_string(fl.kind).c_str(),
                  mask_out.c_str(), fl.masked_fraction);
    };
    const auto fl = mean_flux_from_w4(f, kind, p, fopts);
    write_flux(fl, flx_out, flx_mask_out.empty() ? flx_out + ".mask" : flx_mask_out);
    if (!flx_pot.empty()) {
      if (kind != FluxKind::velocity_124) throw ValidationError("--potential only applies to --which 124");
      const auto u = read_potential(flx_pot);
      const auto a = vlasov_moyal_accel_flux(wigner4_marginal_to_24(f, p), u, p, StencilScheme{}, fopts);
      const std::string out = flx_accel_out.empty() ? flx_out + ".accel" : flx_accel_out;
      write_flux(a, out, out + ".mask");
    }
    return 0;
  }

  if (*csv) {
    const auto f = read_field(csv_in);
    const auto slice = parse_slice(csv_slice);
    const std::string text = std::visit([&](const auto& fld) { return export_csv(fld, slice); }, f);
    write_text(csv_out, text);
    return 0;
  }

  if (*vn) {
    const auto modes = parse_modes(read_text(vn_modes), vn_hbar2);
    const auto r = von_neumann_residual(modes, vn_t, vn_dt);
    const auto rho = density_matrix_at(modes, vn_t).matrix;
    std::printf("modes %zu  t %.10g\n", modes.energies.size(), vn_t);
    std::printf("commutator residual %.6e\n", r.commutator);
    std::printf("centred difference (dt %.3g) relative error %.6e\n", vn_dt, r.fd_relative);
    std::printf("hermitian defect %.6e  rank-one defect %.6e\n", hermitian_defect(rho), rank_one_defect(rho));
    return 0;
  }

  if (*chk) {
    auto cfg = chk_p.config();
    SuiteOptions so;
    so.params = cfg.params();
    so.n = chk_n;
    so.random_points = chk_points;
    if (!so.params.ho_consistent())
      std::fprintf(stderr, "warning: hbar2 = %.10g differs from hbar*omega^2 = %.10g; the oscillator checks will fail\n",
                   so.params.hbar2, so.params.hbar * so.params.omega * so.params.omega);
    bool ok = true;
    auto print = [&](const CriterionResult& r) {
      std::printf("[%s] %d %s: %s (%.2f s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
                  r.seconds);
      std::fflush(stdout);
      ok = ok && r.passed;
    };
    if (!so.params.ho_consistent()) {
      for (int k = 1; k <= 7; ++k) print({k, "criterion " + std::to_string(k), false, "inconsistent hbar2", 0.0});
      return 3;
    }
    run_ho_suite(so, print);
    return ok ? 0 : 3;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  } catch (const NumericFailure& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
