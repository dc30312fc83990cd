#include "psimoyal/vlasov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "psimoyal/moyal.hpp"

namespace psimoyal {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double sgn(int l) { return l % 2 == 0 ? 1.0 : -1.0; }

int closure_lmax(const PolynomialPotential& u) { return u.degree() >= 1 ? (u.degree() - 1) / 2 : 0; }

std::string describe_point(const std::vector<AxisGrid>& axes, std::span<const double> c) {
  std::ostringstream os;
  for (std::size_t a = 0; a < axes.size(); ++a) os << (a ? ", " : "") << axes[a].name << "=" << c[a];
  return os.str();
}

void require_axes(const RealField& f, std::initializer_list<const char*> names, const char* what) {
  bool ok = f.rank() == names.size();
  std::size_t a = 0;
  for (const char* n : names) {
    if (!ok) break;
    ok = f.axis(a++).name == n;
  }
  if (!ok) throw ValidationError(std::string(what) + ": unexpected field axes");
}

void require_same(const RealField& f, const std::optional<RealField>& g, const char* what) {
  if (!g) throw ValidationError(std::string("missing ") + what);
  if (!g->same_grid(f)) throw ValidationError(std::string(what) + " is on a different grid than the field");
}

// out += coef(coords) * d
template <class Fn>
void accumulate(std::vector<double>& out, const RealField& d, Fn&& coef) {
  for_each_index(d.axes(), [&](std::size_t flat, std::span<const std::size_t>, std::span<const double> c) {
    out[flat] += coef(c) * d[flat];
  });
}

void add(std::vector<double>& out, const RealField& d, double s = 1.0) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * d[i];
}

// Masked ratio num/den. `strict` demands den > 0 wherever |den| clears the threshold.
FluxField make_flux(FluxKind kind, const RealField& den, RealField num, double rel_threshold, bool strict) {
  if (!(rel_threshold >= 0.0)) throw ValidationError("mask threshold must be nonnegative");
  FluxField out;
  out.kind = kind;
  const double peak = den.peak();
  out.threshold = rel_threshold * peak;
  out.support.assign(den.size(), 0);
  std::vector<double> vals(den.size(), 0.0);
  std::size_t masked = 0;
  for_each_index(den.axes(), [&](std::size_t i, std::span<const std::size_t>, std::span<const double> c) {
    const double d = den[i];
    const bool in = strict ? std::abs(d) >= out.threshold && peak > 0.0 : d >= out.threshold && d > 0.0;
    if (!in) {
      ++masked;
      return;
    }
    if (d <= 0.0)
      throw NumericFailure("distribution is not positive inside the flux mask at " +
                           describe_point(den.axes(), c) + " (value " + std::to_string(d) + ")");
    out.support[i] = 1;
    vals[i] = num[i] / d;
  });
  out.masked_fraction = den.size() ? static_cast<double>(masked) / static_cast<double>(den.size()) : 0.0;
  out.values = RealField(den.axes(), std::move(vals));
  out.density = std::move(num);
  return out;
}

}  // namespace

FluxField moment_flux(const RealField& field, std::string_view axis, FluxKind kind, const PhysParams& p,
                      const FluxOptions& opts) {
  p.validate();
  const std::size_t a = field.axis_index(axis);
  if (field.rank() < 2) throw ValidationError("moment flux needs rank >= 2");
  const auto& ax = field.axis(a);
  const std::size_t n = ax.n;
  const std::size_t inner = field.strides()[a];
  const std::size_t outer = field.size() / (n * inner);
  const double w = p.m * ax.step();
  const auto data = field.data();

  std::vector<std::complex<double>> phase(n);
  for (std::size_t j = 0; j < n; ++j) phase[j] = std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(n));

  std::vector<double> m0(outer * inner), m1(outer * inner);
  std::vector<double> y(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t k = 0; k < inner; ++k) {
      const double* col = data.data() + o * n * inner + k;
      double lo = 0.0;
      if (opts.periodic_moments) {
        std::complex<double> z = 0.0;
        for (std::size_t j = 0; j < n; ++j) z += std::abs(col[j * inner]) * phase[j];
        double c = static_cast<double>(n) / 2.0;
        if (std::abs(z) > 0.0) {
          const double ang = std::fmod(std::arg(z) + two_pi, two_pi);
          c = ang * static_cast<double>(n) / two_pi;
        }
        lo = c - static_cast<double>(n) / 2.0;
      }
      for (std::size_t j = 0; j < n; ++j) {
        double jj = static_cast<double>(j);
        if (opts.periodic_moments) jj += static_cast<double>(n) * std::ceil((lo - jj) / static_cast<double>(n));
        y[j] = ax.min + jj * ax.step();
      }
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        s0 += col[j * inner];
        s1 += y[j] * col[j * inner];
      }
      m0[o * inner + k] = w * s0;
      m1[o * inner + k] = w * s1;
    }
  }
  std::vector<AxisGrid> axes;
  for (std::size_t b = 0; b < field.rank(); ++b)
    if (b != a) axes.push_back(field.axis(b));
  RealField den(axes, std::move(m0));
  RealField num(std::move(axes), std::move(m1));
  return make_flux(kind, den, std::move(num), opts.mask_threshold, false);
}

FluxField mean_flux_from_w4(const RealField& w4, FluxKind which, const PhysParams& p, const FluxOptions& opts) {
  check_canonical_w4(w4);
  switch (which) {
    case FluxKind::accel_123: return moment_flux(w4, "vddot", which, p, opts);
    case FluxKind::velocity_124: return moment_flux(w4, "vdot", which, p, opts);
    case FluxKind::velocity_12: return moment_flux(integrate_axis(w4, "vddot", p.m), "vdot", which, p, opts);
    default:
      throw ValidationError("flux " + to_string(which) + " is not a moment of the rank-4 field; use the closure");
  }
}

FluxField vlasov_moyal_accel_flux(const RealField& f, const PolynomialPotential& u, const PhysParams& p,
                                  const StencilScheme& scheme, const FluxOptions& opts) {
  p.validate();
  if (f.rank() == 4) check_canonical_w4(f);
  else require_axes(f, {"x", "v", "vddot"}, "acceleration closure");
  const double q = p.hbar2 / (2.0 * p.m);
  std::vector<double> g(f.size(), 0.0);
  for (int l = 0; l <= closure_lmax(u); ++l) {
    const int k = 2 * l + 1;
    if (u.derivative_vanishes(k, 0)) continue;
    const double c = sgn(l) * std::pow(q, 2 * l) / factorial(k) / p.m;
    auto coef = [&](std::span<const double> x) { return c * u.derivative(k, 0, x[0], x[1]); };
    if (l == 0) accumulate(g, f, coef);
    else accumulate(g, partial_derivative(f, "vddot", 2 * l, scheme), coef);
  }
  return make_flux(f.rank() == 4 ? FluxKind::accel_1234 : FluxKind::accel_124, f,
                   RealField(f.axes(), std::move(g)), opts.mask_threshold, true);
}

FluxField accel_124_from_w4_closure(const RealField& f4, const PolynomialPotential& u, const PhysParams& p,
                                    const StencilScheme& scheme, const FluxOptions& opts) {
  check_canonical_w4(f4);
  const auto c4 = vlasov_moyal_accel_flux(f4, u, p, scheme, opts);
  auto num = integrate_axis(c4.density, "vdot", p.m);
  const auto den = integrate_axis(f4, "vdot", p.m);
  return make_flux(FluxKind::accel_124, den, std::move(num), opts.mask_threshold, true);
}

FluxField vlasov_moyal_velocity_flux(const RealField& f12, const PolynomialPotential& u1, const PhysParams& p,
                                     const StencilScheme& scheme, const FluxOptions& opts) {
  p.validate();
  require_axes(f12, {"x", "v"}, "velocity closure");
  if (!u1.is_velocity_independent()) throw ValidationError("velocity closure needs a potential without v terms");
  const double q = p.hbar2 / (2.0 * p.m);
  std::vector<double> g(f12.size(), 0.0);
  for (int l = 0; l <= closure_lmax(u1); ++l) {
    const int k = 2 * l + 1;
    if (u1.derivative_vanishes(k, 0)) continue;
    const double c = sgn(l + 1) * std::pow(q, 2 * l) / (p.m * factorial(k));
    auto coef = [&](std::span<const double> x) { return c * u1.derivative(k, 0, x[0], 0.0); };
    if (l == 0) accumulate(g, f12, coef);
    else accumulate(g, partial_derivative(f12, "v", 2 * l, scheme), coef);
  }
  return make_flux(FluxKind::velocity_12, f12, RealField(f12.axes(), std::move(g)), opts.mask_threshold, true);
}

double vlasov_moyal_accel_flux_at(const DerivativeSource& f, const PolynomialPotential& u, const PhysParams& p,
                                  std::span<const double> pt, std::size_t vddot_index) {
  p.validate();
  if (vddot_index >= pt.size() || pt.size() < 2) throw ValidationError("bad closure coordinate index");
  std::vector<int> pw(pt.size(), 0);
  const double f0 = f(pt, pw);
  if (!(f0 > 0.0)) throw NumericFailure("distribution is not positive at the closure point");
  const double q = p.hbar2 / (2.0 * p.m);
  double sum = 0.0;
  for (int l = 0; l <= closure_lmax(u); ++l) {
    const int k = 2 * l + 1;
    if (u.derivative_vanishes(k, 0)) continue;
    pw[vddot_index] = 2 * l;
    const double d = l == 0 ? f0 : f(pt, pw);
    sum += sgn(l) * std::pow(q, 2 * l) / factorial(k) / p.m * u.derivative(k, 0, pt[0], pt[1]) * d;
  }
  return sum / f0;
}

double vlasov_moyal_velocity_flux_at(const DerivativeSource& f, const PolynomialPotential& u1, const PhysParams& p,
                                     std::span<const double> pt, std::size_t v_index) {
  p.validate();
  if (!u1.is_velocity_independent()) throw ValidationError("velocity closure needs a potential without v terms");
  if (v_index >= pt.size() || pt.empty()) throw ValidationError("bad closure coordinate index");
  std::vector<int> pw(pt.size(), 0);
  const double f0 = f(pt, pw);
  if (!(f0 > 0.0)) throw NumericFailure("distribution is not positive at the closure point");
  const double q = p.hbar2 / (2.0 * p.m);
  double sum = 0.0;
  for (int l = 0; l <= closure_lmax(u1); ++l) {
    const int k = 2 * l + 1;
    if (u1.derivative_vanishes(k, 0)) continue;
    pw[v_index] = 2 * l;
    const double d = l == 0 ? f0 : f(pt, pw);
    sum += sgn(l + 1) * std::pow(q, 2 * l) / (p.m * factorial(k)) * u1.derivative(k, 0, pt[0], 0.0) * d;
  }
  return sum / f0;
}

RealField vlasov_residual(VlasovEquation eq, const VlasovInputs& in, const PhysParams& p,
                          const StencilScheme& scheme) {
  p.validate();
  const RealField& f = in.field;
  auto d1 = [&](const RealField& g, const char* axis) { return partial_derivative(g, axis, 1, scheme); };
  std::vector<double> out(f.size(), 0.0);
  if (in.dt_term) {
    require_same(f, in.dt_term, "time-derivative field");
    add(out, *in.dt_term);
  }
  switch (eq) {
    case VlasovEquation::chain4:
      check_canonical_w4(f);
      require_same(f, in.accel_density, "acceleration density");
      accumulate(out, d1(f, "x"), [](auto c) { return c[1]; });
      accumulate(out, d1(f, "v"), [](auto c) { return c[2]; });
      accumulate(out, d1(f, "vdot"), [](auto c) { return c[3]; });
      add(out, d1(*in.accel_density, "vddot"));
      break;
    case VlasovEquation::w123: {
      require_axes(f, {"x", "v", "vdot"}, "rank-3 (x, v, vdot) equation");
      require_same(f, in.accel_density, "acceleration density");
      if (!in.potential) throw ValidationError("the (x, v, vdot) equation needs the potential");
      const auto& u = *in.potential;
      accumulate(out, d1(f, "x"), [](auto c) { return c[1]; });
      accumulate(out, d1(f, "v"), [](auto c) { return c[2]; });
      add(out, d1(*in.accel_density, "vdot"));
      const double q = p.hbar2 / (2.0 * p.m);
      for (int l = 0; l <= closure_lmax(u); ++l) {
        const int k = 2 * l + 1;
        if (u.derivative_vanishes(0, k)) continue;
        const double c = sgn(l) * std::pow(q, 2 * l) / (p.m * factorial(k));
        accumulate(out, partial_derivative(f, "vdot", k, scheme),
                   [&](auto x) { return -c * u.derivative(0, k, x[0], x[1]); });
      }
      break;
    }
    case VlasovEquation::w124:
      require_axes(f, {"x", "v", "vddot"}, "rank-3 (x, v, vddot) equation");
      require_same(f, in.velocity_density, "velocity density");
      require_same(f, in.accel_density, "acceleration density");
      accumulate(out, d1(f, "x"), [](auto c) { return c[1]; });
      add(out, d1(*in.velocity_density, "v"));
      add(out, d1(*in.accel_density, "vddot"));
      break;
    case VlasovEquation::w12:
      require_axes(f, {"x", "v"}, "rank-2 equation");
      require_same(f, in.velocity_density, "velocity density");
      accumulate(out, d1(f, "x"), [](auto c) { return c[1]; });
      add(out, d1(*in.velocity_density, "v"));
      break;
  }
  return RealField(f.axes(), std::move(out));
}

double vlasov_residual_at(VlasovEquation eq, const VlasovPointInputs& in, const PhysParams& p,
                          const StencilScheme& scheme, std::span<const double> pt) {
  p.validate();
  const std::size_t rank = eq == VlasovEquation::chain4 ? 4 : eq == VlasovEquation::w12 ? 2 : 3;
  if (pt.size() != rank) throw ValidationError("point rank does not match the equation");
  if (!in.field) throw ValidationError("missing field callable");
  const auto& f = in.field;
  auto div = [&](const PointFunction& g, std::size_t axis) {
    std::array<int, 4> pw{};
    pw[axis] = 1;
    return derivative_at(g, pt, std::span<const int>(pw.data(), rank), scheme);
  };
  auto times_coord = [&](std::size_t a) -> PointFunction {
    return [&f, a](std::span<const double> c) { return f(c) * c[a]; };
  };
  auto times = [&](const PointFunction& flux, const char* what) -> PointFunction {
    if (!flux) throw ValidationError(std::string("missing ") + what);
    return [&f, &flux](std::span<const double> c) { return f(c) * flux(c); };
  };
  double r = in.dt_term + div(times_coord(1), 0);
  switch (eq) {
    case VlasovEquation::chain4:
      r += div(times_coord(2), 1) + div(times_coord(3), 2) + div(times(in.accel_flux, "acceleration flux"), 3);
      break;
    case VlasovEquation::w123: {
      if (!in.potential) throw ValidationError("the (x, v, vdot) equation needs the potential");
      r += div(times_coord(2), 1) + div(times(in.accel_flux, "acceleration flux"), 2);
      const auto& u = *in.potential;
      const double q = p.hbar2 / (2.0 * p.m);
      for (int l = 0; l <= closure_lmax(u); ++l) {
        const int k = 2 * l + 1;
        if (u.derivative_vanishes(0, k)) continue;
        const std::array<int, 3> pw = {0, 0, k};
        r -= sgn(l) * std::pow(q, 2 * l) / (p.m * factorial(k)) * u.derivative(0, k, pt[0], pt[1]) *
             derivative_at(f, pt, pw, scheme);
      }
      break;
    }
    case VlasovEquation::w124:
      r += div(times(in.velocity_flux, "velocity flux"), 1) + div(times(in.accel_flux, "acceleration flux"), 2);
      break;
    case VlasovEquation::w12:
      r += div(times(in.velocity_flux, "velocity flux"), 1);
      break;
  }
  return r;
}

EquivalenceReport theorem2_equivalence(const PolynomialPotential& u1, const RealField& f4, const PhysParams& p,
                                       const StencilScheme& scheme, const FluxOptions& opts) {
  if (!u1.is_velocity_independent()) throw ValidationError("equivalence check needs a potential without v terms");
  const auto closure = vlasov_moyal_accel_flux(f4, u1, p, scheme, opts);
  VlasovInputs in{f4, std::nullopt, closure.density, std::nullopt, std::nullopt};
  const auto a = vlasov_residual(VlasovEquation::chain4, in, p, scheme);
  const auto b = psi_moyal_residual(f4, u1, p, scheme);
  EquivalenceReport rep;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!closure.support[i]) continue;
    rep.max_abs = std::max(rep.max_abs, std::abs(a[i] - b[i]));
    rep.scale = std::max(rep.scale, std::abs(b[i]));
  }
  rep.relative = rep.scale > 0.0 ? rep.max_abs / rep.scale : rep.max_abs;
  return rep;
}

namespace {

// Points whose first-derivative stencil stays inside the positive mask.
std::vector<std::uint8_t> interior_mask(const RealField& w, double rel, int half) {
  const double thr = rel * w.peak();
  std::vector<std::uint8_t> pos(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) pos[i] = w[i] > 0.0 && w[i] >= thr;
  std::vector<std::uint8_t> out(w.size(), 0);
  for_each_index(w.axes(), [&](std::size_t flat, std::span<const std::size_t> idx, std::span<const double>) {
    if (!pos[flat]) return;
    for (std::size_t a = 0; a < w.rank(); ++a) {
      const long n = static_cast<long>(w.axis(a).n);
      const long s = static_cast<long>(w.strides()[a]);
      for (long o = -half; o <= half; ++o) {
        const long j = static_cast<long>(idx[a]) + o;
        if (j < 0 || j >= n || !pos[static_cast<std::size_t>(static_cast<long>(flat) + o * s)]) return;
      }
    }
    out[flat] = 1;
  });
  return out;
}

RealField log_field(const RealField& w, const std::vector<std::uint8_t>& pos) {
  std::vector<double> s(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (pos[i] || w[i] > 0.0) s[i] = std::log(w[i] > 0.0 ? w[i] : 1.0);
  return RealField(w.axes(), std::move(s));
}

}  // namespace

DissipationReport dissipation_report(const DissipationInputs& in, const StencilScheme& scheme, double mask_threshold) {
  require_axes(in.w12, {"x", "v"}, "dissipation w12");
  require_axes(in.w124, {"x", "v", "vddot"}, "dissipation w124");
  if (!in.flux12_v.same_grid(in.w12) || !in.flux124_v.same_grid(in.w124) || !in.flux124_a.same_grid(in.w124))
    throw ValidationError("dissipation fluxes are on different grids than their densities");
  auto d1 = [&](const RealField& g, const char* axis) { return partial_derivative(g, axis, 1, scheme); };

  DissipationReport rep;
  rep.q2_12 = d1(in.flux12_v, "v");
  rep.q2_124 = d1(in.flux124_v, "v");
  rep.q4_124 = d1(in.flux124_a, "vddot");

  const int half = scheme.order / 2;
  const auto m12 = interior_mask(in.w12, mask_threshold, half);
  const auto m124 = interior_mask(in.w124, mask_threshold, half);

  {
    const auto s = log_field(in.w12, m12);
    const auto sx = d1(s, "x"), sv = d1(s, "v");
    std::vector<double> r(s.size(), 0.0);
    std::size_t masked = 0;
    for_each_index(s.axes(), [&](std::size_t i, std::span<const std::size_t>, std::span<const double> c) {
      if (!m12[i]) {
        ++masked;
        return;
      }
      r[i] = c[1] * sx[i] + in.flux12_v[i] * sv[i] + rep.q2_12[i];
      rep.max_pi_residual_12 = std::max(rep.max_pi_residual_12, std::abs(r[i]));
      rep.max_q = std::max(rep.max_q, std::abs(rep.q2_12[i]));
    });
    rep.masked_fraction_12 = static_cast<double>(masked) / static_cast<double>(s.size());
    rep.pi_residual_12 = RealField(s.axes(), std::move(r));
  }
  {
    const auto s = log_field(in.w124, m124);
    const auto sx = d1(s, "x"), sv = d1(s, "v"), sa = d1(s, "vddot");
    std::vector<double> r(s.size(), 0.0);
    std::size_t masked = 0;
    for_each_index(s.axes(), [&](std::size_t i, std::span<const std::size_t>, std::span<const double> c) {
      if (!m124[i]) {
        ++masked;
        return;
      }
      r[i] = c[1] * sx[i] + in.flux124_v[i] * sv[i] + in.flux124_a[i] * sa[i] + rep.q2_124[i] + rep.q4_124[i];
      rep.max_pi_residual_124 = std::max(rep.max_pi_residual_124, std::abs(r[i]));
      rep.max_q = std::max({rep.max_q, std::abs(rep.q2_124[i]), std::abs(rep.q4_124[i])});
    });
    rep.masked_fraction_124 = static_cast<double>(masked) / static_cast<double>(s.size());
    rep.pi_residual_124 = RealField(s.axes(), std::move(r));
  }
  return rep;
}

}  // namespace psimoyal
