#include "psimoyal/moyal.hpp"

#include <array>
#include <cmath>

namespace psimoyal {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Applies d^a/dvdot^a d^b/dvddot^b with stencils.
RealField mixed(const RealField& w, int a, int b, const StencilScheme& s) {
  if (a > 0 && b > 0) return partial_derivative(partial_derivative(w, "vdot", a, s), "vddot", b, s);
  if (a > 0) return partial_derivative(w, "vdot", a, s);
  return partial_derivative(w, "vddot", b, s);
}

// out += f(x, v, vdot, vddot) * d
template <class Fn>
void accumulate(std::vector<double>& out, const RealField& d, Fn&& f) {
  for_each_index(d.axes(), [&](std::size_t flat, std::span<const std::size_t>, std::span<const double> c) {
    out[flat] += f(c) * d[flat];
  });
}

}  // namespace

MoyalTermTable build_term_table(const PolynomialPotential& u, const PhysParams& p) {
  p.validate();
  MoyalTermTable table;
  const int lmax = u.degree() >= 1 ? (u.degree() - 1) / 2 : 0;
  const double q = p.hbar2 / (2.0 * p.m);
  for (int l = 1; l <= lmax; ++l) {
    for (int n = 0; n <= 2 * l + 1; ++n) {
      const int k = 2 * l - n + 1;
      if (u.derivative_vanishes(n, k)) continue;
      const double sign = ((n + l) % 2 == 0) ? 1.0 : -1.0;
      const double c = sign * std::pow(q, 2 * l) / (factorial(n) * factorial(k)) / p.m;
      table.push_back({l, n, c, n, k, n, k});
    }
  }
  return table;
}

void check_canonical_w4(const RealField& w4) {
  static const std::array<const char*, 4> names = {"x", "v", "vdot", "vddot"};
  if (w4.rank() != 4) throw ValidationError("expected a rank-4 field on (x, v, vdot, vddot)");
  for (std::size_t a = 0; a < 4; ++a)
    if (w4.axis(a).name != names[a])
      throw ValidationError("rank-4 field axes must be ordered (x, v, vdot, vddot)");
}

RealField moyal_rhs(const RealField& w4, const PolynomialPotential& u, const PhysParams& p,
                    const StencilScheme& scheme) {
  check_canonical_w4(w4);
  const auto table = build_term_table(u, p);
  std::vector<double> out(w4.size(), 0.0);
  for (const auto& t : table) {
    const auto d = mixed(w4, t.w_dvdot, t.w_dvddot, scheme);
    accumulate(out, d, [&](std::span<const double> c) {
      return t.coefficient * u.derivative(t.u_dx, t.u_dv, c[0], c[1]);
    });
  }
  return RealField(w4.axes(), std::move(out));
}

RealField transport_lhs(const RealField& w4, const PolynomialPotential& u, const PhysParams& p,
                        const StencilScheme& scheme, const std::optional<RealField>& dt_term) {
  check_canonical_w4(w4);
  p.validate();
  std::vector<double> out(w4.size(), 0.0);
  if (dt_term) {
    if (!dt_term->same_grid(w4)) throw ValidationError("time-derivative field is on a different grid");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*dt_term)[i];
  }
  const double inv_m = 1.0 / p.m;
  accumulate(out, partial_derivative(w4, "x", 1, scheme), [](auto c) { return c[1]; });
  accumulate(out, partial_derivative(w4, "v", 1, scheme), [](auto c) { return c[2]; });
  accumulate(out, partial_derivative(w4, "vdot", 1, scheme),
             [&](auto c) { return c[3] - inv_m * u.derivative(0, 1, c[0], c[1]); });
  accumulate(out, partial_derivative(w4, "vddot", 1, scheme),
             [&](auto c) { return inv_m * u.derivative(1, 0, c[0], c[1]); });
  return RealField(w4.axes(), std::move(out));
}

RealField psi_moyal_residual(const RealField& w4, const PolynomialPotential& u, const PhysParams& p,
                             const StencilScheme& scheme) {
  auto lhs = transport_lhs(w4, u, p, scheme);
  const auto rhs = moyal_rhs(w4, u, p, scheme);
  return axpby(1.0, lhs, -1.0, rhs);
}

double moyal_rhs_at(const DerivativeSource& w, const PolynomialPotential& u, const PhysParams& p,
                    std::span<const double> pt) {
  if (pt.size() != 4) throw ValidationError("pointwise Moyal terms need a rank-4 point");
  double sum = 0.0;
  for (const auto& t : build_term_table(u, p)) {
    const std::array<int, 4> pw = {0, 0, t.w_dvdot, t.w_dvddot};
    sum += t.coefficient * u.derivative(t.u_dx, t.u_dv, pt[0], pt[1]) * w(pt, pw);
  }
  return sum;
}

double transport_lhs_at(const DerivativeSource& w, const PolynomialPotential& u, const PhysParams& p,
                        std::span<const double> pt, double dt_term) {
  if (pt.size() != 4) throw ValidationError("pointwise transport needs a rank-4 point");
  p.validate();
  const double x = pt[0], v = pt[1], vdot = pt[2], vddot = pt[3];
  const std::array<int, 4> ex = {1, 0, 0, 0}, ev = {0, 1, 0, 0}, ed = {0, 0, 1, 0}, edd = {0, 0, 0, 1};
  return dt_term + v * w(pt, ex) + vdot * w(pt, ev) +
         (vddot - u.derivative(0, 1, x, v) / p.m) * w(pt, ed) + (u.derivative(1, 0, x, v) / p.m) * w(pt, edd);
}

double psi_moyal_residual_at(const DerivativeSource& w, const PolynomialPotential& u,
                             const PhysParams& p, std::span<const double> pt) {
  return transport_lhs_at(w, u, p, pt) - moyal_rhs_at(w, u, p, pt);
}

}  // namespace psimoyal
