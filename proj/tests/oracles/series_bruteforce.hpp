#pragma once

// Term-by-term reference sums, written without the library's term tables or
// polynomial class. Potentials are plain monomial lists in velocity variables.
// W derivatives come from a callback in velocity variables.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

struct Monomial {
  int a;  // x power
  int b;  // v power
  double c;
};

// d/dx^nx d/dv^nv of sum c x^a v^b
inline double poly_d(const std::vector<Monomial>& u, int nx, int nv, double x, double v) {
  double s = 0.0;
  for (const auto& t : u) {
    if (nx > t.a || nv > t.b) continue;
    double k = t.c;
    for (int i = 0; i < nx; ++i) k *= (t.a - i);
    for (int i = 0; i < nv; ++i) k *= (t.b - i);
    s += k * std::pow(x, t.a - nx) * std::pow(v, t.b - nv);
  }
  return s;
}

inline int degree(const std::vector<Monomial>& u) {
  int d = 0;
  for (const auto& t : u) d = std::max(d, t.a + t.b);
  return d;
}

inline double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

// W partial in velocity variables: (d_vdot power, d_vddot power) at the point.
using WDeriv = std::function<double(int dvdot, int dvddot)>;

// Right side of the momentum-variable equation, all (n, l >= 1) summands with
// no pruning. U is differentiated in (r, p) with p = m v; W in (pdot, pddot)
// with pdot = m vdot, pddot = m vddot.
inline double momentum_form_rhs(const std::vector<Monomial>& u, double m, double hbar2, double x, double v,
                                const WDeriv& w) {
  const int lmax = degree(u) + 2;
  double s = 0.0;
  for (int l = 1; l <= lmax; ++l) {
    for (int n = 0; n <= 2 * l + 1; ++n) {
      const int k = 2 * l - n + 1;
      const double sign = ((n + l) % 2 == 0) ? 1.0 : -1.0;
      const double coef = sign * std::pow(hbar2 / 2.0, 2 * l) * std::pow(m, k) / (fact(n) * fact(k));
      // d/dp = (1/m) d/dv on U
      const double du = poly_d(u, n, k, x, v) / std::pow(m, k);
      if (du == 0.0) continue;
      // d/dpddot^n d/dpdot^k = m^-(n+k) d/dvddot^n d/dvdot^k on W
      const double dw = w(k, n) / std::pow(m, n + k);
      s += coef * du * dw;
    }
  }
  return s;
}

// Single sum for a v-independent potential.
inline double single_sum_rhs(const std::vector<Monomial>& u1, double m, double hbar2, double x, const WDeriv& w) {
  const int lmax = degree(u1) + 2;
  double s = 0.0;
  for (int l = 1; l <= lmax; ++l) {
    const double sign = (l % 2 == 0) ? -1.0 : 1.0;  // (-1)^(l+1)
    if (poly_d(u1, 2 * l + 1, 0, x, 0.0) == 0.0) continue;
    s += sign * std::pow(hbar2 / (2.0 * m), 2 * l) / fact(2 * l + 1) * poly_d(u1, 2 * l + 1, 0, x, 0.0) *
         w(0, 2 * l + 1);
  }
  return s / m;
}

// Acceleration closure. fd(k) is the k-th f derivative along the closure axis.
inline double accel_closure(const std::vector<Monomial>& u, double m, double hbar2, double x, double v,
                            const std::function<double(int)>& fd) {
  const int lmax = degree(u) + 2;
  double s = 0.0;
  for (int l = 0; l <= lmax; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    if (poly_d(u, 2 * l + 1, 0, x, v) == 0.0) continue;
    s += sign * std::pow(hbar2 / (2.0 * m), 2 * l) / fact(2 * l + 1) * poly_d(u, 2 * l + 1, 0, x, v) * fd(2 * l);
  }
  return s / (m * fd(0));
}

// Velocity closure for a v-independent potential.
inline double velocity_closure(const std::vector<Monomial>& u1, double m, double hbar2, double x,
                               const std::function<double(int)>& fd) {
  const int lmax = degree(u1) + 2;
  double s = 0.0;
  for (int l = 0; l <= lmax; ++l) {
    const double sign = (l % 2 == 0) ? -1.0 : 1.0;  // (-1)^(l+1)
    if (poly_d(u1, 2 * l + 1, 0, x, 0.0) == 0.0) continue;
    s += sign * std::pow(hbar2 / (2.0 * m), 2 * l) / (m * fact(2 * l + 1)) * poly_d(u1, 2 * l + 1, 0, x, 0.0) *
         fd(2 * l);
  }
  return s / fd(0);
}

// Deterministic pseudo-random value for each derivative multi-index, in [0.5, 1.5)
// with a random sign. Stands in for W derivatives at a fixed point.
struct DerivativeTable {
  std::uint64_t seed;

  double operator()(std::span<const int> powers) const {
    std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ull;
    for (int p : powers) {
      h ^= static_cast<std::uint64_t>(p + 1) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
      h ^= h >> 31;
    }
    const double u = static_cast<double>(h >> 11) / 9007199254740992.0;
    return (h & 1 ? -1.0 : 1.0) * (0.5 + u);
  }
};

// Derivatives of exp(-a (y - c)^2): (-sqrt(a))^k H_k(sqrt(a)(y - c)) exp(...).
inline double gauss_d(double a, double c, double y, int k) {
  const double s = std::sqrt(a);
  const double z = s * (y - c);
  double h0 = 1.0, h1 = 2.0 * z;
  double hk = k == 0 ? h0 : h1;
  for (int n = 1; n < k; ++n) {
    const double h2 = 2.0 * z * h1 - 2.0 * n * h0;
    h0 = h1;
    h1 = h2;
    hk = h2;
  }
  return std::pow(-s, k) * hk * std::exp(-z * z);
}

}  // namespace oracle
