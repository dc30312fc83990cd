#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "oracles/series_bruteforce.hpp"
#include "psimoyal/fields.hpp"
#include "psimoyal/ho_oracle.hpp"

namespace testing {

using namespace psimoyal;

inline constexpr double pi = 3.14159265358979323846;

// A * prod exp(-a_i (y_i - c_i)^2) with exact partials.
struct Gaussian {
  double amp = 1.0;
  std::vector<double> a;
  std::vector<double> c;

  double operator()(std::span<const double> y) const {
    double s = amp;
    for (std::size_t i = 0; i < a.size(); ++i) s *= std::exp(-a[i] * (y[i] - c[i]) * (y[i] - c[i]));
    return s;
  }

  DerivativeSource source() const {
    return [g = *this](std::span<const double> y, std::span<const int> k) {
      double s = g.amp;
      for (std::size_t i = 0; i < g.a.size(); ++i) s *= oracle::gauss_d(g.a[i], g.c[i], y[i], k[i]);
      return s;
    };
  }
};

// W12 of the oscillator as a Gaussian in (x, v).
inline Gaussian ho_w12(const PhysParams& p) {
  const double kx = p.m * p.omega / p.hbar;
  const double kv = p.m / (p.hbar * p.omega);
  return {p.m / (pi * p.hbar), {kx, kv}, {0.0, 0.0}};
}

inline std::vector<std::array<double, 4>> random_points(std::size_t n, double lo, double hi,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::array<double, 4>> pts(n);
  for (auto& p : pts)
    for (auto& c : p) c = u(rng);
  return pts;
}

inline std::vector<AxisGrid> ho_psi_axes(std::size_t n = 64, double hw = 8.0) {
  return {make_axis("x", -hw, hw, static_cast<long long>(n)), make_axis("v", -hw, hw, static_cast<long long>(n))};
}

inline ComplexField ho_psi(const PhysParams& p, std::size_t n = 64, double hw = 8.0) {
  return sample_complex([&](std::span<const double> c) { return psi12(c[0], c[1], 0.0, p); }, ho_psi_axes(n, hw));
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

}  // namespace testing
