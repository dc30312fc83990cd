#include "psimoyal/fields.hpp"

#include <algorithm>
#include <array>

namespace psimoyal {

namespace {

constexpr std::array<std::string_view, 6> kLabels = {"x", "v", "vdot", "vddot", "s1", "s2"};

// Fornberg's recursion for weights of d^m/dx^m at z over the given nodes.
std::vector<double> fornberg(const std::vector<double>& nodes, double z, int m) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void check_scheme(int power, const StencilScheme& s) {
  if (s.order != 2 && s.order != 4 && s.order != 6)
    throw ValidationError("stencil order must be 2, 4 or 6");
  if (power < 0 || power > max_stencil_power)
    throw ValidationError("derivative power " + std::to_string(power) + " outside 0.." +
                          std::to_string(max_stencil_power));
  if (s.h && !(*s.h > 0.0)) throw ValidationError("stencil step must be positive");
}

// One stencil sweep along axis a with zero extension.
std::vector<double> sweep(std::span<const double> in, const RealField& shape, std::size_t a,
                          const std::vector<double>& w, double scale) {
  const std::size_t n = shape.axis(a).n;
  const std::size_t inner = shape.strides()[a];
  const std::size_t outer = in.size() / (n * inner);
  const long r = static_cast<long>(w.size() / 2);
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * n * inner;
    for (std::size_t i = 0; i < n; ++i) {
      double* dst = out.data() + base + i * inner;
      for (long j = -r; j <= r; ++j) {
        const long src = static_cast<long>(i) + j;
        const double wj = w[static_cast<std::size_t>(j + r)];
        if (src < 0 || src >= static_cast<long>(n) || wj == 0.0) continue;
        const double* s = in.data() + base + static_cast<std::size_t>(src) * inner;
        for (std::size_t k = 0; k < inner; ++k) dst[k] += wj * s[k];
      }
      for (std::size_t k = 0; k < inner; ++k) dst[k] *= scale;
    }
  }
  return out;
}

}  // namespace

bool is_axis_label(std::string_view name) {
  return std::find(kLabels.begin(), kLabels.end(), name) != kLabels.end();
}

AxisGrid make_axis(std::string name, double min, double max, long long n) {
  if (!is_axis_label(name)) throw ValidationError("unknown axis label '" + name + "'");
  if (n < 4 || n % 2 != 0)
    throw ValidationError("axis '" + name + "' needs an even point count >= 4, got " +
                          std::to_string(n));
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
    throw ValidationError("axis '" + name + "' needs finite bounds with max > min");
  return AxisGrid{std::move(name), static_cast<std::size_t>(n), min, max};
}

std::size_t nearest_node(const AxisGrid& axis, double value) {
  const double pos = (value - axis.min) / axis.step();
  // ceil(pos - 0.5) rounds halves down
  double k = std::ceil(pos - 0.5);
  k = std::clamp(k, 0.0, static_cast<double>(axis.n - 1));
  return static_cast<std::size_t>(k);
}

RealField axpby(double a, const RealField& f, double b, const RealField& g) {
  if (!f.same_grid(g)) throw ValidationError("axpby: fields live on different grids");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
  return RealField(f.axes(), std::move(out));
}

RealField multiply(const RealField& f, const RealField& g) {
  if (!f.same_grid(g)) throw ValidationError("multiply: fields live on different grids");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
  return RealField(f.axes(), std::move(out));
}

std::vector<double> central_weights(int power, int order) {
  check_scheme(power, StencilScheme{order, std::nullopt, false});
  if (power == 0) return {1.0};
  const int r = (power + 1) / 2 - 1 + order / 2;
  std::vector<double> nodes;
  for (int j = -r; j <= r; ++j) nodes.push_back(j);
  auto w = fornberg(nodes, 0.0, power);
  // clean symmetric roundoff
  for (int j = 0; j < r; ++j) {
    const double sign = (power % 2 == 0) ? 1.0 : -1.0;
    const double avg = 0.5 * (w[j] + sign * w[2 * r - j]);
    w[j] = avg;
    w[2 * r - j] = sign * avg;
  }
  if (power % 2 == 1) w[r] = 0.0;
  return w;
}

std::vector<double> scheme_weights(int power, const StencilScheme& scheme) {
  check_scheme(power, scheme);
  if (!scheme.composite || power <= 1) return central_weights(power, scheme.order);
  const auto d1 = central_weights(1, scheme.order);
  auto w = d1;
  for (int p = 1; p < power; ++p) w = convolve(w, d1);
  return w;
}

RealField partial_derivative(const RealField& field, std::string_view axis, int power,
                             const StencilScheme& scheme) {
  check_scheme(power, scheme);
  if (power < 1) throw ValidationError("derivative power must be at least 1");
  const std::size_t a = field.axis_index(axis);
  const double h = field.axis(a).step();
  if (scheme.h && std::abs(*scheme.h - h) > 1e-12 * h)
    throw ValidationError("stencil step does not match the spacing of axis '" +
                          std::string(axis) + "'");
  const std::size_t need = static_cast<std::size_t>(scheme.order + power);
  if (field.axis(a).n < need)
    throw ValidationError("axis '" + std::string(axis) + "' too short for the stencil");

  if (scheme.composite) {
    const auto d1 = central_weights(1, scheme.order);
    std::vector<double> buf(field.data().begin(), field.data().end());
    for (int p = 0; p < power; ++p) buf = sweep(buf, field, a, d1, 1.0 / h);
    return RealField(field.axes(), std::move(buf));
  }
  const auto w = central_weights(power, scheme.order);
  return RealField(field.axes(), sweep(field.data(), field, a, w, 1.0 / std::pow(h, power)));
}

double derivative_at(const PointFunction& f, std::span<const double> pt,
                     std::span<const int> powers, const StencilScheme& scheme) {
  if (powers.size() != pt.size()) throw ValidationError("derivative_at: rank mismatch");
  if (!scheme.h) throw ValidationError("pointwise derivatives need an explicit step h");
  const double h = *scheme.h;
  const std::size_t r = pt.size();
  std::vector<std::vector<double>> w(r);
  std::vector<long> half(r);
  double scale = 1.0;
  for (std::size_t a = 0; a < r; ++a) {
    w[a] = scheme_weights(powers[a], scheme);
    half[a] = static_cast<long>(w[a].size() / 2);
    scale /= std::pow(h, powers[a]);
  }
  std::vector<long> off(r);
  for (std::size_t a = 0; a < r; ++a) off[a] = -half[a];
  std::vector<double> q(pt.begin(), pt.end());
  double sum = 0.0;
  while (true) {
    double wt = 1.0;
    for (std::size_t a = 0; a < r; ++a) {
      wt *= w[a][static_cast<std::size_t>(off[a] + half[a])];
      q[a] = pt[a] + static_cast<double>(off[a]) * h;
    }
    if (wt != 0.0) sum += wt * f(q);
    std::size_t a = r;
    while (a-- > 0) {
      if (++off[a] <= half[a]) break;
      off[a] = -half[a];
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  return sum * scale;
}

DerivativeSource finite_difference_source(PointFunction f, StencilScheme scheme) {
  if (!scheme.h) throw ValidationError("finite difference source needs an explicit step h");
  return [f = std::move(f), scheme](std::span<const double> pt, std::span<const int> powers) {
    bool any = false;
    for (int p : powers) any = any || p != 0;
    if (!any) return f(pt);
    return derivative_at(f, pt, powers, scheme);
  };
}

RealField integrate_axis(const RealField& field, std::string_view axis, double weight) {
  const std::size_t a = field.axis_index(axis);
  if (field.rank() < 2)
    throw ValidationError("integrate_axis needs rank >= 2; use integrate_total for rank 1");
  const std::size_t n = field.axis(a).n;
  const std::size_t inner = field.strides()[a];
  const std::size_t outer = field.size() / (n * inner);
  const double scale = weight * field.axis(a).step();
  std::vector<double> out(outer * inner, 0.0);
  const auto in = field.data();
  for (std::size_t o = 0; o < outer; ++o) {
    double* dst = out.data() + o * inner;
    for (std::size_t i = 0; i < n; ++i) {
      const double* s = in.data() + (o * n + i) * inner;
      for (std::size_t k = 0; k < inner; ++k) dst[k] += s[k];
    }
  }
  for (auto& v : out) v *= scale;
  std::vector<AxisGrid> axes;
  for (std::size_t b = 0; b < field.rank(); ++b)
    if (b != a) axes.push_back(field.axis(b));
  return RealField(std::move(axes), std::move(out));
}

double integrate_total(const RealField& field, double weight) {
  double sum = 0.0;
  for (double v : field.data()) sum += v;
  double cell = weight;
  for (const auto& ax : field.axes()) cell *= ax.step();
  return sum * cell;
}

}  // namespace psimoyal
