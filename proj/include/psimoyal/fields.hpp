#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psimoyal/errors.hpp"

namespace psimoyal {

using complex = std::complex<double>;

/// Uniform endpoint-exclusive axis: sample i sits at min + i*step.
struct AxisGrid {
  std::string name;
  std::size_t n = 0;
  double min = 0.0;
  double max = 0.0;

  double step() const { return (max - min) / static_cast<double>(n); }
  double at(std::size_t i) const { return min + static_cast<double>(i) * step(); }

  friend bool operator==(const AxisGrid&, const AxisGrid&) = default;
};

bool is_axis_label(std::string_view name);

AxisGrid make_axis(std::string name, double min, double max, long long n);

/// Index of the node closest to value, clamped to the axis. Ties go to the
/// lower node.
std::size_t nearest_node(const AxisGrid& axis, double value);

inline constexpr std::size_t max_rank = 4;

template <class T>
class Field {
 public:
  Field() = default;

  Field(std::vector<AxisGrid> axes, std::vector<T> data)
      : axes_(std::move(axes)), data_(std::move(data)) {
    if (axes_.empty() || axes_.size() > max_rank)
      throw ValidationError("field rank must be between 1 and 4");
    std::size_t total = 1;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      validate(axes_[a]);
      for (std::size_t b = 0; b < a; ++b)
        if (axes_[b].name == axes_[a].name)
          throw ValidationError("duplicate axis '" + axes_[a].name + "'");
      total *= axes_[a].n;
    }
    if (data_.size() != total)
      throw ValidationError("field data length " + std::to_string(data_.size()) +
                            " does not match axis product " + std::to_string(total));
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!finite(data_[i]))
        throw NumericFailure("non-finite field value at flat index " + std::to_string(i));
    strides_.assign(axes_.size(), 1);
    for (std::size_t a = axes_.size() - 1; a > 0; --a)
      strides_[a - 1] = strides_[a] * axes_[a].n;
  }

  std::size_t rank() const { return axes_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<AxisGrid>& axes() const { return axes_; }
  const AxisGrid& axis(std::size_t a) const { return axes_.at(a); }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::span<const T> data() const { return data_; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  bool has_axis(std::string_view name) const {
    for (const auto& ax : axes_)
      if (ax.name == name) return true;
    return false;
  }

  std::size_t axis_index(std::string_view name) const {
    for (std::size_t a = 0; a < axes_.size(); ++a)
      if (axes_[a].name == name) return a;
    throw ValidationError("field has no axis '" + std::string(name) + "'");
  }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) flat += idx[a] * strides_[a];
    return flat;
  }

  const T& at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }

  /// Largest magnitude over the field.
  double peak() const {
    double best = 0.0;
    for (const auto& v : data_) best = std::max(best, static_cast<double>(std::abs(v)));
    return best;
  }

  bool same_grid(const Field<T>& other) const { return axes_ == other.axes_; }

  template <class U>
  bool same_grid(const Field<U>& other) const { return axes_ == other.axes(); }

 private:
  static bool finite(double v) { return std::isfinite(v); }
  static bool finite(const complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

  static void validate(const AxisGrid& ax) {
    if (!is_axis_label(ax.name)) throw ValidationError("unknown axis label '" + ax.name + "'");
    if (ax.n < 4 || ax.n % 2 != 0)
      throw ValidationError("axis '" + ax.name + "' needs an even point count >= 4");
    if (!(ax.max > ax.min) || !std::isfinite(ax.min) || !std::isfinite(ax.max))
      throw ValidationError("axis '" + ax.name + "' needs finite bounds with max > min");
  }

  std::vector<AxisGrid> axes_;
  std::vector<std::size_t> strides_;
  std::vector<T> data_;
};

using RealField = Field<double>;
using ComplexField = Field<complex>;

/// Visits every multi-index of the given axes in row-major order.
template <class Fn>
void for_each_index(const std::vector<AxisGrid>& axes, Fn&& fn) {
  std::array<std::size_t, max_rank> idx{};
  std::array<double, max_rank> coord{};
  const std::size_t r = axes.size();
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.n;
  for (std::size_t a = 0; a < r; ++a) coord[a] = axes[a].at(0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, std::span<const std::size_t>(idx.data(), r), std::span<const double>(coord.data(), r));
    for (std::size_t a = r; a-- > 0;) {
      if (++idx[a] < axes[a].n) {
        coord[a] = axes[a].at(idx[a]);
        break;
      }
      idx[a] = 0;
      coord[a] = axes[a].at(0);
    }
  }
}

template <class Fn>
RealField sample_real(Fn&& f, std::vector<AxisGrid> axes) {
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.n;
  std::vector<double> data(total);
  for_each_index(axes, [&](std::size_t flat, std::span<const std::size_t>, std::span<const double> c) {
    data[flat] = f(c);
  });
  return RealField(std::move(axes), std::move(data));
}

template <class Fn>
ComplexField sample_complex(Fn&& f, std::vector<AxisGrid> axes) {
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.n;
  std::vector<complex> data(total);
  for_each_index(axes, [&](std::size_t flat, std::span<const std::size_t>, std::span<const double> c) {
    data[flat] = f(c);
  });
  return ComplexField(std::move(axes), std::move(data));
}

/// Same-grid pointwise combination a*F + b*G.
RealField axpby(double a, const RealField& f, double b, const RealField& g);

/// Pointwise product.
RealField multiply(const RealField& f, const RealField& g);

// ---- stencils ----

struct StencilScheme {
  int order = 4;
  std::optional<double> h;
  // Build higher derivatives by repeating the first-derivative stencil.
  bool composite = false;
};

inline constexpr int max_stencil_power = 6;

/// Central weights for d^power/dx^power on unit spacing, offsets -r..r.
std::vector<double> central_weights(int power, int order);

/// Weights actually used by a scheme (composite schemes convolve first
/// derivatives).
std::vector<double> scheme_weights(int power, const StencilScheme& scheme);

RealField partial_derivative(const RealField& field, std::string_view axis, int power,
                             const StencilScheme& scheme);

using PointFunction = std::function<double(std::span<const double>)>;

/// Mixed partial of a callable at pt, tensor product of 1D stencils with
/// spacing scheme.h. powers[a] is the derivative count along coordinate a.
double derivative_at(const PointFunction& f, std::span<const double> pt,
                     std::span<const int> powers, const StencilScheme& scheme);

/// Evaluates mixed partials: powers all zero means the value itself.
using DerivativeSource = std::function<double(std::span<const double>, std::span<const int>)>;

DerivativeSource finite_difference_source(PointFunction f, StencilScheme scheme);

// ---- quadrature ----

RealField integrate_axis(const RealField& field, std::string_view axis, double weight = 1.0);

double integrate_total(const RealField& field, double weight = 1.0);

}  // namespace psimoyal
