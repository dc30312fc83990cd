#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "psimoyal/fields.hpp"
#include "psimoyal/ho_oracle.hpp"
#include "psimoyal/potential.hpp"
#include "psimoyal/vonneumann.hpp"

namespace psimoyal {

// Field file layout, little-endian:
//   "PSIF" | u32 version=1 | u8 dtype (0 real, 1 complex) | u8 rank | 2 zero bytes
//   per axis: u8 name length, name, u64 n, f64 min, f64 max
//   payload: binary64 values, complex interleaved (re, im)

using AnyField = std::variant<RealField, ComplexField>;

std::vector<std::uint8_t> encode_field(const RealField& f);
std::vector<std::uint8_t> encode_field(const ComplexField& f);
AnyField decode_field(std::span<const std::uint8_t> bytes);

void write_field(const std::string& path, const RealField& f);
void write_field(const std::string& path, const ComplexField& f);
AnyField read_field(const std::string& path);

/// Reads and insists on the dtype. A dtype mismatch is a validation error.
RealField read_real_field(const std::string& path);
ComplexField read_complex_field(const std::string& path);

std::vector<std::uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes);
std::string read_text(const std::string& path);
void write_text(const std::string& path, std::string_view text);

/// "axis=value,axis=value". Pinned axes snap to their nearest node.
struct SliceSpec {
  std::vector<std::pair<std::string, double>> pins;
};

SliceSpec parse_slice(std::string_view text);

/// Header "axis1[,axis2],value" (or re,im for complex), 17 significant digits,
/// outer axis ascending with the inner axis fastest. 1 or 2 free axes.
std::string export_csv(const RealField& f, const SliceSpec& slice);
std::string export_csv(const ComplexField& f, const SliceSpec& slice);

PolynomialPotential read_potential(const std::string& path);

/// One mode per line: Re E, Im E, Re c, Im c. '#' comments.
ModeSet parse_modes(std::string_view text, double hbar2);

/// Settings shared by the CLI subcommands.
struct RunConfig {
  double m = 1.0;
  double hbar = 1.0;
  double omega = 1.0;
  std::optional<double> hbar2;  // empty means hbar*omega^2
  int stencil_order = 4;
  double mask_threshold = 1e-8;

  PhysParams params() const;
};

/// "auto" or a positive number.
std::optional<double> parse_hbar2(std::string_view text);

}  // namespace psimoyal
