#include "psimoyal/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace psimoyal {

namespace {

constexpr std::uint32_t kVersion = 1;
constexpr char kMagic[4] = {'P', 'S', 'I', 'F'};

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.insert(out.end(), b, b + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  template <class T>
  T get() {
    need(sizeof(T));
    std::uint8_t tmp[sizeof(T)];
    std::memcpy(tmp, b_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(tmp, tmp + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, tmp, sizeof(T));
    return v;
  }

  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw IoError("field file is truncated");
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

template <class T>
std::vector<std::uint8_t> encode(const Field<T>& f, std::uint8_t dtype) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, dtype);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.rank()));
  put<std::uint16_t>(out, 0);
  for (const auto& ax : f.axes()) {
    put<std::uint8_t>(out, static_cast<std::uint8_t>(ax.name.size()));
    out.insert(out.end(), ax.name.begin(), ax.name.end());
    put<std::uint64_t>(out, ax.n);
    put<double>(out, ax.min);
    put<double>(out, ax.max);
  }
  out.reserve(out.size() + f.size() * sizeof(T));
  for (const auto& v : f.data()) {
    if constexpr (std::is_same_v<T, complex>) {
      put<double>(out, v.real());
      put<double>(out, v.imag());
    } else {
      put<double>(out, v);
    }
  }
  return out;
}

std::vector<std::size_t> free_axes_and_pins(const std::vector<AxisGrid>& axes, const SliceSpec& slice,
                                            std::vector<std::size_t>& fixed) {
  fixed.assign(axes.size(), 0);
  std::vector<bool> pinned(axes.size(), false);
  for (const auto& [name, value] : slice.pins) {
    std::size_t a = axes.size();
    for (std::size_t b = 0; b < axes.size(); ++b)
      if (axes[b].name == name) a = b;
    if (a == axes.size()) throw ValidationError("slice names axis '" + name + "' which the field does not have");
    if (pinned[a]) throw ValidationError("slice pins axis '" + name + "' twice");
    pinned[a] = true;
    fixed[a] = nearest_node(axes[a], value);
  }
  std::vector<std::size_t> free;
  for (std::size_t a = 0; a < axes.size(); ++a)
    if (!pinned[a]) free.push_back(a);
  if (free.empty() || free.size() > 2)
    throw ValidationError("slice must leave exactly 1 or 2 free axes, leaves " + std::to_string(free.size()));
  return free;
}

void fmt(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

template <class T>
std::string csv(const Field<T>& f, const SliceSpec& slice) {
  std::vector<std::size_t> idx;
  const auto free = free_axes_and_pins(f.axes(), slice, idx);
  std::string out;
  for (std::size_t a : free) out += f.axis(a).name + ",";
  out += std::is_same_v<T, complex> ? "re,im\n" : "value\n";
  const std::size_t outer_n = f.axis(free[0]).n;
  const std::size_t inner_n = free.size() == 2 ? f.axis(free[1]).n : 1;
  for (std::size_t i = 0; i < outer_n; ++i) {
    idx[free[0]] = i;
    for (std::size_t j = 0; j < inner_n; ++j) {
      if (free.size() == 2) idx[free[1]] = j;
      fmt(out, f.axis(free[0]).at(i));
      out += ',';
      if (free.size() == 2) {
        fmt(out, f.axis(free[1]).at(j));
        out += ',';
      }
      const auto& v = f.at(idx);
      if constexpr (std::is_same_v<T, complex>) {
        fmt(out, v.real());
        out += ',';
        fmt(out, v.imag());
      } else {
        fmt(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

double parse_number(std::string_view s, const char* what) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(v))
    throw ValidationError(std::string("cannot parse ") + what + " '" + tmp + "'");
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_field(const RealField& f) { return encode(f, 0); }
std::vector<std::uint8_t> encode_field(const ComplexField& f) { return encode(f, 1); }

AnyField decode_field(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw IoError("field file is empty");
  Reader r(bytes);
  if (r.str(4) != std::string(kMagic, 4)) throw IoError("not a field file (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw IoError("unsupported field file version " + std::to_string(version));
  const auto dtype = r.get<std::uint8_t>();
  const auto rank = r.get<std::uint8_t>();
  r.get<std::uint16_t>();
  if (dtype > 1) throw IoError("unknown field dtype " + std::to_string(dtype));
  if (rank < 1 || rank > max_rank) throw IoError("field rank " + std::to_string(rank) + " out of range");
  std::vector<AxisGrid> axes;
  std::size_t total = 1;
  for (int a = 0; a < rank; ++a) {
    AxisGrid ax;
    ax.name = r.str(r.get<std::uint8_t>());
    ax.n = r.get<std::uint64_t>();
    ax.min = r.get<double>();
    ax.max = r.get<double>();
    if (ax.n == 0 || ax.n > (std::size_t{1} << 32)) throw IoError("implausible axis length in field file");
    total *= ax.n;
    axes.push_back(std::move(ax));
  }
  const std::size_t width = dtype == 1 ? 16 : 8;
  if (r.remaining() != total * width)
    throw IoError("field payload has " + std::to_string(r.remaining()) + " bytes, expected " +
                  std::to_string(total * width));
  try {
    if (dtype == 0) {
      std::vector<double> data(total);
      for (auto& v : data) v = r.get<double>();
      return RealField(std::move(axes), std::move(data));
    }
    std::vector<complex> data(total);
    for (auto& v : data) {
      const double re = r.get<double>();
      const double im = r.get<double>();
      v = complex(re, im);
    }
    return ComplexField(std::move(axes), std::move(data));
  } catch (const ValidationError& e) {
    throw IoError(std::string("malformed field file: ") + e.what());
  } catch (const NumericFailure& e) {
    throw IoError(std::string("malformed field file: ") + e.what());
  }
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw IoError("cannot size '" + path + "'");
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw IoError("error while reading '" + path + "'");
  return bytes;
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return os.str();
}

void write_text(const std::string& path, std::string_view text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_field(const std::string& path, const RealField& f) { write_bytes(path, encode_field(f)); }
void write_field(const std::string& path, const ComplexField& f) { write_bytes(path, encode_field(f)); }

AnyField read_field(const std::string& path) {
  const auto bytes = read_bytes(path);
  return decode_field(bytes);
}

RealField read_real_field(const std::string& path) {
  auto f = read_field(path);
  if (auto* r = std::get_if<RealField>(&f)) return std::move(*r);
  throw ValidationError("'" + path + "' holds a complex field, expected real");
}

ComplexField read_complex_field(const std::string& path) {
  auto f = read_field(path);
  if (auto* c = std::get_if<ComplexField>(&f)) return std::move(*c);
  throw ValidationError("'" + path + "' holds a real field, expected complex");
}

SliceSpec parse_slice(std::string_view text) {
  SliceSpec s;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw ValidationError("slice item '" + std::string(item) + "' is not axis=value");
      s.pins.emplace_back(std::string(item.substr(0, eq)), parse_number(item.substr(eq + 1), "slice value"));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return s;
}

std::string export_csv(const RealField& f, const SliceSpec& slice) { return csv(f, slice); }
std::string export_csv(const ComplexField& f, const SliceSpec& slice) { return csv(f, slice); }

PolynomialPotential read_potential(const std::string& path) { return PolynomialPotential::parse(read_text(path)); }

ModeSet parse_modes(std::string_view text, double hbar2) {
  ModeSet modes;
  modes.hbar2 = hbar2;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double re_e, im_e, re_c, im_c;
    std::string rest;
    if (!(ls >> re_e >> im_e >> re_c >> im_c) || (ls >> rest))
      throw ValidationError("mode line " + std::to_string(lineno) + ": expected '<ReE> <ImE> <Rec> <Imc>'");
    modes.energies.emplace_back(re_e, im_e);
    modes.coeffs.emplace_back(re_c, im_c);
  }
  modes.validate();
  return modes;
}

PhysParams RunConfig::params() const {
  auto p = PhysParams::harmonic(m, hbar, omega);
  if (hbar2) {
    p.hbar2 = *hbar2;
    p.e12 = p.hbar2 * p.omega2 / 2.0;
    p.validate();
  }
  return p;
}

std::optional<double> parse_hbar2(std::string_view text) {
  if (text == "auto") return std::nullopt;
  const double v = parse_number(text, "hbar2");
  if (!(v > 0.0)) throw ValidationError("hbar2 must be positive");
  return v;
}

}  // namespace psimoyal
