#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "psimoyal/io.hpp"
#include "psimoyal/wigner.hpp"
#include "support.hpp"

using namespace psimoyal;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("psimoyal_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

RealField sample4(std::size_t n) {
  const auto ax = [&](const char* name, double lo) { return make_axis(name, lo, lo + 2.0, static_cast<long long>(n)); };
  return sample_real([](auto c) { return std::sin(c[0]) + 0.1 * c[1] - c[2] * c[3] + 1e-300; },
                     {ax("x", -1), ax("v", -0.5), ax("vdot", 0), ax("vddot", -2)});
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("encoded header layout") {
  auto f = sample_real([](auto) { return 0.5; }, {make_axis("x", -1, 1, 4), make_axis("vdot", 0, 2, 6)});
  auto bytes = encode_field(f);
  REQUIRE(bytes.size() >= 12);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "PSIF");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 0);
  CHECK(bytes[9] == 2);
  const std::size_t axes_bytes = (1 + 1 + 24) + (1 + 4 + 24);
  CHECK(bytes.size() == 12 + axes_bytes + 24 * 8);
  double last;
  std::memcpy(&last, bytes.data() + bytes.size() - 8, 8);
  CHECK(last == 0.5);

  auto c = sample_complex([](auto) { return complex(1, 2); }, {make_axis("x", -1, 1, 4), make_axis("v", -1, 1, 4)});
  auto cb = encode_field(c);
  CHECK(cb[8] == 1);
  CHECK(cb.size() == 12 + 2 * 26 + 16 * 16);
}

TEST_CASE("round trip is bit exact") {
  TempDir dir;
  const auto f = sample4(6);
  write_field(dir.file("a.fld"), f);
  auto back = read_real_field(dir.file("a.fld"));
  CHECK(back.axes() == f.axes());
  CHECK(std::memcmp(back.data().data(), f.data().data(), f.size() * sizeof(double)) == 0);
  write_field(dir.file("b.fld"), back);
  CHECK(read_bytes(dir.file("a.fld")) == read_bytes(dir.file("b.fld")));

  auto psi = testing::ho_psi(PhysParams::harmonic(), 16, 4);
  write_field(dir.file("psi.fld"), psi);
  auto pb = read_complex_field(dir.file("psi.fld"));
  CHECK(std::memcmp(pb.data().data(), psi.data().data(), psi.size() * sizeof(complex)) == 0);
  write_field(dir.file("psi2.fld"), pb);
  CHECK(read_bytes(dir.file("psi.fld")) == read_bytes(dir.file("psi2.fld")));

  auto any = read_field(dir.file("psi.fld"));
  CHECK(std::holds_alternative<ComplexField>(any));
}

TEST_CASE("awkward values survive") {
  auto ax = make_axis("x", -1e-3, 7.123456789012345e5, 4);
  RealField f({ax}, {-0.0, 4.9e-324, 1.7976931348623157e308, -1.0 / 3.0});
  auto any = decode_field(encode_field(f));
  const auto& back = std::get<RealField>(any);
  CHECK(std::signbit(back[0]));
  CHECK(back[1] == 4.9e-324);
  CHECK(back[2] == 1.7976931348623157e308);
  CHECK(back.axis(0) == ax);
}

TEST_CASE("damaged files") {
  std::vector<std::uint8_t> empty;
  CHECK_THROWS_AS(decode_field(empty), IoError);

  auto good = encode_field(sample4(4));
  auto bad = good;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_field(bad), IoError);

  auto version = good;
  version[4] = 9;
  CHECK_THROWS_AS(decode_field(version), IoError);

  auto dtype = good;
  dtype[8] = 7;
  CHECK_THROWS_AS(decode_field(dtype), IoError);

  auto rank = good;
  rank[9] = 5;
  CHECK_THROWS_AS(decode_field(rank), IoError);

  for (std::size_t cut : {std::size_t{3}, std::size_t{11}, std::size_t{20}, good.size() - 1}) {
    std::vector<std::uint8_t> shortened(good.begin(), good.begin() + static_cast<long>(cut));
    CHECK_THROWS_AS(decode_field(shortened), IoError);
  }
  auto longer = good;
  longer.push_back(0);
  CHECK_THROWS_AS(decode_field(longer), IoError);

  CHECK_THROWS_AS(read_bytes("/nonexistent/dir/file.fld"), IoError);
  CHECK_THROWS_AS(write_bytes("/nonexistent/dir/file.fld", good), IoError);
}

TEST_CASE("dtype is enforced on typed reads") {
  TempDir dir;
  write_field(dir.file("r.fld"), sample4(4));
  CHECK_THROWS_AS(read_complex_field(dir.file("r.fld")), ValidationError);
  write_field(dir.file("c.fld"), testing::ho_psi(PhysParams::harmonic(), 8, 2));
  CHECK_THROWS_AS(read_real_field(dir.file("c.fld")), ValidationError);
}

TEST_CASE("slice parsing") {
  auto s = parse_slice("x=0,v=-1.5");
  REQUIRE(s.pins.size() == 2);
  CHECK(s.pins[0].first == "x");
  CHECK(s.pins[1].second == -1.5);
  CHECK(parse_slice("").pins.empty());
  CHECK_THROWS_AS(parse_slice("x"), ValidationError);
  CHECK_THROWS_AS(parse_slice("x=abc"), ValidationError);
}

TEST_CASE("csv of an oscillator slice") {
  const auto p = PhysParams::harmonic();
  auto w = wigner4(testing::ho_psi(p, 16, 4), p);
  auto text = export_csv(w, parse_slice("x=0,v=0"));
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  CHECK(header == "vdot,vddot,value");
  CHECK(count_lines(text) == 1 + 16 * 16);
  double best = 0.0, first_vdot = 0.0, prev = -1e9;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    double a, b, val;
    char c1, c2;
    std::istringstream ls(line);
    ls >> a >> c1 >> b >> c2 >> val;
    if (row == 0) first_vdot = a;
    if (row % 16 == 0) {
      CHECK(a > prev);
      prev = a;
    }
    best = std::max(best, val);
    ++row;
  }
  CHECK(first_vdot == w.axis(2).min);
  CHECK(best == doctest::Approx(0.1013).epsilon(1e-3));
}

TEST_CASE("csv shapes and errors") {
  auto f = sample4(4);
  auto one = export_csv(f, parse_slice("x=0,v=0,vdot=1"));
  CHECK(one.substr(0, one.find('\n')) == "vddot,value");
  CHECK(count_lines(one) == 5);
  CHECK_THROWS_AS(export_csv(f, parse_slice("x=0,v=0,vdot=0,vddot=0")), ValidationError);
  CHECK_THROWS_AS(export_csv(f, parse_slice("x=0")), ValidationError);
  CHECK_THROWS_AS(export_csv(f, parse_slice("x=0,x=1,v=0")), ValidationError);
  CHECK_THROWS_AS(export_csv(f, parse_slice("s1=0,v=0")), ValidationError);

  auto c = sample_complex([](auto x) { return complex(x[0], -x[1]); }, {make_axis("x", 0, 1, 4), make_axis("v", 0, 1, 4)});
  auto ct = export_csv(c, SliceSpec{});
  CHECK(ct.substr(0, ct.find('\n')) == "x,v,re,im");
  CHECK(ct.find("0.25,0.5,0.25,-0.5\n") != std::string::npos);

  // values are written with 17 significant digits
  RealField third({make_axis("x", 0, 1, 4)}, {1.0 / 3.0, 0, 0, 0});
  CHECK(export_csv(third, {}).find("0,0.33333333333333331\n") != std::string::npos);
}

TEST_CASE("potential text") {
  auto u = PolynomialPotential::parse("# oscillator\n0 2 1.5\n2 0 -0.5\n\n0 0 0\n2 0 0.25  # merged\n");
  REQUIRE(u.terms().size() == 2);
  CHECK(u.terms()[0].a == 0);
  CHECK(u.terms()[1].coeff == -0.25);
  CHECK(PolynomialPotential::parse(u.to_text()).terms().size() == 2);
  auto again = PolynomialPotential::parse(u.to_text());
  for (std::size_t i = 0; i < 2; ++i) CHECK(again.terms()[i].coeff == u.terms()[i].coeff);
  CHECK_THROWS_AS(PolynomialPotential::parse("1 2"), ValidationError);
  CHECK_THROWS_AS(PolynomialPotential::parse("1 2 3 4"), ValidationError);
  CHECK_THROWS_AS(PolynomialPotential::parse("-1 0 1"), ValidationError);
  CHECK_THROWS_AS(PolynomialPotential::parse("a 0 1"), ValidationError);

  TempDir dir;
  write_text(dir.file("u.pot"), "4 0 0.25\n");
  CHECK(read_potential(dir.file("u.pot")).degree() == 4);
  CHECK_THROWS_AS(read_potential(dir.file("missing.pot")), IoError);
}

TEST_CASE("polynomial potential algebra") {
  PolynomialPotential u({{3, 1, 2.0}, {0, 0, 1.0}, {3, 1, -2.0}});
  CHECK(u.terms().size() == 1);
  CHECK(u.degree() == 0);
  PolynomialPotential w({{3, 2, 1.0}});
  CHECK(w.derivative(2, 1, 2.0, 3.0) == doctest::Approx(6 * 2.0 * 2 * 3.0));
  CHECK(w.derivative(4, 0, 1, 1) == 0.0);
  CHECK(w.derivative_vanishes(4, 0));
  CHECK_FALSE(w.derivative_vanishes(3, 2));
  CHECK(w.scaled(2.0).value(1, 1) == 2.0);
  CHECK_FALSE(w.is_velocity_independent());
}

TEST_CASE("mode text") {
  auto m = parse_modes("# E c\n1 0 1 0\n2 0.5 0.3 -0.4\n", 2.0);
  REQUIRE(m.energies.size() == 2);
  CHECK(m.energies[1] == complex(2, 0.5));
  CHECK(m.coeffs[1] == complex(0.3, -0.4));
  CHECK(m.hbar2 == 2.0);
  CHECK_THROWS_AS(parse_modes("1 0 1\n", 1.0), ValidationError);
  CHECK_THROWS_AS(parse_modes("# nothing\n", 1.0), ValidationError);
}

TEST_CASE("run configuration") {
  RunConfig cfg;
  auto p = cfg.params();
  CHECK(p.hbar2 == 1.0);
  CHECK(p.ho_consistent());
  cfg.omega = 2.0;
  CHECK(cfg.params().hbar2 == 4.0);
  cfg.hbar2 = 1.5;
  CHECK(cfg.params().hbar2 == 1.5);
  CHECK_FALSE(cfg.params().ho_consistent());
  CHECK_FALSE(parse_hbar2("auto").has_value());
  CHECK(*parse_hbar2("0.25") == 0.25);
  CHECK_THROWS_AS(parse_hbar2("-1"), ValidationError);
  CHECK_THROWS_AS(parse_hbar2("zero"), ValidationError);
}
