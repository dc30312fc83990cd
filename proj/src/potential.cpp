#include "psimoyal/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "psimoyal/errors.hpp"

namespace psimoyal {

namespace {

// a!/(a-n)!
double falling(int a, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= a - k;
  return r;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

PolynomialPotential::PolynomialPotential(std::vector<PotentialTerm> terms) {
  std::map<std::pair<int, int>, double> merged;
  for (const auto& t : terms) {
    if (t.a < 0 || t.b < 0) throw ValidationError("potential powers must be nonnegative");
    if (!std::isfinite(t.coeff)) throw ValidationError("potential coefficient is not finite");
    merged[{t.a, t.b}] += t.coeff;
  }
  for (const auto& [key, c] : merged)
    if (c != 0.0) terms_.push_back({key.first, key.second, c});
}

int PolynomialPotential::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.a + t.b);
  return d;
}

bool PolynomialPotential::is_velocity_independent() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.b == 0; });
}

double PolynomialPotential::value(double x, double v) const { return derivative(0, 0, x, v); }

double PolynomialPotential::derivative(int nx, int nv, double x, double v) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (t.a < nx || t.b < nv) continue;
    sum += t.coeff * falling(t.a, nx) * falling(t.b, nv) * ipow(x, t.a - nx) * ipow(v, t.b - nv);
  }
  return sum;
}

bool PolynomialPotential::derivative_vanishes(int nx, int nv) const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [&](const auto& t) { return t.a >= nx && t.b >= nv; });
}

PolynomialPotential PolynomialPotential::scaled(double factor) const {
  auto t = terms_;
  for (auto& term : t) term.coeff *= factor;
  return PolynomialPotential(std::move(t));
}

PolynomialPotential PolynomialPotential::parse(std::string_view text) {
  std::vector<PotentialTerm> terms;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    PotentialTerm t;
    if (!(ls >> t.a)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ValidationError("potential line " + std::to_string(lineno) + ": expected '<a> <b> <coeff>'");
    }
    std::string rest;
    if (!(ls >> t.b >> t.coeff) || (ls >> rest))
      throw ValidationError("potential line " + std::to_string(lineno) + ": expected '<a> <b> <coeff>'");
    terms.push_back(t);
  }
  return PolynomialPotential(std::move(terms));
}

std::string PolynomialPotential::to_text() const {
  std::string out;
  char buf[96];
  for (const auto& t : terms_) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", t.a, t.b, t.coeff);
    out += buf;
  }
  return out;
}

}  // namespace psimoyal
