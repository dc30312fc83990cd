#pragma once

#include <optional>
#include <vector>

#include "psimoyal/fields.hpp"
#include "psimoyal/ho_oracle.hpp"
#include "psimoyal/potential.hpp"

namespace psimoyal {

/// One (l, n) summand: coefficient * d^u_dx/dx d^u_dv/dv U * d^w_dvddot d^w_dvdot W.
struct MoyalTerm {
  int l = 0;
  int n = 0;
  double coefficient = 0.0;
  int u_dx = 0;
  int u_dv = 0;
  int w_dvddot = 0;
  int w_dvdot = 0;
};

using MoyalTermTable = std::vector<MoyalTerm>;

/// Non-vanishing l >= 1 terms, ordered by (l, n).
MoyalTermTable build_term_table(const PolynomialPotential& u, const PhysParams& p);

/// Requires canonical axes (x, v, vdot, vddot).
void check_canonical_w4(const RealField& w4);

RealField moyal_rhs(const RealField& w4, const PolynomialPotential& u, const PhysParams& p,
                    const StencilScheme& scheme);

RealField transport_lhs(const RealField& w4, const PolynomialPotential& u, const PhysParams& p,
                        const StencilScheme& scheme, const std::optional<RealField>& dt_term = std::nullopt);

RealField psi_moyal_residual(const RealField& w4, const PolynomialPotential& u, const PhysParams& p,
                             const StencilScheme& scheme);

// Pointwise mode. Points are (x, v, vdot, vddot); the source supplies W and
// its partials in that coordinate order.

double moyal_rhs_at(const DerivativeSource& w, const PolynomialPotential& u, const PhysParams& p,
                    std::span<const double> pt);

double transport_lhs_at(const DerivativeSource& w, const PolynomialPotential& u, const PhysParams& p,
                        std::span<const double> pt, double dt_term = 0.0);

double psi_moyal_residual_at(const DerivativeSource& w, const PolynomialPotential& u,
                             const PhysParams& p, std::span<const double> pt);

}  // namespace psimoyal
