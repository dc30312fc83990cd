#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "psimoyal/fields.hpp"
#include "psimoyal/ho_oracle.hpp"
#include "psimoyal/potential.hpp"

namespace psimoyal {

struct FluxOptions {
  // relative to the peak of the denominator
  double mask_threshold = 1e-8;
  // Dual axes from the transform are periodic. Centre the moment window on
  // the circular mean of each column instead of the stored range.
  bool periodic_moments = true;
};

struct FluxField {
  FluxKind kind = FluxKind::accel_123;
  RealField values;    // flux, 0 off the support
  RealField density;   // denominator * flux, defined everywhere
  std::vector<std::uint8_t> support;
  double threshold = 0.0;  // absolute
  double masked_fraction = 0.0;
};

/// m-weighted first moment over `axis` divided by the m-weighted marginal.
FluxField moment_flux(const RealField& field, std::string_view axis, FluxKind kind,
                      const PhysParams& p, const FluxOptions& opts = {});

/// Moment fluxes of a rank-4 field: accel_123, velocity_124 and velocity_12.
/// The rank-4 acceleration means need the closure instead.
FluxField mean_flux_from_w4(const RealField& w4, FluxKind which, const PhysParams& p,
                            const FluxOptions& opts = {});

/// Acceleration closure on a rank-4 field or a rank-3 field on (x, v, vddot).
FluxField vlasov_moyal_accel_flux(const RealField& f, const PolynomialPotential& u, const PhysParams& p,
                                  const StencilScheme& scheme, const FluxOptions& opts = {});

/// Rank-3 acceleration mean obtained by integrating the rank-4 closure over vdot.
FluxField accel_124_from_w4_closure(const RealField& f4, const PolynomialPotential& u,
                                    const PhysParams& p, const StencilScheme& scheme,
                                    const FluxOptions& opts = {});

/// Velocity closure on a rank-2 field; u1 must not depend on v.
FluxField vlasov_moyal_velocity_flux(const RealField& f12, const PolynomialPotential& u1,
                                     const PhysParams& p, const StencilScheme& scheme,
                                     const FluxOptions& opts = {});

/// Pointwise closures. `vddot_index`/`v_index` name the coordinate the
/// f-derivatives run along.
double vlasov_moyal_accel_flux_at(const DerivativeSource& f, const PolynomialPotential& u,
                                  const PhysParams& p, std::span<const double> pt, std::size_t vddot_index);
double vlasov_moyal_velocity_flux_at(const DerivativeSource& f, const PolynomialPotential& u1,
                                     const PhysParams& p, std::span<const double> pt, std::size_t v_index = 1);

enum class VlasovEquation {
  chain4,  // rank 4 with the closure acceleration
  w123,    // (x, v, vdot) with the potential series on the right
  w124,    // (x, v, vddot)
  w12,     // (x, v)
};

struct VlasovInputs {
  RealField field;
  std::optional<RealField> velocity_density;  // field * <vdot>, w124 and w12
  std::optional<RealField> accel_density;     // field * <vddot>, chain4, w123 and w124
  std::optional<PolynomialPotential> potential;  // w123 right-hand side
  std::optional<RealField> dt_term;
};

RealField vlasov_residual(VlasovEquation eq, const VlasovInputs& in, const PhysParams& p,
                          const StencilScheme& scheme);

struct VlasovPointInputs {
  PointFunction field;
  PointFunction velocity_flux;
  PointFunction accel_flux;
  std::optional<PolynomialPotential> potential;
  double dt_term = 0.0;
};

double vlasov_residual_at(VlasovEquation eq, const VlasovPointInputs& in, const PhysParams& p,
                          const StencilScheme& scheme, std::span<const double> pt);

struct EquivalenceReport {
  double max_abs = 0.0;
  double scale = 0.0;
  double relative = 0.0;
};

/// Divergence form with the closure acceleration against the Psi-Moyal
/// residual for a velocity-independent potential.
EquivalenceReport theorem2_equivalence(const PolynomialPotential& u1, const RealField& f4,
                                       const PhysParams& p, const StencilScheme& scheme,
                                       const FluxOptions& opts = {});

struct DissipationInputs {
  RealField w12;
  RealField w124;
  RealField flux12_v;    // <vdot>_12 on the w12 grid
  RealField flux124_v;   // <vdot>_124 on the w124 grid
  RealField flux124_a;   // <vddot>_124 on the w124 grid
};

struct DissipationReport {
  RealField q2_12, q2_124, q4_124;
  RealField pi_residual_12, pi_residual_124;  // pi S + sum Q
  double max_q = 0.0;
  double max_pi_residual_12 = 0.0;
  double max_pi_residual_124 = 0.0;
  double masked_fraction_12 = 0.0;
  double masked_fraction_124 = 0.0;
};

/// Maxima are taken over points whose whole stencil sits where the density
/// exceeds mask_threshold * peak.
DissipationReport dissipation_report(const DissipationInputs& in, const StencilScheme& scheme,
                                     double mask_threshold = 1e-8);

}  // namespace psimoyal
