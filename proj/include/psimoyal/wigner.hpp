#pragma once

#include "psimoyal/fields.hpp"
#include "psimoyal/ho_oracle.hpp"

namespace psimoyal {

/// Grids of one transform: the psi axes, the half-shift axes and the dual
/// (velocity-scaled) output axes.
struct TransformPlan {
  AxisGrid x, v;
  AxisGrid s1, s2;         // s = 2*k*step, k in [-n/2, n/2)
  AxisGrid vdot, vddot;    // pdot/m and pddot/m, centred on 0
  double dpdot = 0.0;      // pi*hbar2/(n_v*dv)
  double dpddot = 0.0;     // pi*hbar2/(n_x*dx)
  double hbar2 = 1.0;
  double m = 1.0;
};

TransformPlan make_plan(const std::vector<AxisGrid>& psi_axes, const PhysParams& p);

/// Signs of the s1 and s2 kernel exponents. Anything other than the default
/// is only useful as a negative control.
struct KernelSigns {
  int s1 = +1;
  int s2 = -1;
};

/// Rank-4 transform on (x, v, vdot, vddot).
RealField wigner4(const ComplexField& psi, const PhysParams& p, KernelSigns signs = {});

/// Single-shift transform over s2, on (x, v, vdot).
RealField wigner3(const ComplexField& psi, const PhysParams& p);

/// Single-shift transform over s1, on (x, v, vddot).
RealField wigner24(const ComplexField& psi, const PhysParams& p);

RealField wigner4_marginal_to_3(const RealField& w4, const PhysParams& p);
RealField wigner4_marginal_to_24(const RealField& w4, const PhysParams& p);

/// m-weighted integral of a rank-3 field over its vdot or vddot axis.
RealField marginal_to_2(const RealField& w3_or_w24, const PhysParams& p);

/// |psi|^2 on the psi grid.
RealField density(const ComplexField& psi);

}  // namespace psimoyal
