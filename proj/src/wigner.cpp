#include "psimoyal/wigner.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <numbers>

namespace psimoyal {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double imag_tolerance = 1e-10;

bool power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

std::size_t wrap(long k, std::size_t n) {
  const long nn = static_cast<long>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

class Plan {
 public:
  Plan(int n0, int n1, fftw_complex* buf) {
    plan_ = n1 > 0 ? fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE)
                   : fftw_plan_dft_1d(n0, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_) throw NumericFailure("could not create FFT plan");
  }
  ~Plan() { fftw_destroy_plan(plan_); }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void run() { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

const ComplexField& check_psi(const ComplexField& psi) {
  if (psi.rank() != 2 || psi.axis(0).name != "x" || psi.axis(1).name != "v")
    throw ValidationError("wavefunction must be a rank-2 field on (x, v)");
  return psi;
}

void check_imag(double max_imag, double peak) {
  if (max_imag > imag_tolerance * peak)
    throw NumericFailure("transform left an imaginary residue of " + std::to_string(max_imag) +
                         " against peak " + std::to_string(peak));
}

// Single-shift transform along one psi axis (0 -> s1, 1 -> s2).
RealField single_shift(const ComplexField& psi, const PhysParams& p, std::size_t along) {
  check_psi(psi);
  const auto plan = make_plan(psi.axes(), p);
  const std::size_t nx = psi.axis(0).n, nv = psi.axis(1).n;
  const std::size_t n = along == 0 ? nx : nv;
  const long half = static_cast<long>(n / 2);
  const double d = psi.axis(along).step();
  const double pref = 2.0 * d / (2.0 * pi * p.hbar2);
  // s1 carries +i, s2 carries -i
  const bool flip = along == 1;

  std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(n));
  Plan fft(static_cast<int>(n), 0, buf.get());

  std::vector<double> out(nx * nv * n);
  double max_imag = 0.0;
  const auto data = psi.data();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      const long c = static_cast<long>(along == 0 ? i : j);
      for (long k = -half; k < half; ++k) {
        const long lo = c - k, hi = c + k;
        complex val = 0.0;
        if (lo >= 0 && hi >= 0 && lo < static_cast<long>(n) && hi < static_cast<long>(n)) {
          const std::size_t flo = along == 0 ? static_cast<std::size_t>(lo) * nv + j : i * nv + static_cast<std::size_t>(lo);
          const std::size_t fhi = along == 0 ? static_cast<std::size_t>(hi) * nv + j : i * nv + static_cast<std::size_t>(hi);
          val = std::conj(data[flo]) * data[fhi];
        }
        const std::size_t slot = wrap(flip ? -k : k, n);
        buf[slot][0] = val.real();
        buf[slot][1] = val.imag();
      }
      fft.run();
      double* dst = out.data() + (i * nv + j) * n;
      for (long a = -half; a < half; ++a) {
        const std::size_t slot = wrap(a, n);
        dst[a + half] = pref * buf[slot][0];
        max_imag = std::max(max_imag, std::abs(pref * buf[slot][1]));
      }
    }
  }
  RealField w(along == 0 ? std::vector<AxisGrid>{plan.x, plan.v, plan.vddot}
                         : std::vector<AxisGrid>{plan.x, plan.v, plan.vdot},
              std::move(out));
  check_imag(max_imag, w.peak());
  return w;
}

}  // namespace

TransformPlan make_plan(const std::vector<AxisGrid>& psi_axes, const PhysParams& p) {
  p.validate();
  if (psi_axes.size() != 2 || psi_axes[0].name != "x" || psi_axes[1].name != "v")
    throw ValidationError("transform plan needs axes (x, v)");
  for (const auto& ax : psi_axes)
    if (!power_of_two(ax.n))
      throw ValidationError("axis '" + ax.name + "' must have a power-of-two point count");
  TransformPlan plan;
  plan.x = psi_axes[0];
  plan.v = psi_axes[1];
  plan.hbar2 = p.hbar2;
  plan.m = p.m;
  const double dx = plan.x.step(), dv = plan.v.step();
  const double nx = static_cast<double>(plan.x.n), nv = static_cast<double>(plan.v.n);
  plan.s1 = AxisGrid{"s1", plan.x.n, -nx * dx, nx * dx};
  plan.s2 = AxisGrid{"s2", plan.v.n, -nv * dv, nv * dv};
  plan.dpddot = pi * p.hbar2 / (nx * dx);
  plan.dpdot = pi * p.hbar2 / (nv * dv);
  const double sdot = plan.dpdot / p.m, sddot = plan.dpddot / p.m;
  plan.vdot = AxisGrid{"vdot", plan.v.n, -(nv / 2) * sdot, (nv / 2) * sdot};
  plan.vddot = AxisGrid{"vddot", plan.x.n, -(nx / 2) * sddot, (nx / 2) * sddot};
  return plan;
}

RealField wigner4(const ComplexField& psi, const PhysParams& p, KernelSigns signs) {
  check_psi(psi);
  if (std::abs(signs.s1) != 1 || std::abs(signs.s2) != 1)
    throw ValidationError("kernel signs must be +1 or -1");
  const auto plan = make_plan(psi.axes(), p);
  const std::size_t nx = plan.x.n, nv = plan.v.n;
  const long hx = static_cast<long>(nx / 2), hv = static_cast<long>(nv / 2);
  const double pref = (2.0 * plan.x.step()) * (2.0 * plan.v.step()) /
                      ((2.0 * pi * p.hbar2) * (2.0 * pi * p.hbar2));

  // buffer laid out [l][k] so the output comes out as [vdot][vddot]
  std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(nx * nv));
  Plan fft(static_cast<int>(nv), static_cast<int>(nx), buf.get());

  std::vector<double> out(nx * nv * nv * nx);
  double max_imag = 0.0;
  const auto data = psi.data();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t q = 0; q < nx * nv; ++q) buf[q][0] = buf[q][1] = 0.0;
      const long ci = static_cast<long>(i), cj = static_cast<long>(j);
      for (long l = -hv; l < hv; ++l) {
        const long jlo = cj - l, jhi = cj + l;
        if (jlo < 0 || jhi < 0 || jlo >= static_cast<long>(nv) || jhi >= static_cast<long>(nv)) continue;
        const std::size_t row = wrap(signs.s2 > 0 ? l : -l, nv) * nx;
        for (long k = -hx; k < hx; ++k) {
          const long ilo = ci - k, ihi = ci + k;
          if (ilo < 0 || ihi < 0 || ilo >= static_cast<long>(nx) || ihi >= static_cast<long>(nx)) continue;
          const complex val = std::conj(data[static_cast<std::size_t>(ilo) * nv + static_cast<std::size_t>(jlo)]) *
                              data[static_cast<std::size_t>(ihi) * nv + static_cast<std::size_t>(jhi)];
          const std::size_t slot = row + wrap(signs.s1 > 0 ? k : -k, nx);
          buf[slot][0] = val.real();
          buf[slot][1] = val.imag();
        }
      }
      fft.run();
      double* dst = out.data() + (i * nv + j) * nv * nx;
      for (long b = -hv; b < hv; ++b) {
        const std::size_t rb = wrap(b, nv) * nx;
        for (long a = -hx; a < hx; ++a) {
          const std::size_t slot = rb + wrap(a, nx);
          dst[static_cast<std::size_t>(b + hv) * nx + static_cast<std::size_t>(a + hx)] = pref * buf[slot][0];
          max_imag = std::max(max_imag, std::abs(pref * buf[slot][1]));
        }
      }
    }
  }
  RealField w({plan.x, plan.v, plan.vdot, plan.vddot}, std::move(out));
  check_imag(max_imag, w.peak());
  return w;
}

RealField wigner3(const ComplexField& psi, const PhysParams& p) { return single_shift(psi, p, 1); }

RealField wigner24(const ComplexField& psi, const PhysParams& p) { return single_shift(psi, p, 0); }

RealField wigner4_marginal_to_3(const RealField& w4, const PhysParams& p) {
  if (w4.rank() != 4) throw ValidationError("expected a rank-4 field");
  return integrate_axis(w4, "vddot", p.m);
}

RealField wigner4_marginal_to_24(const RealField& w4, const PhysParams& p) {
  if (w4.rank() != 4) throw ValidationError("expected a rank-4 field");
  return integrate_axis(w4, "vdot", p.m);
}

RealField marginal_to_2(const RealField& w3, const PhysParams& p) {
  if (w3.rank() != 3) throw ValidationError("expected a rank-3 field");
  if (w3.has_axis("vdot")) return integrate_axis(w3, "vdot", p.m);
  if (w3.has_axis("vddot")) return integrate_axis(w3, "vddot", p.m);
  throw ValidationError("rank-3 field has neither a vdot nor a vddot axis");
}

RealField density(const ComplexField& psi) {
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(psi[i]);
  return RealField(psi.axes(), std::move(out));
}

}  // namespace psimoyal
