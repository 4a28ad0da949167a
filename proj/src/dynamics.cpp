#include "lmg/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "lmg/kernels.hpp"

namespace lmg {

double DriveSchedule::omega1(double t) const {
  return (zeta + dzeta1) * (1.0 + std::tanh((t - t0_1) / ramp1));
}

double DriveSchedule::omega2(double t) const {
  return (zeta + dzeta2) * (1.0 + std::tanh((t - t0_2) / ramp2));
}

DriveSchedule DriveSchedule::literal(double zeta) {
  DriveSchedule s;
  s.zeta = zeta;
  return s;
}

DriveSchedule DriveSchedule::calibrated(double t_final, double zeta) {
  DriveSchedule s;
  s.zeta = zeta;
  s.ramp1 = 2000.0;
  s.t0_1 = kHeldRampOffset;
  s.ramp2 = t_final / 8.0;
  s.t0_2 = t_final / 2.0;
  return s;
}

namespace {

std::size_t spin_count_for(std::size_t dim, std::size_t n_rates) {
  if (n_rates == 0) return 0;
  if ((std::size_t{1} << n_rates) != dim) {
    throw DimMismatch("lindblad: " + std::to_string(n_rates) + " dephasing rates do not match dim " +
                      std::to_string(dim));
  }
  return n_rates;
}

std::vector<double> mask_for(std::size_t dim, std::span<const double> gammas) {
  const std::size_t n = spin_count_for(dim, gammas.size());
  if (n == 0 || std::all_of(gammas.begin(), gammas.end(), [](double g) { return g == 0.0; })) {
    return {};
  }
  for (double g : gammas)
    if (g < 0.0) throw InvalidParameter("lindblad: dephasing rates must be >= 0");
  return kernels::dephasing_mask(n, gammas);
}

}  // namespace

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           std::span<const double> gammas) {
  if (rho.dim() != h.dim()) throw DimMismatch("lindblad_rhs: rho and H dims differ");
  const auto mask = mask_for(rho.dim(), gammas);
  ComplexMatrix scratch(rho.dim()), out(rho.dim());
  kernels::omp::lindblad_rhs(rho, h, mask, scratch, out);
  return out;
}

ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                           std::span<const double> gammas) {
  return lindblad_rhs(rho.matrix(), h, gammas);
}

const std::vector<double>& TrajectoryResult::column(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s.values;
  throw std::out_of_range("TrajectoryResult: no series named " + name);
}

bool TrajectoryResult::has_column(const std::string& name) const {
  return std::any_of(series.begin(), series.end(), [&](const Series& s) { return s.name == name; });
}

double TrajectoryResult::max_trace_defect() const {
  return trace_defect.empty() ? 0.0 : *std::max_element(trace_defect.begin(), trace_defect.end());
}

double TrajectoryResult::max_hermiticity_defect() const {
  return hermiticity_defect.empty()
             ? 0.0
             : *std::max_element(hermiticity_defect.begin(), hermiticity_defect.end());
}

namespace {

double frobenius_antihermitian(const ComplexMatrix& m) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) s += std::norm(m(r, c) - std::conj(m(c, r)));
  return std::sqrt(s);
}

bool all_finite(const ComplexMatrix& m) {
  for (const auto& z : m.data())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

class LindbladStepper {
 public:
  LindbladStepper(const LindbladSpec& spec)
      : spec_(spec),
        mask_(mask_for(spec.dim, spec.gammas)),
        h_(spec.dim), scratch_(spec.dim), k1_(spec.dim), k2_(spec.dim), k3_(spec.dim),
        k4_(spec.dim), stage_(spec.dim) {}

  /// One RK4 step; returns the Frobenius anti-Hermitian defect before re-Hermitization.
  double step(double t, double dt, ComplexMatrix& rho) {
    rhs(t, rho, k1_);
    combine(rho, 0.5 * dt, k1_);
    rhs(t + 0.5 * dt, stage_, k2_);
    combine(rho, 0.5 * dt, k2_);
    rhs(t + 0.5 * dt, stage_, k3_);
    combine(rho, dt, k3_);
    rhs(t + dt, stage_, k4_);
    auto r = rho.data();
    const auto a = k1_.data(), b = k2_.data(), c = k3_.data(), d = k4_.data();
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    const double defect = frobenius_antihermitian(rho);
    rho.hermitize();
    return defect;
  }

 private:
  void rhs(double t, const ComplexMatrix& rho, ComplexMatrix& out) {
    spec_.hamiltonian(t, h_);
    kernels::omp::lindblad_rhs(rho, h_, mask_, scratch_, out);
  }
  void combine(const ComplexMatrix& rho, double w, const ComplexMatrix& k) {
    auto s = stage_.data();
    const auto r = rho.data();
    const auto kk = k.data();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = r[i] + w * kk[i];
  }

  const LindbladSpec& spec_;
  std::vector<double> mask_;
  ComplexMatrix h_, scratch_, k1_, k2_, k3_, k4_, stage_;
};

std::size_t substeps(double span, double step) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / step - 1e-9)));
}

}  // namespace

TrajectoryResult evolve(const LindbladSpec& spec, const DensityMatrix& rho0,
                        const EvolveOptions& options) {
  if (rho0.dim() != spec.dim) {
    throw InvalidInitialState("evolve: initial state dim " + std::to_string(rho0.dim()) +
                              " does not match operator dim " + std::to_string(spec.dim));
  }
  if (!spec.hamiltonian) throw InvalidParameter("evolve: no Hamiltonian provider");
  if (options.samples < 1) throw InvalidParameter("evolve: need at least one sample");
  if (!(options.step > 0.0)) throw InvalidParameter("evolve: step must be positive");
  if (options.samples > 1 && !(options.t_end > options.t_start)) {
    throw InvalidParameter("evolve: t_end must exceed t_start");
  }

  LindbladStepper stepper(spec);
  ComplexMatrix rho = rho0.matrix();

  TrajectoryResult out;
  const std::size_t ns = options.samples;
  out.times.reserve(ns);
  for (const auto& p : options.probes) out.series.push_back({p.name, {}});

  std::vector<bool> check_positivity(ns, false);
  const std::size_t checks = std::min(options.positivity_checks, ns);
  for (std::size_t c = 1; c <= checks; ++c) check_positivity[(c * (ns - 1)) / checks] = true;

  auto record = [&](double t, double herm_defect, std::size_t index) {
    out.times.push_back(t);
    out.purity.push_back(purity(rho));
    out.trace_defect.push_back(std::abs(rho.trace() - 1.0));
    out.hermiticity_defect.push_back(herm_defect);
    for (std::size_t p = 0; p < options.probes.size(); ++p) {
      out.series[p].values.push_back(options.probes[p].evaluate(t, rho));
    }
    if (check_positivity[index]) out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(rho));
  };

  const double span = options.t_end - options.t_start;
  auto sample_time = [&](std::size_t k) {
    if (ns == 1) return options.t_start;
    if (k + 1 == ns) return options.t_end;
    return options.t_start + span * static_cast<double>(k) / static_cast<double>(ns - 1);
  };

  record(options.t_start, frobenius_antihermitian(rho), 0);
  for (std::size_t k = 1; k < ns; ++k) {
    const double t0 = sample_time(k - 1), t1 = sample_time(k);
    const std::size_t m = substeps(t1 - t0, options.step);
    const double dt = (t1 - t0) / static_cast<double>(m);
    double defect = 0.0;
    for (std::size_t s = 0; s < m; ++s) defect = stepper.step(t0 + static_cast<double>(s) * dt, dt, rho);
    if (!all_finite(rho)) {
      throw StepFailure("evolve: non-finite state at t = " + std::to_string(t1) +
                        "; reduce the step size");
    }
    record(t1, defect, k);
  }
  if (out.min_eigenvalue < -kPositivityTolerance) {
    out.warnings.push_back("positivity defect: min eigenvalue " + std::to_string(out.min_eigenvalue) +
                           " below -" + std::to_string(kPositivityTolerance) + "; reduce the step size");
  }
  out.final_state = std::move(rho);
  return out;
}

void propagate_pure(const HamiltonianProvider& h, CVector& psi, double t0, double t1, double step) {
  const std::size_t d = psi.size();
  ComplexMatrix hm(d);
  CVector k1(d), k2(d), k3(d), k4(d), stage(d);
  auto rhs = [&](double t, const CVector& y, CVector& out) {
    h(t, hm);
    for (std::size_t r = 0; r < d; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += hm(r, c) * y[c];
      out[r] = cplx{acc.imag(), -acc.real()};  // -i H y
    }
  };
  const std::size_t m = substeps(t1 - t0, step);
  const double dt = (t1 - t0) / static_cast<double>(m);
  for (std::size_t s = 0; s < m; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    rhs(t, psi, k1);
    for (std::size_t i = 0; i < d; ++i) stage[i] = psi[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, stage, k2);
    for (std::size_t i = 0; i < d; ++i) stage[i] = psi[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, stage, k3);
    for (std::size_t i = 0; i < d; ++i) stage[i] = psi[i] + dt * k3[i];
    rhs(t + dt, stage, k4);
    for (std::size_t i = 0; i < d; ++i) psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  for (const auto& z : psi) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw StepFailure("propagate_pure: non-finite state; reduce the step size");
    }
  }
}

double symmetry_resolved_gap(const LmgOperators& sector_ops, const EffectiveCoefficients& c,
                             double initial_weight) {
  const std::size_t n = sector_ops.n_spins();
  const double j = 0.5 * static_cast<double>(n);
  const auto k0 = static_cast<std::size_t>(std::llround(j - initial_weight));
  const ComplexMatrix h = sector_ops.assemble(c);
  std::vector<std::size_t> idx;
  for (std::size_t k = k0 % 2; k <= n; k += 2) idx.push_back(k);
  ComplexMatrix block(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t q = 0; q < idx.size(); ++q) block(r, q) = h(idx[r], idx[q]);
  const double tol = 1e-9 * std::max(block.frobenius_norm(), 1e-300);
  return ground_space(block, tol).gap;
}

AdiabaticityProfile adiabaticity_profile(const DriveSchedule& schedule, std::size_t n, double eta,
                                         double delta, std::span<const double> times,
                                         double initial_weight) {
  const auto ops = LmgOperators::symmetric_sector(n);
  AdiabaticityProfile prof;
  for (double t : times) {
    AdiabaticPoint p;
    p.t = t;
    p.omega1 = schedule.omega1(t);
    p.omega2 = schedule.omega2(t);
    p.gap = symmetry_resolved_gap(ops, effective_coefficients(eta, delta, p.omega1, p.omega2),
                                  initial_weight);
    if (p.gap < prof.min_gap) {
      prof.min_gap = p.gap;
      prof.t_min_gap = t;
    }
    prof.points.push_back(p);
  }
  if (!times.empty()) prof.duration = times.back() - times.front();
  return prof;
}

}  // namespace lmg
