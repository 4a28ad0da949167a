#include "lmg/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>

namespace lmg {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "invalid configuration";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

std::string to_string(ScheduleKind k) { return k == ScheduleKind::Literal ? "literal" : "calibrated"; }

std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::Auto: return "auto";
    case InitialState::Up: return "up";
    case InitialState::Down: return "down";
  }
  return "auto";
}

DriveSchedule schedule_for(ScheduleKind kind, double t_final, double zeta) {
  return kind == ScheduleKind::Literal ? DriveSchedule::literal(zeta)
                                       : DriveSchedule::calibrated(t_final, zeta);
}

ScenarioConfig ScenarioConfig::preset(TransferCase c) {
  ScenarioConfig cfg;
  cfg.transfer_case = c;
  cfg.n_spins = c == TransferCase::II ? 3 : 4;
  cfg.delta = c == TransferCase::I ? -1.1 : 1.1;
  return cfg;
}

ScenarioConfig ScenarioConfig::robustness_preset() {
  ScenarioConfig cfg = preset(TransferCase::I);
  cfg.delta = 0.9;
  return cfg;
}

std::vector<double> ScenarioConfig::gammas() const {
  if (!gamma_per_spin.empty()) return gamma_per_spin;
  return std::vector<double>(n_spins, gamma_dep);
}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> v;
  if (n_spins < 1 || n_spins > 10) v.push_back("scenario.n_spins must be in [1, 10]");
  if (transfer_case == TransferCase::II && n_spins % 2 == 0)
    v.push_back("case II needs an odd number of spins");
  if (transfer_case == TransferCase::III && n_spins % 2 == 1)
    v.push_back("case III needs an even number of spins");
  if (!(lambda_over_nu >= 0.0)) v.push_back("scenario.lambda_over_nu must be >= 0");
  if (!std::isfinite(delta) || delta == 0.0) v.push_back("scenario.delta must be finite and nonzero");
  else if (std::abs(std::abs(delta) - 1.0) <= 1e-9) v.push_back("scenario.delta is resonant (|delta| = 1)");
  if (!(t_final > t_start)) v.push_back("scenario.t_final must exceed scenario.t_start");
  if (samples < 2) v.push_back("scenario.samples must be >= 2");
  if (!(step > 0.0)) v.push_back("scenario.step must be positive");
  if (!(nbar >= 0.0)) v.push_back("scenario.nbar must be >= 0");
  if (!(schedule.zeta >= 0.0)) v.push_back("schedule.zeta must be >= 0");
  if (!(schedule.ramp1 > 0.0) || !(schedule.ramp2 > 0.0)) v.push_back("schedule ramps must be positive");
  if (std::abs(schedule.dzeta1) > 0.5 * schedule.zeta || std::abs(schedule.dzeta2) > 0.5 * schedule.zeta)
    v.push_back("schedule dispersion offsets must satisfy |dzeta| <= 0.5 zeta");
  if (!(gamma_dep >= 0.0)) v.push_back("dephasing.gamma must be >= 0");
  if (!gamma_per_spin.empty() && gamma_per_spin.size() != n_spins)
    v.push_back("dephasing.per_spin needs one rate per spin");
  for (double g : gamma_per_spin)
    if (!(g >= 0.0)) { v.push_back("dephasing.per_spin rates must be >= 0"); break; }
  if (!disorder.empty() && disorder.size() != n_spins)
    v.push_back("disorder.fractions needs one entry per spin");
  for (double f : disorder)
    if (!(std::abs(f) <= 0.5)) { v.push_back("disorder.fractions must satisfy |f| <= 0.5"); break; }
  if (fast_path) {
    const auto g = gammas();
    if (std::any_of(g.begin(), g.end(), [](double x) { return x > 0.0; }))
      v.push_back("scenario.fast_path is not allowed with dephasing");
    if (std::any_of(disorder.begin(), disorder.end(), [](double x) { return x != 0.0; }))
      v.push_back("scenario.fast_path is not allowed with disorder");
  }
  return v;
}

void ScenarioConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

namespace {

EffectiveCoefficients coefficients_at(const ScenarioConfig& cfg, double t) {
  return effective_coefficients(cfg.lambda_over_nu, cfg.delta, cfg.schedule.omega1(t),
                                cfg.schedule.omega2(t));
}

double ground_overlap(const LmgRegime& regime, const StateVector& psi) {
  double s = 0.0;
  for (const auto& g : regime.ground_states) s += std::norm(inner(g.span(), psi.span()));
  return s;
}

}  // namespace

InitialChoice resolve_initial_state(const ScenarioConfig& cfg) {
  const double j = 0.5 * static_cast<double>(cfg.n_spins);
  const LmgRegime regime = classify_lmg(coefficients_at(cfg, cfg.t_start), cfg.n_spins);
  InitialChoice out;
  const double fallback = cfg.transfer_case == TransferCase::I ? j : -j;

  if (cfg.initial == InitialState::Auto) {
    if (regime.form == LmgForm::Isotropic && regime.unique()) {
      for (double m : {j, -j}) {
        if (ground_overlap(regime, dicke_state(cfg.n_spins, m)) >= 1.0 - 1e-9) {
          out.weight = m;
          return out;
        }
      }
    }
    out.weight = fallback;
    out.warnings.push_back("initial state: H(t_start) is " + regime.describe() +
                           "; no unique product ground state, starting from |m_z=" + fmt(fallback) + ">");
    return out;
  }

  out.weight = cfg.initial == InitialState::Up ? j : -j;
  const double overlap = ground_overlap(regime, dicke_state(cfg.n_spins, out.weight));
  if (overlap < 1.0 - 1e-9) {
    out.warnings.push_back("initial state |m_z=" + fmt(out.weight) +
                           "> has overlap " + fmt(overlap) + " with the ground space of H(t_start) (" +
                           regime.describe() + ")");
  }
  return out;
}

TrajectoryResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_spins;
  const InitialChoice init = resolve_initial_state(cfg);

  const bool sector = cfg.fast_path;
  auto ops = std::make_shared<const LmgOperators>(sector ? LmgOperators::symmetric_sector(n)
                                                         : LmgOperators::full_space(n));
  auto gap_ops = std::make_shared<const LmgOperators>(LmgOperators::symmetric_sector(n));
  std::shared_ptr<const ComplexMatrix> disorder_term;
  if (!cfg.disorder.empty() &&
      std::any_of(cfg.disorder.begin(), cfg.disorder.end(), [](double f) { return f != 0.0; })) {
    DisorderProfile d{cfg.disorder, cfg.lambda_over_nu};
    disorder_term = std::make_shared<const ComplexMatrix>(build_disorder_term(SpinRegister(n), d));
  }

  LindbladSpec spec;
  spec.dim = ops->dim();
  const ScenarioConfig c = cfg;
  spec.hamiltonian = [ops, disorder_term, c](double t, ComplexMatrix& out) {
    ops->assemble(coefficients_at(c, t), out);
    if (disorder_term) out += *disorder_term;
  };
  if (!sector) spec.gammas = cfg.gammas();

  std::optional<SymmetricSector> sym;
  if (sector) sym.emplace(n);
  auto to_working = [&](const StateVector& full) {
    return sector ? StateVector::normalized(sym->project(full.span())) : full;
  };

  const StateVector psi0 = to_working(dicke_state(n, init.weight));
  const StateVector target = to_working(target_state(cfg.transfer_case, n));
  std::optional<std::pair<StateVector, StateVector>> branches;
  if (auto b = target_branches(cfg.transfer_case, n)) {
    branches.emplace(to_working(b->first), to_working(b->second));
  }

  EvolveOptions opt;
  opt.t_start = cfg.t_start;
  opt.t_end = cfg.t_final;
  opt.samples = cfg.samples;
  opt.step = cfg.step;
  opt.probes.push_back({"pop_target", [target](double, const ComplexMatrix& rho) {
                          return population(rho, target);
                        }});
  opt.probes.push_back({"pop_target_phase_opt", [target, branches](double, const ComplexMatrix& rho) {
                          return branches ? phase_optimized_population(rho, branches->first, branches->second)
                                          : population(rho, target);
                        }});
  const double m0 = init.weight;
  opt.probes.push_back({"gap_nu", [gap_ops, c, m0](double t, const ComplexMatrix&) {
                          return symmetry_resolved_gap(*gap_ops, coefficients_at(c, t), m0);
                        }});
  opt.probes.push_back({"omega1_nu", [c](double t, const ComplexMatrix&) { return c.schedule.omega1(t); }});
  opt.probes.push_back({"omega2_nu", [c](double t, const ComplexMatrix&) { return c.schedule.omega2(t); }});

  TrajectoryResult result = evolve(spec, DensityMatrix::pure(psi0), opt);
  result.warnings.insert(result.warnings.begin(), init.warnings.begin(), init.warnings.end());

  const LmgRegime final_regime = classify_lmg(coefficients_at(cfg, cfg.t_final), n);
  const Magnetism want = cfg.transfer_case == TransferCase::I ? Magnetism::Ferromagnetic
                                                              : Magnetism::Antiferromagnetic;
  if (final_regime.form != LmgForm::OneAxisY || final_regime.magnetism != want) {
    result.warnings.push_back("RegimeWarning: H(t_final) is " + final_regime.describe() +
                              ", case " + to_string(cfg.transfer_case) + " expects one-axis-y " +
                              to_string(want));
  }
  const double ld = lamb_dicke_indicator(cfg.nbar, cfg.lambda_over_nu);
  if (ld > kLambDickeWarnThreshold) {
    result.warnings.push_back("Lamb-Dicke indicator (nbar+1) eta^2 = " + fmt(ld) + " exceeds " +
                              fmt(kLambDickeWarnThreshold));
  }
  return result;
}

ScenarioSummary summarize(const TrajectoryResult& r) {
  ScenarioSummary s;
  if (r.times.empty()) return s;
  s.pop_final = r.column("pop_target").back();
  s.pop_final_phase_opt = r.column("pop_target_phase_opt").back();
  const auto& gap = r.column("gap_nu");
  s.gap_min = *std::min_element(gap.begin(), gap.end());
  s.trace_defect_max = r.max_trace_defect();
  s.hermiticity_defect_max = r.max_hermiticity_defect();
  s.min_eigenvalue = r.min_eigenvalue;
  return s;
}

std::optional<double> time_to_reach(const TrajectoryResult& r, const std::string& column,
                                    double threshold) {
  const auto& v = r.column(column);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= threshold) return r.times[i];
  return std::nullopt;
}

std::vector<NamedDisorder> reference_disorder_profiles() {
  return {
      {"disorder-(a)-1", "5%", {-0.05, 0.05, 0.04, 0.05}},
      {"disorder-(a)-2", "5%", {-0.05, 0.04, -0.05, 0.05}},
      {"disorder-(a)-3", "5%", {0.05, 0.04, 0.05, 0.04}},
      {"disorder-(b)-1", "10%", {0.1, -0.05, 0.08, -0.04}},
      {"disorder-(b)-2", "10%", {0.05, 0.09, 0.07, 0.01}},
      {"disorder-(b)-3", "10%", {-0.05, -0.03, -0.02, 0.1}},
      {"disorder-(c)-1", "20%", {-0.2, -0.01, 0.15, 0.07}},
      {"disorder-(c)-2", "20%", {-0.12, -0.15, 0.2, -0.1}},
      {"disorder-(c)-3", "20%", {0.2, 0.05, 0.11, -0.01}},
      {"disorder-(d)-1", "30%", {0.3, 0.2, 0.1, -0.01}},
      {"disorder-(d)-2", "30%", {-0.1, -0.2, 0.3, 0.15}},
      {"disorder-(d)-3", "30%", {-0.2, 0.3, -0.1, 0.01}},
  };
}

std::vector<DispersionPair> reference_dispersion_pairs() {
  return {
      {"no dispersion", 0.0, 0.0},
      {"dispersion-1", 0.05, 0.05},
      {"dispersion-2", -0.05, 0.05},
      {"dispersion-3", 0.05, -0.05},
      {"dispersion-4", 0.1, -0.1},
  };
}

namespace {

EnsembleReport run_ensemble(const ScenarioConfig& baseline_cfg, const std::vector<std::string>& labels,
                            const std::vector<ScenarioConfig>& configs) {
  const std::size_t count = configs.size() + 1;
  std::vector<EnsembleMember> results(count);
  std::vector<std::exception_ptr> errors(count);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      const ScenarioConfig& cfg = i == 0 ? baseline_cfg : configs[i - 1];
      const TrajectoryResult r = run_scenario(cfg);
      results[i].label = i == 0 ? "baseline" : labels[i - 1];
      results[i].summary = summarize(r);
      results[i].warnings = r.warnings;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  EnsembleReport rep;
  rep.baseline = results.front();
  rep.members.assign(results.begin() + 1, results.end());
  if (!rep.members.empty()) {
    rep.min_population = rep.max_population = rep.members.front().summary.pop_final;
    double sum = 0.0;
    for (const auto& m : rep.members) {
      const double p = m.summary.pop_final;
      rep.min_population = std::min(rep.min_population, p);
      rep.max_population = std::max(rep.max_population, p);
      sum += p;
      rep.max_deviation_from_baseline =
          std::max(rep.max_deviation_from_baseline, std::abs(p - rep.baseline.summary.pop_final));
    }
    rep.mean_population = sum / static_cast<double>(rep.members.size());
  }
  return rep;
}

}  // namespace

EnsembleReport disorder_ensemble(const ScenarioConfig& cfg, const std::vector<NamedDisorder>& profiles) {
  ScenarioConfig base = cfg;
  base.disorder.clear();
  std::vector<std::string> labels;
  std::vector<ScenarioConfig> configs;
  for (const auto& p : profiles) {
    if (p.fractions.size() != cfg.n_spins) {
      throw LengthMismatch("disorder_ensemble: profile " + p.label + " has " +
                           std::to_string(p.fractions.size()) + " entries for " +
                           std::to_string(cfg.n_spins) + " spins");
    }
    ScenarioConfig c = base;
    c.disorder = p.fractions;
    c.tags["profile"] = p.label;
    c.tags["level"] = p.level;
    labels.push_back(p.label);
    configs.push_back(std::move(c));
  }
  return run_ensemble(base, labels, configs);
}

EnsembleReport dispersion_ensemble(const ScenarioConfig& cfg, const std::vector<DispersionPair>& pairs) {
  ScenarioConfig base = cfg;
  base.schedule.dzeta1 = 0.0;
  base.schedule.dzeta2 = 0.0;
  std::vector<std::string> labels;
  std::vector<ScenarioConfig> configs;
  for (const auto& p : pairs) {
    ScenarioConfig c = base;
    c.schedule.dzeta1 = p.dzeta1 * base.schedule.zeta;
    c.schedule.dzeta2 = p.dzeta2 * base.schedule.zeta;
    labels.push_back(p.label);
    configs.push_back(std::move(c));
  }
  return run_ensemble(base, labels, configs);
}

std::vector<std::string> ReductionConfig::violations() const {
  std::vector<std::string> v;
  if (n_spins < 1 || n_spins > 2) v.push_back("reduction.n_spins must be 1 or 2");
  if (transfer_case == TransferCase::II && n_spins % 2 == 0)
    v.push_back("case II needs an odd number of spins");
  if (transfer_case == TransferCase::III && n_spins % 2 == 1)
    v.push_back("case III needs an even number of spins");
  if (!(eta >= 0.0)) v.push_back("reduction.eta must be >= 0");
  if (!std::isfinite(delta) || delta == 0.0 || std::abs(std::abs(delta) - 1.0) <= 1e-9)
    v.push_back("reduction.delta must be finite, nonzero and off resonance");
  if (fock_cutoff < 2) v.push_back("reduction.fock_cutoff must be >= 2");
  if (!(t_final > 0.0)) v.push_back("reduction.t_final must be positive");
  if (samples < 2) v.push_back("reduction.samples must be >= 2");
  if (!(step > 0.0)) v.push_back("reduction.step must be positive");
  if (!(nbar >= 0.0)) v.push_back("reduction.nbar must be >= 0");
  return v;
}

void ReductionConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

namespace {

struct FullRun {
  std::vector<double> jz;
  std::vector<double> pop;
};

FullRun run_full_model(const ReductionConfig& cfg, std::size_t cutoff, std::span<const double> times,
                       const StateVector& target) {
  FullModelParams p;
  p.n_spins = cfg.n_spins;
  p.fock_cutoff = cutoff;
  p.eta = cfg.eta;
  p.delta = cfg.delta;
  p.nbar = cfg.nbar;
  p.omega1 = cfg.omega1;
  p.omega2 = cfg.omega2;
  const FullModel model(p);
  const HamiltonianProvider h = [&model, &cfg](double t, ComplexMatrix& out) {
    model.hamiltonian(t, cfg.omega1, cfg.omega2, out);
  };

  // spins in |up...up> (index 0), resonator in vacuum
  CVector psi(model.dim());
  psi[0] = 1.0;
  FullRun out;
  auto record = [&] {
    out.jz.push_back(std::real(inner(psi, matvec(model.spin_jz(), psi))));
    out.pop.push_back(population(model.reduced_spin_state(psi), target));
  };
  record();
  for (std::size_t k = 1; k < times.size(); ++k) {
    propagate_pure(h, psi, times[k - 1], times[k], cfg.step);
    record();
  }
  return out;
}

}  // namespace

ReductionReport validate_effective_reduction(const ReductionConfig& cfg) {
  cfg.validate();
  ReductionReport rep;
  rep.lamb_dicke = lamb_dicke_indicator(cfg.nbar, cfg.eta);
  if (rep.lamb_dicke > kLambDickeWarnThreshold) {
    rep.warnings.push_back("Lamb-Dicke indicator (nbar+1) eta^2 = " + fmt(rep.lamb_dicke) + " exceeds " +
                           fmt(kLambDickeWarnThreshold));
  }

  for (std::size_t k = 0; k < cfg.samples; ++k) {
    rep.times.push_back(k + 1 == cfg.samples
                            ? cfg.t_final
                            : cfg.t_final * static_cast<double>(k) / static_cast<double>(cfg.samples - 1));
  }
  const StateVector target = target_state(cfg.transfer_case, cfg.n_spins);

  const FullRun full = run_full_model(cfg, cfg.fock_cutoff, rep.times, target);
  const FullRun doubled = run_full_model(cfg, 2 * cfg.fock_cutoff, rep.times, target);
  rep.jz_full = full.jz;
  rep.pop_full = full.pop;

  const SpinRegister reg(cfg.n_spins);
  const ComplexMatrix h_eff =
      build_effective_lmg(reg, effective_coefficients(cfg.eta, cfg.delta, cfg.omega1, cfg.omega2));
  const ComplexMatrix jz = collective_operator(reg, Collective::Z);
  const HamiltonianProvider h = [&h_eff](double, ComplexMatrix& out) { out = h_eff; };
  CVector psi(reg.dim());
  psi[0] = 1.0;
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    if (k > 0) propagate_pure(h, psi, rep.times[k - 1], rep.times[k], cfg.step);
    rep.jz_eff.push_back(std::real(inner(psi, matvec(jz, psi))));
    rep.pop_eff.push_back(population(outer(psi, psi), target));
  }

  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    rep.max_jz_deviation = std::max(rep.max_jz_deviation, std::abs(rep.jz_full[k] - rep.jz_eff[k]));
    rep.max_pop_deviation = std::max(rep.max_pop_deviation, std::abs(rep.pop_full[k] - rep.pop_eff[k]));
    rep.cutoff_change = std::max(rep.cutoff_change, std::abs(full.jz[k] - doubled.jz[k]));
  }
  if (rep.cutoff_change > 0.1 * rep.max_jz_deviation) {
    throw CutoffTooSmall("validate_effective_reduction: doubling the Fock cutoff from " +
                         std::to_string(cfg.fock_cutoff) + " moves <J_z> by " + fmt(rep.cutoff_change) +
                         ", more than 10% of the deviation " + fmt(rep.max_jz_deviation));
  }
  return rep;
}

}  // namespace lmg
