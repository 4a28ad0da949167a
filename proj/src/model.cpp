#include "lmg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lmg {

EffectiveCoefficients effective_coefficients(double eta, double delta, double omega1, double omega2) {
  if (std::abs(std::abs(delta) - 1.0) <= 1e-9) {
    throw ResonantDetuning("effective_coefficients: |Delta| = nu makes alpha singular");
  }
  if (!(eta >= 0.0)) throw InvalidParameter("effective_coefficients: eta must be >= 0");
  if (delta == 0.0) throw InvalidParameter("effective_coefficients: Delta must be nonzero");
  EffectiveCoefficients c;
  c.eta = eta;
  c.delta = delta;
  c.omega1 = omega1;
  c.omega2 = omega2;
  c.alpha = 2.0 * eta * eta * delta / (delta * delta - 1.0);
  c.epsilon = c.alpha != 0.0 ? 2.0 / (c.alpha * delta)
                             : std::copysign(std::numeric_limits<double>::infinity(), delta);
  c.beta1 = omega1 - omega2;
  c.beta2 = omega1 + omega2;
  return c;
}

LmgOperators LmgOperators::full_space(std::size_t n) {
  const SpinRegister reg(n);
  const auto jx = collective_operator(reg, Collective::X);
  const auto jy = collective_operator(reg, Collective::Y);
  return LmgOperators(n, collective_operator(reg, Collective::Z), jx * jx, jy * jy);
}

LmgOperators LmgOperators::symmetric_sector(std::size_t n) {
  // |J, m> with m = J - k; J_+|J,m> = sqrt(J(J+1) - m(m+1)) |J,m+1>
  const std::size_t d = n + 1;
  const double j = 0.5 * static_cast<double>(n);
  ComplexMatrix jz(d), jp(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double m = j - static_cast<double>(k);
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix jm = jp.adjoint();
  const ComplexMatrix jx = (jp + jm) * cplx{0.5, 0.0};
  const ComplexMatrix jy = (jp - jm) * cplx{0.0, -0.5};
  return LmgOperators(n, std::move(jz), jx * jx, jy * jy);
}

void LmgOperators::assemble(const EffectiveCoefficients& c, ComplexMatrix& out) const {
  const double cz = c.jz_coefficient();
  const double cx = c.alpha * c.beta1 * c.beta1;
  const double cy = c.alpha * c.beta2 * c.beta2;
  const auto z = jz_.data();
  const auto x = jx2_.data();
  const auto y = jy2_.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = cz * z[i] + cx * x[i] + cy * y[i];
}

ComplexMatrix LmgOperators::assemble(const EffectiveCoefficients& c) const {
  ComplexMatrix out(dim());
  assemble(c, out);
  return out;
}

ComplexMatrix build_effective_lmg(const SpinRegister& reg, const EffectiveCoefficients& c) {
  return LmgOperators::full_space(reg.n_spins()).assemble(c);
}

void DisorderProfile::validate() const {
  for (double f : delta_lambda_fraction) {
    if (!(std::abs(f) <= 0.5)) {
      throw InvalidParameter("DisorderProfile: |delta_lambda_j| / lambda must be <= 0.5");
    }
  }
}

std::vector<double> DisorderProfile::ising_coefficients() const {
  std::vector<double> m;
  m.reserve(delta_lambda_fraction.size());
  for (double f : delta_lambda_fraction) m.push_back(eta * (f * eta) / 4.0);
  return m;
}

bool DisorderProfile::is_zero() const {
  return std::all_of(delta_lambda_fraction.begin(), delta_lambda_fraction.end(),
                     [](double f) { return f == 0.0; });
}

ComplexMatrix build_disorder_term(const SpinRegister& reg, const DisorderProfile& d) {
  if (d.delta_lambda_fraction.size() != reg.n_spins()) {
    throw LengthMismatch("build_disorder_term: " + std::to_string(d.delta_lambda_fraction.size()) +
                         " deviations for " + std::to_string(reg.n_spins()) + " spins");
  }
  d.validate();
  // Diagonal: sigma_z^j and J_z are both diagonal in the z basis.
  const auto m = d.ising_coefficients();
  const std::size_t n = reg.n_spins();
  ComplexMatrix out(reg.dim());
  for (std::size_t k = 0; k < reg.dim(); ++k) {
    double jz = 0.0;
    std::vector<double> sz(n);
    for (std::size_t j = 0; j < n; ++j) {
      sz[j] = ((k >> (n - 1 - j)) & 1U) ? -1.0 : 1.0;
      jz += 0.5 * sz[j];
    }
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) e -= m[j] * sz[j] * jz;
    out(k, k) = e;
  }
  return out;
}

double lamb_dicke_indicator(double nbar, double eta) { return (nbar + 1.0) * eta * eta; }

FullModel::FullModel(const FullModelParams& p) : p_(p) {
  if (!p_.eta_per_spin.empty() && p_.eta_per_spin.size() != p_.n_spins) {
    throw LengthMismatch("FullModel: eta_per_spin needs one entry per spin");
  }
  const SpinRegister reg(p_.n_spins);
  const FockSpace fock(p_.fock_cutoff);
  const auto id_f = ComplexMatrix::identity(p_.fock_cutoff);
  const auto a = boson_operator(fock, Boson::Annihilate);
  const auto ad = boson_operator(fock, Boson::Create);

  ComplexMatrix weighted_plus(reg.dim());
  for (std::size_t j = 1; j <= p_.n_spins; ++j) {
    const double eta_j = p_.eta_per_spin.empty() ? p_.eta : p_.eta_per_spin[j - 1];
    weighted_plus.axpy(eta_j, embed_single_spin(reg, j, Pauli::Plus));
  }
  carrier_ = kron(collective_operator(reg, Collective::Plus), id_f);
  blue_ = kron(weighted_plus, ad);
  red_ = kron(weighted_plus, a);
  jz_ = kron(collective_operator(reg, Collective::Z), id_f);
}

void FullModel::hamiltonian(double t, double omega1, double omega2, ComplexMatrix& out) const {
  const cplx drive = omega1 * std::polar(1.0, p_.delta * t) + omega2 * std::polar(1.0, -p_.delta * t);
  const cplx kb = drive * std::polar(1.0, t);
  const cplx kr = -drive * std::polar(1.0, -t);
  const std::size_t d = dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) = 0.0;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const cplx k = drive * carrier_(r, c) + kb * blue_(r, c) + kr * red_(r, c);
      if (k == cplx{}) continue;
      out(r, c) += k;
      out(c, r) += std::conj(k);
    }
}

ComplexMatrix FullModel::reduced_spin_state(std::span<const cplx> psi) const {
  const std::size_t f = p_.fock_cutoff;
  const std::size_t ds = dim() / f;
  if (psi.size() != dim()) throw DimMismatch("reduced_spin_state: state dim mismatch");
  ComplexMatrix rho(ds);
  for (std::size_t i = 0; i < ds; ++i)
    for (std::size_t j = 0; j < ds; ++j) {
      cplx s = 0.0;
      for (std::size_t n = 0; n < f; ++n) s += psi[i * f + n] * std::conj(psi[j * f + n]);
      rho(i, j) = s;
    }
  return rho;
}

ComplexMatrix build_full_interaction_hamiltonian(const FullModelParams& p, double t) {
  const FullModel model(p);
  ComplexMatrix h(model.dim());
  model.hamiltonian(t, p.omega1, p.omega2, h);
  return h;
}

std::vector<IsotropicLevel> isotropic_spectrum(std::size_t n, double alpha_beta2, double epsilon) {
  const double j = 0.5 * static_cast<double>(n);
  std::vector<IsotropicLevel> out;
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double m = -j + static_cast<double>(k);
    out.push_back({m, alpha_beta2 * (epsilon * m - m * m + j * (j + 1.0))});
  }
  return out;
}

std::string to_string(LmgForm f) {
  switch (f) {
    case LmgForm::Isotropic: return "isotropic";
    case LmgForm::OneAxisX: return "one-axis-x";
    case LmgForm::OneAxisY: return "one-axis-y";
    case LmgForm::General: return "general";
  }
  return "?";
}

std::string to_string(Magnetism m) {
  switch (m) {
    case Magnetism::Ferromagnetic: return "FI";
    case Magnetism::Antiferromagnetic: return "AFI";
    case Magnetism::None: return "none";
  }
  return "?";
}

std::string LmgRegime::describe() const {
  std::ostringstream os;
  os << to_string(form) << ", " << to_string(magnetism) << ", ground ";
  if (ground_labels.empty()) {
    os << "not available in closed form";
  } else {
    for (std::size_t i = 0; i < ground_labels.size(); ++i) os << (i ? " or " : "") << ground_labels[i];
  }
  return os.str();
}

namespace {

std::string weight_label(double m, char axis) {
  std::ostringstream os;
  os << "|m_" << axis << "=";
  const double twice = 2.0 * m;
  if (std::abs(twice - std::round(twice)) < 1e-9 && std::llround(twice) % 2 != 0) {
    os << std::llround(twice) << "/2";
  } else {
    os << std::llround(m);
  }
  os << "⟩";
  return os.str();
}

std::string product_label(std::size_t n, bool plus, char axis) {
  std::string s = "|";
  for (std::size_t i = 0; i < n; ++i) s += plus ? "+" : "−";
  return s + "⟩_" + axis;
}

void add_one_axis_states(LmgRegime& r, std::size_t n, SpinBasis basis, char axis) {
  const double j = 0.5 * static_cast<double>(n);
  if (r.magnetism == Magnetism::Ferromagnetic) {
    r.ground_states = {dicke_state(n, j, basis), dicke_state(n, -j, basis)};
    r.ground_labels = {product_label(n, true, axis), product_label(n, false, axis)};
  } else if (r.magnetism == Magnetism::Antiferromagnetic) {
    if (n % 2 == 0) {
      r.ground_states = {dicke_state(n, 0.0, basis)};
      r.ground_labels = {weight_label(0.0, axis)};
    } else {
      r.ground_states = {dicke_state(n, 0.5, basis), dicke_state(n, -0.5, basis)};
      r.ground_labels = {weight_label(0.5, axis), weight_label(-0.5, axis)};
    }
  }
}

}  // namespace

LmgRegime classify_lmg(const EffectiveCoefficients& c, std::size_t n, double tol) {
  LmgRegime r;
  r.magnetism = c.alpha < 0.0   ? Magnetism::Ferromagnetic
                : c.alpha > 0.0 ? Magnetism::Antiferromagnetic
                                : Magnetism::None;
  const double b1 = std::abs(c.beta1), b2 = std::abs(c.beta2);
  const double scale = std::max(b1, b2);
  if (scale == 0.0) {
    r.form = LmgForm::General;
    return r;
  }
  if (std::abs(b1 - b2) <= tol * scale) {
    r.form = LmgForm::Isotropic;
  } else if (b1 <= tol * scale) {
    r.form = LmgForm::OneAxisY;
  } else if (b2 <= tol * scale) {
    r.form = LmgForm::OneAxisX;
  } else {
    r.form = LmgForm::General;
  }

  const SpinRegister reg(n);
  switch (r.form) {
    case LmgForm::Isotropic: {
      // alpha b^2 (eps' J_z + J^2 - J_z^2) with b^2 = b1 b2 up to sign, so
      // eps' alpha b^2 = jz_coefficient. Minimize the closed-form spectrum.
      const double ab2 = c.alpha * 0.5 * (b1 * b1 + b2 * b2);
      const double jzc = c.jz_coefficient();
      const double jj = 0.5 * static_cast<double>(n) * (0.5 * static_cast<double>(n) + 1.0);
      std::vector<IsotropicLevel> levels;
      for (std::size_t k = 0; k <= n; ++k) {
        const double m = -0.5 * static_cast<double>(n) + static_cast<double>(k);
        levels.push_back({m, jzc * m + ab2 * (jj - m * m)});
      }
      double emin = levels.front().energy;
      for (const auto& l : levels) emin = std::min(emin, l.energy);
      const double band = 1e-12 * (std::abs(jzc) + std::abs(ab2)) * static_cast<double>(n * n + 1);
      for (const auto& l : levels) {
        if (l.energy - emin > band) continue;
        r.ground_states.push_back(dicke_state(n, l.m, SpinBasis::Z));
        const double j = 0.5 * static_cast<double>(n);
        if (std::abs(l.m - j) < 1e-12) {
          r.ground_labels.push_back(spin_label(reg, 0));
        } else if (std::abs(l.m + j) < 1e-12) {
          r.ground_labels.push_back(spin_label(reg, reg.dim() - 1));
        } else {
          r.ground_labels.push_back(weight_label(l.m, 'z'));
        }
      }
      break;
    }
    case LmgForm::OneAxisY: add_one_axis_states(r, n, SpinBasis::Y, 'y'); break;
    case LmgForm::OneAxisX: add_one_axis_states(r, n, SpinBasis::X, 'x'); break;
    case LmgForm::General: break;
  }
  return r;
}

}  // namespace lmg
