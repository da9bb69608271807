#include "gain.hpp"

#include <cmath>

#include "errors.hpp"

namespace superlase {

AlphaBeta alpha_beta(const DerivedParams& p, cplx b, double n_b) {
  if (!(n_b >= 0.0)) throw DomainError("phonon number n_b must be >= 0");
  const double gamma = p.raw.cavity_loss;
  const double g = p.raw.cavity_coupling;
  const double dc = p.raw.pump_cavity_detuning;
  const double chi = p.raw.com_coupling;
  AlphaBeta ab;
  ab.alpha = gamma * gamma + g * g - dc * dc +
             p.raw.collective_stark_NU0 / 4.0 * (2.0 * dc + chi * b.real()) +
             chi * chi / 4.0 * n_b;
  ab.beta = gamma * (dc + p.detuning_prime);
  return ab;
}

double population_inversion(const DerivedParams& p, double lambda) {
  const double gamma = p.raw.cavity_loss;
  const double dc = p.raw.pump_cavity_detuning;
  return 2.0 * p.raw.cavity_coupling * dc / (dc * dc + gamma * gamma) *
         intracavity_photons(p, lambda);
}

double phonon_number(double gain, double gamma_m) {
  if (!(gamma_m > 0.0)) throw DomainError("mechanical damping gamma_m must be > 0");
  return std::exp(2.0 * (gain - gamma_m) / gamma_m);
}

namespace {

// G1, omega' and C for a given alpha; G0 depends on delta_n only.
void fill_alpha_terms(const DerivedParams& p, double lambda, GainBreakdown& out) {
  const double gamma = p.raw.cavity_loss;
  const double g = p.raw.cavity_coupling;
  const double dc = p.raw.pump_cavity_detuning;
  const double chi = p.raw.com_coupling;
  const double n = p.raw.n_atoms;
  const double mismatch = 2.0 * g - p.raw.mech_freq;  // 2g - omega_m
  const double lorentz = mismatch * mismatch + 4.0 * gamma * gamma;
  const double lam2_j2 = lambda * lambda * out.j_minus_sq;
  const double ab2 = out.alpha * out.alpha + out.beta * out.beta;

  out.g1_term = -chi * chi * lam2_j2 * out.beta * mismatch / (n * ab2 * lorentz);
  out.gain = out.g0_term + out.g1_term;
  out.freq_pull = chi * chi / lorentz *
                  (-mismatch * out.delta_n / 4.0 - 2.0 * gamma * lam2_j2 * out.beta / (n * ab2));

  const cplx bracket = p.raw.collective_stark_NU0 * out.delta_n / (16.0 * lam2_j2) -
                       cplx(g * out.alpha, out.alpha * gamma + out.beta * dc) / (n * ab2);
  out.drive_c = 2.0 * chi * lam2_j2 / cplx(2.0 * gamma, mismatch) * bracket;
}

}  // namespace

GainBreakdown mechanical_gain(const DerivedParams& p, double lambda, const GainOptions& options) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("pump coupling lambda must be finite and >= 0");
  }
  const SteadyState ss = steady_state(p, lambda);

  GainBreakdown out;
  out.lambda_c = critical_coupling(p);
  out.beta = alpha_beta(p, {}, 0.0).beta;
  out.alpha = alpha_beta(p, {}, 0.0).alpha;
  if (ss.phase != Phase::Superradiant) {
    out.n_b = phonon_number(0.0, p.raw.mech_damping);
    return out;
  }

  const double gamma = p.raw.cavity_loss;
  const double chi = p.raw.com_coupling;
  const double mismatch = 2.0 * p.raw.cavity_coupling - p.raw.mech_freq;

  out.delta_n = population_inversion(p, lambda);
  out.j_minus_sq = std::norm(ss.j_minus);
  out.g0_term = chi * chi * gamma * out.delta_n / (2.0 * mismatch * mismatch + 8.0 * gamma * gamma);
  fill_alpha_terms(p, lambda, out);

  if (options.self_consistent) {
    // Stationary point of  b' = (-i omega_m + i omega' + G - gamma_m) b + C.
    cplx b{};
    for (int it = 0; it < options.max_iterations; ++it) {
      const cplx rate(out.gain - p.raw.mech_damping, out.freq_pull - p.raw.mech_freq);
      const cplx next = -out.drive_c / rate;
      out.iterations = it + 1;
      const double step = std::abs(next - b);
      b = next;
      const AlphaBeta ab = alpha_beta(p, b, std::norm(b));
      out.alpha = ab.alpha;
      out.mech_amplitude = b;
      fill_alpha_terms(p, lambda, out);
      if (step <= options.tolerance * std::max(1.0, std::abs(b))) break;
    }
  }

  out.n_b = phonon_number(out.gain, p.raw.mech_damping);
  out.saturated = std::isinf(out.n_b);
  return out;
}

Interval default_threshold_bracket(const DerivedParams& p) {
  const double lambda_c = critical_coupling(p);
  return {1.001 * lambda_c, 20.0 * lambda_c};
}

double threshold_coupling(const DerivedParams& p, std::optional<Interval> bracket) {
  const Interval range = bracket.value_or(default_threshold_bracket(p));
  const double gamma_m = p.raw.mech_damping;
  const auto excess = [&](double lambda) { return mechanical_gain(p, lambda).gain - gamma_m; };
  return find_first_root(excess, range, 1e-10).x;
}

double pump_power(double lambda, const DerivedParams& p) {
  if (!(lambda >= 0.0)) throw DomainError("pump coupling lambda must be >= 0");
  if (!(p.raw.dipole_moment > 0.0)) throw DomainError("dipole moment must be > 0");
  if (p.u0 == 0.0) throw DomainError("single-atom light shift U0 must be nonzero");
  const double hbar = constants::hbar;
  const double g0 = p.raw.atom_photon_g0;
  const double w = p.raw.beam_waist;
  const double d = p.raw.dipole_moment;
  return constants::pi * hbar * hbar * constants::epsilon0 * constants::speed_of_light * w * w *
         g0 * g0 * lambda * lambda / (2.0 * p.raw.n_atoms * d * d * p.u0 * p.u0);
}

}  // namespace superlase
