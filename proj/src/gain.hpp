#pragma once

#include <optional>

#include "dicke.hpp"
#include "numeric.hpp"
#include "params.hpp"

namespace superlase {

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = gamma^2 + g^2 - Delta_c^2 + (NU0/4)(2 Delta_c + chi Re b) + (chi^2/4) n_b,
/// beta = gamma (Delta_c + Delta'_c). Throws DomainError for n_b < 0.
AlphaBeta alpha_beta(const DerivedParams& p, cplx b, double n_b);

/// Supermode population inversion 2 g Delta_c / (Delta_c^2 + gamma^2) |a_{2,s}|^2.
double population_inversion(const DerivedParams& p, double lambda);

struct GainBreakdown {
  double lambda_c = 0.0;
  double delta_n = 0.0;
  double j_minus_sq = 0.0;  // |J_{-,s}|^2
  double g0_term = 0.0;
  double g1_term = 0.0;
  double gain = 0.0;
  double freq_pull = 0.0;  // omega'
  cplx drive_c;
  double alpha = 0.0;
  double beta = 0.0;
  cplx mech_amplitude;     // b used inside alpha (zero unless self-consistent)
  double n_b = 0.0;        // stimulated phonon number
  bool saturated = false;  // n_b overflowed to +inf
  int iterations = 0;
};

struct GainOptions {
  // Near threshold the membrane amplitude is negligible and alpha is taken at
  // b = 0. When set, b is instead iterated to the fixed point of the
  // effective phonon equation.
  bool self_consistent = false;
  int max_iterations = 200;
  double tolerance = 1e-12;
};

/// G = G0 + G1 together with omega', C, alpha, beta and N_b at pump coupling
/// `lambda`. Everything but N_b = exp(-2) vanishes for lambda <= lambda_c.
GainBreakdown mechanical_gain(const DerivedParams& p, double lambda,
                              const GainOptions& options = {});

/// N_b = exp(2 (G - gamma_m) / gamma_m). Throws DomainError for gamma_m <= 0.
double phonon_number(double gain, double gamma_m);

/// Default search bracket [1.001 lambda_c, 20 lambda_c].
Interval default_threshold_bracket(const DerivedParams& p);

/// Smallest lambda in `bracket` with G(lambda) = gamma_m, to relative 1e-10.
/// Throws BracketError (carrying G - gamma_m at the endpoints) when G - gamma_m
/// does not change sign.
double threshold_coupling(const DerivedParams& p, std::optional<Interval> bracket = std::nullopt);

/// P = pi hbar^2 eps0 c w_c^2 g0^2 lambda^2 / (2 N D^2 U0^2), in watts.
double pump_power(double lambda, const DerivedParams& p);

}  // namespace superlase
