#pragma once

#include <variant>

#include "ris/channel.hpp"

namespace ris::stats {

// gamma_D = Z^2 with Z ~ Gamma(shape, scale); moment-matched approximation of
// the ideal-phase V2V cascade SNR (i.n.i.d. Rayleigh products).
struct GammaSquare {
    double shape; // k_D = N pi^2 / (16 - pi^2)
    double scale; // eta_D
};

// Exact law of the uniform-phase-error V2V SNR: isotropic 2-D random walk
// with double-Rayleigh step lengths.
struct RandomWalkExact {
    int n_elements;
    double scale; // gbar_D * nu_SR * nu_RD
};

// Gamma approximation of the V2I equal-gain-combining SNR.
struct GammaV2I {
    int n_elements;
    double scale; // gbar_D * nu_SD * Omega_D
};

// Double-Rayleigh (cascaded) eavesdropper SNR.
struct DoubleRayleigh {
    double mean_snr; // gbar_E
};

using SnrDistribution =
    std::variant<GammaSquare, RandomWalkExact, GammaV2I, DoubleRayleigh>;

// Moment matching of the cascade amplitude to a Gamma variable.
GammaSquare fit_gamma_square(int n_elements, double nu_sr, double nu_rd,
                             double mean_snr);

// Omega_D = 1 + Gamma(3/2)^2 (N - 1) = 1 + (pi/4)(N - 1)
double omega_v2i(int n_elements);

double eval_pdf(const SnrDistribution& dist, double x);
double eval_cdf(const SnrDistribution& dist, double x);

// Mean of the SNR under the analytic law.
double mean(const SnrDistribution& dist);

// Laws induced by a physical scenario.
GammaSquare main_law_ideal(const channel::V2VScenario& sc);
RandomWalkExact main_law_phase_error(const channel::V2VScenario& sc);
GammaV2I main_law_v2i(const channel::V2IScenario& sc);
DoubleRayleigh eve_law(double d_se, double p2, double tx_snr);

} // namespace ris::stats
