#pragma once

#include <string>

#include "ris/channel.hpp"
#include "ris/contour.hpp"
#include "ris/statistics.hpp"

namespace ris::secrecy {

// Target secrecy rate in nats and its outage threshold multiplier.
struct SecrecyTarget {
    double rate_rs;
    double theta; // exp(rate_rs) >= 1
    explicit SecrecyTarget(double rs);
};

enum class Method { ClosedForm, SemiAnalytic, DoubleIntegral, MonteCarlo };

struct SopEstimate {
    double value = 0.0;
    Method method = Method::SemiAnalytic;
    double uncertainty = 0.0; // CI half-width or integration residual
    std::string diagnostics;
};

// [ln(1 + gamma_D) - ln(1 + gamma_E)]^+, in nats.
double secrecy_rate(double gamma_d, double gamma_e);

// P_o = int_0^inf F_D(Theta x + Theta - 1) f_E(x) dx; the arbiter every other
// route is checked against.  dist_e must be DoubleRayleigh.
SopEstimate sop_semianalytic(const stats::SnrDistribution& dist_d,
                             const stats::SnrDistribution& dist_e,
                             const SecrecyTarget& tgt);

// Closed forms.  Theta == 1 throws theta_degenerate_error (the prefactors
// divide by Theta - 1); route those calls to sop_semianalytic.
SopEstimate sop_v2v_ideal_closed(const channel::V2VScenario& sc,
                                 const SecrecyTarget& tgt,
                                 const sf::ContourSettings& ctr = {});
SopEstimate sop_v2v_phase_error_closed(const channel::V2VScenario& sc,
                                       const SecrecyTarget& tgt,
                                       const sf::ContourSettings& ctr = {});

// Finite double sum over a G^{2,1}_{1,2} family, evaluated in log space.
SopEstimate sop_v2i_closed(const channel::V2IScenario& sc,
                           const SecrecyTarget& tgt,
                           const sf::ContourSettings& ctr = {});

// Defining double integral of the outage region; slow reference path.
SopEstimate sop_double_integral(const stats::SnrDistribution& dist_d,
                                const stats::SnrDistribution& dist_e,
                                const SecrecyTarget& tgt);

} // namespace ris::secrecy
