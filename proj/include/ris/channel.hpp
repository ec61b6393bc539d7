#pragma once

namespace ris::channel {

// Everything here is linear-domain; dB conversion lives in the CLI layer.

// S -> RIS -> D cascade with an eavesdropper on the direct S -> E path.
struct V2VScenario {
    int n_elements = 8;
    double d_sr = 20.0; // meters
    double d_rd = 20.0;
    double d_se = 10.0;
    double p1 = 2.1; // path-loss exponent, RIS links
    double p2 = 2.3; // path-loss exponent, vehicle-to-vehicle links
    double nu_sr = 1.0; // per-element channel variance E[|h|^2]
    double nu_rd = 1.0;
    double tx_snr = 1e6; // P_s / N_0, linear
    void validate() const;
};

// RIS acts as the receiving aperture of the infrastructure node.
struct V2IScenario {
    int n_elements = 8;
    double d_sd = 50.0;
    double d_se = 10.0;
    double p1 = 2.1;
    double p2 = 2.3;
    double nu_sd = 1.0;
    double tx_snr = 1e6;
    void validate() const;
};

enum class PhaseModel {
    Ideal,        // perfect phase alignment at every element
    UniformError, // phase errors uniform on [0, 2*pi)
};

// gbar_D = tx_snr * d_sr^{-p1} * d_rd^{-p1}
double mean_snr_v2v_main(const V2VScenario& sc);

// gbar_E = tx_snr * d_se^{-p2}; no RIS on the wiretap path
double mean_snr_eve(double d_se, double p2, double tx_snr);

// gbar_D = tx_snr * d_sd^{-p1}
double mean_snr_v2i_main(const V2IScenario& sc);

} // namespace ris::channel
