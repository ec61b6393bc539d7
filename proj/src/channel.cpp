#include "ris/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ris::channel {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::domain_error(std::string(name) + " must be > 0");
}

} // namespace

void V2VScenario::validate() const {
    if (n_elements < 1) throw std::domain_error("n_elements must be >= 1");
    require_positive(d_sr, "d_sr");
    require_positive(d_rd, "d_rd");
    require_positive(d_se, "d_se");
    require_positive(p1, "p1");
    require_positive(p2, "p2");
    require_positive(nu_sr, "nu_sr");
    require_positive(nu_rd, "nu_rd");
    require_positive(tx_snr, "tx_snr");
}

void V2IScenario::validate() const {
    if (n_elements < 1) throw std::domain_error("n_elements must be >= 1");
    require_positive(d_sd, "d_sd");
    require_positive(d_se, "d_se");
    require_positive(p1, "p1");
    require_positive(p2, "p2");
    require_positive(nu_sd, "nu_sd");
    require_positive(tx_snr, "tx_snr");
}

double mean_snr_v2v_main(const V2VScenario& sc) {
    sc.validate();
    return sc.tx_snr * std::pow(sc.d_sr, -sc.p1) * std::pow(sc.d_rd, -sc.p1);
}

double mean_snr_eve(double d_se, double p2, double tx_snr) {
    require_positive(d_se, "d_se");
    require_positive(p2, "p2");
    require_positive(tx_snr, "tx_snr");
    return tx_snr * std::pow(d_se, -p2);
}

double mean_snr_v2i_main(const V2IScenario& sc) {
    sc.validate();
    return sc.tx_snr * std::pow(sc.d_sd, -sc.p1);
}

} // namespace ris::channel
