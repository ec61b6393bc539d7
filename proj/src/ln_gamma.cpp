// Complex log-gamma, principal branch.

#include <cmath>
#include <complex>

#include "ris/errors.hpp"
#include "ris/special_functions.hpp"

namespace ris::sf {

namespace {

using cd = std::complex<double>;

constexpr double kLnSqrt2Pi = 0.91893853320467274178;
constexpr double kLnPi = 1.1447298858494001741;

// Lanczos g = 7, 9 coefficients (Godfrey's set; accurate to ~1e-15 for
// Re(z) >= 0.5 in double precision).
constexpr double kG = 7.0;
constexpr double kCoeff[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// Valid for Re(z) >= 0.5; continuous there, matches ln Gamma on the reals.
cd lanczos_ln_gamma(cd z) {
    const cd zm = z - 1.0;
    cd acc = kCoeff[0];
    for (int i = 1; i < 9; ++i) acc += kCoeff[i] / (zm + static_cast<double>(i));
    const cd t = zm + kG + 0.5;
    return kLnSqrt2Pi + (zm + 0.5) * std::log(t) - t + std::log(acc);
}

// Branch-tracked log(sin(pi z)) for Im(z) >= 0: factor out the growing
// exponential so the remaining principal log stays small.
cd log_sin_pi_upper(cd z) {
    const cd iw = cd(0.0, 1.0) * (M_PI * z);
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    return cd(-M_LN2, M_PI_2) - iw + std::log(1.0 - std::exp(2.0 * iw));
}

} // namespace

std::complex<double> ln_gamma_complex(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw pole_error("ln_gamma_complex: pole at non-positive integer");

    if (z.real() >= 0.5) return lanczos_ln_gamma(z);

    // Reflection; conjugate symmetry picks the branch in the lower half-plane.
    if (z.imag() >= 0.0)
        return kLnPi - log_sin_pi_upper(z) - lanczos_ln_gamma(1.0 - z);
    return std::conj(kLnPi - log_sin_pi_upper(std::conj(z)) -
                     lanczos_ln_gamma(1.0 - std::conj(z)));
}

} // namespace ris::sf
