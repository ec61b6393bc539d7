#pragma once

#include <complex>
#include <vector>

#include "ris/contour.hpp"

namespace ris::sf {

// Principal-branch log-gamma via a fixed Lanczos rational approximation
// (g = 7, 9 terms) for Re(z) >= 0.5, extended by reflection below.
// Throws pole_error at non-positive integers.
std::complex<double> ln_gamma_complex(std::complex<double> z);

// Modified Bessel function of the second kind, real order >= 0, x > 0.
// Temme's series for x <= 2, Steed's CF2 for x > 2, stable upward recurrence
// in order; relative error < 1e-10 on x in [1e-6, 50].
double bessel_k(double order, double x);

// log K_order(x); usable where K itself over/underflows (large order at small
// x, large x).
double ln_bessel_k(double order, double x);

// Bessel function of the first kind, order zero.  Power series for x <= 9,
// Gauss-Legendre quadrature of the cosine integral representation above.
double bessel_j0(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a),
// a > 0, x >= 0.  Series for x < a + 1, continued fraction otherwise.
double reg_inc_gamma_upper(double a, double x);

// Meijer G parameter structure.  Kernel, integrated over Re(s) = c:
//
//   prod_{j<=m} G(b_j + s) prod_{k<=n} G(1 - a_k - s)
//   ----------------------------------------------------- x^{-s}
//   prod_{j>m} G(1 - b_j - s) prod_{k>n} G(a_k + s)
//
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a_params; // length p
    std::vector<double> b_params; // length q
    int p() const { return static_cast<int>(a_params.size()); }
    int q() const { return static_cast<int>(b_params.size()); }
    // m <= q, n <= p, and no pole of G(b_j + s), j <= m coincides with a pole
    // of G(1 - a_k - s), k <= n.  Throws on violation.
    void validate() const;
};

MellinBarnesResult meijer_g(const MeijerGSpec& spec, double x,
                            const ContourSettings& ctr = {});

// Log-scaled variant for integrands whose magnitude leaves double range:
// returns log|G| and the sign.  meijer_g() is a thin wrapper.
struct LogScaledResult {
    double log_abs = 0.0;
    int sign = 0;
    MellinBarnesResult diag;
};
LogScaledResult meijer_g_log(const MeijerGSpec& spec, double x,
                             const ContourSettings& ctr = {});

// One Gamma(shift + w_s s + w_t t) factor of a double Mellin-Barnes kernel.
struct GammaFactor {
    double shift = 0.0;
    double w_s = 0.0;
    double w_t = 0.0;
};

// Extended generalized bivariate Fox H kernel in flattened form: an outer
// joint Gamma group over (s, t) plus one group per variable, each split into
// numerator and denominator factors.  Evaluated as
//
//   (1/2*pi*j)^2 II exp(log_prefactor) K(s,t) x^s y^t ds dt
//
// over vertical lines Re(s) = c_offsets[0], Re(t) = c_offsets[1].  The offsets
// select which analytic continuation is computed; callers that assemble a
// kernel from a derivation must pass the offsets that derivation is valid for.
struct BivarFoxHSpec {
    std::vector<GammaFactor> joint_num, joint_den;
    std::vector<GammaFactor> s_num, s_den; // w_t == 0
    std::vector<GammaFactor> t_num, t_den; // w_s == 0
    // Added inside the exponential; keeps 1/Gamma(k_D)-sized prefactors from
    // underflowing the kernel product.
    double log_prefactor = 0.0;
    void validate() const; // finite weights, per-variable groups pure
};

MellinBarnesResult fox_h_bivariate(const BivarFoxHSpec& spec, double x,
                                   double y, const ContourSettings& ctr = {});

} // namespace ris::sf
