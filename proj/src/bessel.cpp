// Modified Bessel K of real order and Bessel J0.
//
// K: Temme's series (J. Comput. Phys. 19, 1975) for x <= 2, Steed's CF2
// (Thompson & Barnett) for x > 2, both at |mu| <= 1/2, then upward recurrence
// in log space so large orders at small arguments stay representable.

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "ris/errors.hpp"
#include "ris/special_functions.hpp"

namespace ris::sf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kEulerGamma = 0.57721566490153286061;

double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

// gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)]/(2 mu), gam2 = [... + ...]/2.
void temme_gammas(double mu, double& gam1, double& gam2) {
    const double gp = 1.0 / std::tgamma(1.0 + mu); // 1/Gamma(1+mu)
    const double gm = 1.0 / std::tgamma(1.0 - mu); // 1/Gamma(1-mu)
    gam2 = 0.5 * (gm + gp);
    if (std::fabs(mu) < 1e-4) {
        // gam1 -> -euler_gamma - c3 mu^2, c3 = g^3/6 - g pi^2/12 + zeta(3)/3
        gam1 = -kEulerGamma + 0.042035100812064 * mu * mu;
    } else {
        gam1 = (gm - gp) / (2.0 * mu);
    }
}

// x <= 2, |mu| <= 1/2: K_mu(x) and K_{mu+1}(x).
void bessel_k_small(double mu, double x, double& kmu, double& kmu1) {
    const double x2 = 0.5 * x;
    const double pimu = M_PI * mu;
    const double fact = (std::fabs(pimu) < 1e-12) ? 1.0 : pimu / std::sin(pimu);
    const double d = -std::log(x2);
    const double e = mu * d;
    const double fact2 = (std::fabs(e) < 1e-12) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2;
    temme_gammas(mu, gam1, gam2);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    const double ee = std::exp(e);
    double p = 0.5 * ee * std::tgamma(1.0 + mu);
    double q = 0.5 / ee * std::tgamma(1.0 - mu);
    double c = 1.0;
    const double x2sq = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= 500; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= x2sq / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    kmu = sum;
    kmu1 = sum1 * (2.0 / x);
}

// x > 2, |mu| <= 1/2: returns scaled values K e^{x} to dodge the e^{-x} range.
void bessel_k_cf2(double mu, double x, double& kmu_scaled, double& kmu1_scaled) {
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double delh = d, h = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 50000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels) < std::fabs(s) * kEps) break;
    }
    h = a1 * h;
    kmu_scaled = std::sqrt(M_PI / (2.0 * x)) / s;
    kmu1_scaled = kmu_scaled * (mu + x + 0.5 - h) / x;
}

// ln K_nu(x) for nu >= 0, x > 0.
double ln_bessel_k_impl(double nu, double x) {
    const int n = static_cast<int>(std::floor(nu + 0.5));
    const double mu = nu - n; // |mu| <= 1/2
    double lk0, lk1;
    if (x <= 2.0) {
        double kmu, kmu1;
        bessel_k_small(mu, x, kmu, kmu1);
        lk0 = std::log(kmu);
        lk1 = std::log(kmu1);
    } else {
        double kmu, kmu1;
        bessel_k_cf2(mu, x, kmu, kmu1);
        lk0 = std::log(kmu) - x;
        lk1 = std::log(kmu1) - x;
    }
    if (n == 0) return lk0;
    if (n == 1) return lk1;
    // K_{m+1} = K_{m-1} + (2 m / x) K_m, all terms positive
    for (int i = 1; i < n; ++i) {
        const double lk2 = log_add_exp(lk0, std::log(2.0 * (mu + i) / x) + lk1);
        lk0 = lk1;
        lk1 = lk2;
    }
    return lk1;
}

} // namespace

double ln_bessel_k(double order, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be > 0");
    if (!(order >= 0.0)) throw std::domain_error("bessel_k: order must be >= 0");
    return ln_bessel_k_impl(order, x);
}

double bessel_k(double order, double x) {
    return std::exp(ln_bessel_k(order, x));
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int npts) {
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(npts);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<double, double>> nw(npts);
    for (int i = 0; i < (npts + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        nw[i] = {-z, w};
        nw[npts - 1 - i] = {z, w};
    }
    return cache.emplace(npts, std::move(nw)).first->second;
}

} // namespace

double bessel_j0(double x) {
    if (!(x >= 0.0)) x = -x; // J0 is even
    if (x <= 9.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
        }
        return sum;
    }
    // J0(x) = (2/pi) int_0^{pi/2} cos(x sin t) dt; node count tracks the
    // oscillation bandwidth.
    const int npts = 32 + static_cast<int>(x);
    const auto& nw = gauss_legendre(npts);
    const double a = 0.0, b = M_PI_2;
    double acc = 0.0;
    for (const auto& [u, w] : nw) {
        const double t = 0.5 * (b - a) * u + 0.5 * (a + b);
        acc += w * std::cos(x * std::sin(t));
    }
    return acc * 0.5 * (b - a) * 2.0 / M_PI;
}

} // namespace ris::sf
