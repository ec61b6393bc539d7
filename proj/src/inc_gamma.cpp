// Regularized upper incomplete gamma Q(a, x).

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ris/special_functions.hpp"

namespace ris::sf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lower series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_n x^n / (a (a+1)...(a+n))
double reg_lower_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
}

// Upper continued fraction (modified Lentz).
double reg_upper_cf(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(a * std::log(x) - x - std::lgamma(a));
}

} // namespace

double reg_inc_gamma_upper(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("reg_inc_gamma_upper: a must be > 0");
    if (!(x >= 0.0)) throw std::domain_error("reg_inc_gamma_upper: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - reg_lower_series(a, x);
    return reg_upper_cf(a, x);
}

} // namespace ris::sf
