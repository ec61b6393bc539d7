#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ris/montecarlo.hpp"
#include "ris/special_functions.hpp"
#include "ris/statistics.hpp"

using namespace ris::stats;
namespace channel = ris::channel;

namespace {

// adaptive-free composite Simpson, good enough as an independent integrator
template <typename F>
double simpson(F f, double a, double b, long n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (long i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// integrate the density of `dist` over [0, hi] with a sqrt substitution that
// tames the x -> 0 kernels
double pdf_mass(const SnrDistribution& d, double hi, long n = 200000) {
    return simpson(
        [&](double u) {
            // u * pdf(u^2) -> 0 as u -> 0 even for the log-divergent kernels
            return u == 0.0 ? 0.0 : 2.0 * u * eval_pdf(d, u * u);
        },
        0.0, std::sqrt(hi), n);
}

} // namespace

TEST_CASE("fit_gamma_square: closed-form parameters at N = 16") {
    const auto g = fit_gamma_square(16, 1.0, 1.0, 1.0);
    CHECK(g.shape == doctest::Approx(16.0 * M_PI * M_PI / (16.0 - M_PI * M_PI))
                         .epsilon(1e-12));
    CHECK(g.shape == doctest::Approx(25.7586).epsilon(1e-4));
    CHECK(g.scale ==
          doctest::Approx((16.0 - M_PI * M_PI) / (4.0 * M_PI)).epsilon(1e-12));
    CHECK(g.scale == doctest::Approx(0.48784).epsilon(1e-4));
}

TEST_CASE("fit_gamma_square: shape depends only on N") {
    const auto a = fit_gamma_square(7, 1.0, 1.0, 1.0);
    const auto b = fit_gamma_square(7, 2.5, 0.3, 42.0);
    CHECK(a.shape == b.shape);
    CHECK(a.scale != b.scale);
}

TEST_CASE("fit_gamma_square: matched first moment of the cascade sum") {
    // E[A] = sqrt(gbar) N pi sqrt(nu_sr nu_rd) / 4 must equal shape*scale
    const int n = 12;
    const double nu_sr = 1.3, nu_rd = 0.7, gbar = 4.2;
    const auto g = fit_gamma_square(n, nu_sr, nu_rd, gbar);
    const double m1 =
        std::sqrt(gbar) * n * M_PI * std::sqrt(nu_sr * nu_rd) / 4.0;
    CHECK(g.shape * g.scale == doctest::Approx(m1).epsilon(1e-12));
    // and against a Monte Carlo of the physical cascade amplitude
    ris::mc::RngStream stream{99, 5};
    const long draws = 400000;
    double acc = 0.0;
    for (long i = 0; i < draws; ++i) {
        ris::mc::UniformSource u(stream, i);
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            s += u.next_rayleigh(nu_sr) * u.next_rayleigh(nu_rd);
        acc += std::sqrt(gbar) * s;
    }
    const double mc_mean = acc / draws;
    CHECK(std::fabs(mc_mean - m1) / m1 < 5e-3);
}

TEST_CASE("omega_v2i") {
    CHECK(omega_v2i(1) == 1.0);
    CHECK(omega_v2i(5) == doctest::Approx(1.0 + M_PI).epsilon(1e-12));
    CHECK(omega_v2i(2) == doctest::Approx(1.7853981634).epsilon(1e-9));
    CHECK_THROWS_AS(omega_v2i(0), std::domain_error);
}

TEST_CASE("eval_pdf: double-Rayleigh closed form") {
    const SnrDistribution d = DoubleRayleigh{1.0};
    CHECK(eval_pdf(d, 1.0) ==
          doctest::Approx(2.0 * ris::sf::bessel_k(0.0, 2.0)).epsilon(1e-12));
    // frozen: 2 K0(2)
    CHECK(eval_pdf(d, 1.0) == doctest::Approx(0.227787745499066871).epsilon(1e-12));
}

TEST_CASE("eval_pdf: RandomWalkExact{N=1} reduces to DoubleRayleigh") {
    const SnrDistribution rw = RandomWalkExact{1, 1.0};
    const SnrDistribution dr = DoubleRayleigh{1.0};
    for (double x : {1e-6, 0.01, 0.3, 1.0, 4.0, 20.0})
        CHECK(eval_pdf(rw, x) == doctest::Approx(eval_pdf(dr, x)).epsilon(1e-12));
}

TEST_CASE("eval_pdf: normalization across every variant") {
    std::vector<SnrDistribution> laws{
        GammaSquare{fit_gamma_square(4, 1.0, 1.0, 1.0)},
        GammaSquare{fit_gamma_square(16, 0.5, 2.0, 3.0)},
        RandomWalkExact{1, 1.0},
        RandomWalkExact{2, 0.7},
        RandomWalkExact{8, 2.0},
        GammaV2I{1, 2.0},
        GammaV2I{6, 0.5},
        DoubleRayleigh{1.5},
    };
    for (const auto& d : laws) {
        // integrate to the 0.99999+ quantile and add the analytic tail
        double hi = mean(d);
        while (eval_cdf(d, hi) < 0.999999) hi *= 2.0;
        const double mass = pdf_mass(d, hi) + (1.0 - eval_cdf(d, hi));
        CHECK(std::fabs(mass - 1.0) < 1e-4);
    }
}

TEST_CASE("eval_cdf: frozen double-Rayleigh point and limits") {
    const SnrDistribution d = DoubleRayleigh{1.0};
    CHECK(eval_cdf(d, 0.0) == 0.0);
    const double expect = 1.0 - 2.0 * ris::sf::bessel_k(1.0, 2.0);
    CHECK(eval_cdf(d, 1.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(eval_cdf(d, 1.0) == doctest::Approx(0.7202682363668586).epsilon(1e-10));
    CHECK(eval_cdf(d, 1e9) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("eval_cdf: zero at the origin for every variant") {
    for (const auto& d : std::vector<SnrDistribution>{
             GammaSquare{3.2, 0.5}, RandomWalkExact{4, 1.0}, GammaV2I{4, 2.0},
             DoubleRayleigh{2.0}})
        CHECK(eval_cdf(d, 0.0) == 0.0);
}

TEST_CASE("eval_cdf: RandomWalkExact against integrated density") {
    const SnrDistribution d = RandomWalkExact{4, 1.0};
    for (double x : {0.5, 2.0, 8.0, 25.0}) {
        const double byquad = pdf_mass(d, x);
        CHECK(std::fabs(eval_cdf(d, x) - byquad) < 1e-5);
    }
}

TEST_CASE("eval_cdf: RandomWalkExact against the paper's Meijer-G form") {
    // F(x) = x^{(N+1)/2} / (Gamma(N) c^{(N+1)/2}) *
    //        G^{2,1}_{1,3}(x/c | (1-N)/2; (N-1)/2, -(N-1)/2, -(N+1)/2)
    for (int n : {2, 3, 5}) {
        const double c = 1.3;
        const SnrDistribution d = RandomWalkExact{n, c};
        for (double x : {0.4, 1.1, 3.0}) {
            ris::sf::MeijerGSpec g;
            g.m = 2;
            g.n = 1;
            g.a_params = {0.5 * (1.0 - n)};
            g.b_params = {0.5 * (n - 1.0), -0.5 * (n - 1.0), -0.5 * (n + 1.0)};
            const auto r = ris::sf::meijer_g(g, x / c);
            const double f = std::pow(x, 0.5 * (n + 1.0)) /
                             (std::tgamma(n) * std::pow(c, 0.5 * (n + 1.0))) *
                             r.value;
            CHECK(eval_cdf(d, x) == doctest::Approx(f).epsilon(1e-7));
        }
    }
}

TEST_CASE("cdf/pdf central-difference consistency") {
    for (const auto& d : std::vector<SnrDistribution>{
             GammaSquare{fit_gamma_square(8, 1.0, 1.0, 2.0)},
             RandomWalkExact{4, 1.5}, GammaV2I{4, 1.0}, DoubleRayleigh{1.0}}) {
        for (double x : {0.2, 1.0, 3.0, 9.0}) {
            const double h = 1e-5 * std::max(1.0, x);
            const double deriv =
                (eval_cdf(d, x + h) - eval_cdf(d, x - h)) / (2.0 * h);
            const double f = eval_pdf(d, x);
            // rel tol only away from effectively-zero density, where the
            // difference quotient is below double resolution
            if (f > 1e-8) CHECK(std::fabs(deriv - f) / f < 1e-3);
        }
    }
}

TEST_CASE("eval_cdf: monotone and within [0, 1]") {
    const SnrDistribution d = RandomWalkExact{3, 0.8};
    double prev = 0.0;
    for (double x = 0.0; x < 30.0; x += 0.37) {
        const double f = eval_cdf(d, x);
        CHECK(f >= prev - 1e-15);
        CHECK(f <= 1.0);
        prev = f;
    }
}

TEST_CASE("x -> 0 limits") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(eval_pdf(RandomWalkExact{2, 1.0}, 1e-320) ==
          doctest::Approx(1.0).epsilon(1e-12)); // 1/((N-1)c)
    CHECK(eval_pdf(RandomWalkExact{5, 2.0}, 1e-320) ==
          doctest::Approx(1.0 / (4.0 * 2.0)).epsilon(1e-12));
    CHECK(eval_pdf(RandomWalkExact{1, 1.0}, 1e-320) == inf);
    CHECK(eval_pdf(DoubleRayleigh{1.0}, 1e-320) == inf);
    CHECK(eval_pdf(GammaSquare{3.2, 1.0}, 1e-320) == 0.0);
    CHECK(eval_pdf(GammaSquare{1.61, 1.0}, 1e-320) == inf); // k_D < 2 (N = 1)
    CHECK(eval_pdf(GammaV2I{4, 1.0}, 1e-320) == 0.0);
    CHECK(eval_pdf(GammaV2I{1, 2.0}, 1e-320) == doctest::Approx(0.5));
    // the near-zero analytic limit agrees with the direct evaluation nearby
    CHECK(eval_pdf(RandomWalkExact{2, 1.0}, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("mean: GammaV2I identity and RandomWalk second moment") {
    // Gamma(N, S) mean = N S = N Omega_D gbar nu_sd
    const int n = 6;
    const double gbar = 3.0, nu = 0.8;
    const double s = gbar * nu * omega_v2i(n);
    CHECK(mean(SnrDistribution(GammaV2I{n, s})) ==
          doctest::Approx(n * s).epsilon(1e-15));
    // E[gamma] under the random-walk law is N c; check by quadrature
    const SnrDistribution rw = RandomWalkExact{3, 1.4};
    const double m = simpson(
        [&](double u) { return 2.0 * u * u * u * eval_pdf(rw, u * u); }, 0.0,
        14.0, 400000);
    CHECK(m == doctest::Approx(mean(rw)).epsilon(1e-5));
}

TEST_CASE("Prop-2 exactness, reduced-size smoke (full run in acceptance)") {
    const int n_el = 2;
    channel::V2VScenario sc;
    sc.n_elements = n_el;
    sc.d_sr = sc.d_rd = sc.d_se = 1.0;
    sc.tx_snr = 1.0;
    const SnrDistribution law = main_law_phase_error(sc);
    ris::mc::RngStream stream{7, 3};
    std::vector<double> samples(200000);
    for (size_t i = 0; i < samples.size(); ++i)
        samples[i] = ris::mc::sample_v2v_snr_pair(
                         sc, ris::channel::PhaseModel::UniformError, stream, i)
                         .first;
    const double ks = ris::mc::ks_statistic(
        samples, [&](double x) { return eval_cdf(law, x); });
    CHECK(ks < 0.004);
}

TEST_CASE("law builders wire the scenario parameters through") {
    channel::V2VScenario sc;
    sc.n_elements = 4;
    sc.tx_snr = 1e6;
    const auto ideal = main_law_ideal(sc);
    CHECK(ideal.shape ==
          doctest::Approx(4.0 * M_PI * M_PI / (16.0 - M_PI * M_PI)));
    const auto rw = main_law_phase_error(sc);
    CHECK(rw.scale == doctest::Approx(channel::mean_snr_v2v_main(sc)));
    channel::V2IScenario vi;
    vi.n_elements = 5;
    const auto gi = main_law_v2i(vi);
    CHECK(gi.scale ==
          doctest::Approx(channel::mean_snr_v2i_main(vi) * omega_v2i(5)));
    CHECK(eve_law(10.0, 2.3, 1e6).mean_snr ==
          doctest::Approx(1e6 * std::pow(10.0, -2.3)));
}
