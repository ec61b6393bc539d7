#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ris/montecarlo.hpp"
#include "ris/secrecy.hpp"

using namespace ris::mc;
namespace channel = ris::channel;
namespace stats = ris::stats;

TEST_CASE("philox4x64-10: Random123 known-answer vectors") {
    auto out = philox4x64({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x16554d9eca36314cULL);
    CHECK(out[1] == 0xdb20fe9d672d0fdcULL);
    CHECK(out[2] == 0xd7e772cee186176bULL);
    CHECK(out[3] == 0x7e68b68aec7ba23bULL);
    out = philox4x64({0x243F6A8885A308D3ULL, 0x13198A2E03707344ULL,
                      0xA4093822299F31D0ULL, 0x082EFA98EC4E6C89ULL},
                     {0x9E3779B97F4A7C15ULL, 0xBB67AE8584CAA73BULL});
    CHECK(out[0] == 0xdb42797c3e3cbcbfULL);
    CHECK(out[1] == 0xef20f4680c8da360ULL);
    CHECK(out[2] == 0x7373d5f2bcba358fULL);
    CHECK(out[3] == 0xe1932be35bf9fa45ULL);
    out = philox4x64({1, 2, 3, 4}, {42, 7});
    CHECK(out[0] == 0x50988134c0ca9272ULL);
    CHECK(out[1] == 0xe3779e6513b83290ULL);
    CHECK(out[2] == 0xe9cba072d3a876aaULL);
    CHECK(out[3] == 0xf07bb1a7425522bfULL);
}

TEST_CASE("UniformSource: deterministic, stream-separated, in (0,1)") {
    RngStream a{123, 0}, a2{123, 0}, b{123, 1}, c{124, 0};
    UniformSource ua(a, 5), ua2(a2, 5), ub(b, 5), uc(c, 5), ua_other(a, 6);
    for (int i = 0; i < 64; ++i) {
        const double x = ua.next_u01();
        CHECK(x == ua2.next_u01()); // bitwise reproducible
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
    // different stream / seed / index give different sequences
    UniformSource ua3(a, 5);
    CHECK(ua3.next_u01() != ub.next_u01());
    UniformSource ua4(a, 5);
    CHECK(ua4.next_u01() != uc.next_u01());
    UniformSource ua5(a, 5);
    CHECK(ua5.next_u01() != ua_other.next_u01());
}

TEST_CASE("Rayleigh sampler: second moment within 3 sigma at 1e6 draws") {
    RngStream stream{2024, 0};
    const long n = 1000000;
    const double nu = 1.7;
    double acc = 0.0, acc4 = 0.0;
    for (long i = 0; i < n; ++i) {
        UniformSource u(stream, i);
        const double r = u.next_rayleigh(nu);
        acc += r * r;
        acc4 += r * r * r * r;
    }
    const double m2 = acc / n;
    const double var_m2 = (acc4 / n - m2 * m2) / n; // E[r^4] = 2 nu^2
    CHECK(std::fabs(m2 - nu) < 3.0 * std::sqrt(var_m2));
}

TEST_CASE("sample_v2v_snr_pair: N=1 ideal matches the double-Rayleigh law") {
    channel::V2VScenario sc;
    sc.n_elements = 1;
    sc.d_sr = sc.d_rd = sc.d_se = 1.0;
    sc.tx_snr = 1.0;
    RngStream stream{5, 0};
    const long n = 1000000;
    std::vector<double> samples(n);
    for (long i = 0; i < n; ++i)
        samples[i] =
            sample_v2v_snr_pair(sc, channel::PhaseModel::Ideal, stream, i).first;
    const stats::SnrDistribution law = stats::DoubleRayleigh{1.0};
    const double ks = ks_statistic(
        samples, [&](double x) { return stats::eval_cdf(law, x); });
    CHECK(ks < 0.002);
}

TEST_CASE("sample_v2v_snr_pair: N=1 phase error is a phase rotation only") {
    channel::V2VScenario sc;
    sc.n_elements = 1;
    RngStream stream{5, 9};
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const double ideal =
            sample_v2v_snr_pair(sc, channel::PhaseModel::Ideal, stream, i).first;
        const double rot =
            sample_v2v_snr_pair(sc, channel::PhaseModel::UniformError, stream, i)
                .first;
        CHECK(rot == doctest::Approx(ideal).epsilon(1e-12));
    }
}

TEST_CASE("sample_v2v_snr_pair: ideal second moment matches the moment formula") {
    // E[gamma_D]/gbar = N nu^2 + pi^2 nu^2 N(N-1)/16 for nu_sr = nu_rd = nu
    channel::V2VScenario sc;
    sc.n_elements = 6;
    sc.d_sr = sc.d_rd = sc.d_se = 1.0;
    sc.tx_snr = 1.0;
    sc.nu_sr = sc.nu_rd = 1.0;
    RngStream stream{17, 0};
    const long n = 1000000;
    double acc = 0.0, acc2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double g =
            sample_v2v_snr_pair(sc, channel::PhaseModel::Ideal, stream, i).first;
        acc += g;
        acc2 += g * g;
    }
    const double m = acc / n;
    const double sd_mean = std::sqrt((acc2 / n - m * m) / n);
    const double expect = 6.0 + M_PI * M_PI * 6.0 * 5.0 / 16.0;
    CHECK(std::fabs(m - expect) < 4.0 * sd_mean);
}

TEST_CASE("sample_v2i_snr_pair: N=1 is exponential; gamma_E ignores N") {
    channel::V2IScenario sc;
    sc.n_elements = 1;
    sc.d_sd = sc.d_se = 1.0;
    sc.tx_snr = 1.0;
    RngStream stream{31, 2};
    const long n = 500000;
    std::vector<double> samples(n);
    for (long i = 0; i < n; ++i)
        samples[i] = sample_v2i_snr_pair(sc, stream, i).first;
    // Rayleigh^2 with E = nu: exponential CDF 1 - exp(-x/nu)
    const double ks = ks_statistic(
        samples, [&](double x) { return -std::expm1(-x); });
    CHECK(ks < 0.003);
    channel::V2IScenario sc8 = sc;
    sc8.n_elements = 8;
    for (std::uint64_t i = 0; i < 500; ++i)
        CHECK(sample_v2i_snr_pair(sc, stream, i).second ==
              sample_v2i_snr_pair(sc8, stream, i).second);
}

TEST_CASE("sample_snr: law draws match the analytic CDFs") {
    RngStream stream{77, 0};
    const long n = 400000;
    const std::vector<stats::SnrDistribution> laws{
        stats::GammaSquare{stats::fit_gamma_square(4, 1.0, 1.0, 2.0)},
        stats::GammaV2I{3, 1.5},
        stats::RandomWalkExact{2, 1.0},
        stats::DoubleRayleigh{2.0},
    };
    for (size_t li = 0; li < laws.size(); ++li) {
        RngStream s{77, 100 + li};
        std::vector<double> samples(n);
        for (long i = 0; i < n; ++i) samples[i] = sample_snr(laws[li], s, i);
        const double ks = ks_statistic(
            samples, [&](double x) { return stats::eval_cdf(laws[li], x); });
        CHECK(ks < 0.0035);
    }
}

TEST_CASE("estimate_sop: certain outage and determinism across workers") {
    channel::V2VScenario sc;
    sc.n_elements = 2;
    RngStream stream{11, 0};
    const auto sure = estimate_sop(sc, channel::PhaseModel::Ideal,
                                   std::exp(25.0), 10000, stream);
    CHECK(sure.estimate == doctest::Approx(1.0).epsilon(1e-4));

    const auto one = estimate_sop(sc, channel::PhaseModel::UniformError,
                                  std::exp(0.5), 200000, stream, 1);
    const auto four = estimate_sop(sc, channel::PhaseModel::UniformError,
                                   std::exp(0.5), 200000, stream, 4);
    CHECK(one.estimate == four.estimate); // bit-identical
    const auto again = estimate_sop(sc, channel::PhaseModel::UniformError,
                                    std::exp(0.5), 200000, stream, 3);
    CHECK(one.estimate == again.estimate);
    CHECK(one.ci95_halfwidth ==
          doctest::Approx(1.96 * std::sqrt(one.estimate * (1 - one.estimate) /
                                           200000.0)));
    CHECK_THROWS_AS(
        estimate_sop(sc, channel::PhaseModel::Ideal, 1.0, 100, stream),
        std::domain_error);
}

TEST_CASE("estimate_sop_from_laws: CI calibration over repeated estimates") {
    // ~95% of the 95% CIs over 200 fixed-seed repetitions must cover the
    // semi-analytic value; binomial(200, 0.95) at 1% two-sided: [183, 197].
    const stats::SnrDistribution d = stats::GammaV2I{4, 12.0};
    const stats::SnrDistribution e = stats::DoubleRayleigh{3.0};
    const ris::secrecy::SecrecyTarget tgt(0.2);
    const double truth =
        ris::secrecy::sop_semianalytic(d, e, tgt).value;
    int covered = 0;
    for (int rep = 0; rep < 200; ++rep) {
        RngStream s{4242, static_cast<std::uint64_t>(rep)};
        const auto r = estimate_sop_from_laws(d, e, tgt.theta, 10000, s);
        if (std::fabs(r.estimate - truth) <= r.ci95_halfwidth) ++covered;
    }
    CHECK(covered >= 183);
    CHECK(covered <= 197);
}

TEST_CASE("empirical_pdf: flat histogram, mass accounting, errors") {
    RngStream stream{8, 0};
    const long n = 200000;
    std::vector<double> samples(n);
    for (long i = 0; i < n; ++i) {
        UniformSource u(stream, i);
        samples[i] = u.next_u01();
    }
    const auto h = empirical_pdf(samples, 20, 0.0, 1.0);
    CHECK(h.total_mass == doctest::Approx(1.0));
    for (double d : h.density) CHECK(std::fabs(d - 1.0) < 0.05);
    // density integrates to the covered mass
    const auto part = empirical_pdf(samples, 10, 0.0, 0.5);
    double mass = 0.0;
    for (size_t i = 0; i < part.density.size(); ++i)
        mass += part.density[i] * (part.edges[i + 1] - part.edges[i]);
    CHECK(mass == doctest::Approx(part.total_mass).epsilon(1e-12));
    CHECK(std::fabs(part.total_mass - 0.5) < 0.01);
    CHECK_THROWS_AS(empirical_pdf(samples, 5, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(empirical_pdf(samples, 20, 1.0, 1.0), std::domain_error);
}

TEST_CASE("empirical_pdf: GammaSquare histogram tracks the analytic density") {
    const stats::SnrDistribution law =
        stats::GammaSquare{stats::fit_gamma_square(8, 1.0, 1.0, 1.0)};
    RngStream stream{21, 0};
    const long n = 300000;
    std::vector<double> samples(n);
    for (long i = 0; i < n; ++i) samples[i] = sample_snr(law, stream, i);
    double hi = stats::mean(law);
    while (stats::eval_cdf(law, hi) < 0.999) hi *= 1.5;
    const auto h = empirical_pdf(samples, 40, 0.0, hi);
    for (size_t b = 0; b < h.density.size(); ++b) {
        const double x = 0.5 * (h.edges[b] + h.edges[b + 1]);
        CHECK(std::fabs(h.density[b] - stats::eval_pdf(law, x)) < 0.03);
    }
}
