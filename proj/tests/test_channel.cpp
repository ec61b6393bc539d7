#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ris/channel.hpp"

using namespace ris::channel;

TEST_CASE("mean_snr_v2v_main: unit distances pass tx_snr through") {
    V2VScenario sc;
    sc.d_sr = sc.d_rd = 1.0;
    sc.tx_snr = 7.0;
    CHECK(mean_snr_v2v_main(sc) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("mean_snr_v2v_main: canonical 20 m hops at p1 = 2.1") {
    V2VScenario sc;
    sc.d_sr = sc.d_rd = 20.0;
    sc.p1 = 2.1;
    sc.tx_snr = 1e8;
    const double expect = 1e8 * std::exp(-4.2 * std::log(20.0));
    CHECK(mean_snr_v2v_main(sc) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mean_snr_v2v_main: doubling both hops scales by 2^{-2 p1}") {
    V2VScenario a, b;
    a.d_sr = a.d_rd = 15.0;
    b.d_sr = b.d_rd = 30.0;
    const double ratio = mean_snr_v2v_main(b) / mean_snr_v2v_main(a);
    CHECK(ratio == doctest::Approx(std::pow(2.0, -4.2)).epsilon(1e-12));
}

TEST_CASE("mean_snr_v2v_main: symmetric in the two hop distances") {
    V2VScenario a, b;
    a.d_sr = 11.0;
    a.d_rd = 31.0;
    b.d_sr = 31.0;
    b.d_rd = 11.0;
    CHECK(mean_snr_v2v_main(a) == mean_snr_v2v_main(b));
}

TEST_CASE("mean_snr_eve") {
    CHECK(mean_snr_eve(1.0, 2.3, 42.0) == doctest::Approx(42.0).epsilon(1e-15));
    CHECK(mean_snr_eve(10.0, 2.3, 1e8) ==
          doctest::Approx(1e8 * std::pow(10.0, -2.3)).epsilon(1e-13));
}

TEST_CASE("mean_snr_v2i_main") {
    V2IScenario sc;
    sc.d_sd = 1.0;
    sc.tx_snr = 3.5;
    CHECK(mean_snr_v2i_main(sc) == doctest::Approx(3.5).epsilon(1e-15));
    sc.d_sd = 50.0;
    sc.p1 = 2.1;
    sc.tx_snr = 1e6;
    CHECK(mean_snr_v2i_main(sc) ==
          doctest::Approx(1e6 * std::pow(50.0, -2.1)).epsilon(1e-12));
    V2IScenario twice = sc;
    twice.d_sd = 100.0;
    CHECK(mean_snr_v2i_main(twice) / mean_snr_v2i_main(sc) ==
          doctest::Approx(std::pow(2.0, -2.1)).epsilon(1e-12));
}

TEST_CASE("mean SNRs: monotone in tx_snr and in each distance") {
    V2VScenario sc;
    for (double tx : {1.0, 10.0, 1e4}) {
        V2VScenario hi = sc;
        hi.tx_snr = tx * 2.0;
        V2VScenario lo = sc;
        lo.tx_snr = tx;
        CHECK(mean_snr_v2v_main(hi) > mean_snr_v2v_main(lo));
    }
    for (double d : {5.0, 20.0, 80.0}) {
        V2VScenario nearer = sc, farther = sc;
        nearer.d_sr = d;
        farther.d_sr = d * 1.5;
        CHECK(mean_snr_v2v_main(nearer) > mean_snr_v2v_main(farther));
        CHECK(mean_snr_eve(d, 2.3, 1e6) > mean_snr_eve(d * 1.5, 2.3, 1e6));
    }
}

TEST_CASE("scenario validation") {
    V2VScenario sc;
    sc.d_sr = 0.0;
    CHECK_THROWS_AS(mean_snr_v2v_main(sc), std::domain_error);
    V2VScenario sc2;
    sc2.n_elements = 0;
    CHECK_THROWS_AS(mean_snr_v2v_main(sc2), std::domain_error);
    V2IScenario sc3;
    sc3.nu_sd = -1.0;
    CHECK_THROWS_AS(mean_snr_v2i_main(sc3), std::domain_error);
}
