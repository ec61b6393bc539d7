// Physical-channel Monte Carlo and analytic-law sampling on a counter-based
// generator, so estimates are reproducible for any worker partition.

#include "ris/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ris::mc {

// ---------------------------------------------------------------------------
// Philox 4x64-10
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

} // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kW0;
        k1 += kW1;
    }
    return c;
}

void UniformSource::refill() {
    buf_ = philox4x64({index_, block_++, 0, 0}, key_);
    pos_ = 0;
}

double UniformSource::next_u01() {
    if (pos_ == 4) refill();
    const std::uint64_t bits = buf_[pos_++];
    // 53-bit mantissa, offset by half an ulp: strictly inside (0, 1)
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double UniformSource::next_rayleigh(double nu) {
    return std::sqrt(-nu * std::log(next_u01()));
}

double UniformSource::next_phase() { return 2.0 * M_PI * next_u01(); }

double UniformSource::next_normal() {
    if (have_normal_) {
        have_normal_ = false;
        return cached_normal_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_u01()));
    const double t = next_phase();
    cached_normal_ = r * std::sin(t);
    have_normal_ = true;
    return r * std::cos(t);
}

double McResult::ci_halfwidth(double z) const {
    if (n_samples <= 0) return 0.0;
    const double p = estimate;
    return z * std::sqrt(std::max(p * (1.0 - p), 0.0) / n_samples);
}

// ---------------------------------------------------------------------------
// Channel draws
// ---------------------------------------------------------------------------

// Slot layout (fixed; the eavesdropper draws come first so gamma_E for a given
// (stream, index) does not depend on N or the phase model):
//   V2V: u0, u1 -> eavesdropper Rayleigh pair; per element: alpha, beta, sigma
//        (sigma consumed also under Ideal to keep alpha/beta aligned).
//   V2I: u0, u1 -> eavesdropper; per element: alpha.

namespace {

double eve_snr_draw(UniformSource& u, double gbar_e) {
    const double r1 = u.next_rayleigh(1.0);
    const double r2 = u.next_rayleigh(1.0);
    return gbar_e * (r1 * r2) * (r1 * r2);
}

} // namespace

std::pair<double, double> sample_v2v_snr_pair(const channel::V2VScenario& sc,
                                              channel::PhaseModel phase,
                                              const RngStream& rng,
                                              std::uint64_t draw_index) {
    UniformSource u(rng, draw_index);
    const double ge = eve_snr_draw(
        u, channel::mean_snr_eve(sc.d_se, sc.p2, sc.tx_snr));
    const double gbar_d = channel::mean_snr_v2v_main(sc);
    double re = 0.0, im = 0.0;
    for (int n = 0; n < sc.n_elements; ++n) {
        const double a = u.next_rayleigh(sc.nu_sr) * u.next_rayleigh(sc.nu_rd);
        const double sigma = u.next_phase();
        if (phase == channel::PhaseModel::Ideal) {
            re += a;
        } else {
            re += a * std::cos(sigma);
            im += a * std::sin(sigma);
        }
    }
    const double gd = gbar_d * (re * re + im * im);
    return {gd, ge};
}

std::pair<double, double> sample_v2i_snr_pair(const channel::V2IScenario& sc,
                                              const RngStream& rng,
                                              std::uint64_t draw_index) {
    UniformSource u(rng, draw_index);
    const double ge = eve_snr_draw(
        u, channel::mean_snr_eve(sc.d_se, sc.p2, sc.tx_snr));
    const double gbar_d = channel::mean_snr_v2i_main(sc);
    double sum = 0.0;
    for (int n = 0; n < sc.n_elements; ++n) sum += u.next_rayleigh(sc.nu_sd);
    return {gbar_d * sum * sum, ge};
}

// ---------------------------------------------------------------------------
// Analytic-law draws
// ---------------------------------------------------------------------------

namespace {

// Marsaglia-Tsang; valid for shape >= 1 (every law here satisfies that).
double gamma_draw(UniformSource& u, double shape, double scale) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double xn, v;
        do {
            xn = u.next_normal();
            v = 1.0 + c * xn;
        } while (v <= 0.0);
        v = v * v * v;
        const double uu = u.next_u01();
        if (uu < 1.0 - 0.0331 * xn * xn * xn * xn) return d * v * scale;
        if (std::log(uu) < 0.5 * xn * xn + d * (1.0 - v + std::log(v)))
            return d * v * scale;
    }
}

double law_draw(const stats::SnrDistribution& dist, UniformSource& u) {
    return std::visit(
        [&u](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, stats::GammaSquare>) {
                const double z = gamma_draw(u, d.shape, d.scale);
                return z * z;
            } else if constexpr (std::is_same_v<T, stats::RandomWalkExact>) {
                // physical construction of the exact law: N double-Rayleigh
                // steps with uniform directions, unit mean-SNR scale
                const double nu = std::sqrt(d.scale);
                double re = 0.0, im = 0.0;
                for (int n = 0; n < d.n_elements; ++n) {
                    const double a = u.next_rayleigh(nu) * u.next_rayleigh(nu);
                    const double sigma = u.next_phase();
                    re += a * std::cos(sigma);
                    im += a * std::sin(sigma);
                }
                return re * re + im * im;
            } else if constexpr (std::is_same_v<T, stats::GammaV2I>) {
                return gamma_draw(u, static_cast<double>(d.n_elements), d.scale);
            } else {
                const double r1 = u.next_rayleigh(1.0);
                const double r2 = u.next_rayleigh(1.0);
                return d.mean_snr * (r1 * r2) * (r1 * r2);
            }
        },
        dist);
}

} // namespace

double sample_snr(const stats::SnrDistribution& dist, const RngStream& rng,
                  std::uint64_t draw_index) {
    UniformSource u(rng, draw_index);
    return law_draw(dist, u);
}

std::pair<double, double> sample_snr_pair_from_laws(
    const stats::SnrDistribution& dist_d, const stats::SnrDistribution& dist_e,
    const RngStream& rng, std::uint64_t draw_index) {
    UniformSource u(rng, draw_index);
    const double ge = law_draw(dist_e, u); // eavesdropper first, as above
    const double gd = law_draw(dist_d, u);
    return {gd, ge};
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

namespace {

McResult count_outage(
    long n, const RngStream& rng, int n_workers,
    const std::function<std::pair<double, double>(std::uint64_t)>& draw,
    double theta) {
    if (n < 10000) throw std::domain_error("estimate_sop: n must be >= 1e4");
    n_workers = std::max(1, n_workers);
    std::vector<long> counts(n_workers, 0);
    auto work = [&](int w) {
        const long lo = n * static_cast<long>(w) / n_workers;
        const long hi = n * static_cast<long>(w + 1) / n_workers;
        long c = 0;
        for (long i = lo; i < hi; ++i) {
            const auto [gd, ge] = draw(static_cast<std::uint64_t>(i));
            if (gd <= theta * ge + theta - 1.0) ++c;
        }
        counts[w] = c;
    };
    if (n_workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    long total = 0;
    for (long c : counts) total += c;
    McResult r;
    r.estimate = static_cast<double>(total) / static_cast<double>(n);
    r.n_samples = n;
    r.seed = rng;
    r.ci95_halfwidth = r.ci_halfwidth(1.96);
    return r;
}

} // namespace

McResult estimate_sop(const channel::V2VScenario& sc, channel::PhaseModel phase,
                      double theta, long n, const RngStream& rng,
                      int n_workers) {
    sc.validate();
    return count_outage(
        n, rng, n_workers,
        [&](std::uint64_t i) { return sample_v2v_snr_pair(sc, phase, rng, i); },
        theta);
}

McResult estimate_sop(const channel::V2IScenario& sc, double theta, long n,
                      const RngStream& rng, int n_workers) {
    sc.validate();
    return count_outage(
        n, rng, n_workers,
        [&](std::uint64_t i) { return sample_v2i_snr_pair(sc, rng, i); }, theta);
}

McResult estimate_sop_from_laws(const stats::SnrDistribution& dist_d,
                                const stats::SnrDistribution& dist_e,
                                double theta, long n, const RngStream& rng,
                                int n_workers) {
    return count_outage(
        n, rng, n_workers,
        [&](std::uint64_t i) {
            return sample_snr_pair_from_laws(dist_d, dist_e, rng, i);
        },
        theta);
}

// ---------------------------------------------------------------------------
// Empirical summaries
// ---------------------------------------------------------------------------

Histogram empirical_pdf(std::span<const double> samples, int n_bins, double lo,
                        double hi) {
    if (n_bins < 10) throw std::domain_error("empirical_pdf: n_bins must be >= 10");
    if (!(hi > lo)) throw std::domain_error("empirical_pdf: empty range");
    if (samples.empty()) throw std::domain_error("empirical_pdf: no samples");
    Histogram h;
    h.edges.resize(n_bins + 1);
    h.density.assign(n_bins, 0.0);
    const double w = (hi - lo) / n_bins;
    for (int i = 0; i <= n_bins; ++i) h.edges[i] = lo + w * i;
    long inside = 0;
    for (double x : samples) {
        if (x < lo || x >= hi) continue;
        const int b = std::min(static_cast<int>((x - lo) / w), n_bins - 1);
        h.density[b] += 1.0;
        ++inside;
    }
    const double norm = 1.0 / (static_cast<double>(samples.size()) * w);
    for (double& d : h.density) d *= norm;
    h.total_mass = static_cast<double>(inside) / static_cast<double>(samples.size());
    return h;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::domain_error("ks_statistic: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace ris::mc
