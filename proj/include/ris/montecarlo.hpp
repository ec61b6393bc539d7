#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ris/channel.hpp"
#include "ris/statistics.hpp"

namespace ris::mc {

// Counter-based stream handle: identical (seed, stream_id) reproduce the same
// sample sequence; distinct stream_ids are statistically independent.  seed is
// the Philox key, (stream_id, draw index) address the counter space.
struct RngStream {
    std::uint64_t seed = 1;
    std::uint64_t stream_id = 0;
};

// Philox 4x64, 10 rounds (Salmon et al. counter-based generator).
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Uniform draws for one (stream, draw-index) cell.  Consumption order is part
// of the determinism contract: samplers use fixed slot layouts.
class UniformSource {
public:
    UniformSource(const RngStream& rng, std::uint64_t draw_index)
        : key_{rng.seed, rng.stream_id}, index_(draw_index) {}

    double next_u01();      // strictly inside (0, 1)
    double next_rayleigh(double nu); // E[r^2] = nu, inverse transform
    double next_phase();    // uniform on [0, 2 pi)
    double next_normal();   // standard normal (Box-Muller pair, cached)

private:
    void refill();
    std::array<std::uint64_t, 2> key_;
    std::uint64_t index_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
    double cached_normal_ = 0.0;
    bool have_normal_ = false;
};

struct McResult {
    double estimate = 0.0;
    double ci95_halfwidth = 0.0; // 1.96 sqrt(p(1-p)/n)
    long n_samples = 0;
    RngStream seed;
    double ci_halfwidth(double z) const; // same half-width at another z
};

// Physical-channel draws (Rayleigh amplitudes, explicit phase model).
std::pair<double, double> sample_v2v_snr_pair(const channel::V2VScenario& sc,
                                              channel::PhaseModel phase,
                                              const RngStream& rng,
                                              std::uint64_t draw_index);
std::pair<double, double> sample_v2i_snr_pair(const channel::V2IScenario& sc,
                                              const RngStream& rng,
                                              std::uint64_t draw_index);

// Draw from an analytic SNR law (used to cross-validate the closed forms
// at the distribution level).
double sample_snr(const stats::SnrDistribution& dist, const RngStream& rng,
                  std::uint64_t draw_index);
std::pair<double, double> sample_snr_pair_from_laws(
    const stats::SnrDistribution& dist_d, const stats::SnrDistribution& dist_e,
    const RngStream& rng, std::uint64_t draw_index);

// Outage-fraction estimators.  Results are bit-identical for any n_workers
// (each draw is addressed by its global index; counts are summed).
McResult estimate_sop(const channel::V2VScenario& sc, channel::PhaseModel phase,
                      double theta, long n, const RngStream& rng,
                      int n_workers = 1);
McResult estimate_sop(const channel::V2IScenario& sc, double theta, long n,
                      const RngStream& rng, int n_workers = 1);
McResult estimate_sop_from_laws(const stats::SnrDistribution& dist_d,
                                const stats::SnrDistribution& dist_e,
                                double theta, long n, const RngStream& rng,
                                int n_workers = 1);

// Density-normalized histogram.
struct Histogram {
    std::vector<double> edges;   // n_bins + 1
    std::vector<double> density; // n_bins
    double total_mass = 0.0;     // fraction of samples inside [lo, hi]
};
Histogram empirical_pdf(std::span<const double> samples, int n_bins, double lo,
                        double hi);

// Kolmogorov-Smirnov statistic (sup distance) against an analytic CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

} // namespace ris::mc
