#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ris/channel.hpp"
#include "ris/secrecy.hpp"

namespace ris::experiment {

inline constexpr const char* kVersion = "0.1.0";

// One JSON document describes an experiment; SNRs are in dB here and converted
// to linear exactly once at load.
struct ExperimentConfig {
    std::string scenario = "v2v"; // "v2v" | "v2i"
    std::vector<int> n_list;
    std::vector<double> tx_snr_db;
    std::vector<double> rs_list; // nats
    std::string phase_model = "ideal"; // "ideal" | "uniform_error" | "both"
    std::vector<std::string> methods = {"closed", "semianalytic", "mc"};
    long mc_samples = 100000;
    std::uint64_t seed = 1;

    // geometry / variances; defaults are the documented canonical scenarios
    double d_sr = 20.0, d_rd = 20.0, d_se = 10.0, d_sd = 50.0;
    double p1 = 2.1, p2 = 2.3;
    double nu_sr = 1.0, nu_rd = 1.0, nu_sd = 1.0;

    void validate() const; // throws config_error

    channel::V2VScenario make_v2v(int n, double tx_linear) const;
    channel::V2IScenario make_v2i(int n, double tx_linear) const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

double db_to_linear(double db);

struct SweepRow {
    int n = 0;
    double tx_snr_db = 0.0;
    double rs = 0.0;
    std::string method; // e.g. "closed:ideal", "mc:uniform_error", "closed"
    double sop = 0.0;
    double uncertainty = 0.0;
    std::string status; // "ok" or the error that hit this cell
};

struct GateResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

std::vector<SweepRow> run_sop_sweep(const ExperimentConfig& cfg, int jobs);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Closed-form hook so the cross-validation harness can be pointed at a
// deliberately corrupted lemma (sentinel test).
using ClosedFormFn = std::function<secrecy::SopEstimate(
    const std::string& lemma, const ExperimentConfig& cfg, int n,
    double tx_linear, double rs)>;

struct CrossValidationReport {
    std::vector<GateResult> gates;
    std::string csv;
    bool pass = true;
};

CrossValidationReport run_cross_validate(
    const ExperimentConfig& cfg, int jobs,
    const ClosedFormFn* closed_override = nullptr);

struct StatsVerifyReport {
    std::vector<GateResult> gates;
    // one CSV (x, analytic_pdf, empirical_pdf) per proposition and N
    std::vector<std::pair<std::string, std::string>> csv_files;
    bool pass = true;
};

StatsVerifyReport run_stats_verify(const ExperimentConfig& cfg, int jobs);

// Command entry points: run, write CSV + report.json under out_dir, print one
// line per gate; exit code 0 iff all gates pass.
int cmd_sop_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                  int jobs);
int cmd_stats_verify(const ExperimentConfig& cfg, const std::string& out_dir,
                     int jobs);
int cmd_cross_validate(const ExperimentConfig& cfg, const std::string& out_dir,
                       int jobs, const ClosedFormFn* closed_override = nullptr);

} // namespace ris::experiment
