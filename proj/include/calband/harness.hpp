#pragma once

// Run orchestration and persistence: traces, telemetry and metric CSVs, the
// JSON summary, seed sweeps, config validation reports and trace export.
//
// CSV dialect: comma separated, one header row, '.' decimal point, LF.

#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "calband/config.hpp"
#include "calband/forecaster.hpp"
#include "calband/metrics.hpp"

namespace calband {

enum class LogLevel { Quiet, Info, Debug };
/// From CALBAND_LOG (quiet | info | debug), default info. Read once.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

/// Forecaster-only run: one row per trial.
struct ForecasterTrace {
    std::size_t outcomes = 0;
    std::vector<std::size_t> sequence;
    std::vector<unsigned> r;
    std::vector<std::size_t> outcome;
    std::vector<std::size_t> index;
    std::vector<LatticePoint> point;
    std::vector<PeriodTelemetry> telemetry;

    std::size_t trials() const noexcept { return outcome.size(); }
};

/// Outcomes drawn i.i.d. from the study law on the Environment stream, the
/// forecaster on its Forecaster stream.
ForecasterTrace run_forecaster_study(const ForecasterStudy& study, const ForecasterOptions& options,
                                     std::uint64_t seed);

struct MetricsBundle {
    std::vector<std::size_t> checkpoints;
    std::vector<ConsistencyPoint> consistency;
    std::vector<Vector> joint_frequencies;  // per checkpoint
    std::vector<double> ce_distance;        // per checkpoint
    std::vector<std::pair<std::size_t, CalibrationRow>> calibration;  // (player, row)
    std::vector<double> aggregate_throughput;             // per checkpoint
    std::vector<std::vector<double>> player_throughput;   // per checkpoint, per player
};

MetricsBundle compute_metrics(const RunTrace& trace, const OracleTable& oracle,
                              const std::vector<std::size_t>& checkpoints);

// CSV writers. Numbers use %.17g so a trace read back reproduces the run.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_forecaster_trace_csv(std::ostream& out, const ForecasterTrace& trace);
void write_telemetry_csv(std::ostream& out, const std::vector<std::pair<std::size_t, PeriodTelemetry>>& rows);
void write_consistency_csv(std::ostream& out, const MetricsBundle& m, const RunTrace& trace);
void write_joint_frequencies_csv(std::ostream& out, const MetricsBundle& m, const RunTrace& trace);
void write_ce_distance_csv(std::ostream& out, const MetricsBundle& m);
void write_calibration_csv(std::ostream& out, const std::vector<std::pair<std::size_t, CalibrationRow>>& rows);
void write_throughput_csv(std::ostream& out, const MetricsBundle& m, const RunTrace& trace);

/// Inverse of write_trace_csv for the run described by cfg. Throws
/// Error{IoError} on a malformed file or one that does not match cfg.
RunTrace read_trace_csv(std::istream& in, const GameConfig& cfg);

struct RunSummary {
    std::string directory;
    std::string trace_sha256;
    std::vector<std::string> files;  // written, relative to directory
    std::vector<double> final_S;
    double final_ce_distance = 0.0;
    double final_throughput = 0.0;
    std::vector<std::size_t> checkpoints;
    std::vector<double> throughput;  // aggregate, per checkpoint
};

/// Runs cfg and writes trace.csv, telemetry.csv, the metric CSVs and
/// summary.json into out_dir (created if needed). A supplied oracle must match
/// cfg's radio, sample count and seed.
RunSummary run_to_directory(const RunConfig& cfg, const std::string& out_dir, const OracleTable* oracle = nullptr);

/// Recomputes the metric CSVs and summary.json of a game trace.
RunSummary export_metrics(const RunConfig& cfg, const std::string& trace_path, const std::string& out_dir);

struct SweepRow {
    std::string strategy;
    std::size_t horizon = 0;
    std::size_t runs = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 for a single run
};

struct SweepFailure {
    std::string strategy;
    std::uint64_t seed = 0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepFailure> failures;
    /// Final aggregate throughput per (strategy, seed) of successful runs.
    std::vector<std::tuple<std::string, std::uint64_t, double>> finals;
};

/// Runs every (strategy, seed) pair into out_dir/<strategy>/seed_<seed>, in
/// parallel, and writes out_dir/sweep_throughput.csv (mean and sd of the
/// aggregate throughput per strategy and checkpoint) and
/// out_dir/sweep_failures.csv. An empty strategy list keeps the config's own
/// assignment. Failed runs are listed, the others still aggregate.
SweepResult run_sweep(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                      const std::vector<std::string>& strategies, const std::string& out_dir,
                      unsigned threads = 0);

/// Label of a strategy assignment: the name when every player shares it,
/// else names joined by '+'.
std::string strategy_label(const std::vector<PlayerSpec>& strategies);

struct ValidationReport {
    std::string text;
    std::vector<std::string> warnings;
};

/// Desk-scale limits for validate warnings.
inline constexpr std::size_t kDeskOutcomeCap = 4096;
inline constexpr std::size_t kDeskProfileCap = tol::kDefaultProfileCap;

/// Schedule table, reward bound, lattice sizes and warnings. Throws
/// Error{ConfigInvalid}.
ValidationReport validate_report(const RunConfig& cfg);

/// Reference curves over geometric T up to the horizon: forecaster bound with
/// Gamma_D = D, regression rate (log T / T)^(p/(2p+d)) and expected per-profile
/// samples after the periods covering T.
void write_rate_curves_csv(std::ostream& out, const RunConfig& cfg, double smoothness, double dimension);

}  // namespace calband
