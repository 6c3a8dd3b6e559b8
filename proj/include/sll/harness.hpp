#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sll/config.hpp"
#include "sll/full_system.hpp"
#include "sll/stats.hpp"

namespace sll {

struct RunOptions {
    unsigned threads = 0;  ///< 0 means one per hardware thread
};

/// One verdict of an experiment. Non-gating checks are reported but do not
/// affect the overall pass flag.
struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    double se = 0.0;
    bool gating = true;
    std::string detail;
};

struct CsvTable {
    std::string filename;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
    Experiment experiment = Experiment::simulate;
    std::vector<Check> checks;
    std::vector<CsvTable> tables;
    nlohmann::json summary = nlohmann::json::object();
    /// Optional full-field snapshots (u at every step) for `simulate`.
    std::vector<InteriorField> snapshots;

    bool pass() const;
};

/// Initial state for a preset scaled by `scale`; v, delta and theta are zero.
FullState make_initial(InitialData kind, double scale, const Grid1D& grid);

/// u at x in (0, 1) by linear interpolation between nodes; the end
/// intervals use the boundary-cell value.
double probe_value(std::span<const double> u, double x, const Grid1D& grid);

struct ConvergenceRow {
    double eps = 0.0;
    MeanSe err_u;
    MeanSe err_delta;
};

struct ConvergenceReport {
    double alpha = 0.0;
    std::string limit;  ///< "parabolic" or "wave"
    std::vector<ConvergenceRow> rows;
    std::optional<LineFit> fit;  ///< absent for a ladder of length 1
    bool strictly_decreasing = false;
    double threshold = 0.0;
    bool pass = false;
};

/// Minimum accepted log-log slope: 0.8 alpha - 0.05 below alpha = 1, 0.8 above.
double slope_threshold(double alpha);

/// Space-time L2(0,T;L2) distances between the eps-system and its limit for
/// every eps of the ladder, on shared noise, with a log-log fit.
ConvergenceReport run_convergence(const ExperimentConfig& cfg, const RunOptions& opts = {});

ExperimentResult run_energy_audit(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_ou_check(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_split_check(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_bound_check(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_simulate(const ExperimentConfig& cfg, const RunOptions& opts = {});
ExperimentResult run_converge(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Dispatches on cfg.experiment (which must be set).
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// CSV text with a header row; numbers in shortest round-trip form.
std::string format_csv(const CsvTable& table);

/// report.json content. `timestamp` is the only field that varies between
/// identical runs.
nlohmann::json make_report(const ExperimentResult& result, const ExperimentConfig& cfg,
                           const std::string& timestamp);

/// Writes every CSV table, the snapshots (if any) and report.json into dir,
/// creating it if needed.
void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::string& dir, const std::string& timestamp);

/// Flat binary snapshot file: 16-byte header ("SLL1", uint32 n_interior,
/// uint64 count), then count * n_interior little-endian doubles.
void write_snapshots(const std::string& path, const std::vector<InteriorField>& fields,
                     std::size_t n_interior);
std::vector<InteriorField> read_snapshots(const std::string& path);

}  // namespace sll
