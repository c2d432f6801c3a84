#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "itojump/config.hpp"

namespace itojump {

/// Sup is taken over grid points and jump times: a lower bound of the
/// continuous-time supremum, since the error path between events is never
/// observed.
inline constexpr const char* kEstimatorNote =
    "sup taken over grid points and jump times, a lower bound of the continuous-time sup";

struct LevelError {
    int level = 0;
    double delta = 0.0;
    double mean_sup_sq_error = 0.0;   // E sup |Y - Y^delta|^2
    double std_err = 0.0;
    double mean_sup_sq_solution = 0.0;  // E sup_grid |Y^delta|^2
    double solution_std_err = 0.0;
    std::size_t paths = 0;
};

/// Least-squares slope of scale * log(mean) against log(x), with a 95% normal
/// interval from the delta method over the paired per-path samples.
struct SlopeFit {
    double slope = 0.0;
    double std_err = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<std::size_t> used;  // indices of the points entering the fit
    bool excluded_coarsest = false;
};

/// samples[i][m] is the observation of point i on path m.
SlopeFit fit_log_slope(std::span<const double> x, const std::vector<std::vector<double>>& samples,
                       double scale, std::span<const std::size_t> use);

struct ConvergenceReport {
    Scheme scheme = Scheme::euler;
    std::vector<LevelError> levels;
    SlopeFit fit;  // slope of the RMS error against delta
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    std::string config_hash;
    int perturbed_jumps = 0;
};

/// Runs every path: one driving path at the finest level, the oracle and each
/// ladder level on it, sup^2 error over grid and jump times. The coarsest
/// level leaves the fit when its error is within 2 standard errors of the next
/// level's (paired difference).
ConvergenceReport strong_error_study(const StudyConfig& cfg);

struct TruncationRow {
    double epsilon = 0.0;
    double l_eps = 0.0;  // int_{B_eps} p^2 dnu
    double mean_sup_sq_diff = 0.0;
    double std_err = 0.0;
    std::size_t paths = 0;
};

struct TruncationReport {
    double reference_epsilon = 0.0;
    int level = 0;
    Scheme scheme = Scheme::euler;
    std::vector<TruncationRow> rows;
    SlopeFit fit;  // slope of log E sup^2 difference against log eps
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    std::string config_hash;
};

/// Scheme at each eps against the scheme at the reference eps0 on coupled
/// paths: small jumps are simulated once on D_eps0 and thinned to |x| >= eps,
/// tail jumps and W are shared, compensators use each disc's own m1.
TruncationReport truncation_study(const StudyConfig& cfg);

struct SimulationResult {
    DrivingPath path;
    std::vector<double> times;
    std::vector<double> scheme_values;
    std::vector<double> oracle_values;
};

/// One path (index `path_index` of the master seed) at the finest ladder level.
SimulationResult simulate_one(const StudyConfig& cfg, std::size_t path_index = 0);

/// Runs body(i) for i in [0, n) on `threads` workers (0: hardware concurrency).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

void write_errors_csv(const ConvergenceReport& report, std::ostream& out);
nlohmann::json report_json(const ConvergenceReport& report);
void write_truncation_csv(const TruncationReport& report, std::ostream& out);
nlohmann::json truncation_json(const TruncationReport& report);
/// Columns: time,y_scheme,y_oracle.
void write_simulation_csv(const SimulationResult& result, std::ostream& out);

}  // namespace itojump
