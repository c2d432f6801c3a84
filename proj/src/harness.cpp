#include "itojump/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace itojump {

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double covariance_of_means(const std::vector<double>& a, const std::vector<double>& b, double ma,
                           double mb) {
    const double n = static_cast<double>(a.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / (n - 1.0) / n;
}

void put_number(std::ostream& out, double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, r.ptr - buf);
}

// Reference values along one trajectory's sample times.
class Reference {
public:
    Reference(const StudyConfig& cfg, const DrivingPath& path, const LinearCoefficients& coef)
        : path_(path) {
        if (cfg.oracle.kind == OracleConfig::Kind::exact_linear) {
            exact_ = exact_on_events(path, coef, cfg.y0);
        } else {
            fine_ = run_scheme(Scheme::milstein, dyadic_grid(cfg.horizon, cfg.oracle.level), path,
                               coef, cfg.y0, Sampling::grid_and_jumps);
        }
    }

    double at(double t) const {
        if (!exact_.empty()) return exact_[path_.event_index(t)];
        auto it = std::lower_bound(fine_.times.begin(), fine_.times.end(), t);
        return fine_.values[static_cast<std::size_t>(it - fine_.times.begin())];
    }

private:
    const DrivingPath& path_;
    std::vector<double> exact_;
    Trajectory fine_;
};

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

SlopeFit fit_log_slope(std::span<const double> x, const std::vector<std::vector<double>>& samples,
                       double scale, std::span<const std::size_t> use) {
    if (use.size() < 2) throw std::domain_error("slope fit needs at least two points");
    std::vector<double> lx, ly, means;
    for (auto i : use) {
        const double m = mean_se(samples[i]).mean;
        if (!(m > 0.0) || !(x[i] > 0.0)) throw std::domain_error("log-log fit needs positive values");
        lx.push_back(std::log(x[i]));
        ly.push_back(scale * std::log(m));
        means.push_back(m);
    }
    const double n = static_cast<double>(lx.size());
    const double x_bar = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double y_bar = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - x_bar) * (lx[k] - x_bar);
        sxy += (lx[k] - x_bar) * (ly[k] - y_bar);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    // Delta method: d(scale log m)/dm = scale / m; levels share paths, so
    // the full covariance enters.
    double var = 0.0;
    for (std::size_t a = 0; a < lx.size(); ++a) {
        for (std::size_t b = 0; b < lx.size(); ++b) {
            const double wa = (lx[a] - x_bar) / sxx;
            const double wb = (lx[b] - x_bar) / sxx;
            const double cov = covariance_of_means(samples[use[a]], samples[use[b]], means[a], means[b]);
            var += wa * wb * scale * scale * cov / (means[a] * means[b]);
        }
    }
    fit.std_err = std::sqrt(std::max(var, 0.0));
    fit.ci_low = fit.slope - 1.96 * fit.std_err;
    fit.ci_high = fit.slope + 1.96 * fit.std_err;
    fit.used.assign(use.begin(), use.end());
    return fit;
}

ConvergenceReport strong_error_study(const StudyConfig& cfg) {
    cfg.validate();
    const ActiveModel active = cfg.active_model();
    const LinearCoefficients coef = cfg.coefficients(active);
    const std::size_t n_levels = cfg.levels.size();
    std::vector<std::vector<double>> grids;
    for (int level : cfg.levels) grids.push_back(dyadic_grid(cfg.horizon, level));

    std::vector<std::vector<double>> errors(n_levels, std::vector<double>(cfg.paths));
    std::vector<std::vector<double>> solutions(n_levels, std::vector<double>(cfg.paths));
    std::vector<int> perturbed(cfg.paths, 0);

    parallel_for(cfg.paths, cfg.threads, [&](std::size_t m) {
        Rng rng = path_rng(cfg.seed, m);
        const DrivingPath path = build_path(cfg.horizon, cfg.finest_level, active, rng);
        perturbed[m] = path.perturbed_jumps();
        const Reference reference(cfg, path, coef);
        for (std::size_t l = 0; l < n_levels; ++l) {
            const auto traj = run_scheme(cfg.scheme, grids[l], path, coef, cfg.y0,
                                         Sampling::grid_and_jumps, {}, cfg.term_form);
            double sup_err = 0.0, sup_sol = 0.0;
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const double e = traj.values[i] - reference.at(traj.times[i]);
                sup_err = std::max(sup_err, e * e);
                if (std::binary_search(grids[l].begin(), grids[l].end(), traj.times[i])) {
                    sup_sol = std::max(sup_sol, traj.values[i] * traj.values[i]);
                }
            }
            errors[l][m] = sup_err;
            solutions[l][m] = sup_sol;
        }
    });

    ConvergenceReport report;
    report.scheme = cfg.scheme;
    report.seed = cfg.seed;
    report.paths = cfg.paths;
    report.config_hash = cfg.config_hash;
    report.perturbed_jumps = std::accumulate(perturbed.begin(), perturbed.end(), 0);
    std::vector<double> deltas;
    for (std::size_t l = 0; l < n_levels; ++l) {
        LevelError row;
        row.level = cfg.levels[l];
        row.delta = grids[l][1] - grids[l][0];
        const auto err = mean_se(errors[l]);
        const auto sol = mean_se(solutions[l]);
        row.mean_sup_sq_error = err.mean;
        row.std_err = err.se;
        row.mean_sup_sq_solution = sol.mean;
        row.solution_std_err = sol.se;
        row.paths = cfg.paths;
        report.levels.push_back(row);
        deltas.push_back(row.delta);
    }

    if (n_levels >= 2) {
        std::vector<std::size_t> use(n_levels);
        std::iota(use.begin(), use.end(), 0);
        bool excluded = false;
        if (n_levels >= 3) {
            std::vector<double> diff(cfg.paths);
            for (std::size_t m = 0; m < cfg.paths; ++m) diff[m] = errors[0][m] - errors[1][m];
            const auto d = mean_se(diff);
            if (std::abs(d.mean) <= 2.0 * d.se) {
                use.erase(use.begin());
                excluded = true;
            }
        }
        report.fit = fit_log_slope(deltas, errors, 0.5, use);
        report.fit.excluded_coarsest = excluded;
    }
    return report;
}

TruncationReport truncation_study(const StudyConfig& cfg) {
    cfg.validate_truncation();
    const auto& eps = cfg.truncation.epsilons;
    const double eps0 =
        cfg.truncation.reference_epsilon.value_or(*std::min_element(eps.begin(), eps.end()) / 4.0);
    const ActiveModel reference_model(truncate(cfg.model, eps0));
    const LinearCoefficients reference_coef = cfg.coefficients(reference_model);

    std::vector<LinearCoefficients> coefs;
    std::vector<double> l_eps;
    for (double e : eps) {
        const TruncatedModel t = truncate(cfg.model, e);
        coefs.push_back(cfg.coefficients(ActiveModel(t)));
        l_eps.push_back(t.residual_l_eps());
    }
    const auto grid = dyadic_grid(cfg.horizon, cfg.truncation.level);

    std::vector<std::vector<double>> diffs(eps.size(), std::vector<double>(cfg.paths));
    parallel_for(cfg.paths, cfg.threads, [&](std::size_t m) {
        Rng rng = path_rng(cfg.seed, m);
        const DrivingPath path = build_path(cfg.horizon, cfg.truncation.level, reference_model, rng);
        const auto ref = run_scheme(cfg.scheme, grid, path, reference_coef, cfg.y0,
                                    Sampling::grid_and_jumps, {}, cfg.term_form);
        for (std::size_t k = 0; k < eps.size(); ++k) {
            const auto traj = run_scheme(cfg.scheme, grid, path, coefs[k], cfg.y0,
                                         Sampling::grid_and_jumps, JumpFilter{eps[k]}, cfg.term_form);
            double sup = 0.0;
            for (std::size_t i = 0; i < traj.values.size(); ++i) {
                const double d = traj.values[i] - ref.values[i];
                sup = std::max(sup, d * d);
            }
            diffs[k][m] = sup;
        }
    });

    TruncationReport report;
    report.reference_epsilon = eps0;
    report.level = cfg.truncation.level;
    report.scheme = cfg.scheme;
    report.seed = cfg.seed;
    report.paths = cfg.paths;
    report.config_hash = cfg.config_hash;
    std::vector<std::size_t> use;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const auto s = mean_se(diffs[k]);
        report.rows.push_back({eps[k], l_eps[k], s.mean, s.se, cfg.paths});
        if (s.mean > 0.0) use.push_back(k);
    }
    if (use.size() >= 2) report.fit = fit_log_slope(eps, diffs, 1.0, use);
    return report;
}

SimulationResult simulate_one(const StudyConfig& cfg, std::size_t path_index) {
    cfg.validate();
    const ActiveModel active = cfg.active_model();
    const LinearCoefficients coef = cfg.coefficients(active);
    Rng rng = path_rng(cfg.seed, path_index);
    DrivingPath path = build_path(cfg.horizon, cfg.finest_level, active, rng);
    const auto grid = dyadic_grid(cfg.horizon, cfg.levels.back());
    auto traj = run_scheme(cfg.scheme, grid, path, coef, cfg.y0, Sampling::grid_and_jumps, {},
                           cfg.term_form);
    std::vector<double> oracle;
    if (cfg.oracle.kind == OracleConfig::Kind::exact_linear) {
        oracle = exact_solution(path, traj.times, coef, cfg.y0);
    } else {
        oracle = fine_reference(path, traj.times, coef, cfg.y0, cfg.oracle.level, cfg.levels.back());
    }
    return {std::move(path), std::move(traj.times), std::move(traj.values), std::move(oracle)};
}

void write_errors_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "delta,mean_sup_sq_error,std_err,paths\n";
    for (const auto& row : report.levels) {
        put_number(out, row.delta);
        out << ',';
        put_number(out, row.mean_sup_sq_error);
        out << ',';
        put_number(out, row.std_err);
        out << ',' << row.paths << '\n';
    }
}

namespace {

nlohmann::json fit_json(const SlopeFit& fit) {
    return {{"slope", fit.slope},
            {"std_err", fit.std_err},
            {"ci95", {fit.ci_low, fit.ci_high}},
            {"points_used", fit.used},
            {"excluded_coarsest", fit.excluded_coarsest}};
}

}  // namespace

nlohmann::json report_json(const ConvergenceReport& report) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& row : report.levels) {
        levels.push_back({{"level", row.level},
                          {"delta", row.delta},
                          {"mean_sup_sq_error", row.mean_sup_sq_error},
                          {"std_err", row.std_err},
                          {"mean_sup_sq_solution", row.mean_sup_sq_solution},
                          {"solution_std_err", row.solution_std_err}});
    }
    return {{"scheme", scheme_name(report.scheme)},
            {"target_order", scheme_order(report.scheme).value()},
            {"fit", fit_json(report.fit)},
            {"levels", levels},
            {"seed", report.seed},
            {"paths", report.paths},
            {"config_hash", report.config_hash},
            {"perturbed_jumps", report.perturbed_jumps},
            {"estimator", kEstimatorNote}};
}

void write_truncation_csv(const TruncationReport& report, std::ostream& out) {
    out << "epsilon,l_eps,mean_sup_sq_diff,std_err,paths\n";
    for (const auto& row : report.rows) {
        put_number(out, row.epsilon);
        out << ',';
        put_number(out, row.l_eps);
        out << ',';
        put_number(out, row.mean_sup_sq_diff);
        out << ',';
        put_number(out, row.std_err);
        out << ',' << row.paths << '\n';
    }
}

nlohmann::json truncation_json(const TruncationReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"epsilon", row.epsilon},
                        {"l_eps", row.l_eps},
                        {"mean_sup_sq_diff", row.mean_sup_sq_diff},
                        {"std_err", row.std_err}});
    }
    return {{"scheme", scheme_name(report.scheme)},
            {"reference_epsilon", report.reference_epsilon},
            {"level", report.level},
            {"fit", fit_json(report.fit)},
            {"rows", rows},
            {"seed", report.seed},
            {"paths", report.paths},
            {"config_hash", report.config_hash},
            {"estimator", kEstimatorNote}};
}

void write_simulation_csv(const SimulationResult& result, std::ostream& out) {
    out << "time,y_scheme,y_oracle\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        put_number(out, result.times[i]);
        out << ',';
        put_number(out, result.scheme_values[i]);
        out << ',';
        put_number(out, result.oracle_values[i]);
        out << '\n';
    }
}

}  // namespace itojump
