#include "itojump/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace itojump {

std::vector<double> exact_on_events(const DrivingPath& path, const LinearCoefficients& coef,
                                    double y0, JumpFilter filter) {
    const auto& t = path.event_times();
    const auto& w = path.w_values();
    const double drift = coef.b - coef.F * coef.m1 - 0.5 * coef.sigma * coef.sigma;

    std::vector<double> y(t.size());
    y[0] = y0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        double value = y[i - 1] * std::exp(drift * (t[i] - t[i - 1]) + coef.sigma * (w[i] - w[i - 1]));
        if (const auto j = path.jump_at(i); j >= 0) {
            const auto& e = path.jumps()[static_cast<std::size_t>(j)];
            if (filter.passes(e)) {
                value *= e.ball == Ball::small ? 1.0 + coef.F * coef.p(e.mark)
                                               : 1.0 + coef.G * coef.q(e.mark);
            }
        }
        y[i] = value;
    }
    return y;
}

std::vector<double> exact_solution(const DrivingPath& path, std::span<const double> eval_times,
                                   const LinearCoefficients& coef, double y0, JumpFilter filter) {
    std::vector<std::size_t> index;
    index.reserve(eval_times.size());
    for (double t : eval_times) index.push_back(path.event_index(t));
    const auto all = exact_on_events(path, coef, y0, filter);
    std::vector<double> out;
    out.reserve(index.size());
    for (auto i : index) out.push_back(all[i]);
    return out;
}

std::vector<double> fine_reference(const DrivingPath& path, std::span<const double> eval_times,
                                   const LinearCoefficients& coef, double y0, int level,
                                   int finest_scheme_level, JumpFilter filter) {
    if (level < finest_scheme_level + 4) {
        throw std::domain_error("fine reference must be at least 4 dyadic levels finer than the schemes");
    }
    if (level > path.finest_level()) {
        throw std::domain_error("fine reference level exceeds the path's finest grid");
    }
    const auto grid = dyadic_grid(path.horizon(), level);
    const auto fine = run_scheme(Scheme::milstein, grid, path, coef, y0, Sampling::grid_and_jumps,
                                 filter);
    std::vector<double> out;
    out.reserve(eval_times.size());
    for (double t : eval_times) {
        auto it = std::lower_bound(fine.times.begin(), fine.times.end(), t);
        if (it == fine.times.end() || *it != t) {
            throw std::domain_error("evaluation time is neither a fine grid point nor a jump time");
        }
        out.push_back(fine.values[static_cast<std::size_t>(it - fine.times.begin())]);
    }
    return out;
}

}  // namespace itojump
