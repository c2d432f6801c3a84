#pragma once

#include <span>
#include <vector>

#include "itojump/path.hpp"
#include "itojump/schemes.hpp"

namespace itojump {

/// Reference solution used to measure strong errors on a shared path.
struct OracleConfig {
    enum class Kind { exact_linear, fine_grid };

    Kind kind = Kind::exact_linear;
    int level = 0;  // dyadic level of the fine-grid Milstein reference
};

/// Pathwise solution of the linear SDE at every event of the path:
///   between events Y grows by exp((b - F m1 - sigma^2/2) h + sigma dW),
///   at an active small jump by (1 + F p(x)), at a tail jump by (1 + G q(x)).
/// The -F m1 drift is the compensator of the small-jump integral.
std::vector<double> exact_on_events(const DrivingPath& path, const LinearCoefficients& coef,
                                    double y0, JumpFilter filter = {});

/// exact_on_events restricted to `eval_times`; throws std::domain_error for a
/// time that is not an event.
std::vector<double> exact_solution(const DrivingPath& path, std::span<const double> eval_times,
                                   const LinearCoefficients& coef, double y0,
                                   JumpFilter filter = {});

/// Milstein on the dyadic grid of `level` (values at grid points and jump
/// times), restricted to `eval_times`. `level` must be at least
/// finest_scheme_level + 4 and no finer than the path.
std::vector<double> fine_reference(const DrivingPath& path, std::span<const double> eval_times,
                                   const LinearCoefficients& coef, double y0, int level,
                                   int finest_scheme_level, JumpFilter filter = {});

}  // namespace itojump
