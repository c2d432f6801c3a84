#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "itojump/levy.hpp"
#include "itojump/multiindex.hpp"
#include "itojump/rng.hpp"

namespace itojump {

struct JumpEvent {
    double time = 0.0;
    double mark = 0.0;
    Ball ball = Ball::small;

    friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Joint (W increment, time integral of W minus its left value) over a step.
struct WienerIncrement {
    double dw = 0.0;
    double dz = 0.0;
};

/// dW = U1 sqrt(h), dZ = h^{3/2} (U1 + U2 / sqrt(3)) / 2 for independent
/// standard normals U1, U2. Var dW = h, Var dZ = h^3 / 3, Cov = h^2 / 2.
WienerIncrement increment_from_normals(double delta, double u1, double u2);

/// Throws std::domain_error unless delta > 0.
WienerIncrement sample_dw_dz(double delta, Rng& rng);

/// Jump times on (0, horizon] as a Poisson stream of the model's total active
/// rate; marks drawn from nu restricted to the active region and tagged by
/// where they land.
std::vector<JumpEvent> simulate_events(double horizon, const ActiveModel& model, Rng& rng);

/// Points horizon * k / 2^level for k = 0..2^level. Every coarser level is a
/// bitwise-exact subset of every finer one.
std::vector<double> dyadic_grid(double horizon, int level);

/**
 * One realisation of (W, N) on [0, T].
 *
 * Events are the finest dyadic grid merged with all jump times. W is stored
 * at every event; z_locals[j] is the integral of (W_s - W(t_j)) over
 * [t_j, t_{j+1}], sampled jointly with the increment on that gap.
 */
class DrivingPath {
public:
    /// Validates the invariants; throws std::invalid_argument on violation.
    DrivingPath(double horizon, int finest_level, std::vector<double> event_times,
                std::vector<double> w_values, std::vector<double> z_locals,
                std::vector<JumpEvent> jumps);

    double horizon() const noexcept { return horizon_; }
    int finest_level() const noexcept { return finest_level_; }
    const std::vector<double>& event_times() const noexcept { return event_times_; }
    const std::vector<double>& w_values() const noexcept { return w_values_; }
    const std::vector<double>& z_locals() const noexcept { return z_locals_; }
    const std::vector<JumpEvent>& jumps() const noexcept { return jumps_; }

    /// Event index of the given jump.
    std::size_t jump_event(std::size_t jump) const { return jump_event_.at(jump); }
    /// Jump index at an event, or -1 for a pure grid point.
    std::ptrdiff_t jump_at(std::size_t event) const { return jump_at_event_.at(event); }

    /// Exact-match lookup. Throws std::domain_error if t is not an event time.
    std::size_t event_index(double t) const;

    /// Number of jump times nudged off a grid point or another jump.
    int perturbed_jumps() const noexcept { return perturbed_; }
    void set_perturbed_jumps(int n) noexcept { perturbed_ = n; }

    friend bool operator==(const DrivingPath& a, const DrivingPath& b) {
        return a.horizon_ == b.horizon_ && a.finest_level_ == b.finest_level_ &&
               a.event_times_ == b.event_times_ && a.w_values_ == b.w_values_ &&
               a.z_locals_ == b.z_locals_ && a.jumps_ == b.jumps_;
    }

private:
    double horizon_;
    int finest_level_;
    std::vector<double> event_times_;
    std::vector<double> w_values_;
    std::vector<double> z_locals_;
    std::vector<JumpEvent> jumps_;
    std::vector<std::size_t> jump_event_;
    std::vector<std::ptrdiff_t> jump_at_event_;
    int perturbed_ = 0;
};

/// Simulates events, merges them into the dyadic grid of `finest_level`
/// and samples (dW, dZ) gap by gap. A jump landing exactly on a grid point or
/// on another jump is moved one ulp towards zero and counted.
DrivingPath build_path(double horizon, int finest_level, const ActiveModel& model, Rng& rng);

/// Which small jumps a scheme sees. With min_small_abs = eps the slice drops
/// small marks inside B_eps, which couples a coarse truncation to a path
/// simulated at a finer one. Tail jumps always pass.
struct JumpFilter {
    double min_small_abs = 0.0;

    bool passes(const JumpEvent& e) const noexcept {
        return e.ball == Ball::tail || std::abs(e.mark) >= min_small_abs;
    }
};

struct SliceJump {
    double time = 0.0;
    double mark = 0.0;
    Ball ball = Ball::small;
    double w = 0.0;                // W at the jump time
    double next_tail_time = 0.0;   // next tail jump after this one, capped at right
    double w_next_tail = 0.0;
    double next_small_time = 0.0;  // next small jump after this one, capped at right
    double w_next_small = 0.0;
};

/// Noise of one step (left, right]: increments aggregated from the path and
/// the ordered jumps inside the half-open interval.
struct IntervalSlice {
    double left = 0.0;
    double right = 0.0;
    double delta = 0.0;
    double delta_w = 0.0;
    double delta_z = 0.0;
    double w_left = 0.0;
    double w_right = 0.0;
    std::vector<SliceJump> jumps;

    std::size_t jump_count() const noexcept { return jumps.size(); }
};

/// Slice over (left, right] where both ends are event times (right may be a
/// jump time, used to evaluate a scheme between grid points).
/// Throws std::domain_error if either end is not on the event grid.
IntervalSlice slice_between(const DrivingPath& path, double left, double right,
                            JumpFilter filter = {});

/// One slice per consecutive pair of `grid`, which must start at 0, end at
/// the horizon and consist of event times.
std::vector<IntervalSlice> slice(const DrivingPath& path, std::span<const double> grid,
                                 JumpFilter filter = {});

/// Debug dump: 8-byte magic, u32 version, then little-endian fields.
void write_path_binary(const DrivingPath& path, std::ostream& out);
DrivingPath read_path_binary(std::istream& in);

}  // namespace itojump
