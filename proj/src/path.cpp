#include "itojump/path.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <iostream>
#include <stdexcept>

namespace itojump {

WienerIncrement increment_from_normals(double delta, double u1, double u2) {
    static const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
    const double root = std::sqrt(delta);
    return {u1 * root, 0.5 * delta * root * (u1 + kInvSqrt3 * u2)};
}

WienerIncrement sample_dw_dz(double delta, Rng& rng) {
    if (!(delta > 0.0)) throw std::domain_error("step length must be positive");
    const double u1 = standard_normal(rng);
    const double u2 = standard_normal(rng);
    return increment_from_normals(delta, u1, u2);
}

std::vector<JumpEvent> simulate_events(double horizon, const ActiveModel& model, Rng& rng) {
    std::vector<JumpEvent> events;
    const double rate = model.rate();
    if (rate <= 0.0) return events;
    const double tail_share = model.tail_rate() / rate;
    std::exponential_distribution<double> gap(rate);
    std::bernoulli_distribution is_tail(tail_share);
    double t = 0.0;
    while (true) {
        t += gap(rng);
        if (t > horizon) break;
        const double mark = is_tail(rng) ? model.sample_tail(rng) : model.sample_small(rng);
        events.push_back({t, mark, std::abs(mark) >= 1.0 ? Ball::tail : Ball::small});
    }
    return events;
}

std::vector<double> dyadic_grid(double horizon, int level) {
    if (level < 0 || level > 40) throw std::domain_error("dyadic level out of range");
    const std::int64_t cells = std::int64_t{1} << level;
    std::vector<double> grid(static_cast<std::size_t>(cells) + 1);
    for (std::int64_t k = 0; k <= cells; ++k) {
        grid[static_cast<std::size_t>(k)] = horizon * std::ldexp(static_cast<double>(k), -level);
    }
    return grid;
}

DrivingPath::DrivingPath(double horizon, int finest_level, std::vector<double> event_times,
                         std::vector<double> w_values, std::vector<double> z_locals,
                         std::vector<JumpEvent> jumps)
    : horizon_(horizon),
      finest_level_(finest_level),
      event_times_(std::move(event_times)),
      w_values_(std::move(w_values)),
      z_locals_(std::move(z_locals)),
      jumps_(std::move(jumps)) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (event_times_.size() < 2 || event_times_.front() != 0.0 || event_times_.back() != horizon_) {
        throw std::invalid_argument("event grid must run from 0 to the horizon");
    }
    if (!std::is_sorted(event_times_.begin(), event_times_.end(),
                        [](double a, double b) { return a <= b; })) {
        throw std::invalid_argument("event times must be strictly increasing");
    }
    if (w_values_.size() != event_times_.size() || w_values_.front() != 0.0) {
        throw std::invalid_argument("need one W value per event, starting at 0");
    }
    if (z_locals_.size() + 1 != event_times_.size()) {
        throw std::invalid_argument("need one local time integral per event gap");
    }
    for (double t : dyadic_grid(horizon_, finest_level_)) {
        if (!std::binary_search(event_times_.begin(), event_times_.end(), t)) {
            throw std::invalid_argument("finest dyadic grid must be part of the event grid");
        }
    }
    jump_at_event_.assign(event_times_.size(), -1);
    jump_event_.reserve(jumps_.size());
    for (std::size_t j = 0; j < jumps_.size(); ++j) {
        if (j > 0 && !(jumps_[j - 1].time < jumps_[j].time)) {
            throw std::invalid_argument("jumps must be strictly ordered in time");
        }
        if (!std::binary_search(event_times_.begin(), event_times_.end(), jumps_[j].time)) {
            throw std::invalid_argument("every jump time must be an event time");
        }
        const std::size_t idx = event_index(jumps_[j].time);
        if (idx == 0) throw std::invalid_argument("jumps occur in (0, T]");
        jump_event_.push_back(idx);
        jump_at_event_[idx] = static_cast<std::ptrdiff_t>(j);
    }
}

std::size_t DrivingPath::event_index(double t) const {
    auto it = std::lower_bound(event_times_.begin(), event_times_.end(), t);
    if (it == event_times_.end() || *it != t) {
        throw std::domain_error("time " + std::to_string(t) + " is not on the event grid");
    }
    return static_cast<std::size_t>(it - event_times_.begin());
}

DrivingPath build_path(double horizon, int finest_level, const ActiveModel& model, Rng& rng) {
    std::vector<JumpEvent> jumps = simulate_events(horizon, model, rng);
    const std::vector<double> grid = dyadic_grid(horizon, finest_level);

    const auto taken = [&](double t, double previous) {
        return t <= previous || std::binary_search(grid.begin(), grid.end(), t);
    };
    int perturbed = 0;
    double previous = 0.0;
    for (auto& jump : jumps) {
        if (taken(jump.time, previous)) {
            ++perturbed;
            double t = std::nextafter(jump.time, 0.0);
            if (taken(t, previous)) {
                // No room below: walk upwards from the later of the two.
                t = std::max(previous, jump.time);
                do {
                    t = std::nextafter(t, horizon);
                } while (taken(t, previous) && t < horizon);
                if (t >= horizon) throw std::logic_error("no free event time for a jump");
            }
            jump.time = t;
        }
        previous = jump.time;
    }
    if (perturbed > 0) {
        std::clog << "itojump: moved " << perturbed << " jump time(s) off coinciding events\n";
    }

    std::vector<double> times;
    times.reserve(grid.size() + jumps.size());
    std::size_t j = 0;
    for (double g : grid) {
        while (j < jumps.size() && jumps[j].time < g) times.push_back(jumps[j++].time);
        times.push_back(g);
    }

    std::vector<double> w(times.size(), 0.0);
    std::vector<double> z(times.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const auto inc = sample_dw_dz(times[i + 1] - times[i], rng);
        w[i + 1] = w[i] + inc.dw;
        z[i] = inc.dz;
    }
    DrivingPath path(horizon, finest_level, std::move(times), std::move(w), std::move(z),
                     std::move(jumps));
    path.set_perturbed_jumps(perturbed);
    return path;
}

namespace {

IntervalSlice make_slice(const DrivingPath& path, std::size_t a, std::size_t b, JumpFilter filter) {
    if (b <= a) throw std::domain_error("slice needs left < right");
    const auto& t = path.event_times();
    const auto& w = path.w_values();
    const auto& z = path.z_locals();

    IntervalSlice s;
    s.left = t[a];
    s.right = t[b];
    s.delta = s.right - s.left;
    s.w_left = w[a];
    s.w_right = w[b];
    s.delta_w = w[b] - w[a];
    double dz = 0.0;
    for (std::size_t i = a; i < b; ++i) dz += (w[i] - w[a]) * (t[i + 1] - t[i]) + z[i];
    s.delta_z = dz;

    for (std::size_t i = a + 1; i <= b; ++i) {
        const auto j = path.jump_at(i);
        if (j < 0) continue;
        const auto& e = path.jumps()[static_cast<std::size_t>(j)];
        if (!filter.passes(e)) continue;
        s.jumps.push_back({e.time, e.mark, e.ball, w[i], 0.0, 0.0, 0.0, 0.0});
    }
    double next_tail = s.right, w_tail = s.w_right;
    double next_small = s.right, w_small = s.w_right;
    for (auto it = s.jumps.rbegin(); it != s.jumps.rend(); ++it) {
        it->next_tail_time = next_tail;
        it->w_next_tail = w_tail;
        it->next_small_time = next_small;
        it->w_next_small = w_small;
        if (it->ball == Ball::tail) {
            next_tail = it->time;
            w_tail = it->w;
        } else {
            next_small = it->time;
            w_small = it->w;
        }
    }
    return s;
}

}  // namespace

IntervalSlice slice_between(const DrivingPath& path, double left, double right,
                            JumpFilter filter) {
    return make_slice(path, path.event_index(left), path.event_index(right), filter);
}

std::vector<IntervalSlice> slice(const DrivingPath& path, std::span<const double> grid,
                                 JumpFilter filter) {
    if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != path.horizon()) {
        throw std::domain_error("coarse grid must run from 0 to the horizon");
    }
    std::vector<IntervalSlice> out;
    out.reserve(grid.size() - 1);
    std::size_t a = path.event_index(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const std::size_t b = path.event_index(grid[i]);
        out.push_back(make_slice(path, a, b, filter));
        a = b;
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'I', 'T', 'O', 'J', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
        throw std::runtime_error("truncated path dump");
    }
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_path_binary(const DrivingPath& path, std::ostream& out) {
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kVersion);
    put<double>(out, path.horizon());
    put<std::int32_t>(out, path.finest_level());
    put<std::uint64_t>(out, path.event_times().size());
    for (double t : path.event_times()) put(out, t);
    for (double v : path.w_values()) put(out, v);
    for (double v : path.z_locals()) put(out, v);
    put<std::uint64_t>(out, path.jumps().size());
    for (const auto& e : path.jumps()) {
        put(out, e.time);
        put(out, e.mark);
        put<std::uint8_t>(out, e.ball == Ball::tail ? 1 : 0);
    }
}

DrivingPath read_path_binary(std::istream& in) {
    char magic[sizeof kMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("not an itojump path dump");
    }
    if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("unsupported dump version");
    const double horizon = get<double>(in);
    const int level = get<std::int32_t>(in);
    const auto n = get<std::uint64_t>(in);
    if (n < 2) throw std::runtime_error("corrupt path dump");
    std::vector<double> times(n), w(n), z(n - 1);
    for (auto& v : times) v = get<double>(in);
    for (auto& v : w) v = get<double>(in);
    for (auto& v : z) v = get<double>(in);
    const auto m = get<std::uint64_t>(in);
    std::vector<JumpEvent> jumps(m);
    for (auto& e : jumps) {
        e.time = get<double>(in);
        e.mark = get<double>(in);
        e.ball = get<std::uint8_t>(in) ? Ball::tail : Ball::small;
    }
    return DrivingPath(horizon, level, std::move(times), std::move(w), std::move(z),
                       std::move(jumps));
}

}  // namespace itojump
