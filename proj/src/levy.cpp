#include "itojump/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace itojump {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadratureTolerance = 1e-10;

// Radial bounds [lo, hi) of a small-side region; lo == 0 means the region
// reaches the origin.
struct RadialRange {
    double lo;
    double hi;
};

RadialRange radial_range(MomentRegion r) {
    switch (r.kind) {
        case MomentRegion::Kind::small: return {0.0, 1.0};
        case MomentRegion::Kind::disc: return {r.epsilon, 1.0};
        case MomentRegion::Kind::eps_ball: return {0.0, r.epsilon};
        case MomentRegion::Kind::tail: break;
    }
    throw std::logic_error("radial_range of the tail");
}

double atom_moment(const std::vector<Atom>& atoms, const Amplitude& f, int power,
                   MomentRegion region) {
    double sum = 0.0;
    for (const auto& atom : atoms) {
        if (region.contains(atom.location)) sum += atom.mass * std::pow(f(atom.location), power);
    }
    return sum;
}

// int over lo <= |x| < hi of f(x)^power c |x|^(-1-a) dx.
Moment power_law_moment(const PowerLawSmallJumps& law, const Amplitude& f, int power,
                        RadialRange range) {
    if (range.hi <= range.lo) return Moment::finite(0.0);
    const double a = law.a;
    if (range.lo == 0.0 && power * f.order_at_zero() <= a) return Moment::diverges();

    if (auto scale = f.linear_scale()) {
        // Odd powers cancel under the symmetric density.
        if (power % 2 == 1) return Moment::finite(0.0);
        const double e = power - a;
        const double radial = std::abs(e) < 1e-300
                                  ? std::log(range.hi / range.lo)
                                  : (std::pow(range.hi, e) - std::pow(range.lo, e)) / e;
        return Moment::finite(2.0 * law.c * std::pow(*scale, power) * radial);
    }

    // Two-argument form: rc is the signed distance to the nearer endpoint,
    // which keeps r accurate right next to a singular origin.
    const double mid = 0.5 * (range.lo + range.hi);
    auto integrand = [&](double r, double rc) {
        if (r < mid) r = range.lo - rc;
        if (r <= 0.0) return 0.0;
        const double fx = std::pow(f(r), power) + std::pow(f(-r), power);
        if (fx == 0.0) return 0.0;
        // In logs: near 0 the density overflows while fx underflows.
        return std::copysign(law.c * std::exp(std::log(std::abs(fx)) - (1.0 + a) * std::log(r)), fx);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double value = integrator.integrate(integrand, range.lo, range.hi, kQuadratureTolerance);
    if (!std::isfinite(value)) return Moment::diverges();
    return Moment::finite(value);
}

std::pair<std::vector<double>, std::vector<double>> atom_table(const std::vector<Atom>& atoms,
                                                               MomentRegion region) {
    std::vector<double> locations, cumulative;
    double total = 0.0;
    for (const auto& atom : atoms) {
        if (!region.contains(atom.location)) continue;
        total += atom.mass;
        locations.push_back(atom.location);
        cumulative.push_back(total);
    }
    return {std::move(locations), std::move(cumulative)};
}

double draw_atom(const std::vector<double>& locations, const std::vector<double>& cumulative,
                 Rng& rng) {
    if (locations.empty()) throw std::domain_error("cannot sample a mark from a zero-mass region");
    const double u = open_uniform(rng) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return locations[static_cast<std::size_t>(it - cumulative.begin())];
}

// Inverse CDF of |x| under c r^(-1-a) on [lo, 1), symmetric sign.
double draw_power_law(const PowerLawSmallJumps& law, double lo, Rng& rng) {
    const double a = law.a;
    const double top = std::pow(lo, -a);
    const double u = open_uniform(rng);
    const double r = std::pow(top - u * (top - 1.0), -1.0 / a);
    const double clamped = std::clamp(r, lo, std::nextafter(1.0, 0.0));
    return std::bernoulli_distribution{0.5}(rng) ? clamped : -clamped;
}

void validate_atoms(const std::vector<Atom>& atoms, bool tail) {
    for (const auto& atom : atoms) {
        if (!(atom.mass > 0.0) || !std::isfinite(atom.mass)) {
            throw std::invalid_argument("atom masses must be positive and finite");
        }
        const double r = std::abs(atom.location);
        if (tail ? !(r >= 1.0 && std::isfinite(r)) : !(r > 0.0 && r < 1.0)) {
            throw std::invalid_argument(std::string(tail ? "tail" : "small-jump") +
                                        " atom at " + std::to_string(atom.location) +
                                        " lies outside its region");
        }
    }
}

}  // namespace

Amplitude Amplitude::linear(double scale) {
    Amplitude a;
    a.linear_ = scale;
    a.order_at_zero_ = 1.0;
    a.name_ = "linear";
    return a;
}

Amplitude Amplitude::custom(std::function<double(double)> fn, double order_at_zero,
                            std::string name) {
    if (!fn) throw std::invalid_argument("custom amplitude needs a callable");
    Amplitude a;
    a.fn_ = std::move(fn);
    a.order_at_zero_ = order_at_zero;
    a.name_ = std::move(name);
    return a;
}

MomentRegion MomentRegion::disc(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("disc radius must lie in (0,1)");
    return {Kind::disc, eps};
}

MomentRegion MomentRegion::eps_ball(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("ball radius must lie in (0,1)");
    return {Kind::eps_ball, eps};
}

bool MomentRegion::contains(double x) const noexcept {
    const double r = std::abs(x);
    switch (kind) {
        case Kind::small: return r > 0.0 && r < 1.0;
        case Kind::disc: return r >= epsilon && r < 1.0;
        case Kind::eps_ball: return r > 0.0 && r < epsilon;
        case Kind::tail: return r >= 1.0;
    }
    return false;
}

std::string MomentRegion::to_string() const {
    switch (kind) {
        case Kind::small: return "SMALL";
        case Kind::disc: return "DISC(" + std::to_string(epsilon) + ")";
        case Kind::eps_ball: return "EPS_BALL(" + std::to_string(epsilon) + ")";
        case Kind::tail: return "TAIL";
    }
    return "?";
}

double Moment::get() const {
    if (divergent) throw std::domain_error("integral against the Levy measure diverges");
    return value;
}

LevyModel::LevyModel(SmallJumps small, TailJumps tail, Amplitude p, Amplitude q)
    : small_(std::move(small)), tail_(std::move(tail)), p_(std::move(p)), q_(std::move(q)) {
    validate_atoms(tail_.atoms, true);
    if (const auto* finite = std::get_if<FiniteSmallJumps>(&small_)) {
        validate_atoms(finite->atoms, false);
    } else {
        const auto& law = std::get<PowerLawSmallJumps>(small_);
        if (!(law.c > 0.0)) throw std::invalid_argument("power-law constant c must be positive");
        if (!(law.a > 0.0 && law.a < 2.0)) {
            throw std::invalid_argument("power-law index a must lie in (0,2)");
        }
    }
    if (moment(*this, AmplitudeKind::p, 2, MomentRegion::small()).divergent) {
        throw std::invalid_argument("p is not square-integrable against nu on the unit ball");
    }
}

double mass(const LevyModel& model, MomentRegion region) {
    if (region.kind == MomentRegion::Kind::tail) {
        double total = 0.0;
        for (const auto& atom : model.tail().atoms) total += atom.mass;
        return total;
    }
    if (const auto* finite = std::get_if<FiniteSmallJumps>(&model.small())) {
        double total = 0.0;
        for (const auto& atom : finite->atoms) {
            if (region.contains(atom.location)) total += atom.mass;
        }
        return total;
    }
    const auto& law = std::get<PowerLawSmallJumps>(model.small());
    const auto range = radial_range(region);
    if (range.lo == 0.0) return kInf;
    return 2.0 * law.c * (std::pow(range.lo, -law.a) - std::pow(range.hi, -law.a)) / law.a;
}

Moment moment(const LevyModel& model, AmplitudeKind func, int power, MomentRegion region) {
    if (power < 0 || power > 2) throw std::invalid_argument("moment power must be 0, 1 or 2");
    const bool tail = region.kind == MomentRegion::Kind::tail;
    if (tail != (func == AmplitudeKind::q)) {
        throw std::invalid_argument("p integrates over small-side regions, q over the tail only");
    }
    if (power == 0) {
        const double m = mass(model, region);
        return std::isfinite(m) ? Moment::finite(m) : Moment::diverges();
    }
    if (tail) return Moment::finite(atom_moment(model.tail().atoms, model.q(), power, region));
    if (const auto* finite = std::get_if<FiniteSmallJumps>(&model.small())) {
        return Moment::finite(atom_moment(finite->atoms, model.p(), power, region));
    }
    return power_law_moment(std::get<PowerLawSmallJumps>(model.small()), model.p(), power,
                            radial_range(region));
}

double sample_mark(const LevyModel& model, MomentRegion region, Rng& rng) {
    if (region.kind == MomentRegion::Kind::tail) {
        auto [loc, cum] = atom_table(model.tail().atoms, region);
        return draw_atom(loc, cum, rng);
    }
    if (const auto* finite = std::get_if<FiniteSmallJumps>(&model.small())) {
        auto [loc, cum] = atom_table(finite->atoms, region);
        return draw_atom(loc, cum, rng);
    }
    const auto range = radial_range(region);
    if (range.lo == 0.0) {
        throw std::domain_error("region " + region.to_string() +
                                " has infinite mass; sample from a disc instead");
    }
    return draw_power_law(std::get<PowerLawSmallJumps>(model.small()), range.lo, rng);
}

TruncatedModel::TruncatedModel(LevyModel base, double epsilon)
    : base_(std::move(base)), epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("truncation radius must lie in (0,1)");
    }
    disc_mass_ = mass(base_, MomentRegion::disc(epsilon));
    residual_ = moment(base_, AmplitudeKind::p, 2, MomentRegion::eps_ball(epsilon)).get();
}

TruncatedModel truncate(const LevyModel& model, double epsilon) {
    return TruncatedModel(model, epsilon);
}

ActiveModel::ActiveModel(const LevyModel& model) : ActiveModel(model, MomentRegion::small()) {}

ActiveModel::ActiveModel(const TruncatedModel& truncated)
    : ActiveModel(truncated.base(), MomentRegion::disc(truncated.epsilon())) {}

ActiveModel::ActiveModel(const LevyModel& model, MomentRegion small_region)
    : base_(model), small_region_(small_region) {
    small_rate_ = mass(base_, small_region_);
    if (!std::isfinite(small_rate_)) {
        throw std::domain_error(
            "small-jump activity is infinite; truncate the model to an epsilon-disc first");
    }
    tail_rate_ = mass(base_, MomentRegion::tail());
    m1_ = moment(base_, AmplitudeKind::p, 1, small_region_).get();
    m2_ = moment(base_, AmplitudeKind::p, 2, small_region_).get();
    std::tie(tail_locations_, tail_cumulative_) = atom_table(base_.tail().atoms, MomentRegion::tail());
    if (const auto* finite = std::get_if<FiniteSmallJumps>(&base_.small())) {
        std::tie(small_locations_, small_cumulative_) = atom_table(finite->atoms, small_region_);
    }
}

std::optional<double> ActiveModel::epsilon() const {
    if (small_region_.kind == MomentRegion::Kind::disc) return small_region_.epsilon;
    return std::nullopt;
}

double ActiveModel::sample_small(Rng& rng) const {
    if (base_.finite_small_activity()) return draw_atom(small_locations_, small_cumulative_, rng);
    return draw_power_law(std::get<PowerLawSmallJumps>(base_.small()), small_region_.epsilon, rng);
}

double ActiveModel::sample_tail(Rng& rng) const {
    return draw_atom(tail_locations_, tail_cumulative_, rng);
}

}  // namespace itojump
