#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "itojump/multiindex.hpp"
#include "itojump/rng.hpp"

namespace itojump {

/// Jump amplitude function (p on the unit ball, q on the tail).
///
/// `order_at_zero` is a declared bound |f(x)| <= C |x|^order near the origin.
/// It decides whether moments against an infinite-activity density converge;
/// the library never guesses convergence from quadrature output.
class Amplitude {
public:
    static Amplitude linear(double scale = 1.0);
    static Amplitude custom(std::function<double(double)> fn, double order_at_zero = 1.0,
                            std::string name = "custom");

    double operator()(double x) const { return linear_ ? *linear_ * x : fn_(x); }

    /// Set when f(x) = scale * x, which unlocks closed-form moments.
    std::optional<double> linear_scale() const { return linear_; }
    double order_at_zero() const noexcept { return order_at_zero_; }
    const std::string& name() const noexcept { return name_; }

private:
    Amplitude() = default;

    std::function<double(double)> fn_;
    std::optional<double> linear_;
    double order_at_zero_ = 1.0;
    std::string name_;
};

struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Finitely many atoms inside B \ {0}.
struct FiniteSmallJumps {
    std::vector<Atom> atoms;
};

/// Symmetric density c |x|^(-1-a) on 0 < |x| < 1; infinite activity.
struct PowerLawSmallJumps {
    double c = 1.0;
    double a = 0.5;
};

using SmallJumps = std::variant<FiniteSmallJumps, PowerLawSmallJumps>;

/// Finitely many atoms in B' = {|x| >= 1}.
struct TailJumps {
    std::vector<Atom> atoms;
};

/// Integration region for moments and mark sampling.
/// disc(eps) is D_eps = {eps <= |x| < 1}; eps_ball(eps) is B_eps \ {0}.
struct MomentRegion {
    enum class Kind { small, disc, eps_ball, tail };

    Kind kind = Kind::small;
    double epsilon = 0.0;

    static MomentRegion small() { return {Kind::small, 0.0}; }
    static MomentRegion disc(double eps);
    static MomentRegion eps_ball(double eps);
    static MomentRegion tail() { return {Kind::tail, 0.0}; }

    bool small_side() const noexcept { return kind != Kind::tail; }
    bool contains(double x) const noexcept;
    std::string to_string() const;
};

enum class AmplitudeKind { p, q };

/// Value of an integral against nu, or a divergence verdict.
struct Moment {
    double value = 0.0;
    bool divergent = false;

    static Moment finite(double v) { return {v, false}; }
    static Moment diverges() { return {0.0, true}; }

    /// Throws std::domain_error when divergent.
    double get() const;
};

class LevyModel {
public:
    /// Validates supports, masses and square-integrability of p and q.
    LevyModel(SmallJumps small, TailJumps tail, Amplitude p, Amplitude q);

    const SmallJumps& small() const noexcept { return small_; }
    const TailJumps& tail() const noexcept { return tail_; }
    const Amplitude& p() const noexcept { return p_; }
    const Amplitude& q() const noexcept { return q_; }

    bool finite_small_activity() const noexcept {
        return std::holds_alternative<FiniteSmallJumps>(small_);
    }

private:
    SmallJumps small_;
    TailJumps tail_;
    Amplitude p_;
    Amplitude q_;
};

/// nu(region); +infinity for regions touching the origin of a power-law model.
double mass(const LevyModel& model, MomentRegion region);

/// Integral of f^power over `region` against nu, f being p (small-side
/// regions) or q (tail). Closed form for atoms and linear p; otherwise
/// tanh-sinh quadrature to relative tolerance 1e-10 with the singular point at
/// the origin placed on an endpoint.
/// Throws std::invalid_argument on func/region mismatch or power outside {0,1,2}.
Moment moment(const LevyModel& model, AmplitudeKind func, int power, MomentRegion region);

/// Draw from nu restricted to `region`, normalised. Throws std::domain_error
/// when the region has zero or infinite mass.
double sample_mark(const LevyModel& model, MomentRegion region, Rng& rng);

/// Model whose small-jump region is the disc D_eps; L^eps is the p-square
/// mass left behind in B_eps.
class TruncatedModel {
public:
    TruncatedModel(LevyModel base, double epsilon);

    const LevyModel& base() const noexcept { return base_; }
    double epsilon() const noexcept { return epsilon_; }
    double disc_mass() const noexcept { return disc_mass_; }
    double residual_l_eps() const noexcept { return residual_; }

private:
    LevyModel base_;
    double epsilon_;
    double disc_mass_;
    double residual_;
};

/// Throws std::domain_error unless 0 < epsilon < 1.
TruncatedModel truncate(const LevyModel& model, double epsilon);

/// The finite-activity jump measure that actually gets simulated: B for
/// finite models, D_eps for truncated ones, plus the tail. Caches rates,
/// the compensator moment m1 = int p dnu and m2 = int p^2 dnu over the
/// active small region, and mark samplers.
class ActiveModel {
public:
    /// Throws std::domain_error for infinite-activity models (truncate first).
    explicit ActiveModel(const LevyModel& model);
    explicit ActiveModel(const TruncatedModel& truncated);

    const LevyModel& base() const noexcept { return base_; }
    MomentRegion small_region() const noexcept { return small_region_; }
    std::optional<double> epsilon() const;

    double small_rate() const noexcept { return small_rate_; }
    double tail_rate() const noexcept { return tail_rate_; }
    double rate() const noexcept { return small_rate_ + tail_rate_; }
    double m1() const noexcept { return m1_; }
    double m2() const noexcept { return m2_; }

    bool is_active_small(double x) const noexcept { return small_region_.contains(x); }

    double sample_small(Rng& rng) const;
    double sample_tail(Rng& rng) const;

private:
    ActiveModel(const LevyModel& model, MomentRegion small_region);

    LevyModel base_;
    MomentRegion small_region_;
    double small_rate_ = 0.0;
    double tail_rate_ = 0.0;
    double m1_ = 0.0;
    double m2_ = 0.0;
    std::vector<double> small_locations_, small_cumulative_;
    std::vector<double> tail_locations_, tail_cumulative_;
};

}  // namespace itojump
