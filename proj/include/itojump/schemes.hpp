#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "itojump/levy.hpp"
#include "itojump/multiindex.hpp"
#include "itojump/path.hpp"

namespace itojump {

/// dY = bY dt + sigma Y dW + int_B F Y p(x) Ntilde(dt,dx) + int_B' G Y q(x) N(dt,dx),
/// with m1 = int p dnu and m2 = int p^2 dnu over the active small region
/// (B, or D_eps after truncation).
struct LinearCoefficients {
    double b = 0.0;
    double sigma = 0.0;
    double F = 0.0;
    double G = 0.0;
    Amplitude p = Amplitude::linear();
    Amplitude q = Amplitude::linear();
    double m1 = 0.0;
    double m2 = 0.0;

    static LinearCoefficients from_model(double b, double sigma, double F, double G,
                                         const ActiveModel& model);
};

enum class Scheme { euler, milstein };

StrongOrder scheme_order(Scheme scheme);
std::string_view scheme_name(Scheme scheme);
/// Accepts "euler" / "milstein". Throws std::invalid_argument otherwise.
Scheme parse_scheme(std::string_view name);

/**
 * Which closed forms the mixed jump terms use.
 *
 * `exact` evaluates each double integral as the iterated integral it names.
 * `as_typeset` reproduces the printed sums literally, including outer sums
 * running over every jump regardless of region. The two agree on steps
 * without jumps. The printed I32 compensator weights q at small marks, so
 * I32 differs on most steps with jumps; the other four only on steps that
 * mix small and tail jumps:
 *
 *   term | exact                                       | as_typeset
 *   -----+---------------------------------------------+---------------------------------------
 *   I31  | sum_{n tail} Q(<=n) (W(next_tail_n)-W(n))    | sum_{all n} Q(<=n) (W(next_tail_n)-W(n))
 *   I21  | sum_{n small} P(<=n) (W(next_small_n)-W(n))  | sum_{all n} P(<=n) (W(next_small_n)-W(n))
 *   I22  | m1 sum_{n small} P(<=n) (next_small_n - n)   | m1 sum_{all n} P(<=n) (next_small_n - n)
 *   I32  | m1 sum_{n tail} Q(<=n) (next_tail_n - n)     | m1 sum_{all n} [sum_{k<=n} q(x_k) 1_B(x_k)] (next_small_n - n)
 *   I23  | sum_{n tail} P(<n) q(x_n)                   | sum_{n tail} [sum_{k<n} q(x_k) 1_B(x_k)] p(x_n)
 *
 * P(<=n) / Q(<=n) are running sums of p over small marks / q over tail marks
 * up to jump n inclusive; "<n" excludes jump n. Both forms keep the k<=n / k<n
 * inner ranges of the printed formulas. Only `exact` matches the iterated
 * integrals and reaches strong order 1.
 */
enum class TermForm { exact, as_typeset };

/// y + I0 + I1 + I2 + I3.
double euler_step(double y, const IntervalSlice& slice, const LinearCoefficients& coef);

/// The 13 terms of the order-1 step, indexed by the members of A_1 \ {v}.
struct MilsteinTerms {
    static constexpr std::array<std::string_view, 13> kLabels = {
        "I0", "I1", "I2", "I3", "I11", "I12", "I13", "I21", "I22", "I23", "I31", "I32", "I33"};

    std::array<double, 13> values{};

    double& operator[](std::string_view label);
    double operator[](std::string_view label) const;
    /// Term for a multiindex such as {2,1}; throws std::out_of_range if absent.
    double at(const Multiindex& alpha) const;
    double sum() const;
};

MilsteinTerms milstein_terms(double y, const IntervalSlice& slice, const LinearCoefficients& coef,
                             TermForm form = TermForm::exact);

double milstein_step(double y, const IntervalSlice& slice, const LinearCoefficients& coef,
                     TermForm form = TermForm::exact);

double scheme_step(Scheme scheme, double y, const IntervalSlice& slice,
                   const LinearCoefficients& coef, TermForm form = TermForm::exact);

/// Where a trajectory is recorded: grid points only, or grid points plus every
/// jump time of the path. Between grid points the value is the scheme's
/// partial step from the last grid point.
enum class Sampling { grid, grid_and_jumps };

struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    Scheme scheme = Scheme::euler;
    StrongOrder order;
};

Trajectory run_scheme(Scheme scheme, std::span<const double> grid, const DrivingPath& path,
                      const LinearCoefficients& coef, double y0,
                      Sampling sampling = Sampling::grid, JumpFilter filter = {},
                      TermForm form = TermForm::exact);

/// Columns: time,value.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

/// Closed-form coefficient function of the linear model: f_alpha(y, x_1..x_k)
/// is y times one factor per digit (b, sigma, F p(x), G q(x)), mark x_i going
/// with the i-th jump digit counted from the outermost integrator.
double linear_coefficient(const LinearCoefficients& coef, const Multiindex& alpha, double y,
                          std::span<const double> marks);

/// f_alpha keyed by multiindex; hook for schemes whose coefficients are
/// supplied in closed form rather than derived.
using CoefficientFunction = std::function<double(double, std::span<const double>)>;
using CoefficientTable = std::map<Multiindex, CoefficientFunction>;

CoefficientTable linear_coefficient_table(const LinearCoefficients& coef, const IndexSet& set);

}  // namespace itojump
