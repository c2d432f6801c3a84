#include "itojump/schemes.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace itojump {

LinearCoefficients LinearCoefficients::from_model(double b, double sigma, double F, double G,
                                                  const ActiveModel& model) {
    LinearCoefficients c;
    c.b = b;
    c.sigma = sigma;
    c.F = F;
    c.G = G;
    c.p = model.base().p();
    c.q = model.base().q();
    c.m1 = model.m1();
    c.m2 = model.m2();
    return c;
}

StrongOrder scheme_order(Scheme scheme) {
    return StrongOrder::from_twice(scheme == Scheme::euler ? 1 : 2);
}

std::string_view scheme_name(Scheme scheme) {
    return scheme == Scheme::euler ? "euler" : "milstein";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "euler") return Scheme::euler;
    if (name == "milstein") return Scheme::milstein;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

double euler_step(double y, const IntervalSlice& s, const LinearCoefficients& c) {
    double small_sum = 0.0;
    double tail_sum = 0.0;
    for (const auto& j : s.jumps) {
        if (j.ball == Ball::small) small_sum += c.p(j.mark);
        else tail_sum += c.q(j.mark);
    }
    const double i0 = c.b * y * s.delta;
    const double i1 = c.sigma * y * s.delta_w;
    const double i2 = c.F * y * (small_sum - s.delta * c.m1);
    const double i3 = c.G * y * tail_sum;
    return y + i0 + i1 + i2 + i3;
}

namespace {

std::size_t label_index(std::string_view label) {
    const auto& labels = MilsteinTerms::kLabels;
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw std::out_of_range("no Milstein term " + std::string(label));
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

double& MilsteinTerms::operator[](std::string_view label) { return values[label_index(label)]; }

double MilsteinTerms::operator[](std::string_view label) const {
    return values[label_index(label)];
}

double MilsteinTerms::at(const Multiindex& alpha) const {
    return values[label_index("I" + alpha.to_string())];
}

double MilsteinTerms::sum() const {
    // Fixed summation order keeps steps bit-reproducible.
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

MilsteinTerms milstein_terms(double y, const IntervalSlice& s, const LinearCoefficients& c,
                             TermForm form) {
    const bool literal = form == TermForm::as_typeset;
    const double m1 = c.m1;

    // Single sums.
    double sum_p = 0.0, sum_q = 0.0;
    double sum_p_dw = 0.0, sum_q_dw = 0.0;      // weighted by W(eta_n) - W(left)
    double sum_p_dt = 0.0, sum_q_dt = 0.0;      // weighted by eta_n - left

    // Ordered double sums.
    double s21 = 0.0, s31 = 0.0;                // running sums times W increments to next
    double s33 = 0.0, s32 = 0.0, s23 = 0.0, s22 = 0.0;
    double c32 = 0.0, c22 = 0.0;                // compensator walks over time to next jump

    double run_p = 0.0, run_q = 0.0;            // P(<n), Q(<n) before jump n
    double run_q_on_small = 0.0;                // sum_{k<n} q(x_k) 1_B(x_k), typeset forms only

    for (const auto& j : s.jumps) {
        const bool small = j.ball == Ball::small;
        const double dw = j.w - s.w_left;
        const double dt = j.time - s.left;
        if (small) {
            const double pn = c.p(j.mark);
            sum_p += pn;
            sum_p_dw += pn * dw;
            sum_p_dt += pn * dt;
            s22 += run_p * pn;
            s32 += run_q * pn;
            run_p += pn;
            if (literal) run_q_on_small += c.q(j.mark);
        } else {
            const double qn = c.q(j.mark);
            sum_q += qn;
            sum_q_dw += qn * dw;
            sum_q_dt += qn * dt;
            s33 += run_q * qn;
            s23 += literal ? run_q_on_small * c.p(j.mark) : run_p * qn;
            run_q += qn;
        }
        // run_p / run_q now hold the inclusive sums P(<=n), Q(<=n).
        if (literal || small) {
            s21 += run_p * (j.w_next_small - j.w);
            c22 += run_p * (j.next_small_time - j.time);
        }
        if (literal || !small) s31 += run_q * (j.w_next_tail - j.w);
        if (literal) {
            c32 += run_q_on_small * (j.next_small_time - j.time);
        } else if (!small) {
            c32 += run_q * (j.next_tail_time - j.time);
        }
    }

    const double sb = c.sigma;
    MilsteinTerms t;
    t["I0"] = c.b * y * s.delta;
    t["I1"] = sb * y * s.delta_w;
    t["I2"] = c.F * y * (sum_p - s.delta * m1);
    t["I3"] = c.G * y * sum_q;
    t["I11"] = 0.5 * sb * sb * y * (s.delta_w * s.delta_w - s.delta);
    t["I12"] = c.F * sb * y * (sum_p_dw - m1 * s.delta_z);
    t["I13"] = c.G * sb * y * sum_q_dw;
    t["I21"] = c.F * sb * y * (s21 - m1 * (s.delta_w * s.delta - s.delta_z));
    t["I31"] = c.G * sb * y * s31;
    t["I33"] = c.G * c.G * y * s33;
    t["I32"] = c.F * c.G * y * (s32 - m1 * c32);
    t["I23"] = c.F * c.G * y * (s23 - m1 * sum_q_dt);
    t["I22"] = c.F * c.F * y *
               (s22 - m1 * sum_p_dt - m1 * c22 + 0.5 * m1 * m1 * s.delta * s.delta);
    return t;
}

double milstein_step(double y, const IntervalSlice& slice, const LinearCoefficients& coef,
                     TermForm form) {
    return y + milstein_terms(y, slice, coef, form).sum();
}

double scheme_step(Scheme scheme, double y, const IntervalSlice& slice,
                   const LinearCoefficients& coef, TermForm form) {
    return scheme == Scheme::euler ? euler_step(y, slice, coef)
                                   : milstein_step(y, slice, coef, form);
}

Trajectory run_scheme(Scheme scheme, std::span<const double> grid, const DrivingPath& path,
                      const LinearCoefficients& coef, double y0, Sampling sampling,
                      JumpFilter filter, TermForm form) {
    const auto slices = itojump::slice(path, grid, filter);
    Trajectory out;
    out.scheme = scheme;
    out.order = scheme_order(scheme);
    out.times.reserve(grid.size() + path.jumps().size());
    out.values.reserve(grid.size() + path.jumps().size());
    out.times.push_back(grid.front());
    out.values.push_back(y0);

    double y = y0;
    std::size_t next_jump = 0;
    const auto& jumps = path.jumps();
    for (const auto& s : slices) {
        if (sampling == Sampling::grid_and_jumps) {
            while (next_jump < jumps.size() && jumps[next_jump].time < s.right) {
                const double t = jumps[next_jump].time;
                const auto partial = slice_between(path, s.left, t, filter);
                out.times.push_back(t);
                out.values.push_back(scheme_step(scheme, y, partial, coef, form));
                ++next_jump;
            }
        }
        y = scheme_step(scheme, y, s, coef, form);
        out.times.push_back(s.right);
        out.values.push_back(y);
    }
    return out;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
    out << "time,value\n";
    char buf[64];
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        auto r = std::to_chars(buf, buf + sizeof buf, trajectory.times[i]);
        out.write(buf, r.ptr - buf);
        out << ',';
        r = std::to_chars(buf, buf + sizeof buf, trajectory.values[i]);
        out.write(buf, r.ptr - buf);
        out << '\n';
    }
}

double linear_coefficient(const LinearCoefficients& coef, const Multiindex& alpha, double y,
                          std::span<const double> marks) {
    const int k = counts(alpha).k;
    if (static_cast<int>(marks.size()) != k) {
        throw std::invalid_argument("coefficient of " + alpha.to_string() + " takes " +
                                    std::to_string(k) + " marks");
    }
    double value = y;
    int jump = 0;  // jump digits seen so far, innermost first
    for (int d : alpha.digits()) {
        switch (d) {
            case 0: value *= coef.b; break;
            case 1: value *= coef.sigma; break;
            default: {
                // Jump digit j (1-based, innermost first) carries mark x_{k+1-j}.
                ++jump;
                const double x = marks[static_cast<std::size_t>(k - jump)];
                value *= d == 2 ? coef.F * coef.p(x) : coef.G * coef.q(x);
            }
        }
    }
    return value;
}

CoefficientTable linear_coefficient_table(const LinearCoefficients& coef, const IndexSet& set) {
    CoefficientTable table;
    for (const auto& alpha : set) {
        table.emplace(alpha, [coef, alpha](double y, std::span<const double> marks) {
            return linear_coefficient(coef, alpha, y, marks);
        });
    }
    return table;
}

}  // namespace itojump
