#include <doctest.h>

#include <cmath>
#include <sstream>

#include "itojump/schemes.hpp"
#include "support/event_walk.hpp"
#include "support/models.hpp"
#include "support/slices.hpp"
#include "support/stats.hpp"

using namespace itojump;

namespace {

LinearCoefficients coefficients(double b, double sigma, double F, double G, double m1 = 0.0) {
    LinearCoefficients c;
    c.b = b;
    c.sigma = sigma;
    c.F = F;
    c.G = G;
    c.m1 = m1;
    return c;
}

IntervalSlice bare_slice(double delta, double dw, double dz) {
    IntervalSlice s;
    s.right = delta;
    s.delta = delta;
    s.delta_w = dw;
    s.delta_z = dz;
    s.w_right = dw;
    return s;
}

SliceJump jump_at(double t, double mark, Ball ball, double w) {
    SliceJump j;
    j.time = t;
    j.mark = mark;
    j.ball = ball;
    j.w = w;
    return j;
}

// Small jump at 0.1, tail jump at 0.3 in (0, 0.5].
DrivingPath two_jump_path() {
    std::vector<double> t = {0.0, 0.1, 0.3, 0.5, 1.0};
    std::vector<double> w = {0.0, 0.15, -0.2, 0.1, 0.3};
    std::vector<double> z = {0.004, -0.01, 0.02, 0.03};
    return DrivingPath(1.0, 1, t, w, z, {{0.1, 0.5, Ball::small}, {0.3, -2.0, Ball::tail}});
}

}  // namespace

TEST_CASE("scheme names") {
    CHECK(parse_scheme("euler") == Scheme::euler);
    CHECK(parse_scheme("milstein") == Scheme::milstein);
    CHECK_THROWS_AS(parse_scheme("heun"), std::invalid_argument);
    CHECK(scheme_order(Scheme::euler).twice == 1);
    CHECK(scheme_order(Scheme::milstein).twice == 2);
    CHECK(scheme_name(Scheme::milstein) == "milstein");
}

TEST_CASE("Euler step closed forms") {
    const auto s = bare_slice(0.1, 0.2, 0.01);
    CHECK(euler_step(1.7, s, coefficients(0, 0, 0, 0)) == 1.7);
    CHECK(euler_step(2.0, s, coefficients(-0.5, 0.3, 0, 0)) ==
          doctest::Approx(2.0 * (1.0 - 0.05 + 0.3 * 0.2)));

    auto one = bare_slice(0.1, 0.0, 0.0);
    one.jumps.push_back(jump_at(0.05, 0.4, Ball::small, 0.0));
    CHECK(euler_step(3.0, one, coefficients(0, 0, 0.2, 0)) == doctest::Approx(3.0 * (1.0 + 0.2 * 0.4)));
    // Compensator and tail term.
    one.jumps.push_back(jump_at(0.07, 1.5, Ball::tail, 0.0));
    CHECK(euler_step(1.0, one, coefficients(0, 0, 0.2, 0.1, 0.14)) ==
          doctest::Approx(1.0 + 0.2 * (0.4 - 0.1 * 0.14) + 0.1 * 1.5));
}

TEST_CASE("Milstein without jumps") {
    const auto s = bare_slice(0.1, 0.2, 0.013);
    const auto c = coefficients(-0.5, 0.3, 0.2, 0.1, 0.14);
    const auto t = milstein_terms(2.0, s, c);
    CHECK(t["I11"] == doctest::Approx(0.5 * 0.09 * 2.0 * (0.04 - 0.1)));
    CHECK(t["I3"] == 0.0);
    CHECK(t["I13"] == 0.0);
    CHECK(t["I31"] == 0.0);
    CHECK(t["I33"] == 0.0);
    CHECK(t["I32"] == 0.0);
    CHECK(t["I23"] == 0.0);
    CHECK(t["I21"] == doctest::Approx(-0.2 * 0.3 * 2.0 * 0.14 * (0.2 * 0.1 - 0.013)));
    CHECK(t["I12"] == doctest::Approx(-0.2 * 0.3 * 2.0 * 0.14 * 0.013));
    CHECK(t["I22"] == doctest::Approx(0.04 * 2.0 * 0.5 * 0.14 * 0.14 * 0.01));

    // F = G = 0: the classical diffusion Milstein step.
    const auto d = coefficients(-0.5, 0.3, 0.0, 0.0, 0.14);
    CHECK(milstein_step(2.0, s, d) ==
          doctest::Approx(2.0 * (1.0 - 0.05 + 0.3 * 0.2 + 0.5 * 0.09 * (0.04 - 0.1))).epsilon(1e-15));
    CHECK_THROWS(t["I4"]);
    CHECK(t.at(Multiindex{1, 1}) == t["I11"]);
}

TEST_CASE("hand-built two-jump step against the event walk") {
    const auto path = two_jump_path();
    const auto s = slice_between(path, 0.0, 0.5);
    const auto c = coefficients(-0.5, 0.3, 0.2, 0.1, 0.14);
    const auto terms = milstein_terms(1.3, s, c);
    const auto walk = walk::iterated_integrals(path, 0.0, 0.5, c, 1.3);
    for (const auto& label : MilsteinTerms::kLabels) {
        CAPTURE(label);
        const auto alpha = Multiindex::parse(label.substr(1));
        CHECK(std::abs(terms[label] - walk.at(alpha)) < 1e-14);
    }
    // The one mixed ordering: a small jump followed by a tail jump gives I23
    // = F G y p(0.5) q(-2) and I32 only its compensator.
    CHECK(terms["I23"] == doctest::Approx(0.02 * 1.3 * (0.5 * -2.0 - 0.14 * 0.3 * -2.0)));
    CHECK(terms["I32"] == doctest::Approx(0.02 * 1.3 * (-0.14 * -2.0 * 0.2)));
}

TEST_CASE("all terms match the event walk on random steps") {
    const auto cases = fixtures::random_slice_cases(404, 300, 6);
    const auto c = coefficients(-0.5, 0.3, 0.2, 0.1, 0.14);
    double worst = 0.0;
    for (const auto& k : cases) {
        const auto s = slice_between(k.path, k.left, k.right);
        const auto terms = milstein_terms(0.8, s, c);
        const auto walk = walk::iterated_integrals(k.path, k.left, k.right, c, 0.8);
        for (const auto& label : MilsteinTerms::kLabels) {
            worst = std::max(worst, std::abs(terms[label] - walk.at(Multiindex::parse(label.substr(1)))));
        }
    }
    CHECK(worst < 1e-12);
}

// The printed double sums, evaluated literally with O(K^2) loops.
MilsteinTerms printed_terms(double y, const IntervalSlice& s, const LinearCoefficients& c) {
    const auto& J = s.jumps;
    const std::size_t K = J.size();
    auto in_b = [&](std::size_t k) { return J[k].ball == Ball::small ? 1.0 : 0.0; };
    auto in_tail = [&](std::size_t k) { return J[k].ball == Ball::tail ? 1.0 : 0.0; };
    auto p = [&](std::size_t k) { return c.p(J[k].mark); };
    auto q = [&](std::size_t k) { return c.q(J[k].mark); };
    auto next = [&](std::size_t n, Ball ball, bool want_w) {
        for (std::size_t k = n + 1; k < K; ++k) {
            if (J[k].ball == ball) return want_w ? J[k].w : J[k].time;
        }
        return want_w ? s.w_right : s.right;
    };
    double s31 = 0, s21 = 0, s33 = 0, s32a = 0, s32b = 0, s23a = 0, s23b = 0, s22a = 0, s22b = 0, s22c = 0;
    for (std::size_t n = 0; n < K; ++n) {
        double q_tail_le = 0, p_b_le = 0, q_tail_lt = 0, q_b_le = 0, q_b_lt = 0, p_b_lt = 0;
        for (std::size_t k = 0; k <= n; ++k) {
            q_tail_le += q(k) * in_tail(k);
            p_b_le += p(k) * in_b(k);
            q_b_le += q(k) * in_b(k);
            if (k < n) {
                q_tail_lt += q(k) * in_tail(k);
                q_b_lt += q(k) * in_b(k);
                p_b_lt += p(k) * in_b(k);
            }
        }
        s31 += q_tail_le * (next(n, Ball::tail, true) - J[n].w);
        s21 += p_b_le * (next(n, Ball::small, true) - J[n].w);
        s33 += q_tail_lt * q(n) * in_tail(n);
        s32a += q_tail_lt * p(n) * in_b(n);
        s32b += q_b_le * (next(n, Ball::small, false) - J[n].time);
        s23a += q_b_lt * p(n) * in_tail(n);
        s23b += (J[n].time - s.left) * q(n) * in_tail(n);
        s22a += p_b_lt * p(n) * in_b(n);
        s22b += (J[n].time - s.left) * p(n) * in_b(n);
        s22c += p_b_le * (next(n, Ball::small, false) - J[n].time);
    }
    MilsteinTerms t = milstein_terms(y, s, c, TermForm::exact);
    const double m1 = c.m1;
    t["I31"] = c.G * c.sigma * y * s31;
    t["I21"] = c.F * c.sigma * y * (s21 - m1 * (s.delta_w * s.delta - s.delta_z));
    t["I33"] = c.G * c.G * y * s33;
    t["I32"] = c.F * c.G * y * (s32a - m1 * s32b);
    t["I23"] = c.F * c.G * y * (s23a - m1 * s23b);
    t["I22"] = c.F * c.F * y * (s22a - m1 * s22b - m1 * s22c + 0.5 * m1 * m1 * s.delta * s.delta);
    return t;
}

TEST_CASE("as_typeset reproduces the printed sums") {
    const auto cases = fixtures::random_slice_cases(405, 400, 6);
    const auto c = coefficients(-0.5, 0.3, 0.2, 0.1, 0.14);
    int mixed = 0, mixed_differ = 0;
    for (const auto& k : cases) {
        const auto s = slice_between(k.path, k.left, k.right);
        const auto typeset = milstein_terms(1.0, s, c, TermForm::as_typeset);
        const auto printed = printed_terms(1.0, s, c);
        const auto exact = milstein_terms(1.0, s, c, TermForm::exact);
        double worst = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < typeset.values.size(); ++i) {
            worst = std::max(worst, std::abs(typeset.values[i] - printed.values[i]));
            diff = std::max(diff, std::abs(typeset.values[i] - exact.values[i]));
        }
        CHECK(worst < 1e-14);
        bool has_small = false, has_tail = false;
        for (const auto& j : s.jumps) (j.ball == Ball::small ? has_small : has_tail) = true;
        if (s.jumps.empty()) CHECK(diff == 0.0);
        if (has_small && has_tail) {
            ++mixed;
            mixed_differ += diff > 1e-12;
        }
    }
    CHECK(mixed > 50);
    CHECK(mixed_differ == mixed);
}

TEST_CASE("steps are linear in y") {
    const auto cases = fixtures::random_slice_cases(406, 100, 6);
    const auto c = coefficients(-0.5, 0.3, 0.2, 0.1, 0.14);
    for (const auto& k : cases) {
        const auto s = slice_between(k.path, k.left, k.right);
        for (Scheme sch : {Scheme::euler, Scheme::milstein}) {
            CHECK(scheme_step(sch, 2.0 * 0.7, s, c) == 2.0 * scheme_step(sch, 0.7, s, c));
        }
    }
}

TEST_CASE("compensated small-jump term is centred") {
    const ActiveModel model(fixtures::reference_model());
    const auto c = fixtures::reference_coefficients(model);
    std::vector<double> i2;
    const double delta = 0.25;
    for (std::size_t m = 0; m < 100000; ++m) {
        Rng rng = path_rng(31, m);
        const auto path = build_path(delta, 0, model, rng);
        i2.push_back(milstein_terms(1.0, slice_between(path, 0.0, delta), c)["I2"]);
    }
    const auto s = stats::summarize(i2);
    CHECK(std::abs(s.mean) < 3.0 * s.se);
}

TEST_CASE("run_scheme") {
    const ActiveModel model(fixtures::reference_model());
    const auto c = fixtures::reference_coefficients(model);
    Rng rng = path_rng(12, 0);
    const auto path = build_path(1.0, 8, model, rng);

    const auto one = run_scheme(Scheme::euler, dyadic_grid(1.0, 0), path, c, 1.5);
    REQUIRE(one.values.size() == 2);
    CHECK(one.values[0] == 1.5);
    CHECK(one.values[1] == euler_step(1.5, slice_between(path, 0.0, 1.0), c));

    const auto grid = dyadic_grid(1.0, 4);
    const auto full = run_scheme(Scheme::milstein, grid, path, c, 1.0, Sampling::grid_and_jumps);
    CHECK(full.times.size() == grid.size() + path.jumps().size());
    CHECK(std::is_sorted(full.times.begin(), full.times.end()));
    const auto coarse = run_scheme(Scheme::milstein, grid, path, c, 1.0);
    CHECK(coarse.times == grid);
    for (std::size_t i = 0, g = 0; i < full.times.size(); ++i) {
        if (full.times[i] == grid[g]) {
            CHECK(full.values[i] == coarse.values[g]);
            ++g;
        } else {
            // Partial step from the last grid point.
            const double left = grid[g - 1];
            CHECK(full.values[i] ==
                  milstein_step(coarse.values[g - 1], slice_between(path, left, full.times[i]), c));
        }
    }
    CHECK(full.order.twice == 2);

    // Deterministic Euler: y0 (1 + b delta)^n.
    const auto drift = coefficients(-0.5, 0, 0, 0);
    const auto det = run_scheme(Scheme::euler, dyadic_grid(1.0, 5), path, drift, 2.0);
    CHECK(det.values.back() == doctest::Approx(2.0 * std::pow(1.0 - 0.5 / 32.0, 32)).epsilon(1e-13));

    std::ostringstream csv;
    write_trajectory_csv(one, csv);
    CHECK(csv.str().rfind("time,value\n0,1.5\n1,", 0) == 0);
}

TEST_CASE("linear coefficient functions") {
    const auto c = coefficients(-0.5, 0.3, 0.2, 0.1);
    const std::vector<double> marks = {1.5, 0.4};  // x1 outermost (tail), x2 inner (small)
    CHECK(linear_coefficient(c, Multiindex{2, 1, 3}, 2.0, marks) ==
          doctest::Approx(2.0 * 0.2 * 0.4 * 0.3 * 0.1 * 1.5));
    CHECK(linear_coefficient(c, Multiindex{}, 2.0, {}) == 2.0);
    CHECK(linear_coefficient(c, Multiindex{0, 0}, 2.0, {}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(linear_coefficient(c, Multiindex{2}, 1.0, {}), std::invalid_argument);

    const auto set = hierarchical_set(StrongOrder::from_twice(2));
    const auto table = linear_coefficient_table(c, set);
    CHECK(table.size() == set.size());
    const std::vector<double> xy = {-2.0, 0.5};
    CHECK(table.at(Multiindex{3, 2})(1.0, xy) == doctest::Approx(0.1 * 0.5 * 0.2 * -2.0));
}
