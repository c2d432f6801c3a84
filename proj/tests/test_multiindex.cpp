#include <doctest.h>

#include <set>
#include <sstream>

#include "itojump/multiindex.hpp"
#include "support/brute_sets.hpp"

using namespace itojump;

namespace {

IndexSet parse_list(std::string_view csv) {
    IndexSet out;
    std::string word;
    std::istringstream in{std::string(csv)};
    while (std::getline(in, word, ',')) out.insert(Multiindex::parse(word));
    return out;
}

std::set<Multiindex> as_set(const IndexSet& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("counts tallies digits") {
    CHECK(counts(Multiindex{}) == Counts{0, 0, 0, 0, 0});
    CHECK(counts(Multiindex{2, 1, 3}) == Counts{0, 1, 1, 1, 2});
    CHECK(counts(Multiindex{2, 0, 1, 3}) == Counts{1, 1, 1, 1, 2});
}

TEST_CASE("counts is additive under concatenation") {
    const auto words = brute::all_words(3);
    for (std::size_t i = 0; i < words.size(); i += 7) {
        for (std::size_t j = 0; j < words.size(); j += 11) {
            const auto a = counts(words[i]), b = counts(words[j]), ab = counts(words[i] + words[j]);
            CHECK(ab.s == a.s + b.s);
            CHECK(ab.w == a.w + b.w);
            CHECK(ab.n_tilde == a.n_tilde + b.n_tilde);
            CHECK(ab.n == a.n + b.n);
            CHECK(ab.k == ab.n_tilde + ab.n);
            CHECK(ab.s + ab.w + ab.n_tilde + ab.n == static_cast<int>((words[i] + words[j]).length()));
        }
    }
}

TEST_CASE("parse and render round trip") {
    CHECK(Multiindex::parse("v").empty());
    CHECK(Multiindex::parse("").empty());
    CHECK(Multiindex::parse("213") == Multiindex{2, 1, 3});
    CHECK(Multiindex{2, 1, 3}.to_string() == "213");
    CHECK(Multiindex{}.to_string() == "v");
    CHECK_THROWS_AS(Multiindex::parse("24"), std::invalid_argument);
    CHECK_THROWS_AS(Multiindex({4}), std::invalid_argument);
}

TEST_CASE("drop_last and drop_first") {
    CHECK(drop_last(Multiindex{2, 1, 3}) == Multiindex{2, 1});
    CHECK(drop_first(Multiindex{2, 1, 3}) == Multiindex{1, 3});
    CHECK(drop_last(Multiindex{0}).empty());
    CHECK_THROWS_AS(drop_last(Multiindex{}), std::domain_error);
    CHECK_THROWS_AS(drop_first(Multiindex{}), std::domain_error);
}

TEST_CASE("jump digits keep 2 and 3") {
    CHECK(jump_digits(Multiindex{2, 0, 1, 3}) == Multiindex{2, 3});
    CHECK(jump_digits(Multiindex{0, 1}).empty());
    CHECK(jump_digits(Multiindex{3, 3, 2}) == Multiindex{3, 3, 2});
}

TEST_CASE("ball_at reads jump digits from the outermost side") {
    CHECK(ball_at(Multiindex{2, 1, 3}, 1) == Ball::tail);
    CHECK(ball_at(Multiindex{2, 1, 3}, 2) == Ball::small);
    CHECK(ball_at(Multiindex{3}, 1) == Ball::tail);
    CHECK_THROWS_AS(ball_at(Multiindex{2, 1, 3}, 0), std::domain_error);
    CHECK_THROWS_AS(ball_at(Multiindex{2, 1, 3}, 3), std::domain_error);
    CHECK_THROWS_AS(ball_at(Multiindex{0, 1}, 1), std::domain_error);

    // Definition evaluated directly: B_i is B when beta_{k+1-i} == 2.
    for (const auto& a : brute::all_words(4)) {
        const auto beta = jump_digits(a);
        const int k = static_cast<int>(beta.length());
        for (int i = 1; i <= k; ++i) {
            const Ball expected = beta[static_cast<std::size_t>(k - i)] == 2 ? Ball::small : Ball::tail;
            CHECK(ball_at(a, i) == expected);
        }
    }
}

TEST_CASE("hierarchical sets match the listings") {
    CHECK(hierarchical_set(StrongOrder::from_twice(1)).to_string() == "{v,0,1,2,3}");
    CHECK(hierarchical_set(StrongOrder::from_twice(2)) ==
          parse_list("v,0,1,2,3,11,21,31,12,22,32,13,23,33"));
    CHECK_THROWS(StrongOrder::from_twice(0));
}

TEST_CASE("hierarchical sets match predicate enumeration") {
    for (int twice : {1, 2, 3, 4}) {
        CAPTURE(twice);
        const auto a = hierarchical_set(StrongOrder::from_twice(twice));
        CHECK(as_set(a) == brute::hierarchical(twice));
        CHECK(a.is_hierarchical());
        CHECK(static_cast<int>(a.max_length()) <= twice + 1);
        for (const auto& alpha : a) {
            if (!alpha.empty()) CHECK(a.contains(drop_first(alpha)));
        }
    }
}

TEST_CASE("remainder sets") {
    const auto a_half = hierarchical_set(StrongOrder::from_twice(1));
    CHECK(remainder_set(a_half) == parse_list("00,10,20,30,01,11,21,31,02,12,22,32,03,13,23,33"));

    const auto a_one = hierarchical_set(StrongOrder::from_twice(2));
    const auto b_one = remainder_set(a_one);
    const auto listed = parse_list(
        "00,10,20,30,01,02,03,011,111,211,311,021,121,221,321,031,131,231,331,"
        "012,112,212,312,022,122,222,322,032,132,232,332,013,113,213,313,"
        "023,123,223,323,033,133,233,333");
    CHECK(listed.size() == 43);
    CHECK(b_one == listed);

    CHECK(remainder_set(IndexSet{Multiindex{}}) == parse_list("0,1,2,3"));

    for (int twice : {1, 2, 3, 4}) {
        const auto a = hierarchical_set(StrongOrder::from_twice(twice));
        const auto b = remainder_set(a);
        CHECK(as_set(b) == brute::remainder(as_set(a), twice + 2));
        for (const auto& alpha : b) {
            CHECK_FALSE(a.contains(alpha));
            CHECK(a.contains(drop_first(alpha)));
        }
    }
}

TEST_CASE("remainder_set rejects non-hierarchical input") {
    CHECK_THROWS_AS(remainder_set(IndexSet{Multiindex{0}}), std::domain_error);
    CHECK_THROWS_AS(remainder_set(parse_list("v,21")), std::domain_error);
}

TEST_CASE("subscript sets") {
    const auto one = subscript_set(Multiindex{2});
    CHECK(one == std::vector<Multiindex>{Multiindex{0}, Multiindex{1}});
    const auto two = subscript_set(Multiindex{2, 1, 2});
    CHECK(two == std::vector<Multiindex>{Multiindex{0, 0}, Multiindex{0, 1}, Multiindex{1, 0},
                                         Multiindex{1, 1}});
    CHECK(subscript_set(Multiindex{3, 0}) == std::vector<Multiindex>{Multiindex{}});
    for (const auto& a : brute::all_words(4)) {
        CHECK(subscript_set(a).size() == (std::size_t{1} << counts(a).n_tilde));
    }
}

TEST_CASE("canonical ordering: length then lexicographic") {
    CHECK(Multiindex{3} < Multiindex{0, 0});
    CHECK(Multiindex{} < Multiindex{0});
    CHECK(Multiindex{1, 2} < Multiindex{2, 1});
}
