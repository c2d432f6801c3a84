#include "itojump/multiindex.hpp"

#include <algorithm>
#include <stdexcept>

namespace itojump {

namespace {

void check_digit(int d) {
    if (d < 0 || d > 3) {
        throw std::invalid_argument("multiindex digit out of range: " + std::to_string(d));
    }
}

}  // namespace

Multiindex::Multiindex(std::initializer_list<int> digits) {
    digits_.reserve(digits.size());
    for (int d : digits) {
        check_digit(d);
        digits_.push_back(static_cast<std::uint8_t>(d));
    }
}

Multiindex::Multiindex(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {
    for (auto d : digits_) check_digit(d);
}

Multiindex Multiindex::parse(std::string_view text) {
    if (text == "v") return {};
    std::vector<std::uint8_t> digits;
    digits.reserve(text.size());
    for (char c : text) {
        if (c < '0' || c > '3') {
            throw std::invalid_argument("cannot parse multiindex '" + std::string(text) + "'");
        }
        digits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Multiindex(std::move(digits));
}

std::string Multiindex::to_string() const {
    if (digits_.empty()) return "v";
    std::string out;
    out.reserve(digits_.size());
    for (auto d : digits_) out.push_back(static_cast<char>('0' + d));
    return out;
}

std::strong_ordering operator<=>(const Multiindex& a, const Multiindex& b) {
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.digits_.begin(), a.digits_.end(),
                                                  b.digits_.begin(), b.digits_.end());
}

Multiindex operator+(const Multiindex& a, const Multiindex& b) {
    std::vector<std::uint8_t> digits = a.digits();
    digits.insert(digits.end(), b.digits().begin(), b.digits().end());
    return Multiindex(std::move(digits));
}

Counts counts(const Multiindex& alpha) {
    Counts c;
    for (auto d : alpha.digits()) {
        switch (d) {
            case 0: ++c.s; break;
            case 1: ++c.w; break;
            case 2: ++c.n_tilde; break;
            default: ++c.n; break;
        }
    }
    c.k = c.n_tilde + c.n;
    return c;
}

Multiindex drop_last(const Multiindex& alpha) {
    if (alpha.empty()) throw std::domain_error("drop_last of the empty multiindex");
    const auto& d = alpha.digits();
    return Multiindex(std::vector<std::uint8_t>(d.begin(), d.end() - 1));
}

Multiindex drop_first(const Multiindex& alpha) {
    if (alpha.empty()) throw std::domain_error("drop_first of the empty multiindex");
    const auto& d = alpha.digits();
    return Multiindex(std::vector<std::uint8_t>(d.begin() + 1, d.end()));
}

Multiindex jump_digits(const Multiindex& alpha) {
    std::vector<std::uint8_t> out;
    for (auto d : alpha.digits()) {
        if (d == 2 || d == 3) out.push_back(d);
    }
    return Multiindex(std::move(out));
}

Ball ball_at(const Multiindex& alpha, int i) {
    const Multiindex jumps = jump_digits(alpha);
    const int k = static_cast<int>(jumps.length());
    if (i < 1 || i > k) {
        throw std::domain_error("ball_at: position " + std::to_string(i) + " outside 1.." +
                                std::to_string(k) + " for " + alpha.to_string());
    }
    return jumps[static_cast<std::size_t>(k - i)] == 2 ? Ball::small : Ball::tail;
}

StrongOrder StrongOrder::from_twice(int twice) {
    if (twice < 1) throw std::domain_error("strong order must be a positive half-integer");
    return StrongOrder{twice};
}

bool in_hierarchical_set(const Multiindex& alpha, StrongOrder order) {
    const int l = static_cast<int>(alpha.length());
    const int s = counts(alpha).s;
    // l = s = gamma + 1/2  <=>  2l = 2gamma + 1
    return l + s <= order.twice || (l == s && 2 * l == order.twice + 1);
}

bool IndexSet::is_hierarchical() const {
    if (!contains(Multiindex{})) return false;
    return std::all_of(members_.begin(), members_.end(), [this](const Multiindex& a) {
        return a.empty() || contains(drop_first(a));
    });
}

std::size_t IndexSet::max_length() const {
    return members_.empty() ? 0 : members_.rbegin()->length();
}

std::string IndexSet::to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& a : members_) {
        if (!first) out += ',';
        out += a.to_string();
        first = false;
    }
    return out + "}";
}

IndexSet hierarchical_set(StrongOrder order) {
    const std::size_t max_len = static_cast<std::size_t>(order.twice) + 1;
    IndexSet out;
    // Grow level by level; every member's tail is a member, so extending
    // members of the previous level by a leading digit reaches all of A_gamma.
    std::vector<Multiindex> level{Multiindex{}};
    out.insert(Multiindex{});
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Multiindex> next;
        for (const auto& tail : level) {
            for (int d = 0; d < 4; ++d) {
                Multiindex alpha = Multiindex{d} + tail;
                if (in_hierarchical_set(alpha, order)) {
                    out.insert(alpha);
                    next.push_back(std::move(alpha));
                }
            }
        }
        level = std::move(next);
    }
    return out;
}

IndexSet remainder_set(const IndexSet& hierarchical) {
    if (!hierarchical.is_hierarchical()) {
        throw std::domain_error("remainder_set requires a hierarchical set, got " +
                                hierarchical.to_string());
    }
    IndexSet out;
    for (const auto& beta : hierarchical) {
        for (int d = 0; d < 4; ++d) {
            Multiindex alpha = Multiindex{d} + beta;
            if (!hierarchical.contains(alpha)) out.insert(std::move(alpha));
        }
    }
    return out;
}

std::vector<Multiindex> subscript_set(const Multiindex& alpha) {
    const int bits = counts(alpha).n_tilde;
    std::vector<Multiindex> out;
    out.reserve(std::size_t{1} << bits);
    for (std::uint64_t word = 0; word < (std::uint64_t{1} << bits); ++word) {
        std::vector<std::uint8_t> digits(static_cast<std::size_t>(bits));
        for (int b = 0; b < bits; ++b) {
            digits[static_cast<std::size_t>(b)] =
                static_cast<std::uint8_t>((word >> (bits - 1 - b)) & 1U);
        }
        out.emplace_back(std::move(digits));
    }
    return out;
}

}  // namespace itojump
