#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace itojump {

/// Region of the jump space an integrator acts on: the unit ball B = {|x| < 1}
/// (or its truncation) for compensated small jumps, the tail B' = {|x| >= 1}.
enum class Ball { small, tail };

/**
 * Word over {0,1,2,3} naming an iterated stochastic integral.
 *
 * Digit meaning: 0 -> ds, 1 -> dW, 2 -> compensated small-jump measure,
 * 3 -> tail-jump measure. The last digit is the outermost integrator.
 * The empty word is the identity index and renders as "v".
 *
 * Ordering is canonical: shorter words first, then lexicographic.
 */
class Multiindex {
public:
    Multiindex() = default;
    Multiindex(std::initializer_list<int> digits);
    explicit Multiindex(std::vector<std::uint8_t> digits);

    /// Parses "213" or "v". Throws std::invalid_argument on any other character.
    static Multiindex parse(std::string_view text);

    std::size_t length() const noexcept { return digits_.size(); }
    bool empty() const noexcept { return digits_.empty(); }
    const std::vector<std::uint8_t>& digits() const noexcept { return digits_; }
    int operator[](std::size_t i) const { return digits_.at(i); }

    std::string to_string() const;

    friend bool operator==(const Multiindex&, const Multiindex&) = default;
    friend std::strong_ordering operator<=>(const Multiindex& a, const Multiindex& b);

private:
    std::vector<std::uint8_t> digits_;
};

Multiindex operator+(const Multiindex& a, const Multiindex& b);

struct Counts {
    int s = 0;        // zeros (time integrals)
    int w = 0;        // ones (Wiener integrals)
    int n_tilde = 0;  // twos (compensated small jumps)
    int n = 0;        // threes (tail jumps)
    int k = 0;        // n_tilde + n

    friend bool operator==(const Counts&, const Counts&) = default;
};

Counts counts(const Multiindex& alpha);

/// alpha with its last digit removed. Throws std::domain_error on v.
Multiindex drop_last(const Multiindex& alpha);
/// alpha with its first digit removed. Throws std::domain_error on v.
Multiindex drop_first(const Multiindex& alpha);

/// Subsequence of jump digits (2 and 3); its length is k(alpha).
Multiindex jump_digits(const Multiindex& alpha);

/// Integration region of the i-th mark argument, 1 <= i <= k(alpha): the unit
/// ball when the (k+1-i)-th jump digit is 2, the tail when it is 3.
Ball ball_at(const Multiindex& alpha, int i);

/// Strong order gamma stored as the integer 2*gamma.
struct StrongOrder {
    int twice = 1;

    static StrongOrder from_twice(int twice);
    double value() const noexcept { return twice / 2.0; }
};

/// Membership test for A_gamma: l + s <= 2 gamma, or l = s = gamma + 1/2.
bool in_hierarchical_set(const Multiindex& alpha, StrongOrder order);

class IndexSet {
public:
    using container = std::set<Multiindex>;
    using const_iterator = container::const_iterator;

    IndexSet() = default;
    IndexSet(std::initializer_list<Multiindex> members) : members_(members) {}
    explicit IndexSet(container members) : members_(std::move(members)) {}

    bool contains(const Multiindex& alpha) const { return members_.count(alpha) != 0; }
    std::size_t size() const noexcept { return members_.size(); }
    const_iterator begin() const { return members_.begin(); }
    const_iterator end() const { return members_.end(); }
    void insert(Multiindex alpha) { members_.insert(std::move(alpha)); }

    /// v is a member and every non-empty member keeps drop_first inside the set.
    bool is_hierarchical() const;
    std::size_t max_length() const;

    /// Members rendered in canonical order, e.g. "{v,0,1,2,3}".
    std::string to_string() const;

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    container members_;
};

/// A_gamma. Every member has length <= 2*gamma + 1, so enumeration stops there.
IndexSet hierarchical_set(StrongOrder order);

/// B(A) = { alpha : alpha not in A, drop_first(alpha) in A }, built by
/// prefixing one digit to members of A. Throws std::domain_error if A is not
/// hierarchical.
IndexSet remainder_set(const IndexSet& hierarchical);

/// Pi(alpha): every binary word of length n_tilde(alpha), words being
/// Multiindex values over {0,1}. Returns {v} when alpha has no 2-digits.
std::vector<Multiindex> subscript_set(const Multiindex& alpha);

}  // namespace itojump
