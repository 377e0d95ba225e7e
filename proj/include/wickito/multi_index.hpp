#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wickito {

// Finitely supported sequence (alpha_1, alpha_2, ...) of nonnegative integers.
//
// Modes are numbered from 1, matching the weights (2*1)^{a_1} (2*2)^{a_2} ...
// Storage is canonical: trailing zeros are trimmed, so two indices are equal
// iff their stored entries are equal.
//
// Ordering is graded: lower order |alpha| first, then descending
// lexicographic on the entries, so that within order 2 the sequence is
// (2), (1,1), (0,2), (1,0,1), ...
class MultiIndex {
public:
    using value_type = std::uint32_t;

    MultiIndex() = default;
    MultiIndex(std::initializer_list<value_type> entries);
    explicit MultiIndex(std::vector<value_type> entries);

    // epsilon^(k): 1 at mode k (k >= 1), zero elsewhere.
    static MultiIndex unit(std::size_t mode);

    // Entry at mode k (1-based); zero beyond the stored length.
    value_type operator()(std::size_t mode) const noexcept {
        return mode >= 1 && mode <= entries_.size() ? entries_[mode - 1] : 0;
    }

    std::span<const value_type> entries() const noexcept { return entries_; }
    // Position of the last nonzero entry (0 for the zero index).
    std::size_t length() const noexcept { return entries_.size(); }
    std::uint64_t order() const noexcept;
    bool is_zero() const noexcept { return entries_.empty(); }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

    std::string to_string() const;
    static MultiIndex parse(std::string_view text);

    std::size_t hash() const noexcept;

private:
    void trim();
    std::vector<value_type> entries_;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& a) const noexcept { return a.hash(); }
};

// alpha! = prod_j alpha_j!. Throws TruncationOverflow if it does not fit in 64 bits.
std::uint64_t factorial(const MultiIndex& alpha);

// log(alpha!), usable for any order.
double log_factorial(const MultiIndex& alpha);

// (2N)^{k alpha} = prod_j (2j)^{k alpha_j}.
double weight(const MultiIndex& alpha, double k);

// log of weight(alpha, k).
double log_weight(const MultiIndex& alpha, double k);

MultiIndex add(const MultiIndex& a, const MultiIndex& b);
inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) { return add(a, b); }

// Number of indices with |alpha| <= max_order and length <= max_length,
// i.e. C(max_order + max_length, max_length). Saturates at SIZE_MAX.
std::size_t count_indices(std::size_t max_order, std::size_t max_length);

inline constexpr std::size_t kDefaultEnumerationCap = 20'000'000;

// All alpha with |alpha| <= max_order and length <= max_length, in canonical
// order. Throws TruncationOverflow when the count exceeds cap.
std::vector<MultiIndex> enumerate(std::size_t max_order, std::size_t max_length,
                                  std::size_t cap = kDefaultEnumerationCap);

}  // namespace wickito
