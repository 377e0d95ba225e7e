#include "wickito/errors.hpp"
#include "wickito/multi_index.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace wickito;

TEST(MultiIndex, TrailingZerosAreTrimmed) {
    const MultiIndex a{1, 0, 2, 0, 0};
    EXPECT_EQ(a.length(), 3u);
    EXPECT_EQ(a.order(), 3u);
    EXPECT_EQ(a, (MultiIndex{1, 0, 2}));
    EXPECT_TRUE(MultiIndex{}.is_zero());
    EXPECT_TRUE((MultiIndex{0, 0}).is_zero());
}

TEST(MultiIndex, OneBasedAccess) {
    const MultiIndex a{3, 0, 5};
    EXPECT_EQ(a(1), 3u);
    EXPECT_EQ(a(2), 0u);
    EXPECT_EQ(a(3), 5u);
    EXPECT_EQ(a(4), 0u);
    EXPECT_EQ(a(0), 0u);
    EXPECT_EQ(MultiIndex::unit(4), (MultiIndex{0, 0, 0, 1}));
}

TEST(MultiIndex, FactorialAndWeight) {
    const MultiIndex a{2, 0, 3};
    EXPECT_EQ(factorial(a), 12u);
    EXPECT_NEAR(log_factorial(a), std::log(12.0), 1e-14);
    // (2N)^{k alpha} = 2^{2k} 6^{3k}
    EXPECT_NEAR(weight(a, 1.0), 4.0 * 216.0, 1e-10);
    EXPECT_NEAR(weight(a, -2.0), 1.0 / (16.0 * 46656.0), 1e-18);
    EXPECT_NEAR(log_weight(a, 0.5), 0.5 * (2 * std::log(2.0) + 3 * std::log(6.0)), 1e-14);
    EXPECT_EQ(factorial(MultiIndex{}), 1u);
}

TEST(MultiIndex, FactorialOverflowThrows) { EXPECT_THROW(factorial(MultiIndex{30}), std::overflow_error); }

TEST(MultiIndex, Addition) {
    EXPECT_EQ((MultiIndex{1, 2}) + (MultiIndex{0, 1, 4}), (MultiIndex{1, 3, 4}));
    EXPECT_EQ(MultiIndex{} + MultiIndex::unit(2), MultiIndex::unit(2));
}

TEST(MultiIndex, GradedOrdering) {
    // lower order first
    EXPECT_LT(MultiIndex{}, MultiIndex::unit(5));
    EXPECT_LT(MultiIndex::unit(9), (MultiIndex{2}));
    // same order: the orders agree on a fixed strict total order
    const MultiIndex a{2}, b{1, 1}, c{0, 2};
    EXPECT_NE(a <=> b, std::strong_ordering::equal);
    EXPECT_TRUE((a < b && b < c) || (c < b && b < a));
}

TEST(MultiIndex, StringRoundTrip) {
    const MultiIndex a{1, 0, 2};
    EXPECT_EQ(a.to_string(), "1,0,2");
    EXPECT_EQ(MultiIndex::parse("1,0,2"), a);
    EXPECT_EQ(MultiIndex::parse("0"), MultiIndex{});
    EXPECT_EQ(MultiIndex::parse(""), MultiIndex{});
    EXPECT_THROW(MultiIndex::parse("1,x"), ParameterError);
    EXPECT_THROW(MultiIndex::parse("-1"), ParameterError);
}

TEST(MultiIndex, CountMatchesBinomial) {
    // number of alpha in N^m with |alpha| <= q is C(q + m, m)
    EXPECT_EQ(count_indices(2, 400), 80601u);
    EXPECT_EQ(count_indices(3, 4), 35u);
    EXPECT_EQ(count_indices(0, 7), 1u);
    EXPECT_EQ(count_indices(12, 9), 293930u);
}

TEST(MultiIndex, EnumerateIsCanonicalAndComplete) {
    const auto all = enumerate(3, 4);
    ASSERT_EQ(all.size(), count_indices(3, 4));
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    std::set<std::string> seen;
    for (const auto& a : all) {
        EXPECT_LE(a.order(), 3u);
        EXPECT_LE(a.length(), 4u);
        seen.insert(a.to_string());
    }
    EXPECT_EQ(seen.size(), all.size());
}

TEST(MultiIndex, EnumerateCapThrows) { EXPECT_THROW(enumerate(6, 100, 1000), TruncationOverflow); }
