#include <gtest/gtest.h>

#include <random>

#include "linexp/dyadic_io.hpp"
#include "support/random.hpp"

using linexp::Dyadic;
using linexp::Integer;
using linexp::parse_dyadic;

TEST(DyadicIo, ParsesEachForm) {
    EXPECT_EQ(parse_dyadic("0"), Dyadic(0));
    EXPECT_EQ(parse_dyadic("-17"), Dyadic(-17));
    EXPECT_EQ(parse_dyadic("0x1p0"), Dyadic(1));
    EXPECT_EQ(parse_dyadic("0x3p-4"), Dyadic(Integer(3), 4));
    EXPECT_EQ(parse_dyadic("-0xBp-6"), Dyadic(Integer(-11), 6));
    EXPECT_EQ(parse_dyadic("0x1p+3"), Dyadic(8));
    EXPECT_EQ(parse_dyadic("0xff"), Dyadic(255));
    EXPECT_EQ(parse_dyadic("1.0000000000000000"), Dyadic(1));
    EXPECT_EQ(parse_dyadic("-0.011"), Dyadic(Integer(-3), 3));
    EXPECT_EQ(parse_dyadic("+.1"), Dyadic(Integer(1), 1));
}

TEST(DyadicIo, RejectsMalformedText) {
    for (const char* bad : {"", "-", "0x", "0xp3", "0x1p", "0x1p-", "1.5", "0.12", "abc", "1e5", "0x1q3", ".", "--1",
                            "0x1p99999999999999999999"}) {
        EXPECT_THROW((void)parse_dyadic(bad), linexp::parse_error) << bad;
    }
}

TEST(DyadicIo, FormatsBinaryWithExactlyNBits) {
    EXPECT_EQ(linexp::format_bin(Dyadic(1), 16), "1.0000000000000000");
    EXPECT_EQ(linexp::format_bin(Dyadic(Integer(-3), 3), 4), "-0.0110");
    EXPECT_EQ(linexp::format_bin(Dyadic(Integer(13), 3), 2), "1.10");
    EXPECT_EQ(linexp::format_bin(Dyadic(5), 0), "101.");
    EXPECT_EQ(parse_dyadic("101."), Dyadic(5));
}

TEST(DyadicIo, FormatsHexAndDecimal) {
    EXPECT_EQ(linexp::format_hex(Dyadic(Integer(3), 4), 8), "0x30p-8");
    EXPECT_EQ(linexp::format_hex(Dyadic(Integer(-11), 6), 6), "-0xbp-6");
    EXPECT_EQ(linexp::format_dec(Dyadic(Integer(1), 1), 4), "0.50");
    EXPECT_EQ(linexp::format_dec(Dyadic(Integer(-1), 2), 8), "-0.250");
    EXPECT_EQ(linexp::format_dec(Dyadic(Integer(1), 10), 10), "0.0009");
}

TEST(DyadicIo, BinaryAndHexRoundTrip) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t scale = static_cast<std::size_t>(rng() % 300);
        const Dyadic x = linexp::testing::random_dyadic(rng, scale, static_cast<std::ptrdiff_t>(rng() % 70));
        const std::size_t bits = scale + static_cast<std::size_t>(rng() % 5);
        ASSERT_EQ(parse_dyadic(linexp::format_bin(x, bits)), x);
        ASSERT_EQ(parse_dyadic(linexp::format_hex(x, bits)), x);
        // Same representation, same text.
        ASSERT_EQ(linexp::format_bin(parse_dyadic(linexp::format_bin(x, bits)), bits), linexp::format_bin(x, bits));
    }
}
