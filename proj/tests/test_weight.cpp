#include <gtest/gtest.h>

#include "ocf/weight.hpp"

using ocf::Weight;

TEST(Weight, CanonicalFormAlwaysShowsDenominator) {
  EXPECT_EQ(Weight(6, 4).str(), "3/2");
  EXPECT_EQ(Weight(5).str(), "5/1");
  EXPECT_EQ(Weight(0).str(), "0/1");
  EXPECT_EQ(Weight(3, -6).str(), "-1/2");
}

TEST(Weight, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(Weight::parse("7"), Weight(7));
  EXPECT_EQ(Weight::parse("-3/9"), Weight(-1, 3));
  EXPECT_EQ(Weight::parse("0.125"), Weight(1, 8));
  EXPECT_EQ(Weight::parse("1e-9"), Weight(mpz_class(1), mpz_class("1000000000")));
  EXPECT_EQ(Weight::parse(" 2.5e1 "), Weight(25));
}

TEST(Weight, RejectsMalformedText) {
  EXPECT_THROW(Weight::parse("abc"), ocf::ParseError);
  EXPECT_THROW(Weight::parse("1/0"), ocf::Error);
  EXPECT_THROW(Weight::parse(""), ocf::ParseError);
  EXPECT_THROW(Weight::parse("1.2.3"), ocf::ParseError);
}

TEST(Weight, FromDoubleUsesShortestDecimal) {
  EXPECT_EQ(Weight::from_double(0.1), Weight(1, 10));
  EXPECT_EQ(Weight::from_double(-2.5), Weight(-5, 2));
  EXPECT_THROW(Weight::from_double(std::nan("")), ocf::Error);
  EXPECT_THROW(Weight::from_double(INFINITY), ocf::Error);
}

TEST(Weight, ArithmeticIsExact) {
  Weight third(1, 3);
  EXPECT_EQ(third + third + third, Weight(1));
  EXPECT_EQ(Weight(2, 3) * Weight(3, 4), Weight(1, 2));
  EXPECT_EQ(Weight(1) / Weight(3) - third, Weight(0));
  EXPECT_EQ(Weight::pow(Weight(3, 2), 3), Weight(27, 8));
  Weight w(3, 4);
  w.mul_pow2(2);
  EXPECT_EQ(w, Weight(3));
}

TEST(Weight, OrderingAndSign) {
  EXPECT_LT(Weight(-1, 2), Weight(0));
  EXPECT_GT(Weight(2, 3), Weight(3, 5));
  EXPECT_TRUE(Weight(0).is_zero());
  EXPECT_TRUE(Weight(-7).is_negative());
  EXPECT_EQ(Weight(-7).sign(), -1);
}

TEST(Weight, ParseStrRoundTrip) {
  for (long p = -20; p <= 20; ++p) {
    for (long q = 1; q <= 12; ++q) {
      const Weight w(p, q);
      EXPECT_EQ(Weight::parse(w.str()), w);
    }
  }
}

TEST(Weight, HugeValuesStayExact) {
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 20, 20);
  const Weight w(big);
  EXPECT_EQ(w.str(), "104857600000000000000000000/1");
  EXPECT_EQ((w + Weight(1)) - w, Weight(1));
}
