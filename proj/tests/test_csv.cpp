// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "flampred/csv.hpp"

using namespace flampred;

TEST(Csv, QuotedFieldsAndCrlf) {
  auto rows = csv::parse("\xEF\xBB\xBFname,x\r\n\"1,4-Poly(butadiene)\",2\r\n\"say \"\"hi\"\"\",3\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "name");
  EXPECT_EQ(rows[1][0], "1,4-Poly(butadiene)");
  EXPECT_EQ(rows[2][0], "say \"hi\"");
  EXPECT_EQ(rows[2][1], "3");
}

TEST(Csv, BlankLinesSkipped) {
  auto rows = csv::parse("a\n\n1\n\n");
  ASSERT_EQ(rows.size(), 2u);
}

TEST(Csv, EscapeRoundTrip) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "with\"quote"});
  auto rows = csv::parse(out.str());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], "with,comma");
  EXPECT_EQ(rows[0][2], "with\"quote");
}

TEST(Csv, FormatDoubleRoundTripsExactly) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    double v = dist(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    double back = 0;
    ASSERT_TRUE(csv::parse_double(csv::format_double(v), back));
    ASSERT_EQ(back, v);
  }
}

TEST(Csv, ParseDoubleRejectsJunk) {
  double v = 0;
  EXPECT_TRUE(csv::parse_double(" 1.5 ", v));
  EXPECT_EQ(v, 1.5);
  EXPECT_TRUE(csv::parse_double("+2", v));
  EXPECT_EQ(v, 2.0);
  EXPECT_FALSE(csv::parse_double("1.5x", v));
  EXPECT_FALSE(csv::parse_double("", v));
  EXPECT_FALSE(csv::parse_double("abc", v));
}
