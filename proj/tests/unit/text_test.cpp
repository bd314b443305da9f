#include <gtest/gtest.h>

#include <algorithm>

#include "rvsc/text.hpp"

using rvsc::natural_less;
using rvsc::normalize_label;

TEST(NormalizeLabel, CaseAndWhitespace) {
  EXPECT_EQ(normalize_label("  Develop CPU Core IP "), "develop cpu core ip");
  EXPECT_EQ(normalize_label("TSMC"), "tsmc");
  EXPECT_EQ(normalize_label("Run\t EDA\n\nSimulation"), "run eda simulation");
}

TEST(NormalizeLabel, StripsOuterPunctuation) {
  EXPECT_EQ(normalize_label("Compliance Verified?"), "compliance verified");
  EXPECT_EQ(normalize_label("\"I/O Interfaces\"."), "i/o interfaces");
  EXPECT_EQ(normalize_label("System-on-Chip"), "system-on-chip");
  EXPECT_EQ(normalize_label("?!"), "");
}

TEST(NormalizeLabel, Idempotent) {
  for (const char *s : {"  A  b ", "Fabricate Silicon Wafers!", "x", "", " -- Tape-out -- "})
    EXPECT_EQ(normalize_label(normalize_label(s)), normalize_label(s)) << s;
}

TEST(Trim, Basic) {
  EXPECT_EQ(rvsc::trim("  a b \t\r\n"), "a b");
  EXPECT_EQ(rvsc::trim(""), "");
}

TEST(SplitLines, HandlesCrLfAndMissingFinalNewline) {
  auto lines = rvsc::split_lines("a\r\nb\nc");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[1], "b");
  EXPECT_EQ(lines[2], "c");
}

TEST(NaturalLess, DigitRunsCompareNumerically) {
  EXPECT_TRUE(natural_less("n2", "n10"));
  EXPECT_FALSE(natural_less("n10", "n2"));
  EXPECT_TRUE(natural_less("9", "14"));
  EXPECT_FALSE(natural_less("a", "a"));
  std::vector<std::string> ids{"r10", "r1", "r2", "a", "r01"};
  std::sort(ids.begin(), ids.end(), rvsc::NaturalLess{});
  EXPECT_EQ(ids.front(), "a");
  EXPECT_EQ(ids.back(), "r10");
}
