#include "ckt/config.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ckt;

TEST(Ini, SectionsCommentsAndWhitespace) {
  std::istringstream in(
      "# comment\n"
      "top = 1\n"
      "[model]\n"
      "  preset =  nzt-equal  \n"
      "; another\n"
      "j=10\n"
      "\n"
      "[grid]\n"
      "eps = 0:5:0.05\n");
  const IniValues v = parse_ini(in);
  EXPECT_EQ(v.at("top"), "1");
  EXPECT_EQ(v.at("model.preset"), "nzt-equal");
  EXPECT_EQ(v.at("model.j"), "10");
  EXPECT_EQ(v.at("grid.eps"), "0:5:0.05");
}

TEST(Ini, Errors) {
  std::istringstream a("[model\nj = 1\n");
  EXPECT_THROW(parse_ini(a), ConfigError);
  std::istringstream b("[model]\njust words\n");
  EXPECT_THROW(parse_ini(b), ConfigError);
  std::istringstream c("[model]\nj = 1\nj = 2\n");
  EXPECT_THROW(parse_ini(c), ConfigError);
  std::istringstream d("= 3\n");
  EXPECT_THROW(parse_ini(d), ConfigError);
  EXPECT_THROW(load_ini("/nonexistent/file.ini"), ConfigError);
}

TEST(Range, InclusiveEndpoint) {
  const auto g = parse_range("0:3:0.05");
  ASSERT_EQ(g.size(), 61u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 3.0);
  EXPECT_DOUBLE_EQ(g[24], 1.2);
  const auto h = parse_range("0:1:0.3");
  ASSERT_EQ(h.size(), 4u);
  EXPECT_NEAR(h.back(), 0.9, 1e-15);
  EXPECT_EQ(parse_range("1.5").size(), 1u);
  EXPECT_EQ(parse_range("2:2:0.1").size(), 1u);
}

TEST(Range, Errors) {
  EXPECT_THROW(parse_range("0:1"), ConfigError);
  EXPECT_THROW(parse_range("0:1:0"), ConfigError);
  EXPECT_THROW(parse_range("1:0:0.1"), ConfigError);
  EXPECT_THROW(parse_range("a:1:0.1"), ConfigError);
  EXPECT_THROW(parse_range("0:1:-0.1"), ConfigError);
  EXPECT_THROW(parse_range("0:1e9:1e-3"), ConfigError);
}

TEST(List, ParsesAndRejects) {
  const auto v = parse_list("0.2, 0.1,0.05");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[1], 0.1);
  EXPECT_THROW(parse_list("0.2,,0.1"), ConfigError);
  EXPECT_THROW(parse_list("nan"), ConfigError);
}

TEST(Presets, ExpandToTorsions) {
  EXPECT_EQ(preset_model(parse_preset("fp")).kappa1, 0.0);
  const ModelParams eq = preset_model(Preset::nzt_equal);
  EXPECT_EQ(eq.kappa1, 1.0);
  EXPECT_EQ(eq.kappa2, 1.0);
  const ModelParams op = preset_model(Preset::nzt_opposite);
  EXPECT_EQ(op.kappa1, 1.0);
  EXPECT_EQ(op.kappa2, -1.0);
  EXPECT_EQ(op.omega1, 1.0);
  EXPECT_EQ(op.omega2, 1.0);
  EXPECT_THROW(parse_preset("lmg"), ConfigError);
  EXPECT_STREQ(to_string(Preset::nzt_opposite), "nzt-opposite");
}
