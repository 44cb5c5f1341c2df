#include <gtest/gtest.h>

#include <cstdio>
#include <string>

#include "spotlight/config.hpp"
#include "support.hpp"

using namespace spotlight;

TEST(Config, Defaults) {
  const Config c;
  EXPECT_EQ(c.metrics.informativeness_threshold, 0.3);
  EXPECT_EQ(c.metrics.extraction_threshold, 0.8);
  EXPECT_EQ(c.metrics.extraction_comparator, Comparator::Greater);
  EXPECT_EQ(c.metrics.informativeness_comparator, Comparator::AtLeast);
  EXPECT_EQ(c.metrics.skew_k, 0.5);
  EXPECT_EQ(c.metrics.forcast_sample_words, 150u);
  EXPECT_EQ(c.beta, 0.01);
  EXPECT_EQ(c.threads, 1u);
}

TEST(Config, SetEachKind) {
  Config c;
  c.set("match_variant", "rl");
  c.set("report_variant", "R2");
  c.set("rouge_stem", "true");
  c.set("rouge_remove_stopwords", "off");
  c.set("extraction_threshold", "0.9");
  c.set("extraction_comparator", "ge");
  c.set("entropy_mode", "pooled");
  c.set("drop_unmatched", "no");
  c.set("special_char_threshold", "0");
  c.set("beta", "0.1");
  c.set("seed", "42");
  c.set("threads", "8");
  EXPECT_EQ(c.metrics.match_variant, RougeVariant::RL);
  EXPECT_EQ(c.metrics.report_variant, RougeVariant::R2);
  EXPECT_TRUE(c.metrics.rouge.stem);
  EXPECT_FALSE(c.metrics.rouge.remove_stopwords);
  EXPECT_EQ(c.metrics.extraction_threshold, 0.9);
  EXPECT_EQ(c.metrics.extraction_comparator, Comparator::AtLeast);
  EXPECT_EQ(c.metrics.entropy_mode, EntropyMode::Pooled);
  EXPECT_FALSE(c.metrics.drop_unmatched);
  EXPECT_EQ(c.filter.special_char_threshold, 0.0);
  EXPECT_EQ(c.beta, 0.1);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.threads, 8u);
}

TEST(Config, RejectsBadValues) {
  Config c;
  EXPECT_THROW(c.set("no_such_key", "1"), ConfigError);
  EXPECT_THROW(c.set("extraction_threshold", "0"), ConfigError);
  EXPECT_THROW(c.set("extraction_threshold", "1.5"), ConfigError);
  EXPECT_THROW(c.set("extraction_threshold", "high"), ConfigError);
  EXPECT_THROW(c.set("match_variant", "r3"), ConfigError);
  EXPECT_THROW(c.set("extraction_comparator", "<"), ConfigError);
  EXPECT_THROW(c.set("rouge_stem", "maybe"), ConfigError);
  EXPECT_THROW(c.set("beta", "-0.1"), ConfigError);
  EXPECT_THROW(c.set("threads", "0"), ConfigError);
  EXPECT_THROW(c.set("seed", "-1"), ConfigError);
  EXPECT_THROW(c.set("entropy_mode", "global"), ConfigError);
}

TEST(Config, LoadFile) {
  const auto path = testing_support::temp_path("cfg");
  testing_support::write_file(path, "# thresholds\n\n  informativeness_threshold = 0.25 \nskew_k=0.75\r\n");
  const auto c = Config::load(path);
  EXPECT_EQ(c.metrics.informativeness_threshold, 0.25);
  EXPECT_EQ(c.metrics.skew_k, 0.75);

  testing_support::write_file(path, "skew_k=0.5\nbogus=1\n");
  try {
    Config::load(path);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  testing_support::write_file(path, "skew_k\n");
  EXPECT_THROW(Config::load(path), ConfigError);
  std::remove(path.c_str());
  EXPECT_THROW(Config::load(path), ConfigError);
}
