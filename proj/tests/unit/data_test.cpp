#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "napmon/data.hpp"
#include "napmon/error.hpp"
#include "napmon/synthetic.hpp"
#include "oracles.hpp"

namespace napmon {
namespace {

TEST(Csv, ParsesRows) {
  const Dataset d = parse_csv("1,2\n3,4");
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d, Dataset(2, {1, 2, 3, 4}));
}

TEST(Csv, WhitespaceBlankLinesAndCrlf) {
  const Dataset d = parse_csv("\n 1.5 , -2e-3\r\n\r\n3,4\n\n");
  EXPECT_EQ(d, Dataset(2, {1.5, -2e-3, 3, 4}));
  EXPECT_TRUE(parse_csv("").empty());
}

TEST(Csv, RaggedRow) {
  try {
    parse_csv("1,2\n3,4\n5,6,7\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Csv, BadField) {
  try {
    parse_csv("1,2\n3,x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2, field 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_csv("1,nan\n"), ParseError);
  EXPECT_THROW(parse_csv("1,inf\n"), ParseError);
  EXPECT_THROW(parse_csv("1,,2\n"), ParseError);
}

TEST(Csv, RoundTripIsExact) {
  testing::Rng rng(60);
  const Dataset d = testing::random_dataset(rng, 50, 7, 1e3);
  EXPECT_EQ(parse_csv(to_csv(d)), d);
}

std::string raw_header(std::uint32_t count, std::uint32_t dim) {
  std::string out("NAPD");
  for (std::uint32_t v : {kRawVersion, count, dim}) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  }
  return out;
}

void push_f32(std::string& out, float f) {
  const auto bits = std::bit_cast<std::uint32_t>(f);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

TEST(Raw, ParsesHandWrittenFile) {
  std::string bytes = raw_header(2, 3);
  for (float f : {1.0f, -2.5f, 0.125f, 3.0f, 1e-3f, -7.0f}) push_f32(bytes, f);
  EXPECT_EQ(bytes.size(), 16u + 2 * 3 * 4);
  const Dataset d = parse_raw_f32(bytes);
  EXPECT_EQ(d, Dataset(3, {1.0, -2.5, 0.125, 3.0, static_cast<double>(1e-3f), -7.0}));
  EXPECT_EQ(to_raw_f32(d), bytes);
  EXPECT_EQ(detect_format(bytes), DataFormat::RawF32);
  EXPECT_EQ(detect_format("1,2\n"), DataFormat::Csv);
}

TEST(Raw, Errors) {
  std::string bytes = raw_header(2, 2);
  for (int i = 0; i < 3; ++i) push_f32(bytes, 1.0f);
  EXPECT_THROW(parse_raw_f32(bytes), ParseError);  // truncated payload
  push_f32(bytes, 1.0f);
  EXPECT_NO_THROW(parse_raw_f32(bytes));
  EXPECT_THROW(parse_raw_f32(bytes + "x"), ParseError);
  EXPECT_THROW(parse_raw_f32(bytes.substr(0, 10)), ParseError);
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(parse_raw_f32(bad), ParseError);
  std::string nonfinite = raw_header(1, 1);
  push_f32(nonfinite, std::numeric_limits<float>::infinity());
  EXPECT_THROW(parse_raw_f32(nonfinite), ParseError);
}

TEST(Raw, FloatValuesRoundTrip) {
  testing::Rng rng(61);
  Dataset d(5);
  for (int i = 0; i < 20; ++i) {
    auto row = testing::random_vector(rng, 5, 100.0);
    for (auto& x : row) x = static_cast<float>(x);
    d.add_row(row);
  }
  EXPECT_EQ(parse_raw_f32(to_raw_f32(d)), d);
}

TEST(Files, SaveAndLoadBothFormats) {
  const auto dir = std::filesystem::temp_directory_path() / "napmon_data_test";
  std::filesystem::create_directories(dir);
  const Dataset d(2, {0.5, -1, 2, 4});
  save_dataset(dir / "a.csv", d, DataFormat::Csv);
  save_dataset(dir / "a.f32", d, DataFormat::RawF32);
  EXPECT_EQ(load_dataset(dir / "a.csv"), d);
  EXPECT_EQ(load_dataset(dir / "a.f32"), d);
  EXPECT_EQ(load_dataset(dir / "a.f32", DataFormat::RawF32), d);
  EXPECT_THROW(load_dataset(dir / "missing.csv"), IoError);
  EXPECT_EQ(parse_format("csv"), DataFormat::Csv);
  EXPECT_EQ(parse_format("raw_f32"), DataFormat::RawF32);
  EXPECT_THROW(parse_format("xml"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Dataset, AddRowChecksDimension) {
  Dataset d(2);
  d.add_row(std::vector<double>{1, 2});
  EXPECT_THROW(d.add_row(std::vector<double>{1}), DimensionError);
  EXPECT_THROW(d.add_row(std::vector<double>{1, NAN}), ConfigError);
  EXPECT_THROW(Dataset(2, {1, 2, 3}), DimensionError);
}

// -- generator -----------------------------------------------------------------

TEST(Xoshiro, MatchesReferenceSequence) {
  // Reference: splitmix64 seeding followed by xoshiro256**, written inline.
  std::uint64_t sm = 12345;
  auto splitmix = [&sm] {
    std::uint64_t z = (sm += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s[4] = {splitmix(), splitmix(), splitmix(), splitmix()};
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  Xoshiro256 g(12345);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t expect = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    ASSERT_EQ(g.next(), expect);
  }
}

TEST(Xoshiro, UniformAndNormalRanges) {
  Xoshiro256 g(7);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = g.normal();
    ASSERT_TRUE(std::isfinite(z));
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

SyntheticSpec two_clusters(std::uint64_t seed) {
  SyntheticSpec s;
  s.seed = seed;
  s.dim = 3;
  s.clusters = {{{1, 1, 1}, {0.2, 0.2, 0.2}, 30}, {{-1, 0, 2}, {0.5, 0.1, 0.3}, 20}};
  s.shift = {2, 0, 0};
  return s;
}

TEST(Synthetic, DeterministicInSeed) {
  const auto a = generate(two_clusters(9));
  const auto b = generate(two_clusters(9));
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.held_out, b.held_out);
  EXPECT_EQ(a.ood, b.ood);
  EXPECT_NE(generate(two_clusters(10)).train, a.train);
}

TEST(Synthetic, SplitSizes) {
  SyntheticSpec s;
  s.seed = 1;
  s.dim = 4;
  s.clusters = {{{0, 0, 0, 0}, {1, 1, 1, 1}, 100}};
  const auto splits = generate(s);
  EXPECT_EQ(splits.train.size(), 100u);
  EXPECT_EQ(splits.train.dim(), 4u);
  EXPECT_EQ(splits.held_out.size(), 100u);
  EXPECT_EQ(splits.ood.size(), 100u);
  EXPECT_EQ(generate(two_clusters(3)).train.size(), 50u);
}

TEST(Synthetic, ZeroShiftMatchesHeldOutStatistics) {
  SyntheticSpec s;
  s.seed = 2;
  s.dim = 2;
  s.clusters = {{{3, -1}, {0.5, 0.5}, 4000}};
  const auto splits = generate(s);
  for (std::size_t j = 0; j < 2; ++j) {
    double mh = 0, mo = 0;
    for (std::size_t i = 0; i < 4000; ++i) {
      mh += splits.held_out.row(i)[j];
      mo += splits.ood.row(i)[j];
    }
    EXPECT_NEAR(mh / 4000, mo / 4000, 0.05);
  }
}

TEST(Synthetic, ShiftMovesOodCenters) {
  auto s = two_clusters(4);
  s.clusters[0].count = 2000;
  s.clusters[1].count = 0;
  s.clusters.pop_back();
  const auto splits = generate(s);
  double mean = 0;
  for (std::size_t i = 0; i < 2000; ++i) mean += splits.ood.row(i)[0];
  EXPECT_NEAR(mean / 2000, 3.0, 0.05);
}

TEST(Synthetic, Validation) {
  auto s = two_clusters(1);
  s.clusters.clear();
  EXPECT_THROW(generate(s), ConfigError);
  s = two_clusters(1);
  s.clusters[0].spread[1] = 0;
  EXPECT_THROW(generate(s), ConfigError);
  s = two_clusters(1);
  s.clusters[1].count = 0;
  EXPECT_THROW(generate(s), ConfigError);
  s = two_clusters(1);
  s.shift = {1};
  EXPECT_THROW(generate(s), ConfigError);
}

TEST(Synthetic, ParseSpec) {
  const auto s = parse_synthetic_spec(
      R"({"seed": 5, "clusters": [{"center": [0, 1], "spread": 0.5, "count": 10},
                                  {"center": [2, 2], "spread": [0.1, 0.2], "count": 3}],
          "shift": [1, -1]})");
  EXPECT_EQ(s.seed, 5u);
  EXPECT_EQ(s.dim, 2u);
  ASSERT_EQ(s.clusters.size(), 2u);
  EXPECT_EQ(s.clusters[0].spread, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(s.clusters[1].count, 3u);
  EXPECT_EQ(s.shift, (std::vector<double>{1, -1}));
  EXPECT_THROW(parse_synthetic_spec(R"({"clusters": [{"center": [0], "count": 1}]})"), ParseError);
  EXPECT_THROW(parse_synthetic_spec("{"), ParseError);
}

}  // namespace
}  // namespace napmon
