#include <gtest/gtest.h>

#include "napmon/error.hpp"
#include "napmon/thresholds.hpp"
#include "oracles.hpp"

namespace napmon {
namespace {

const ThresholdList kCuts = finite_thresholds(std::vector<double>{0, 1, 2});

std::set<std::uint32_t> codes(bdd::CodeRange r) {
  std::set<std::uint32_t> out;
  for (auto c = r.lo; c <= r.hi; ++c) out.insert(c);
  return out;
}

TEST(CodeOf, TwoBitExamples) {
  EXPECT_EQ(code_of(2.5, kCuts), 3u);
  EXPECT_EQ(code_of(0.5, kCuts), 1u);
  EXPECT_EQ(code_of(1.5, kCuts), 2u);
  EXPECT_EQ(code_of(-4, kCuts), 0u);
  EXPECT_EQ(code_word(std::vector<std::uint32_t>{3, 1}, 2), (bdd::Word{true, true, false, true}));
}

TEST(CodeOf, OneBitSignRule) {
  const auto zero = finite_thresholds(std::vector<double>{0});
  EXPECT_EQ(code_of(-0.3, zero), 0u);
  EXPECT_EQ(code_of(0.0, zero), 0u);  // "> c" moves up, equality does not
  EXPECT_EQ(code_of(1e-300, zero), 1u);
}

TEST(CodeOf, BoundariesBelongToTheLowerInterval) {
  EXPECT_EQ(code_of(0.0, kCuts), 0u);
  EXPECT_EQ(code_of(1.0, kCuts), 1u);
  EXPECT_EQ(code_of(2.0, kCuts), 2u);
}

TEST(CodeOf, RejectsNonIncreasing) {
  EXPECT_THROW(code_of(0.0, finite_thresholds(std::vector<double>{0, 0, 1})), ConfigError);
  EXPECT_THROW(code_of(0.0, finite_thresholds(std::vector<double>{2, 1, 3})), ConfigError);
  EXPECT_THROW(code_of(0.0, ThresholdList{}), ConfigError);
  EXPECT_THROW(code_of(0.0, ThresholdList{Threshold::neg_inf(), Threshold::neg_inf(), Threshold::finite(0)}),
               ConfigError);
  EXPECT_THROW(Threshold::finite(std::numeric_limits<double>::infinity()), ConfigError);
}

TEST(CodeOf, UnboundedMarkers) {
  const ThresholdList cuts{Threshold::neg_inf(), Threshold::finite(0), Threshold::pos_inf()};
  EXPECT_EQ(code_of(-1e308, cuts), 1u);
  EXPECT_EQ(code_of(0.0, cuts), 1u);
  EXPECT_EQ(code_of(1e308, cuts), 2u);
}

TEST(CodeRangeOf, Examples) {
  EXPECT_EQ(codes(code_range_of(Interval(1.2, 1.8), kCuts)), (std::set<std::uint32_t>{2}));
  EXPECT_EQ(codes(code_range_of(Interval(-0.5, 0.5), kCuts)), (std::set<std::uint32_t>{0, 1}));
  EXPECT_EQ(codes(code_range_of(Interval(0.5, 2.5), kCuts)), (std::set<std::uint32_t>{1, 2, 3}));
  EXPECT_EQ(codes(code_range_of(Interval::point(0.7), kCuts)), (std::set<std::uint32_t>{code_of(0.7, kCuts)}));
  EXPECT_THROW(code_range_of(2.0, 1.0, kCuts), ConfigError);
}

// One interior-valued instance per row of the two-bit robust case table.
TEST(CodeRangeOf, TenCaseTable) {
  const std::vector<std::pair<double, double>> cases{
      {2.5, 3.0},   {1.2, 1.8},  {0.2, 0.8}, {-1.0, -0.5}, {-0.5, 0.5},
      {0.5, 1.5},   {1.5, 2.5},  {-0.5, 1.5}, {0.5, 2.5},  {-0.5, 2.5}};
  std::set<std::set<std::uint32_t>> seen;
  for (const auto& [l, u] : cases) {
    const auto expected = testing::two_bit_case_table(l, u, 0, 1, 2);
    EXPECT_EQ(codes(code_range_of(Interval(l, u), kCuts)), expected) << l << " " << u;
    seen.insert(expected);
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(CodeRangeOf, CaseTableOnRandomInteriorBounds) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 5000; ++trial) {
    double c[3] = {testing::uniform(rng, -2, 2), 0, 0};
    c[1] = c[0] + testing::uniform(rng, 0.01, 2);
    c[2] = c[1] + testing::uniform(rng, 0.01, 2);
    double l = testing::uniform(rng, c[0] - 2, c[2] + 2);
    double u = l + testing::uniform(rng, 0, 4);
    if (l == c[1] || u == c[1]) continue;
    const auto cuts = finite_thresholds(std::vector<double>{c[0], c[1], c[2]});
    ASSERT_EQ(codes(code_range_of(Interval(l, u), cuts)), testing::two_bit_case_table(l, u, c[0], c[1], c[2]));
    ASSERT_EQ(code_of(l, cuts), testing::two_bit_point_table(l, c[0], c[1], c[2]));
  }
}

TEST(CodeRangeOf, OneBitRobustRule) {
  const auto zero = finite_thresholds(std::vector<double>{0});
  EXPECT_EQ(codes(code_range_of(Interval(0.1, 0.3), zero)), (std::set<std::uint32_t>{1}));   // l > c
  EXPECT_EQ(codes(code_range_of(Interval(-0.3, 0.0), zero)), (std::set<std::uint32_t>{0}));  // u <= c
  EXPECT_EQ(codes(code_range_of(Interval(-0.1, 0.1), zero)), (std::set<std::uint32_t>{0, 1}));
}

// The range covers exactly the codes of the points inside the interval.
TEST(CodeRangeOf, CoversEveryInteriorPoint) {
  testing::Rng rng(32);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> raw = testing::random_vector(rng, 7, 3.0);
    std::sort(raw.begin(), raw.end());
    const auto cuts = finite_thresholds(raw);
    const double l = testing::uniform(rng, -4, 4);
    const double u = l + testing::uniform(rng, 0, 3);
    const auto r = code_range_of(Interval(l, u), cuts);
    std::set<std::uint32_t> hit;
    for (int s = 0; s <= 200; ++s) hit.insert(code_of(l + (u - l) * s / 200.0, cuts));
    hit.insert(code_of(u, cuts));
    for (auto c : hit) ASSERT_TRUE(c >= r.lo && c <= r.hi);
    ASSERT_TRUE(hit.contains(r.lo) && hit.contains(r.hi));
  }
}

}  // namespace
}  // namespace napmon
