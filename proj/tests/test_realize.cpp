#include <gtest/gtest.h>

#include "quarter_fixture.hpp"
#include "quartersim/error.hpp"

using namespace quartersim;

namespace {

std::size_t count_pv(const QuarterModel& q) {
  return static_cast<std::size_t>(
      std::count_if(q.households.begin(), q.households.end(), [](const auto& h) { return h.config.pv.has_value(); }));
}

}  // namespace

TEST(Realize, ShareCountRounding) {
  EXPECT_EQ(share_count(0.5, 100), 50u);
  EXPECT_EQ(share_count(0.5, 13), 7u);
  EXPECT_EQ(share_count(0.0, 13), 0u);
  EXPECT_EQ(share_count(1.0, 13), 13u);
}

TEST(Realize, ApportionSumsToTotal) {
  const auto a = apportion({{"A", 1}, {"B", 1}, {"C", 1}}, 100);
  EXPECT_EQ(a.at("A") + a.at("B") + a.at("C"), 100u);
  EXPECT_EQ(a.at("A"), 34u);
  EXPECT_EQ(a.at("B"), 33u);
}

TEST(Realize, HalfPvShareOnHundredHouseholds) {
  auto sd = testsupport::scenario(99);
  sd.pv_share = 0.5;
  const auto q = testsupport::quarter("mv-rural-ring", sd);
  ASSERT_EQ(q.households.size(), 100u);
  EXPECT_EQ(count_pv(q), 50u);
  EXPECT_TRUE(validate(q).empty());
}

TEST(Realize, BoundaryShares) {
  auto sd = testsupport::scenario();
  sd.pv_share = 0.0;
  EXPECT_EQ(count_pv(testsupport::quarter("lv-rural1", sd)), 0u);
  sd.pv_share = 1.0;
  EXPECT_EQ(count_pv(testsupport::quarter("lv-rural1", sd)), 13u);
}

TEST(Realize, HeatModesAreExclusiveAndCounted) {
  auto sd = testsupport::scenario();
  sd.ehp_share = 0.4;
  sd.dhn_share = 0.3;
  const auto q = testsupport::quarter("mv-rural-ring", sd);
  std::size_t ehp = 0, dhn = 0;
  for (const auto& h : q.households) {
    ehp += h.config.heat_mode == HeatMode::ehp;
    dhn += h.config.heat_mode == HeatMode::dhn;
    EXPECT_EQ(h.config.ehp.has_value(), h.config.heat_mode == HeatMode::ehp);
  }
  EXPECT_EQ(ehp, 40u);
  EXPECT_EQ(dhn, 30u);
  EXPECT_EQ(std::count_if(q.pipes.begin(), q.pipes.end(),
                          [](const auto& p) { return p.endpoint_a_kind == EndpointKind::household; }),
            30);
}

TEST(Realize, SameInputsSameQuarter) {
  const auto sd = testsupport::scenario(1234);
  EXPECT_EQ(testsupport::quarter("mv-rural-ring", sd), testsupport::quarter("mv-rural-ring", sd));
  EXPECT_NE(testsupport::quarter("mv-rural-ring", sd), testsupport::quarter("mv-rural-ring", testsupport::scenario(1235)));
}

TEST(Realize, OneHouseholdPerAnchorWithServiceLine) {
  const auto grid = import_simbench(testsupport::grid_dir("lv-rural1"));
  const auto q = realize_quarter(testsupport::scenario(), grid);
  ASSERT_EQ(q.households.size(), grid.load_anchors.size());
  for (const auto& a : grid.load_anchors) {
    const auto* h = q.find_household(a.id);
    ASSERT_NE(h, nullptr) << a.id;
    EXPECT_EQ(h->node_ref, a.bus);
  }
}

TEST(Realize, GridWithoutLoadsIsRejected) {
  auto grid = import_simbench(testsupport::grid_dir("lv-rural1"));
  grid.load_anchors.clear();
  try {
    realize_quarter(testsupport::scenario(), grid);
    FAIL();
  } catch (const ConfigurationError& e) {
    EXPECT_STREQ(e.what(), "no household anchors");
  }
}

TEST(Realize, MirrorModeFollowsCables) {
  auto sd = testsupport::scenario(3);
  sd.dhn_share = 0.5;
  sd.ehp_share = 0.2;
  sd.dhn.topology_mode = DhnTopologyMode::mirror_electric;
  const auto q = testsupport::quarter("lv-rural1", sd);
  EXPECT_TRUE(validate(q).empty());
  std::set<std::pair<std::string, std::string>> cables;
  for (const auto& l : q.lines) {
    if (l.endpoint_a_kind == EndpointKind::node) {
      cables.emplace(std::min(l.endpoint_a, l.endpoint_b), std::max(l.endpoint_a, l.endpoint_b));
    }
  }
  for (const auto& p : q.pipes) {
    if (p.endpoint_a_kind != EndpointKind::node) continue;
    EXPECT_TRUE(cables.count({std::min(p.endpoint_a, p.endpoint_b), std::max(p.endpoint_a, p.endpoint_b)})) << p.id;
  }
}
