#include <gtest/gtest.h>

#include "quarter_fixture.hpp"
#include "quartersim/error.hpp"
#include "quartersim/simgen.hpp"

using namespace quartersim;
using testsupport::TempDir;

namespace {

WeatherSeries two_days() { return synthetic_april_weather(parse_timestamp("2020-04-20T00:00:00"), 49, 1); }

QuarterModel golden_quarter() {
  const auto sd = load_scenario(testsupport::read(testsupport::fixture("golden/two-household.json")));
  return realize_quarter(sd, import_simbench(testsupport::fixture("grids/two-household")));
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Simgen, ThirteenHouseholdsGiveThirteenInstances) {
  const auto q = testsupport::quarter("lv-rural1", testsupport::scenario());
  const auto m = assemble_simulation(q, two_days());
  EXPECT_EQ(m.prosumers.size(), 13u);
  EXPECT_EQ(m.admittance.bus_ids[m.slack], "MV1.bus0");
  for (const auto& p : m.prosumers) {
    EXPECT_EQ(m.admittance.bus_ids[p.bus], household_bus_id(p.household_id));
    EXPECT_EQ(p.driving.size(), p.config.bevs.size());
  }
}

TEST(Simgen, SlackIsTheHvSideOfTheInterfaceTransformer) {
  const auto q = testsupport::quarter("mv-rural-ring", testsupport::scenario());
  const auto m = assemble_simulation(q, two_days());
  EXPECT_EQ(m.admittance.bus_ids[m.slack], "HV1.bus0");
  EXPECT_EQ(m.prosumers.size(), 100u);
}

TEST(Simgen, MissingProfileDataNamesHousehold) {
  auto q = testsupport::quarter("lv-rural1", testsupport::scenario());
  const auto& h = q.households[3];
  std::erase_if(q.profile_data.load, [&](const LoadProfile& p) { return p.id == h.config.load_profile_ref; });
  try {
    assemble_simulation(q, two_days());
    FAIL();
  } catch (const AssemblyError& e) {
    EXPECT_NE(std::string(e.what()).find(h.id), std::string::npos);
  }
}

TEST(Simgen, SetpointChannelsForControllableDevices) {
  auto sd = testsupport::scenario();
  sd.bes_share = 1.0;
  sd.controllable_bes_share = 1.0;
  sd.bev_share = 0.0;
  const auto q = testsupport::quarter("lv-rural1", sd);
  const auto m = assemble_simulation(q, two_days());
  ASSERT_EQ(m.setpoint_channels.size(), 13u);
  for (const auto& c : m.setpoint_channels) {
    EXPECT_EQ(c.kind, DeviceKind::bes);
    EXPECT_EQ(c.device_id, "bes/" + c.household_id);
  }
}

TEST(Simgen, EmissionMatchesGoldenFile) {
  const auto q = golden_quarter();
  TempDir dir("golden");
  const auto files = emit_dynamic_model_text(q, dir.path());
  ASSERT_EQ(files.size(), 1u);
  const auto golden = testsupport::fixture("golden") / files[0].filename();
  ASSERT_TRUE(std::filesystem::exists(golden)) << golden;
  EXPECT_EQ(testsupport::read(files[0]), testsupport::read(golden));
}

TEST(Simgen, OneDeclarationPerHousehold) {
  for (const char* grid : {"lv-rural1", "mv-rural-ring"}) {
    const auto q = testsupport::quarter(grid, testsupport::scenario());
    const auto text = emit_model_text(q);
    EXPECT_EQ(count_occurrences(text, "CyEntEE.Prosumer.Household "), q.households.size()) << grid;
  }
}

TEST(Simgen, EmissionIsDeterministic) {
  const auto q = golden_quarter();
  EXPECT_EQ(emit_model_text(q), emit_model_text(q));
}
