#include <gtest/gtest.h>

#include "quartersim/buildings.hpp"
#include "quartersim/error.hpp"

using namespace quartersim;

namespace {

ArchetypeCatalog catalog() { return ArchetypeCatalog::load(QUARTERSIM_SOURCE_DIR "/data/archetypes.csv"); }

ThermalEnvelope hand_envelope() {
  ThermalEnvelope env;
  env.surfaces = {{"wall", 1.0, 200.0}, {"roof", 0.5, 200.0}};  // 300 W/K
  env.volume_m3 = 500.0;
  env.air_exchange_per_h = 0.5;
  env.t_indoor_set_c = 20.0;
  return env;
}

}  // namespace

TEST(Buildings, ZeroVarianceGivesNominalEnvelope) {
  const auto cat = catalog();
  ScenarioDescription sd;
  sd.envelope_variance = 0.0;
  for (const auto& a : cat.archetypes()) {
    RngStream rng(42);
    const auto env = parameterize_building(cat, a.id, sd, rng);
    const auto nominal = make_envelope(a.id, a.ground_area_m2.nominal, static_cast<int>(a.floors.nominal),
                                       a.storey_height_m.nominal, a.u_wall.nominal, a.u_roof.nominal,
                                       a.u_floor.nominal, a.u_window.nominal, a.window_fraction.nominal,
                                       a.air_exchange_per_h.nominal, a.annual_electric_demand_kwh.nominal,
                                       sd.t_indoor_set_c);
    EXPECT_EQ(env, nominal) << a.id;
  }
}

TEST(Buildings, SampledUValuesStayWithinArchetypeBounds) {
  const auto cat = catalog();
  ScenarioDescription sd;
  sd.envelope_variance = 1.0;
  RngStream rng(7);
  for (const auto& a : cat.archetypes()) {
    const std::map<std::string, Bounded> bounds = {
        {"wall", a.u_wall}, {"window", a.u_window}, {"roof", a.u_roof}, {"floor", a.u_floor}};
    for (int i = 0; i < 10000; ++i) {
      const auto env = parameterize_building(cat, a.id, sd, rng);
      for (const auto& s : env.surfaces) {
        const auto& b = bounds.at(s.name);
        ASSERT_GE(s.u_value, b.min) << a.id << " " << s.name;
        ASSERT_LE(s.u_value, b.max) << a.id << " " << s.name;
      }
      ASSERT_GE(env.ground_area_m2, a.ground_area_m2.min);
      ASSERT_LE(env.ground_area_m2, a.ground_area_m2.max);
    }
  }
}

TEST(Buildings, UnknownArchetypeListsAvailableIds) {
  const auto cat = catalog();
  ScenarioDescription sd;
  RngStream rng(1);
  try {
    parameterize_building(cat, "nonexistent", sd, rng);
    FAIL();
  } catch (const ConfigurationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("nonexistent"), std::string::npos);
    for (const auto& id : cat.ids()) EXPECT_NE(msg.find(id), std::string::npos);
  }
}

TEST(Buildings, NominalHeatLoadHandCase) {
  const auto env = hand_envelope();
  EXPECT_DOUBLE_EQ(env.transmission_conductance(), 300.0);
  EXPECT_NEAR(env.ventilation_conductance(), 83.75, 1e-12);
  EXPECT_NEAR(nominal_heat_load(env, -12.0), 12280.0, 12280.0 * 1e-12);
}

TEST(Buildings, NominalHeatLoadRejectsReferenceAtSetPoint) {
  const auto env = hand_envelope();
  EXPECT_THROW(nominal_heat_load(env, 20.0), DomainError);
  EXPECT_THROW(nominal_heat_load(env, 25.0), DomainError);
  EXPECT_DOUBLE_EQ(heat_loss_w(env, 20.0, 20.0), 0.0);
}

TEST(Buildings, HeatLossIsLinearInTemperatureDifference) {
  const auto env = hand_envelope();
  const double ua = env.total_conductance();
  for (double dt : {1.0, 5.5, 17.0, 32.0}) {
    EXPECT_NEAR(heat_loss_w(env, 20.0, 20.0 - dt), ua * dt, 1e-9);
    EXPECT_NEAR(heat_loss_w(env, 20.0, 20.0 - 2 * dt), 2.0 * heat_loss_w(env, 20.0, 20.0 - dt), 1e-9);
  }
}

TEST(Buildings, CatalogRejectsNominalOutsideBounds) {
  const std::string text =
      "archetype_id;ground_area_m2;ground_area_m2_min;ground_area_m2_max\nX;200;50;100\n";
  EXPECT_THROW(ArchetypeCatalog::parse(text), ParseError);
}
