// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <unistd.h>
#include <sstream>

#include "pf_oracle.hpp"
#include "quarter_fixture.hpp"
#include "quartersim/engine.hpp"
#include "quartersim/powerflow.hpp"
#include "quartersim/prosumer.hpp"
#include "quartersim/quarterdb.hpp"
#include "quartersim/results.hpp"
#include "quartersim/simgen.hpp"

using namespace quartersim;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kPfAnalyticTol = 1e-6;
constexpr double kPfOracleTol = 1e-6;
constexpr double kPfMismatchTol = 1e-8;
constexpr double kPfRuntimeS = 5.0;
constexpr double kMstWeightTol = 1e-9;
constexpr double kConservationTol = 1e-9;
constexpr double kSizingRelTol = 1e-9;
constexpr double kSmMeanTol = 0.15;
constexpr double kSmStdMin = 9.8;
constexpr double kSmStdMax = 10.2;
constexpr double kRingRuntimeS = 60.0;
constexpr double kEveningRatioMin = 1.20;
constexpr double kLossShareMax = 0.02;

const Timestamp kStart = parse_timestamp("2020-04-20T00:00:00");

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

/// Quarters over both grids, several seeds and both DHN topology modes.
std::vector<QuarterModel> generated_quarters() {
  std::vector<QuarterModel> out;
  for (const char* grid : {"lv-rural1", "mv-rural-ring"}) {
    const auto topo = import_simbench(testsupport::grid_dir(grid));
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      for (auto mode : {DhnTopologyMode::mst, DhnTopologyMode::mirror_electric}) {
        auto sd = testsupport::scenario(seed);
        sd.dhn.topology_mode = mode;
        sd.dhn_share = 0.2 + 0.1 * static_cast<double>(seed);
        sd.ehp_share = 0.2;
        out.push_back(realize_quarter(sd, topo));
      }
    }
  }
  return out;
}

/// Same combinatorial enumeration as the unit tests: every labelled tree via its Pruefer code.
double brute_force_mst(const std::vector<DhnVertex>& v) {
  const std::size_t n = v.size();
  if (n <= 1) return 0.0;
  if (n == 2) return distance(v[0].coord, v[1].coord);
  std::vector<std::size_t> seq(n - 2, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> degree(n, 1);
    for (auto s : seq) ++degree[s];
    double w = 0.0;
    for (auto s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      w += distance(v[leaf].coord, v[s].coord);
      --degree[leaf];
      --degree[s];
    }
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) (a == n ? a : b) = i;
    }
    w += distance(v[a].coord, v[b].coord);
    best = std::min(best, w);
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  return best;
}

std::map<std::string, std::string> tree_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = testsupport::read(e.path());
  }
  return out;
}

Outcome power_flow() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  oracle::RadialCase two;
  two.n = 2;
  two.branches = {{0, 1, cplx(0.0, 0.1)}};
  two.s_spec = {cplx(), cplx(-0.1, 0.0)};
  const auto r = solve_power_flow(oracle::admittance(two), two.s_spec, 0);
  const double delta = 0.5 * std::asin(0.02);
  o.require(std::abs(std::abs(r.voltage[1]) - std::cos(delta)) < kPfAnalyticTol, "two-bus |V2|");
  o.require(std::abs(std::arg(r.voltage[1]) + delta) < kPfAnalyticTol, "two-bus angle");
  o.require(r.max_mismatch_pu < kPfMismatchTol, "two-bus mismatch");
  o.detail << "|V2|=" << std::abs(r.voltage[1]) << " d2=" << std::arg(r.voltage[1]);

  double worst_dev = 0.0, worst_mismatch = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(RngStream::derive(4242, "pf/" + std::to_string(seed)).next_u64());
    const auto c = oracle::random_radial(rng, 3 + rng.index(8));
    const auto y = oracle::admittance(c);
    const auto res = solve_power_flow(y, c.s_spec, 0);
    const auto ref = oracle::gauss_seidel(c);
    for (std::size_t i = 0; i < c.n; ++i) worst_dev = std::max(worst_dev, std::abs(res.voltage[i] - ref[i]));
    worst_mismatch = std::max(worst_mismatch, max_mismatch(y, res.voltage, c.s_spec, 0));
  }
  const double elapsed = seconds_since(t0);
  o.require(worst_dev < kPfOracleTol, "oracle deviation");
  o.require(worst_mismatch < kPfMismatchTol, "mismatch");
  o.require(elapsed < kPfRuntimeS, "runtime");
  o.detail << " max|dV|=" << worst_dev << " max mismatch=" << worst_mismatch << " t=" << elapsed << "s";
  return o;
}

Outcome dhn_synthesis(const std::vector<QuarterModel>& quarters) {
  Outcome o;
  std::size_t mst_mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(RngStream::derive(77, "mst/" + std::to_string(seed)).next_u64());
    const std::size_t n = 2 + rng.index(7);
    std::vector<DhnVertex> v;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back({"v" + std::to_string(i), {rng.uniform(0, 100), rng.uniform(0, 100)}, 1.0, i == 0});
    }
    const auto edges = build_topology(v, DhnTopologyMode::mst);
    const double w = std::accumulate(edges.begin(), edges.end(), 0.0, [](double s, const DhnEdge& e) { return s + e.weight; });
    if (std::abs(w - brute_force_mst(v)) > kMstWeightTol) ++mst_mismatches;
  }
  o.require(mst_mismatches == 0, "MST weight");

  std::size_t forest_failures = 0, velocity_failures = 0, pipes = 0;
  for (const auto& q : quarters) {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& v : q.dhn_vertices) parent[v.node_ref] = v.node_ref;
    std::size_t edges = 0;
    for (const auto& p : q.pipes) {
      ++pipes;
      const double v = p.nominal_mass_flow_kg_s / (q.settings.rho_water * std::numbers::pi * p.inner_diameter_m * p.inner_diameter_m / 4.0);
      if (v > q.scenario.dhn.v_max_m_s * (1.0 + 1e-12)) ++velocity_failures;
      if (p.endpoint_a_kind != EndpointKind::node) continue;
      ++edges;
      parent[find(p.endpoint_a)] = find(p.endpoint_b);
    }
    std::size_t components = 0;
    for (const auto& [id, _] : parent) components += find(id) == id;
    if (edges != q.dhn_vertices.size() - components) ++forest_failures;
  }
  o.require(forest_failures == 0, "forest property");
  o.require(velocity_failures == 0, "velocity");

  double worst_residual = 0.0;
  const DhnDesign design;
  const double cp_dt = design.cp_water * (design.t_supply_c - design.t_return_c);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(RngStream::derive(99, "dhn/" + std::to_string(seed)).next_u64());
    const std::size_t n = 3 + rng.index(30);
    std::vector<DhnVertex> v;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back({"v" + std::to_string(i), {rng.uniform(0, 400), rng.uniform(0, 400)},
                   i == 0 ? 0.0 : rng.uniform(2000, 25000), i == 0});
    }
    const auto net = size_pipes(build_topology(v, DhnTopologyMode::mst), v, design);
    std::vector<double> demand(n);
    for (std::size_t i = 1; i < n; ++i) demand[i] = rng.uniform(0.0, v[i].nhl_w);
    const auto state = solve_dhn(net, demand);
    std::vector<double> balance(n);
    for (std::size_t k = 0; k < net.pipes.size(); ++k) {
      balance[net.pipes[k].upstream] -= state.pipe_mass_flow_kg_s[k];
      balance[net.pipes[k].downstream] += state.pipe_mass_flow_kg_s[k];
    }
    for (std::size_t i = 1; i < n; ++i) worst_residual = std::max(worst_residual, std::abs(balance[i] - demand[i] / cp_dt));
  }
  o.require(worst_residual < kConservationTol, "conservation");
  o.detail << "mst mismatches=" << mst_mismatches << " quarters=" << quarters.size() << " pipes=" << pipes
           << " residual=" << worst_residual;
  return o;
}

Outcome sizing() {
  Outcome o;
  ThermalEnvelope env;
  env.surfaces = {{"wall", 1.0, 300.0}};
  env.volume_m3 = 500.0;
  env.air_exchange_per_h = 0.5;
  env.t_indoor_set_c = 20.0;
  const double nhl = nominal_heat_load(env, -12.0);
  const double nhl_hand = (300.0 + 1.2 * 1005.0 * 0.5 * 500.0 / 3600.0) * 32.0;
  o.require(rel_close(nhl, 12280.0, kSizingRelTol) && rel_close(nhl, nhl_hand, kSizingRelTol), "NHL");
  const double m = vertex_mass_flow(12280.0, 70.0, 40.0, 4186.0);
  const double m_hand = 12280.0 / 125580.0;
  o.require(rel_close(m, m_hand, kSizingRelTol), "mass flow");
  const double d = raw_inner_diameter(m_hand, 977.0, 1.5);
  const double d_hand = std::sqrt(4.0 * m_hand / (977.0 * std::numbers::pi * 1.5));
  o.require(rel_close(d, d_hand, kSizingRelTol), "diameter");
  const auto catalog = DnCatalog::standard();
  const auto& dn = catalog.select(m_hand, 977.0, 1.5, "check");
  o.require(dn.label == "DN15" && std::abs(dn.inner_diameter_m - 0.016) < 1e-15, "DN selection");
  o.detail << "NHL=" << nhl << " W, m=" << m << " kg/s, d=" << d * 1000.0 << " mm -> " << dn.label;
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto tmp = fs::temp_directory_path() / ("quartersim_accept_" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  const auto config = testsupport::read(testsupport::source_dir() / "data/scenarios/distributed-energy.json");
  const auto grid = testsupport::grid_dir("mv-rural-ring");
  for (const char* run : {"a", "b"}) {
    const auto q = realize_quarter(load_scenario(config), import_simbench(grid));
    save(q, tmp / run / "bundle");
  }
  const auto a = tree_bytes(tmp / "a/bundle");
  o.require(!a.empty() && a == tree_bytes(tmp / "b/bundle"), "bundle bytes");

  for (const char* run : {"a", "b"}) {
    const auto q = load(tmp / run / "bundle");
    const auto m = assemble_simulation(q, synthetic_april_weather(kStart, 13, q.scenario.seed));
    save_results(run_simulation(m, kStart, 12.0, 900.0), tmp / run / "results");
  }
  const auto ra = tree_bytes(tmp / "a/results");
  o.require(!ra.empty() && ra == tree_bytes(tmp / "b/results"), "result bytes");
  o.detail << a.size() << " bundle files, " << ra.size() << " result files";
  fs::remove_all(tmp);
  return o;
}

Outcome smart_meter() {
  Outcome o;
  RngStream rng(RngStream::derive(20200420, "sm/acceptance").next_u64());
  const SmartMeterConfig sm{10.0, 10.0, true};
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = smart_meter_measure(1000.0, 0.0, sm, rng).p_w;
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
  o.require(std::abs(mean - 1000.0) <= kSmMeanTol, "mean");
  o.require(sd >= kSmStdMin && sd <= kSmStdMax, "std");
  o.detail << "mean=" << mean << " std=" << sd;
  return o;
}

Outcome erm_integrity(const std::vector<QuarterModel>& quarters) {
  Outcome o;
  std::size_t violations = 0, rule_failures = 0, households = 0;
  for (const auto& q : quarters) {
    violations += validate(q).size();
    std::map<std::string, int> lines, pipes;
    for (const auto& l : q.lines) lines[l.endpoint_a] += l.endpoint_a_kind == EndpointKind::household;
    for (const auto& p : q.pipes) pipes[p.endpoint_a] += p.endpoint_a_kind == EndpointKind::household;
    std::set<std::string> load_profiles;
    for (const auto& p : q.profiles) {
      if (p.kind == ProfileKind::load) load_profiles.insert(p.id);
    }
    for (const auto& h : q.households) {
      ++households;
      const bool ok = lines[h.id] == 1 && pipes[h.id] <= 1 && load_profiles.count(h.config.load_profile_ref) == 1;
      rule_failures += !ok;
    }
  }
  o.require(violations == 0, "validate");
  o.require(rule_failures == 0, "per-household rules");
  o.detail << quarters.size() << " quarters, " << households << " households, " << violations << " violations";
  return o;
}

Outcome mv_ring() {
  Outcome o;
  const auto sd = load_scenario(testsupport::read(testsupport::source_dir() / "data/scenarios/distributed-energy.json"));
  o.require(sd.bev_share >= 0.5, "bev_share");
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = import_simbench(testsupport::grid_dir("mv-rural-ring"));
  const auto q = realize_quarter(sd, grid);
  const auto m = assemble_simulation(q, synthetic_april_weather(kStart, 49, sd.seed));
  const auto r = run_simulation(m, kStart, 48.0, 900.0);
  const double elapsed = seconds_since(t0);

  std::set<std::string> subgrids;
  for (const auto& n : q.nodes) {
    if (layer_for_voltage(n.vn_kv) == Layer::LV) subgrids.insert(n.cell_ref);
  }
  o.require(subgrids.size() >= 3, "LV subgrids");
  o.require(r.time.size() == 192, "step count");
  o.require(elapsed < kRingRuntimeS, "runtime");

  // MV/LV transformers: the LV side sits below 1 kV.
  const auto& loading = r.at(family::kTrafoLoading);
  std::vector<std::size_t> cols;
  for (const auto& t : q.transformers) {
    if (layer_for_voltage(q.find_node(t.lv_bus)->vn_kv) == Layer::LV) cols.push_back(loading.column(t.id));
  }
  double evening = 0.0, night = 0.0;
  std::size_t n_evening = 0, n_night = 0;
  for (std::size_t k = 0; k < r.time.size(); ++k) {
    const double h = hour_of_day(r.time[k]);
    double mean = 0.0;
    for (auto c : cols) mean += loading.rows[k][c] / static_cast<double>(cols.size());
    if (h >= 17.0 && h < 22.0) {
      evening += mean;
      ++n_evening;
    } else if (h >= 3.0 && h < 5.0) {
      night += mean;
      ++n_night;
    }
  }
  evening /= static_cast<double>(n_evening);
  night /= static_cast<double>(n_night);
  const double ratio = evening / night;
  o.require(ratio >= kEveningRatioMin, "evening/night ratio");
  o.detail << q.households.size() << " prosumers, " << subgrids.size() << " LV subgrids, " << r.time.size()
           << " steps in " << elapsed << "s; LV transformer loading 17-22h " << evening << "% vs 03-05h " << night
           << "% (ratio " << ratio << ")";
  return o;
}

Outcome energy_accounting() {
  Outcome o;
  auto sd = testsupport::scenario(11);
  sd.name = "single-prosumer";
  sd.pv_share = sd.bes_share = sd.bev_share = sd.ehp_share = sd.dhn_share = 0.0;
  RealizeOptions options;
  options.pool = ProfilePool{{LoadProfile{"flat", year_start(2020), 3600, std::vector<double>(8784, 1.0)}}, {}};
  auto q = realize_quarter(sd, import_simbench(testsupport::fixture("grids/single-prosumer")), options);
  for (auto& h : q.households) h.config.load_scale = 1.0;
  const auto m = assemble_simulation(q, synthetic_april_weather(kStart, 49, 11));
  const auto r = run_simulation(m, kStart, 48.0, 900.0);
  const auto& p = r.at(family::kTrafoP);
  double trafo_kwh = 0.0, load_kwh = 0.0;
  for (std::size_t k = 0; k < r.time.size(); ++k) {
    trafo_kwh += p.rows[k][0] * 1000.0 * r.dt_s / 3600.0;
    load_kwh += r.at(family::kHouseholdP).rows[k][0] / 1000.0 * r.dt_s / 3600.0;
  }
  const double losses = trafo_kwh - load_kwh;
  o.require(std::abs(load_kwh - 48.0) < 1e-9, "load energy");
  o.require(losses >= 0.0 && losses < kLossShareMax * 48.0, "losses");
  o.detail << "transformer " << trafo_kwh << " kWh = load " << load_kwh << " kWh + losses " << losses << " kWh ("
           << 100.0 * losses / 48.0 << "%)";
  return o;
}

Outcome emission() {
  Outcome o;
  const auto sd = load_scenario(testsupport::read(testsupport::fixture("golden/two-household.json")));
  const auto q = realize_quarter(sd, import_simbench(testsupport::fixture("grids/two-household")));
  const auto text = emit_model_text(q);
  const auto golden = testsupport::fixture("golden/Quarter_two_household.mo");
  o.require(fs::exists(golden) && text == testsupport::read(golden), "golden bytes");
  o.require(text == emit_model_text(q), "repeatability");
  o.detail << text.size() << " bytes";
  return o;
}

}  // namespace

int main() {
  const auto quarters = generated_quarters();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"power-flow correctness", power_flow},
      {"DHN synthesis", [&] { return dhn_synthesis(quarters); }},
      {"sizing formulas", sizing},
      {"determinism", determinism},
      {"smart-meter noise statistics", smart_meter},
      {"ERM integrity", [&] { return erm_integrity(quarters); }},
      {"MV-ring evening peak", mv_ring},
      {"energy accounting", energy_accounting},
      {"emission stability", emission},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << index++ << " " << name << ": " << o.detail.str() << "\n";
  }
  return failures == 0 ? 0 : 1;
}
