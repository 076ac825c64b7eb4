#include <gtest/gtest.h>

#include <cmath>

#include "quartersim/error.hpp"
#include "quartersim/grid.hpp"
#include "support.hpp"

using namespace quartersim;
using testsupport::TempDir;
using cplx = std::complex<double>;

namespace {

/// 20 kV slack feeding one bus through a line of 40 ohm reactance: x = 0.1 p.u. on 1 MVA.
GridTopology two_bus() {
  GridTopology g;
  g.buses = {{"A", 20.0, BusKind::slack, {0, 0}, "MV", Layer::MV}, {"B", 20.0, BusKind::pq, {100, 0}, "MV", Layer::MV}};
  g.lines = {{"L", "A", "B", 0.0, 40.0, 1.0, 300.0}};
  return g;
}

cplx entry(const AdmittanceMatrix& y, std::size_t r, std::size_t c) {
  return y.y.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

void write(const std::filesystem::path& p, const std::string& text) { csv::write_text(p, text); }

}  // namespace

TEST(GridImport, LvRural1HasThirteenLoadAnchors) {
  const auto g = import_simbench(testsupport::grid_dir("lv-rural1"));
  EXPECT_EQ(g.load_anchors.size(), 13u);
  EXPECT_EQ(g.transformers.size(), 1u);
  EXPECT_TRUE(validate_topology(g).empty());
  const auto* mv = g.find_bus("MV1.bus0");
  ASSERT_NE(mv, nullptr);
  EXPECT_EQ(mv->kind, BusKind::slack);
  EXPECT_EQ(mv->layer, Layer::MV);
  EXPECT_EQ(g.find_bus("LV1.101.bus0")->layer, Layer::LV);
}

TEST(GridImport, MvRingHasFourLvSubgridsAndHundredLoads) {
  const auto g = import_simbench(testsupport::grid_dir("mv-rural-ring"));
  EXPECT_EQ(g.load_anchors.size(), 100u);
  EXPECT_EQ(g.transformers.size(), 5u);
  EXPECT_TRUE(validate_topology(g).empty()) << validate_topology(g).messages().front();
  EXPECT_EQ(g.find_bus("HV1.bus0")->layer, Layer::HV_boundary);
}

TEST(GridImport, NodeFileOnlyGivesSingleBusWithoutSlack) {
  TempDir dir("node_only");
  write(dir / "Node.csv", "id;vmR;extra\nN1;0.4;ignored\n");
  const auto g = import_simbench(dir.path());
  ASSERT_EQ(g.buses.size(), 1u);
  EXPECT_TRUE(g.lines.empty());
  const auto report = validate_topology(g);
  ASSERT_EQ(report.slack_findings.size(), 1u);
  EXPECT_EQ(report.slack_findings.front(), "missing slack bus");
}

TEST(GridImport, MissingFileIsNamed) {
  TempDir dir("missing");
  try {
    import_simbench(dir.path());
    FAIL();
  } catch (const ImportError& e) {
    EXPECT_NE(std::string(e.what()).find("Node.csv"), std::string::npos);
  }
  write(dir / "Node.csv", "id;vmR\nA;0.4\nB;0.4\n");
  write(dir / "Line.csv", "id;nodeA;nodeB;type;length\nL1;A;B;T;0.1\n");
  try {
    import_simbench(dir.path());
    FAIL();
  } catch (const ImportError& e) {
    EXPECT_NE(std::string(e.what()).find("LineType.csv"), std::string::npos);
  }
}

TEST(GridImport, DanglingReferencesAreAllListed) {
  TempDir dir("dangling");
  write(dir / "Node.csv", "id;vmR\nA;0.4\nB;0.4\n");
  write(dir / "LineType.csv", "id;r;x;iMax\nT;0.2;0.08;0.27\n");
  write(dir / "Line.csv", "id;nodeA;nodeB;type;length\nL1;A;X;T;0.1\nL2;A;B;Nope;0.1\n");
  write(dir / "Load.csv", "id;node\nLd;Y\n");
  try {
    import_simbench(dir.path());
    FAIL();
  } catch (const IntegrityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("L1"), std::string::npos);
    EXPECT_NE(msg.find("L2"), std::string::npos);
    EXPECT_NE(msg.find("Ld"), std::string::npos);
  }
}

TEST(GridImport, ExportThenImportIsIdentity) {
  const auto g = import_simbench(testsupport::grid_dir("mv-rural-ring"));
  TempDir dir("export");
  export_simbench(g, dir.path());
  EXPECT_EQ(import_simbench(dir.path()), g);
}

TEST(GridImport, CurrentRatingIsReadInKiloampere) {
  const auto g = import_simbench(testsupport::grid_dir("lv-rural1"));
  EXPECT_DOUBLE_EQ(g.lines.front().i_max_a, 270.0);
  const auto& t = g.transformers.front();
  EXPECT_DOUBLE_EQ(t.s_rated_mva, 0.16);
  EXPECT_NEAR(t.vkr_percent, 2.35 / (0.16 * 10.0), 1e-12);
}

TEST(GridValidate, WellFormedRadialGridIsClean) {
  EXPECT_TRUE(validate_topology(import_simbench(testsupport::grid_dir("lv-rural1"))).empty());
}

TEST(GridValidate, IsolatedBusIsReported) {
  auto g = two_bus();
  g.buses.push_back({"C", 20.0, BusKind::pq, {}, "MV", Layer::MV});
  const auto report = validate_topology(g);
  ASSERT_EQ(report.disconnected_buses, std::vector<std::string>{"C"});
  EXPECT_TRUE(report.slack_findings.empty());
}

TEST(GridValidate, DuplicateIdsAndSlacks) {
  auto g = two_bus();
  g.buses.push_back({"B", 20.0, BusKind::slack, {}, "MV", Layer::MV});
  const auto report = validate_topology(g);
  ASSERT_EQ(report.duplicate_ids.size(), 1u);
  EXPECT_NE(report.duplicate_ids.front().find("B"), std::string::npos);
  ASSERT_EQ(report.slack_findings.size(), 1u);
  EXPECT_NE(report.slack_findings.front().find("duplicate slack"), std::string::npos);
  EXPECT_FALSE(report.empty());
}

TEST(Admittance, TwoBusReactanceHand) {
  const auto y = build_admittance(two_bus(), 1.0);
  ASSERT_EQ(y.n(), 2u);
  EXPECT_NEAR(std::abs(entry(y, 0, 0) - cplx(0, -10)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(entry(y, 1, 1) - cplx(0, -10)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(entry(y, 0, 1) - cplx(0, 10)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(entry(y, 1, 0) - cplx(0, 10)), 0.0, 1e-12);
}

TEST(Admittance, SymmetricZeroRowSumsAndSparse) {
  for (const char* name : {"lv-rural1", "mv-rural-ring"}) {
    const auto g = import_simbench(testsupport::grid_dir(name));
    const auto y = build_admittance(g, 1.0);
    const Eigen::SparseMatrix<cplx> diff = y.y - Eigen::SparseMatrix<cplx>(y.y.transpose());
    EXPECT_EQ(diff.norm(), 0.0) << name;
    std::vector<cplx> row_sum(y.n());
    for (Eigen::Index k = 0; k < y.y.outerSize(); ++k) {
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(y.y, k); it; ++it) row_sum[it.row()] += it.value();
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < y.n(); ++i) scale = std::max(scale, std::abs(entry(y, i, i)));
    for (const auto& s : row_sum) EXPECT_LE(std::abs(s), 1e-12 * scale) << name;
    EXPECT_LE(static_cast<std::size_t>(y.y.nonZeros()), y.n() + 2 * (g.lines.size() + g.transformers.size()));
  }
}

TEST(Admittance, TransformerRebasedFromOwnRating) {
  GridTopology g;
  g.buses = {{"H", 20.0, BusKind::slack, {}, "MV", Layer::MV}, {"L", 0.4, BusKind::pq, {}, "LV", Layer::LV}};
  g.transformers = {{"T", "H", "L", 0.16, 4.0, 1.0}};
  const auto branches = build_branches(g, 1.0);
  ASSERT_EQ(branches.size(), 1u);
  // own base: r 0.01, x sqrt(0.04^2 - 0.01^2); system base scales by 1 / 0.16
  const cplx z_expected = cplx(0.01, std::sqrt(0.04 * 0.04 - 0.01 * 0.01)) / 0.16;
  EXPECT_NEAR(std::abs(1.0 / branches[0].y_series - z_expected), 0.0, 1e-12);
}

TEST(Admittance, PerUnitRebaseRoundTrip) {
  const auto g = import_simbench(testsupport::grid_dir("mv-rural-ring"));
  const auto a = build_branches(g, 1.0);
  const auto b = build_branches(g, 7.3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx z_a = 1.0 / a[i].y_series;
    const cplx back = rebase_impedance(1.0 / b[i].y_series, 7.3, 1.0);
    EXPECT_LE(std::abs(back - z_a), 1e-12 * std::abs(z_a)) << a[i].id;
  }
}

TEST(Admittance, ZeroImpedanceBranchIsNamed) {
  auto g = two_bus();
  g.lines[0].x_ohm_per_km = 0.0;
  try {
    build_admittance(g, 1.0);
    FAIL();
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("line L"), std::string::npos);
  }
}
