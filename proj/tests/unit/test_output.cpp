#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cppm/output.hpp"
#include "oracles.hpp"

using namespace cppm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cppm_test_output_" + std::to_string(::getpid())) / name;
  fs::create_directories(p.parent_path());
  return p;
}

Snapshot four_points() {
  Snapshot s;
  s.resize(4);
  oracle::Rng r(17);
  const auto X = oracle::grid_points(2, 2, 1e-3);
  for (Index i = 0; i < 4; ++i) {
    s.id[i] = i;
    s.X[i] = X[i];
    s.u[i] = r.vec(-1e-4, 1e-4);
    s.v[i] = r.vec(-1.0, 1.0);
    s.omega[i] = r.uniform(-1e-2, 1e-2);
    s.eps[i] = r.mat(-1e-3, 1e-3);
    s.eq_plastic_shear[i] = r.uniform(0.0, 0.1);
    s.plastic_volume[i] = r.uniform(-0.01, 0.01);
    s.eps_hat[i] = r.uniform(0.0, 0.1);
    s.damage[i] = r.uniform(0.0, 1.0);
    s.second_order_work[i] = r.uniform(-1e3, 1e3);
  }
  s.damage[3] = 1.0 / 3.0;
  return s;
}

void expect_same(const Snapshot& a, const Snapshot& b, double rel) {
  ASSERT_EQ(a.size(), b.size());
  auto near = [rel](double x, double y) { return std::abs(x - y) <= rel * std::abs(x); };
  for (Index i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.id[i], b.id[i]);
    EXPECT_TRUE(near(a.X[i].x, b.X[i].x) && near(a.X[i].y, b.X[i].y));
    EXPECT_TRUE(near(a.u[i].x, b.u[i].x) && near(a.u[i].y, b.u[i].y));
    EXPECT_TRUE(near(a.v[i].x, b.v[i].x) && near(a.v[i].y, b.v[i].y));
    EXPECT_TRUE(near(a.omega[i], b.omega[i]));
    EXPECT_TRUE(near(a.eps[i].xx, b.eps[i].xx) && near(a.eps[i].xy, b.eps[i].xy) &&
                near(a.eps[i].yx, b.eps[i].yx) && near(a.eps[i].yy, b.eps[i].yy));
    EXPECT_TRUE(near(a.eq_plastic_shear[i], b.eq_plastic_shear[i]));
    EXPECT_TRUE(near(a.plastic_volume[i], b.plastic_volume[i]));
    EXPECT_TRUE(near(a.eps_hat[i], b.eps_hat[i]));
    EXPECT_TRUE(near(a.damage[i], b.damage[i]));
    EXPECT_TRUE(near(a.second_order_work[i], b.second_order_work[i]));
  }
}

}  // namespace

TEST(SnapshotCsv, HeaderAndRowCount) {
  const auto path = scratch("rows.csv");
  write_snapshot_csv(four_points(), path.string());
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("id,X_x,X_y,u_x,u_y", 0), 0u);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(SnapshotCsv, RoundTripIsBitIdentical) {
  const auto s = four_points();
  const auto path = scratch("round.csv");
  write_snapshot_csv(s, path.string());
  expect_same(s, read_snapshot_csv(path.string()), 0.0);
}

TEST(SnapshotVtk, AgreesWithCsv) {
  const auto s = four_points();
  const auto stem = scratch("both");
  write_snapshot(s, stem.string(), OutputFormat::both);
  ASSERT_TRUE(fs::exists(stem.string() + ".csv"));
  ASSERT_TRUE(fs::exists(stem.string() + ".vtk"));
  const auto c = read_snapshot_csv(stem.string() + ".csv");
  const auto v = read_snapshot_vtk(stem.string() + ".vtk");
  expect_same(c, v, 1e-12);
  std::ifstream in(stem.string() + ".vtk");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.rfind("# vtk DataFile", 0), 0u);
}

TEST(SnapshotFormat, CsvOnlyAndVtkOnly) {
  const auto s = four_points();
  const auto a = scratch("csv_only"), b = scratch("vtk_only");
  write_snapshot(s, a.string(), OutputFormat::csv);
  write_snapshot(s, b.string(), OutputFormat::vtk);
  EXPECT_TRUE(fs::exists(a.string() + ".csv"));
  EXPECT_FALSE(fs::exists(a.string() + ".vtk"));
  EXPECT_TRUE(fs::exists(b.string() + ".vtk"));
  EXPECT_FALSE(fs::exists(b.string() + ".csv"));
}

TEST(History, RowRoundTrip) {
  const auto path = scratch("history.csv");
  HistoryRow r{12, 3.6e-5, -1234.5678901234567, 1.5e-3, 2.5e-3, 7e-4, false};
  {
    std::ofstream os(path);
    os << history_header() << '\n';
    write_history_row(os, r);
    r.step = 13;
    r.audit_pass = true;
    write_history_row(os, r);
  }
  const auto rows = read_history_csv(path.string());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].step, 12);
  EXPECT_EQ(rows[0].time, 3.6e-5);
  EXPECT_EQ(rows[0].reaction, -1234.5678901234567);
  EXPECT_FALSE(rows[0].audit_pass);
  EXPECT_TRUE(rows[1].audit_pass);
}
