#include "cppm/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cppm {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

// Scalar columns after id in snapshot order.
std::vector<double> row_values(const Snapshot& s, Index i) {
  const Mat2& e = s.eps[i];
  return {s.X[i].x, s.X[i].y, s.u[i].x, s.u[i].y, s.v[i].x, s.v[i].y, s.omega[i], e.xx, e.xy, e.yx, e.yy,
          s.eq_plastic_shear[i], s.plastic_volume[i], s.eps_hat[i], s.damage[i], s.second_order_work[i]};
}

void set_row(Snapshot& s, Index i, Index id, const std::vector<double>& v) {
  s.id[i] = id;
  s.X[i] = {v[0], v[1]};
  s.u[i] = {v[2], v[3]};
  s.v[i] = {v[4], v[5]};
  s.omega[i] = v[6];
  s.eps[i] = {v[7], v[8], v[9], v[10]};
  s.eq_plastic_shear[i] = v[11];
  s.plastic_volume[i] = v[12];
  s.eps_hat[i] = v[13];
  s.damage[i] = v[14];
  s.second_order_work[i] = v[15];
}

}  // namespace

const std::vector<std::string>& snapshot_columns() {
  static const std::vector<std::string> cols{"id",      "X_x",     "X_y",     "u_x",     "u_y",
                                             "v_x",     "v_y",     "omega",   "eps_xx",  "eps_xy",
                                             "eps_yx",  "eps_yy",  "eq_plastic_shear", "plastic_volume",
                                             "eps_hat", "damage",  "second_order_work"};
  return cols;
}

void write_snapshot_csv(const Snapshot& s, const std::string& path) {
  auto os = open_out(path);
  const auto& cols = snapshot_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  for (Index i = 0; i < s.size(); ++i) {
    os << s.id[i];
    for (double x : row_values(s, i)) os << ',' << num(x);
    os << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

Snapshot read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  const auto& cols = snapshot_columns();
  std::vector<std::vector<double>> rows;
  std::vector<Index> ids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    ids.push_back(std::strtoull(p, &end, 10));
    std::vector<double> v;
    v.reserve(cols.size() - 1);
    while (*end == ',') {
      p = end + 1;
      v.push_back(std::strtod(p, &end));
    }
    if (v.size() != cols.size() - 1) throw std::runtime_error("malformed row in " + path);
    rows.push_back(std::move(v));
  }
  Snapshot s;
  s.resize(rows.size());
  for (Index i = 0; i < rows.size(); ++i) set_row(s, i, ids[i], rows[i]);
  return s;
}

void write_snapshot_vtk(const Snapshot& s, const std::string& path) {
  auto os = open_out(path);
  const Index n = s.size();
  os << "# vtk DataFile Version 3.0\nsnapshot step " << s.step << " time " << num(s.time) << "\nASCII\n"
     << "DATASET POLYDATA\nPOINTS " << n << " double\n";
  for (Index i = 0; i < n; ++i) os << num(s.X[i].x) << ' ' << num(s.X[i].y) << " 0\n";
  os << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (Index i = 0; i < n; ++i) os << "1 " << i << '\n';
  os << "POINT_DATA " << n << '\n';
  const auto& cols = snapshot_columns();
  // Every column except the coordinates is written as its own scalar array.
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] == "X_x" || cols[c] == "X_y") continue;
    os << "SCALARS " << cols[c] << " double 1\nLOOKUP_TABLE default\n";
    for (Index i = 0; i < n; ++i) os << (c == 0 ? std::to_string(s.id[i]) : num(row_values(s, i)[c - 1])) << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

Snapshot read_snapshot_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string tok;
  Index n = 0;
  Snapshot s;
  const auto& cols = snapshot_columns();
  std::vector<std::vector<double>> vals;
  while (in >> tok) {
    if (tok == "POINTS") {
      in >> n >> tok;
      s.resize(n);
      vals.assign(n, std::vector<double>(cols.size() - 1, 0.0));
      for (Index i = 0; i < n; ++i) {
        double z;
        in >> vals[i][0] >> vals[i][1] >> z;
      }
    } else if (tok == "SCALARS") {
      std::string name, type, lt, def;
      int ncomp;
      in >> name >> type >> ncomp >> lt >> def;
      std::size_t c = 0;
      while (c < cols.size() && cols[c] != name) ++c;
      if (c == cols.size()) throw std::runtime_error("unknown array " + name);
      for (Index i = 0; i < n; ++i) {
        std::string v;
        in >> v;
        if (c == 0)
          s.id[i] = std::strtoull(v.c_str(), nullptr, 10);
        else
          vals[i][c - 1] = std::strtod(v.c_str(), nullptr);
      }
    }
  }
  for (Index i = 0; i < n; ++i) set_row(s, i, s.id[i], vals[i]);
  return s;
}

void write_snapshot(const Snapshot& s, const std::string& stem, OutputFormat format) {
  if (format != OutputFormat::vtk) write_snapshot_csv(s, stem + ".csv");
  if (format != OutputFormat::csv) write_snapshot_vtk(s, stem + ".vtk");
}

const char* history_header() { return "step,time_s,reaction_force_N,W_int,W_ext,W_kin,audit_pass"; }

void write_history_row(std::ostream& os, const HistoryRow& r) {
  os << r.step << ',' << num(r.time) << ',' << num(r.reaction) << ',' << num(r.W_int) << ',' << num(r.W_ext) << ','
     << num(r.W_kin) << ',' << (r.audit_pass ? 1 : 0) << '\n';
}

std::vector<HistoryRow> read_history_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<HistoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    HistoryRow r;
    char* end = nullptr;
    const char* p = line.c_str();
    r.step = std::strtol(p, &end, 10);
    r.time = std::strtod(end + 1, &end);
    r.reaction = std::strtod(end + 1, &end);
    r.W_int = std::strtod(end + 1, &end);
    r.W_ext = std::strtod(end + 1, &end);
    r.W_kin = std::strtod(end + 1, &end);
    r.audit_pass = std::strtol(end + 1, &end, 10) != 0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cppm
