#include "cppm/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cppm/output.hpp"
#include "cppm/simulation.hpp"

namespace cppm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string stem_for(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%07ld", step);
  return buf;
}

// Rows/columns occupied by kinematic strips on each side.
json strip_extent(const SimulationConfig& cfg) {
  const int auto_depth = static_cast<int>(std::ceil(cfg.geometry.horizon_factor - 1e-12));
  int depth[4] = {0, 0, 0, 0};  // bottom, top, left, right
  for (const auto& b : cfg.loading.boundaries) {
    if (!(b.ux || b.uy || b.rot)) continue;
    const int d = b.region.depth > 0 ? b.region.depth : auto_depth;
    switch (b.region.side) {
      case Side::bottom: depth[0] = std::max(depth[0], d); break;
      case Side::top: depth[1] = std::max(depth[1], d); break;
      case Side::left: depth[2] = std::max(depth[2], d); break;
      case Side::right: depth[3] = std::max(depth[3], d); break;
      case Side::box: break;
    }
  }
  return {{"bottom", depth[0]}, {"top", depth[1]}, {"left", depth[2]}, {"right", depth[3]}};
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace

RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& opt) {
  RunResult res;
  const auto t_start = std::chrono::steady_clock::now();
  const fs::path dir = cfg.output.directory;

  json info;
  info["name"] = cfg.name;
  info["dt"] = cfg.time.dt;
  info["n_steps"] = cfg.time.n_steps;
  info["threads"] = opt.threads;
  info["geometry"] = {{"nx", cfg.geometry.nx}, {"ny", cfg.geometry.ny}, {"dx", cfg.geometry.dx}};
  info["kinematic_strips"] = strip_extent(cfg);
  info["model"] = cfg.material.model == ModelKind::viscoplastic          ? "viscoplastic"
                  : cfg.material.model == ModelKind::maxwell_viscoelastic ? "maxwell_viscoelastic"
                                                                          : "bond_viscoelastic";
  info["damage"] = cfg.damage.mode == DamageMode::none ? "none" : cfg.damage.mode == DamageMode::bilinear ? "bilinear" : "energy";
  if (cfg.geometry.notch) {
    const auto& n = *cfg.geometry.notch;
    info["notch"] = {n.a.x, n.a.y, n.b.x, n.b.y};
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream hist(dir / "history.csv");
  std::ofstream index(dir / "snapshots.csv");
  if (!hist || !index) {
    res.exit_code = kExitFailure;
    res.error = "cannot write to " + dir.string();
    return res;
  }
  hist << history_header() << '\n';
  index << "step,time_s,file\n";

  auto finish = [&](int code, const std::string& err) {
    res.exit_code = code;
    res.error = err;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    info["completed"] = code == kExitOk;
    info["exit_code"] = code;
    info["steps"] = res.steps;
    info["audit_failures"] = res.audit_failures;
    info["wall_seconds"] = res.wall_seconds;
    if (!err.empty()) info["error"] = err;
    try {
      write_json(info, dir / "run.json");
    } catch (const std::exception& e) {
      if (res.exit_code == kExitOk) {
        res.exit_code = kExitFailure;
        res.error = e.what();
      }
    }
  };

  try {
    Simulation sim(cfg, opt.threads);
    info["horizon"] = sim.horizon();
    info["critical_energy_density"] = sim.critical_energy_density();
    if (sim.stabilization_warning()) info["stabilization_warning"] = true;
    {
      // P-wave round trip over the specimen height, the period of the
      // boundary-reaction ringing.
      const auto mod = cfg.material.moduli();
      const double rho = sim.fields().rho.empty() ? 0.0 : sim.fields().rho.front();
      const double cp = std::sqrt((mod.lambda + 2.0 * mod.mu) / rho);
      info["wave_round_trip_s"] = 2.0 * cfg.geometry.ny * cfg.geometry.dx / cp;
    }
    auto snap = [&]() {
      if (!cfg.output.snapshots) return;
      const Snapshot s = sim.snapshot();
      const std::string stem = stem_for(s.step);
      write_snapshot(s, (dir / stem).string(), cfg.output.format);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", s.time);
      index << s.step << ',' << buf << ',' << stem << '\n';
    };

    write_history_row(hist, sim.history_row());
    snap();
    const long n = cfg.time.n_steps;
    const long every = cfg.output.snapshot_interval;
    for (long k = 1; k <= n; ++k) {
      sim.step();
      write_history_row(hist, sim.history_row());
      res.steps = k;
      res.audit_failures = sim.audit_failures();
      if ((every > 0 && k % every == 0) || k == n) snap();
      if (!opt.quiet && n >= 10 && k % (n / 10) == 0)
        std::fprintf(stderr, "%s: step %ld/%ld\n", cfg.name.c_str(), k, n);
    }
    hist.flush();
    index.flush();

    std::ofstream crack(dir / "crack_front.csv");
    crack << "id,arrival_time_s\n";
    const auto& at = sim.crack_arrival();
    for (Index i = 0; i < at.size(); ++i) {
      if (at[i] < 0.0) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", at[i]);
      crack << i << ',' << buf << '\n';
    }
    if (!hist || !index || !crack) throw std::runtime_error("write failed in " + dir.string());
  } catch (const NumericalBreakdown& e) {
    finish(kExitBreakdown, e.what());
    return res;
  } catch (const ConfigError& e) {
    finish(kExitConfig, e.what());
    return res;
  } catch (const DegenerateNeighborhood& e) {
    finish(kExitConfig, e.what());
    return res;
  } catch (const std::exception& e) {
    finish(kExitFailure, e.what());
    return res;
  }
  finish(kExitOk, "");
  if (opt.metrics && res.exit_code == kExitOk && cfg.output.snapshots) {
    try {
      const MetricsReport m = compute_metrics(dir.string());
      std::ofstream os(dir / "metrics.json");
      os << m.to_json() << '\n';
    } catch (const std::exception& e) {
      std::fprintf(stderr, "metrics: %s\n", e.what());
    }
  }
  return res;
}

std::vector<double> moving_average(const std::vector<double>& r, long width) {
  const long n = static_cast<long>(r.size()), half = std::max(0L, width / 2);
  if (half == 0) return r;
  std::vector<double> prefix(n + 1, 0.0), out(n);
  for (long i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + r[i];
  for (long i = 0; i < n; ++i) {
    const long a = std::max(0L, i - half), b = std::min(n, i + half + 1);
    out[i] = (prefix[b] - prefix[a]) / (b - a);
  }
  return out;
}

long count_peaks(const std::vector<double>& r, double prominence) {
  double top = 0.0;
  for (double x : r) top = std::max(top, std::abs(x));
  if (top == 0.0) return 0;
  const double h = prominence * top;
  // Alternating hysteresis walk: a peak counts once the signal has risen h
  // above the running minimum and then fallen h below the running maximum
  // (or ends while still elevated).
  long peaks = 0;
  double lo = std::abs(r.front()), hi = lo;
  bool rising = true;
  for (double x : r) {
    const double a = std::abs(x);
    if (rising) {
      hi = std::max(hi, a);
      if (a <= hi - h) {
        ++peaks;
        rising = false;
        lo = a;
      }
    } else {
      lo = std::min(lo, a);
      if (a >= lo + h) {
        rising = true;
        hi = a;
      }
    }
  }
  if (rising && hi >= lo + h) ++peaks;
  return peaks;
}

MetricsReport compute_metrics(const std::string& dir_s) {
  const fs::path dir = dir_s;
  MetricsReport rep;
  json info;
  {
    std::ifstream in(dir / "run.json");
    if (!in) throw std::runtime_error("no run.json in " + dir_s);
    in >> info;
  }
  rep.name = info.value("name", "");
  rep.audit_failures = info.value("audit_failures", 0L);

  // Last snapshot listed in the index.
  std::string last_stem;
  {
    std::ifstream in(dir / "snapshots.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c1 = line.find(',');
      const auto c2 = line.rfind(',');
      rep.snapshot_step = std::stol(line.substr(0, c1));
      last_stem = line.substr(c2 + 1);
    }
  }
  if (last_stem.empty()) throw std::runtime_error("no snapshots in " + dir_s);
  const fs::path csv = dir / (last_stem + ".csv");
  const Snapshot s = fs::exists(csv) ? read_snapshot_csv(csv.string())
                                     : read_snapshot_vtk((dir / (last_stem + ".vtk")).string());

  const auto& strips = info["kinematic_strips"];
  BandOptions bo;
  bo.exclude_bottom_rows = strips.value("bottom", 0);
  bo.exclude_top_rows = strips.value("top", 0);
  bo.exclude_left_cols = strips.value("left", 0);
  bo.exclude_right_cols = strips.value("right", 0);
  if (info.value("model", "") == "viscoplastic") {
    rep.band = measure_band_angle(s, bo);
    if (rep.band->localized) {
      const LatticeIndex lat = infer_lattice(s.X);
      double in_max = 0.0;
      std::vector<double> outside;
      for (Index i = 0; i < s.size(); ++i) {
        if (lat.row[i] < bo.exclude_bottom_rows || lat.row[i] >= lat.ny - bo.exclude_top_rows ||
            lat.col[i] < bo.exclude_left_cols || lat.col[i] >= lat.nx - bo.exclude_right_cols)
          continue;
        if (rep.band->in_band[i])
          in_max = std::max(in_max, std::abs(s.omega[i]));
        else
          outside.push_back(std::abs(s.omega[i]));
      }
      if (!outside.empty()) {
        auto mid = outside.begin() + outside.size() / 2;
        std::nth_element(outside.begin(), mid, outside.end());
        rep.rotation_ratio = *mid > 0.0 ? in_max / *mid : std::numeric_limits<double>::infinity();
      }
      // Second-order work sign on the most strained decile.
      std::vector<Index> order(s.size());
      for (Index i = 0; i < s.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](Index a, Index b) { return s.eq_plastic_shear[a] > s.eq_plastic_shear[b]; });
      const Index top = std::max<Index>(1, s.size() / 10);
      Index neg = 0;
      for (Index q = 0; q < top; ++q) neg += s.second_order_work[order[q]] < 0.0 ? 1 : 0;
      rep.softening_negative_fraction = static_cast<double>(neg) / top;
    }
  }

  if (fs::exists(dir / "history.csv")) {
    const auto rows = read_history_csv((dir / "history.csv").string());
    std::vector<double> r;
    for (const auto& h : rows) {
      r.push_back(h.reaction);
      if (std::abs(h.reaction) > std::abs(rep.peak_reaction)) {
        rep.peak_reaction = h.reaction;
        rep.peak_time = h.time;
      }
    }
    if (!rows.empty()) rep.final_reaction = rows.back().reaction;
    if (!r.empty()) {
      rep.reaction_peaks = count_peaks(r, 0.05);
      const double window = info.value("wave_round_trip_s", 0.0);
      const double dt = info.value("dt", 0.0);
      const long w = dt > 0.0 ? std::lround(window / dt) : 0;
      rep.reaction_peaks_filtered = count_peaks(moving_average(r, w), 0.05);
    }
  }

  if (info.contains("notch") && info.value("damage", "none") != "none" && fs::exists(dir / "crack_front.csv")) {
    const auto nt = info["notch"];
    const Vec2 a{nt[0].get<double>(), nt[1].get<double>()}, b{nt[2].get<double>(), nt[3].get<double>()};
    // Crack tracking follows a horizontal notch towards +x.
    if (std::abs(b.x - a.x) >= std::abs(b.y - a.y)) {
      std::vector<double> arrival(s.size(), -1.0);
      std::ifstream in(dir / "crack_front.csv");
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = line.find(',');
        const Index id = std::stoull(line.substr(0, c));
        if (id < arrival.size()) arrival[id] = std::strtod(line.c_str() + c + 1, nullptr);
      }
      BranchOptions opt;
      opt.threshold = kCrackDamage;
      opt.notch_tip = a.x > b.x ? a : b;
      std::vector<Vec2> X(s.size());
      for (Index i = 0; i < s.size(); ++i) X[s.id[i]] = s.X[i];
      rep.branch = measure_branch_timing(X, frames_from_arrival(arrival, kCrackDamage), opt);
    }
  }
  return rep;
}

std::string MetricsReport::to_json() const {
  json j;
  j["name"] = name;
  j["snapshot_step"] = snapshot_step;
  j["audit_failures"] = audit_failures;
  j["reaction"] = {{"peak_N", peak_reaction},
                   {"peak_time_s", peak_time},
                   {"final_N", final_reaction},
                   {"peaks", reaction_peaks},
                   {"peaks_filtered", reaction_peaks_filtered}};
  if (band) {
    j["band"] = {{"localized", band->localized},
                 {"principal_angle_deg", band->principal_angle},
                 {"elongation", band->elongation},
                 {"component_angles_deg", band->component_angles},
                 {"conjugate_angles_deg", band->conjugate_angles}};
    if (band->localized) {
      j["band"]["rotation_ratio"] = std::isfinite(rotation_ratio) ? json(rotation_ratio) : json("inf");
      j["band"]["negative_second_order_work_fraction"] = softening_negative_fraction;
    }
  }
  if (branch) {
    auto us = [](const std::optional<double>& t) { return t ? json(*t * 1e6) : json(nullptr); };
    j["crack"] = {{"growth_start_us", us(branch->growth_start)},
                  {"branch_start_us", us(branch->branch_start)},
                  {"branch_end_us", us(branch->branch_end)}};
  }
  return j.dump(2);
}

}  // namespace cppm
