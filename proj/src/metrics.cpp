#include "cppm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cppm {

LatticeIndex infer_lattice(const std::vector<Vec2>& X) {
  LatticeIndex L;
  if (X.empty()) return L;
  std::vector<double> xs, ys;
  xs.reserve(X.size());
  ys.reserve(X.size());
  for (const auto& p : X) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  L.xmin = xs.front();
  L.ymin = ys.front();
  double dx = std::numeric_limits<double>::infinity();
  const double span = std::max(xs.back() - xs.front(), ys.back() - ys.front());
  const double tiny = 1e-9 * std::max(span, 1e-300);
  for (const auto* v : {&xs, &ys})
    for (std::size_t k = 1; k < v->size(); ++k) {
      const double d = (*v)[k] - (*v)[k - 1];
      if (d > tiny) dx = std::min(dx, d);
    }
  if (!std::isfinite(dx)) dx = 1.0;
  L.dx = dx;
  L.nx = std::lround((xs.back() - L.xmin) / dx) + 1;
  L.ny = std::lround((ys.back() - L.ymin) / dx) + 1;
  L.col.resize(X.size());
  L.row.resize(X.size());
  L.at.assign(static_cast<std::size_t>(L.nx * L.ny), -1);
  for (Index i = 0; i < X.size(); ++i) {
    L.col[i] = std::lround((X[i].x - L.xmin) / dx);
    L.row[i] = std::lround((X[i].y - L.ymin) / dx);
    L.at[L.row[i] * L.nx + L.col[i]] = static_cast<long>(i);
  }
  return L;
}

std::vector<std::vector<Index>> connected_components(const LatticeIndex& lat, const std::vector<std::uint8_t>& mask) {
  std::vector<std::vector<Index>> out;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<Index> stack;
  for (Index s = 0; s < mask.size(); ++s) {
    if (!mask[s] || seen[s]) continue;
    std::vector<Index> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      for (long dr = -1; dr <= 1; ++dr)
        for (long dc = -1; dc <= 1; ++dc) {
          const long j = lat.index(lat.col[i] + dc, lat.row[i] + dr);
          if (j < 0 || !mask[j] || seen[j]) continue;
          seen[j] = 1;
          stack.push_back(static_cast<Index>(j));
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

double acute_angle_deg(const Vec2& dir) {
  double a = std::atan2(std::abs(dir.y), std::abs(dir.x)) * 180.0 / std::numbers::pi;
  return std::clamp(a, 0.0, 90.0);
}

double BandMeasurement::mean(const std::vector<double>& a) {
  if (a.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : a) s += x;
  return s / a.size();
}

namespace {

struct Pca {
  Vec2 centre;
  Vec2 axis;
  double l1 = 0.0, l2 = 0.0;
};

Pca principal_axis(const std::vector<Vec2>& pts) {
  Pca r;
  if (pts.empty()) return r;
  for (const auto& p : pts) r.centre += p;
  r.centre *= 1.0 / pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : pts) {
    const Vec2 d = p - r.centre;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  sxx /= pts.size();
  sxy /= pts.size();
  syy /= pts.size();
  const double m = 0.5 * (sxx + syy);
  const double h = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  r.l1 = m + h;
  r.l2 = std::max(m - h, 0.0);
  const double th = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  r.axis = {std::cos(th), std::sin(th)};
  return r;
}

struct Line {
  double theta = 0.0;  // normal direction
  double rho = 0.0;
  int count = 0;
};

// Densest strip of the given width among all orientations, skipping
// orientations within `avoid_tol` of `avoid` (radians, modulo pi).
Line densest_strip(const std::vector<Vec2>& pts, double width, double avoid, double avoid_tol) {
  Line best;
  best.count = -1;
  std::vector<double> proj(pts.size());
  for (int k = 0; k < 360; ++k) {
    const double th = k * std::numbers::pi / 360.0;
    if (avoid_tol > 0.0) {
      double d = std::fmod(std::abs(th - avoid), std::numbers::pi);
      d = std::min(d, std::numbers::pi - d);
      if (d < avoid_tol) continue;
    }
    const Vec2 n{std::cos(th), std::sin(th)};
    for (std::size_t i = 0; i < pts.size(); ++i) proj[i] = dot(pts[i], n);
    std::sort(proj.begin(), proj.end());
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < proj.size(); ++hi) {
      while (proj[hi] - proj[lo] > width) ++lo;
      const int c = static_cast<int>(hi - lo + 1);
      if (c > best.count) best = {th, 0.5 * (proj[hi] + proj[lo]), c};
    }
  }
  return best;
}

std::vector<Vec2> near_line(const std::vector<Vec2>& pts, const Line& l, double dist) {
  const Vec2 n{std::cos(l.theta), std::sin(l.theta)};
  std::vector<Vec2> out;
  for (const auto& p : pts)
    if (std::abs(dot(p, n) - l.rho) <= dist) out.push_back(p);
  return out;
}

}  // namespace

BandMeasurement measure_band_angle(const std::vector<Vec2>& X, const std::vector<double>& value,
                                   const BandOptions& opt) {
  BandMeasurement out;
  out.in_band.assign(X.size(), 0);
  if (X.empty()) return out;
  const LatticeIndex lat = infer_lattice(X);

  auto excluded = [&](Index i) {
    return lat.row[i] < opt.exclude_bottom_rows || lat.row[i] >= lat.ny - opt.exclude_top_rows ||
           lat.col[i] < opt.exclude_left_cols || lat.col[i] >= lat.nx - opt.exclude_right_cols;
  };
  double vmax = 0.0;
  for (Index i = 0; i < X.size(); ++i)
    if (!excluded(i) && std::isfinite(value[i])) vmax = std::max(vmax, value[i]);
  if (vmax <= 0.0) return out;
  const double thr = opt.threshold_frac * vmax;
  for (Index i = 0; i < X.size(); ++i) out.in_band[i] = (!excluded(i) && value[i] >= thr) ? 1 : 0;

  auto comps = connected_components(lat, out.in_band);
  std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  if (comps.empty()) return out;
  const double width = 3.0 * lat.dx;
  auto points_of = [&](const std::vector<Index>& c) {
    std::vector<Vec2> pts;
    pts.reserve(c.size());
    for (Index i : c) pts.push_back(X[i]);
    return pts;
  };

  for (const auto& c : comps) {
    if (c.size() < 3 || c.size() < opt.min_component_frac * comps.front().size()) break;
    const Pca pca = principal_axis(points_of(c));
    out.component_angles.push_back(acute_angle_deg(pca.axis));
    if (&c == &comps.front()) {
      out.principal_angle = out.component_angles.back();
      out.elongation = pca.l2 > 0.0 ? std::sqrt(pca.l1 / pca.l2) : std::numeric_limits<double>::infinity();
    }
  }
  if (out.component_angles.empty()) return out;
  out.localized = true;

  if (out.component_angles.size() >= 2) {
    out.conjugate_angles = {out.component_angles[0], out.component_angles[1]};
  } else {
    // Densest strip, then the densest strip at least 20 degrees away, each
    // refined by the principal axis of the points near it.
    const auto pts = points_of(comps.front());
    const Line first = densest_strip(pts, width, 0.0, 0.0);
    const Line second = densest_strip(pts, width, first.theta, 20.0 * std::numbers::pi / 180.0);
    for (const Line& l : {first, second}) {
      if (l.count < 3) continue;
      const Pca r = principal_axis(near_line(pts, l, width));
      out.conjugate_angles.push_back(
          acute_angle_deg(r.l1 > 0.0 ? r.axis : Vec2{-std::sin(l.theta), std::cos(l.theta)}));
    }
  }
  return out;
}

std::vector<DamageFrame> frames_from_arrival(const std::vector<double>& arrival, double threshold) {
  std::vector<double> times;
  for (double t : arrival)
    if (t >= 0.0) times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<DamageFrame> frames;
  DamageFrame f0;
  f0.time = times.empty() ? 0.0 : std::min(0.0, times.front());
  f0.damage.assign(arrival.size(), 0.0);
  const double hit = std::max(1.0, 2.0 * threshold);
  for (Index i = 0; i < arrival.size(); ++i)
    if (arrival[i] >= 0.0 && arrival[i] <= f0.time) f0.damage[i] = hit;
  frames.push_back(f0);
  for (double t : times) {
    if (t <= f0.time) continue;
    DamageFrame f;
    f.time = t;
    f.damage.assign(arrival.size(), 0.0);
    for (Index i = 0; i < arrival.size(); ++i)
      if (arrival[i] >= 0.0 && arrival[i] <= t) f.damage[i] = hit;
    frames.push_back(std::move(f));
  }
  return frames;
}

BranchTiming measure_branch_timing(const std::vector<Vec2>& X, const std::vector<DamageFrame>& frames,
                                   const BranchOptions& opt) {
  BranchTiming out;
  if (X.empty() || frames.empty()) return out;
  const LatticeIndex lat = infer_lattice(X);
  const long tip_col0 = std::lround((opt.notch_tip.x - lat.xmin) / lat.dx);
  const double notch_row = (opt.notch_tip.y - lat.ymin) / lat.dx;

  std::vector<std::uint8_t> mask(X.size());
  std::vector<std::uint8_t> main(X.size());
  double first_tip = std::numeric_limits<double>::quiet_NaN();
  double last_tip = -std::numeric_limits<double>::infinity();
  double last_advance_time = 0.0;
  bool reached_edge = false;
  double edge_time = 0.0;

  for (const auto& f : frames) {
    for (Index i = 0; i < X.size(); ++i) mask[i] = f.damage[i] > opt.threshold ? 1 : 0;
    std::fill(main.begin(), main.end(), 0);
    long tip = std::numeric_limits<long>::min();
    for (const auto& comp : connected_components(lat, mask)) {
      bool seeded = false;
      for (Index i : comp)
        if (lat.col[i] <= tip_col0 && std::abs(lat.row[i] - notch_row) <= 2.0) {
          seeded = true;
          break;
        }
      if (!seeded) continue;
      for (Index i : comp) {
        main[i] = 1;
        tip = std::max(tip, lat.col[i]);
      }
    }
    if (tip == std::numeric_limits<long>::min()) continue;
    const double tipd = static_cast<double>(tip);
    if (std::isnan(first_tip)) first_tip = tipd;
    if (tipd > last_tip) {
      if (last_tip > -std::numeric_limits<double>::infinity()) last_advance_time = f.time;
      last_tip = tipd;
    }
    if (!out.growth_start && tipd >= first_tip + opt.min_advance) out.growth_start = f.time;
    if (!reached_edge && tip >= lat.nx - 1) {
      reached_edge = true;
      edge_time = f.time;
    }

    if (!out.branch_start) {
      for (long c = static_cast<long>(first_tip) + 1; c <= tip && !out.branch_start; ++c) {
        int runs = 0;
        long prev = std::numeric_limits<long>::min();
        bool split = false;
        for (long r = 0; r < lat.ny; ++r) {
          const long j = lat.index(c, r);
          if (j < 0 || !main[j]) continue;
          if (prev != std::numeric_limits<long>::min() && r - prev - 1 >= opt.min_gap) split = true;
          if (prev == std::numeric_limits<long>::min() || r - prev > 1) ++runs;
          prev = r;
        }
        if (runs >= 2 && split) out.branch_start = f.time;
      }
    }
  }
  if (out.branch_start) out.branch_end = reached_edge ? edge_time : last_advance_time;
  return out;
}

}  // namespace cppm
