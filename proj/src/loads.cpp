#include "cppm/loads.hpp"

#include <cmath>

namespace cppm {

LoadSet::LoadSet(const SimulationConfig& cfg, const PointField& f)
    : boundaries_(cfg.loading.boundaries), n_(f.size()) {
  const auto& g = cfg.geometry;
  const int auto_depth = static_cast<int>(std::ceil(g.horizon_factor - 1e-12));
  face_area_ = g.dx * g.thickness;
  const double tol = 1e-9 * g.dx;
  GridSpec grid{g.nx, g.ny, g.dx, g.thickness, {}};

  for (std::size_t bi = 0; bi < boundaries_.size(); ++bi) {
    const Boundary& b = boundaries_[bi];
    Compiled c;
    c.spec = bi;
    const int depth = b.region.depth > 0 ? b.region.depth : auto_depth;
    for (Index i = 0; i < f.size(); ++i) {
      const long r = grid_row(grid, i), col = grid_col(grid, i);
      bool in = false, edge = false;
      switch (b.region.side) {
        case Side::top: in = r >= g.ny - depth; edge = r == g.ny - 1; break;
        case Side::bottom: in = r < depth; edge = r == 0; break;
        case Side::left: in = col < depth; edge = col == 0; break;
        case Side::right: in = col >= g.nx - depth; edge = col == g.nx - 1; break;
        case Side::box: {
          const Vec2& X = f.X[i];
          in = X.x >= b.region.x0 - tol && X.x <= b.region.x1 + tol && X.y >= b.region.y0 - tol &&
               X.y <= b.region.y1 + tol;
          break;
        }
      }
      if (in) c.points.push_back(i);
      if (edge) c.layer.push_back(i);
    }
    switch (b.region.side) {
      case Side::top: c.normal = {0.0, 1.0}; break;
      case Side::bottom: c.normal = {0.0, -1.0}; break;
      case Side::left: c.normal = {-1.0, 0.0}; break;
      case Side::right: c.normal = {1.0, 0.0}; break;
      case Side::box: break;
    }
    if (c.points.empty()) throw ConfigError("loading.boundaries." + b.name, "region contains no points");
    compiled_.push_back(std::move(c));
  }
}

void LoadSet::apply_kinematics(PointField& f, double t) const {
  for (const Compiled& c : compiled_) {
    const Boundary& b = boundaries_[c.spec];
    for (Index i : c.points) {
      if (b.ux) {
        f.bc[i] |= kFixX;
        f.u[i].x = b.ux->at(t);
        f.v[i].x = b.ux->rate_at(t);
      }
      if (b.uy) {
        f.bc[i] |= kFixY;
        f.u[i].y = b.uy->at(t);
        f.v[i].y = b.uy->rate_at(t);
      }
      if (b.rot) {
        f.bc[i] |= kFixRot;
        f.w[i] = b.rot->at(t);
        f.wdot[i] = b.rot->rate_at(t);
      }
    }
  }
}

void LoadSet::external_forces(double t, StepForces& out) const {
  std::fill(out.F_ext.begin(), out.F_ext.end(), Vec2{});
  std::fill(out.L_ext.begin(), out.L_ext.end(), 0.0);
  for (const Compiled& c : compiled_) {
    if (!boundaries_[c.spec].traction) continue;
    const Vec2 F = (boundaries_[c.spec].traction->at(t) * face_area_) * c.normal;
    for (Index i : c.layer) out.F_ext[i] += F;
  }
}

const std::vector<Index>& LoadSet::points(const std::string& name) const {
  for (const Compiled& c : compiled_)
    if (boundaries_[c.spec].name == name) return c.points;
  throw ConfigError("loading.boundaries", "unknown boundary '" + name + "'");
}

double LoadSet::reaction(const StepForces& forces, const std::string& name, char component) const {
  double s = 0.0;
  for (Index i : points(name)) s += component == 'x' ? forces.F_int[i].x : forces.F_int[i].y;
  return s;
}

PointField apply_loads(PointField fields, const SimulationConfig& config, double t) {
  LoadSet(config, fields).apply_kinematics(fields, t);
  return fields;
}

bool segments_cross(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const double d1 = cross(q - p, a - p);
  const double d2 = cross(q - p, b - p);
  const double d3 = cross(b - a, p - a);
  const double d4 = cross(b - a, q - a);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace cppm
