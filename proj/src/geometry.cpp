#include "cppm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cppm {

void PointField::resize(Index n) {
  X.assign(n, {});
  u.assign(n, {});
  v.assign(n, {});
  a.assign(n, {});
  w.assign(n, 0.0);
  wdot.assign(n, 0.0);
  wddot.assign(n, 0.0);
  V.assign(n, 0.0);
  rho.assign(n, 0.0);
  J.assign(n, 0.0);
  phi.assign(n, 1.0);
  bc.assign(n, kFree);
}

PointField build_grid(const GridSpec& grid, const DensitySpec& density) {
  if (grid.nx < 1 || grid.ny < 1) throw ConfigError("geometry.nx/ny", "must be positive");
  if (!(grid.dx > 0.0)) throw ConfigError("geometry.dx", "must be positive");
  if (!(grid.thickness > 0.0)) throw ConfigError("geometry.thickness", "must be positive");
  if (!(density.value > 0.0)) throw ConfigError("material.density", "must be positive");
  if (!(density.phi > 0.0 && density.phi <= 1.0))
    throw ConfigError("material.volume_fraction", "must lie in (0, 1]");

  const double rho = density.kind == DensityKind::intrinsic ? density.phi * density.value : density.value;
  double J = density.micro_inertia;
  if (!(J > 0.0)) J = rho * density.cosserat_length * density.cosserat_length;

  PointField f;
  const Index n = static_cast<Index>(grid.nx) * static_cast<Index>(grid.ny);
  f.resize(n);
  const double vol = grid.dx * grid.dx * grid.thickness;
  for (long r = 0; r < grid.ny; ++r) {
    for (long c = 0; c < grid.nx; ++c) {
      const Index i = static_cast<Index>(r * grid.nx + c);
      f.X[i] = {grid.origin.x + (c + 0.5) * grid.dx, grid.origin.y + (r + 0.5) * grid.dx};
      f.V[i] = vol;
      f.rho[i] = rho;
      f.J[i] = J;
      f.phi[i] = density.phi;
    }
  }
  return f;
}

NeighborTable find_neighbors(const PointField& points, double delta) {
  if (!(delta > 0.0)) throw ConfigError("horizon", "must be positive");
  const Index n = points.size();
  NeighborTable t;
  t.offsets.assign(n + 1, 0);
  if (n == 0) return t;

  // Cell list with cell edge delta: neighbors lie in the 3x3 block.
  double xmin = points.X[0].x, ymin = points.X[0].y;
  for (const auto& p : points.X) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
  }
  auto cell_of = [&](const Vec2& p) {
    return std::pair<long, long>{static_cast<long>(std::floor((p.x - xmin) / delta)),
                                 static_cast<long>(std::floor((p.y - ymin) / delta))};
  };
  auto key = [](long cx, long cy) { return (static_cast<long long>(cx) << 32) ^ static_cast<unsigned>(cy); };
  std::unordered_map<long long, std::vector<Index>> cells;
  for (Index i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(points.X[i]);
    cells[key(cx, cy)].push_back(i);
  }

  const double d2 = delta * delta * (1.0 + 1e-12);
  std::vector<std::vector<Index>> lists(n);
  for (Index i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(points.X[i]);
    auto& li = lists[i];
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (Index j : it->second) {
          if (j == i) continue;
          const Vec2 xi = points.X[j] - points.X[i];
          const double r2 = dot(xi, xi);
          if (r2 > 0.0 && r2 <= d2) li.push_back(j);
        }
      }
    }
    std::sort(li.begin(), li.end());
  }

  for (Index i = 0; i < n; ++i) t.offsets[i + 1] = t.offsets[i] + lists[i].size();
  const Index nb = t.offsets[n];
  t.neighbor.resize(nb);
  t.xi.resize(nb);
  t.length.resize(nb);
  t.vol.resize(nb);
  t.omega.assign(nb, 1.0);
  t.reverse.resize(nb);
  for (Index i = 0; i < n; ++i) {
    Index k = t.offsets[i];
    for (Index j : lists[i]) {
      t.neighbor[k] = j;
      t.xi[k] = points.X[j] - points.X[i];
      t.length[k] = norm(t.xi[k]);
      t.vol[k] = points.V[j];
      ++k;
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index k = t.begin(i); k < t.end(i); ++k) {
      const Index j = t.neighbor[k];
      const auto first = t.neighbor.begin() + static_cast<std::ptrdiff_t>(t.begin(j));
      const auto last = t.neighbor.begin() + static_cast<std::ptrdiff_t>(t.end(j));
      t.reverse[k] = static_cast<Index>(std::lower_bound(first, last, i) - t.neighbor.begin());
    }
  }
  return t;
}

bool try_shape_tensor(Index point, const NeighborTable& table, ShapeTensor& out) {
  Mat2 K{};
  for (Index k = table.begin(point); k < table.end(point); ++k) {
    const double wv = table.omega[k] * table.vol[k];
    if (wv == 0.0) continue;
    K += wv * outer(table.xi[k], table.xi[k]);
  }
  const double tr = K.trace();
  const double det = K.det();
  if (!(tr > 0.0) || det <= 1e-10 * tr * tr) return false;
  out.K = K;
  const double inv = 1.0 / det;
  out.Kinv = {K.yy * inv, -K.xy * inv, -K.yx * inv, K.xx * inv};
  return true;
}

ShapeTensor shape_tensor(Index point, const NeighborTable& table) {
  ShapeTensor s;
  if (!try_shape_tensor(point, table, s)) throw DegenerateNeighborhood(point);
  return s;
}

}  // namespace cppm
