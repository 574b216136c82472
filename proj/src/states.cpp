#include "cppm/states.hpp"

namespace cppm {

BondStates bond_states(Index i, Index k, const NeighborTable& table, std::span<const Vec2> u,
                       std::span<const double> w) {
  const Index j = table.neighbor[k];
  const Vec2& xi = table.xi[k];
  BondStates b;
  b.U = u[j] - u[i];
  b.Y = xi + b.U;
  b.Omega = w[j] - w[i];
  b.OmegaBar = 0.5 * (w[j] + w[i]);
  b.Ucomp = b.U - perp(b.OmegaBar, xi);
  return b;
}

Mat2 nonlocal_strain(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const Vec2> u,
                     std::span<const double> w) {
  Mat2 acc{};
  for (Index k = table.begin(i); k < table.end(i); ++k) {
    const double wv = table.omega[k] * table.vol[k];
    if (wv == 0.0) continue;
    const Index j = table.neighbor[k];
    const Vec2& xi = table.xi[k];
    const Vec2 uc = (u[j] - u[i]) - perp(0.5 * (w[j] + w[i]), xi);
    acc += wv * outer(uc, xi);
  }
  return acc * Kinv;
}

Vec2 nonlocal_wryness(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const double> w) {
  Vec2 acc{};
  for (Index k = table.begin(i); k < table.end(i); ++k) {
    const double wv = table.omega[k] * table.vol[k];
    if (wv == 0.0) continue;
    acc += (wv * (w[table.neighbor[k]] - w[i])) * table.xi[k];
  }
  return acc * Kinv;
}

Mat2 strain_of_state(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const Vec2> state) {
  Mat2 acc{};
  for (Index k = table.begin(i); k < table.end(i); ++k)
    acc += (table.omega[k] * table.vol[k]) * outer(state[k], table.xi[k]);
  return acc * Kinv;
}

Vec2 wryness_of_state(Index i, const NeighborTable& table, const Mat2& Kinv, std::span<const double> state) {
  Vec2 acc{};
  for (Index k = table.begin(i); k < table.end(i); ++k)
    acc += (table.omega[k] * table.vol[k] * state[k]) * table.xi[k];
  return acc * Kinv;
}

}  // namespace cppm
