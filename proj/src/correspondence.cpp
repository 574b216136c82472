#include "cppm/correspondence.hpp"

#include <cmath>

namespace cppm {

double micro_modulus(double E, double nu, double delta) {
  const double den = 1.0 - nu - 2.0 * nu * nu;
  if (den == 0.0 || !(delta > 0.0)) throw ConfigError("material.nu", "micro-modulus undefined");
  return E * (1.0 - 4.0 * nu) / (4.0 * M_PI * delta * delta * den);
}

double normalized_weighted_volume(double weighted_volume, double delta, double thickness) {
  return weighted_volume / (M_PI * delta * delta * thickness);
}

StabilizationConstants stabilization_constants(const StabilizationParams& p, double abs_D, double xi_len,
                                               double omega, double w0) {
  if (!(w0 > 0.0) || !(xi_len > 0.0)) return {};
  const double s = omega / w0;
  return {p.G1 * 12.0 * abs_D / (xi_len * xi_len * xi_len) * s, p.G2 * abs_D / xi_len * s};
}

}  // namespace cppm
