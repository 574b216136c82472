#pragma once

// Small fixed-size algebra for the plane problem and the error types shared
// by every module.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cppm {

using Index = std::size_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of a x b.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
/// In-plane part of (w e_z) x a.
constexpr Vec2 perp(double w, const Vec2& a) { return {-w * a.y, w * a.x}; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

/// Row-major 2x2 tensor, entry (r, c) = m[r][c].
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  constexpr Mat2 transposed() const { return {xx, yx, xy, yy}; }
  constexpr double trace() const { return xx + yy; }
  constexpr double det() const { return xx * yy - xy * yx; }

  constexpr Mat2& operator+=(const Mat2& o) { xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy; return *this; }
  constexpr Mat2& operator-=(const Mat2& o) { xx -= o.xx; xy -= o.xy; yx -= o.yx; yy -= o.yy; return *this; }
  constexpr Mat2& operator*=(double s) { xx *= s; xy *= s; yx *= s; yy *= s; return *this; }
  friend constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend constexpr Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend constexpr Mat2 operator*(double s, Mat2 a) { return a *= s; }
  friend constexpr Mat2 operator*(Mat2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.xx * v.x + m.xy * v.y, m.yx * v.x + m.yy * v.y};
}
/// Row vector times matrix: (v^T m).
constexpr Vec2 operator*(const Vec2& v, const Mat2& m) {
  return {v.x * m.xx + v.y * m.yx, v.x * m.xy + v.y * m.yy};
}
constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
          a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
}
constexpr Mat2 outer(const Vec2& a, const Vec2& b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}
/// Full contraction a : b = sum_rc a_rc b_rc.
constexpr double ddot(const Mat2& a, const Mat2& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}
inline double max_abs(const Mat2& m) {
  return std::max(std::max(std::abs(m.xx), std::abs(m.xy)), std::max(std::abs(m.yx), std::abs(m.yy)));
}

/// Invalid or inconsistent configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Shape tensor of a point is singular (fewer than two non-collinear bonds).
class DegenerateNeighborhood : public std::runtime_error {
 public:
  explicit DegenerateNeighborhood(Index point)
      : std::runtime_error("degenerate neighborhood at point " + std::to_string(point)), point_(point) {}
  Index point() const noexcept { return point_; }

 private:
  Index point_;
};

/// Non-finite stress, force or kinematics during a step.
class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(Index point, long step, const std::string& what)
      : std::runtime_error("numerical breakdown at point " + std::to_string(point) + ", step " +
                           std::to_string(step) + ": " + what),
        point_(point), step_(step) {}
  Index point() const noexcept { return point_; }
  long step() const noexcept { return step_; }

 private:
  Index point_;
  long step_;
};

}  // namespace cppm
