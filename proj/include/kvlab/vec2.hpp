#pragma once

#include <cmath>

namespace kvlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

struct Momentum {
  Vec2 j;
  double magnitude() const { return j.norm(); }
};

/// Unit vector Omega; the angle phi satisfies Omega = (cos phi, sin phi).
class Direction {
 public:
  // Normalizes v; throws InvalidArgument for the zero vector.
  static Direction from_vector(Vec2 v);
  static Direction from_angle(double phi);

  const Vec2& vector() const { return omega_; }
  double x() const { return omega_.x; }
  double y() const { return omega_.y; }
  double angle() const { return std::atan2(omega_.y, omega_.x); }

 private:
  explicit Direction(Vec2 v) : omega_(v) {}
  Vec2 omega_;
};

}  // namespace kvlab
