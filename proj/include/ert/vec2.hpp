#ifndef ERT_VEC2_HPP
#define ERT_VEC2_HPP

#include <cmath>
#include <numbers>

namespace ert {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double k) {
    x *= k;
    y *= k;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double k) { return a *= k; }
  friend constexpr Vec2 operator*(double k, Vec2 a) { return a *= k; }
  friend constexpr Vec2 operator/(Vec2 a, double k) { return {a.x / k, a.y / k}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline constexpr double norm2(const Vec2& a) { return dot(a, a); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Canonical reduction of an angle to [0, 2pi).
inline double reduce_angle(double theta) {
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi.
  if (r >= two_pi) r = 0.0;
  return r;
}

// Reduction to (-pi, pi].
inline double wrap_pi(double theta) {
  double r = reduce_angle(theta);
  return r > pi ? r - two_pi : r;
}

// Counterclockwise rotation about the origin.
class Rotation {
 public:
  explicit Rotation(double theta) : c_(std::cos(theta)), s_(std::sin(theta)) {}

  Vec2 operator()(const Vec2& v) const { return {c_ * v.x - s_ * v.y, s_ * v.x + c_ * v.y}; }
  Vec2 inverse(const Vec2& v) const { return {c_ * v.x + s_ * v.y, -s_ * v.x + c_ * v.y}; }

 private:
  double c_;
  double s_;
};

inline Vec2 rotate(double theta, const Vec2& v) { return Rotation(theta)(v); }

}  // namespace ert

#endif  // ERT_VEC2_HPP
