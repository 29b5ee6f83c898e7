#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

namespace dshell {

// Real two-component vector. Used for radial spinors (f, g) and for columns of Mat2.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  double max_abs() const { return std::max(std::abs(x), std::abs(y)); }
};

// Real 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  bool operator==(const Mat2 &) const = default;
  static constexpr Mat2 zero() { return {}; }

  constexpr Mat2 operator+(const Mat2 &o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  constexpr Mat2 operator-(const Mat2 &o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  constexpr Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
  constexpr Mat2 operator*(const Mat2 &o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  constexpr Vec2 operator*(const Vec2 &v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }
  Mat2 &operator+=(const Mat2 &o) { return *this = *this + o; }

  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr double trace() const { return a11 + a22; }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
  double max_norm() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
  }
  bool finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
  }
};

inline Mat2 operator*(double s, const Mat2 &m) { return m * s; }

// Pauli algebra in real form. With phi = (f, g)^T real:
//   i*sigma_y = [[0, 1], [-1, 0]]
namespace pauli {
inline constexpr Mat2 sigma_x{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 sigma_z{1.0, 0.0, 0.0, -1.0};
inline constexpr Mat2 i_sigma_y{0.0, 1.0, -1.0, 0.0};
} // namespace pauli

// exp(i*sigma_y*theta) = cos(theta) I + sin(theta) i*sigma_y = [[c, s], [-s, c]].
inline Mat2 exp_i_sigma_y(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, s, -s, c};
}

// Singular values of a 2x2 matrix, larger first.
inline std::pair<double, double> singular_values(const Mat2 &m) {
  const double e = (m.a11 + m.a22) / 2, f = (m.a11 - m.a22) / 2;
  const double g = (m.a21 + m.a12) / 2, h = (m.a21 - m.a12) / 2;
  const double q = std::hypot(e, h), r = std::hypot(f, g);
  return {q + r, std::abs(q - r)};
}

inline std::ostream &operator<<(std::ostream &os, const Mat2 &m) {
  return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
}

inline std::ostream &operator<<(std::ostream &os, const Vec2 &v) {
  return os << "(" << v.x << ", " << v.y << ")";
}

} // namespace dshell
