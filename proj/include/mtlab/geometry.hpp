#pragma once

#include <cmath>

namespace mtlab {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Points and directions in R^d for d <= 3. For d = 2 the z component is
// kept at zero so the same code paths serve both dimensions.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(Vec3 a) { return dot(a, a); }
inline double norm(Vec3 a) { return std::sqrt(norm2(a)); }

inline Vec3 normalized(Vec3 a) {
    const double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) { return d == 2 ? kPi : 4.0 * kPi / 3.0; }

}  // namespace mtlab
