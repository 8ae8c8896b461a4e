#pragma once

#include <cmath>

namespace ringfuse {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
    Point2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Point2 operator+(Point2 a, const Point2& b) { return a += b; }
inline Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
inline Point2 operator*(double s, Point2 p) { return p *= s; }

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double norm2(const Point2& p) { return dot(p, p); }
inline double norm(const Point2& p) { return std::sqrt(norm2(p)); }
inline double dist2(const Point2& a, const Point2& b) { return norm2(a - b); }
inline double dist(const Point2& a, const Point2& b) { return std::sqrt(dist2(a, b)); }

/// Unsigned area of the triangle (a, b, c).
inline double triangle_area(const Point2& a, const Point2& b, const Point2& c) {
    return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

/// Signed difference of two angles, reduced to (-pi, pi].
inline double wrap_angle_diff(double a, double b) {
    double d = std::fmod(a - b, 2.0 * M_PI);
    if (d <= -M_PI) d += 2.0 * M_PI;
    if (d > M_PI) d -= 2.0 * M_PI;
    return d;
}

} // namespace ringfuse
