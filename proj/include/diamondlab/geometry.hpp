#pragma once

#include <array>
#include <cmath>

#include "diamondlab/rational.hpp"

namespace diamondlab {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline double euclid(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

inline Vec3 to_vec3(const RPoint& p) {
    return {p.x.to_double(), p.y.to_double(), p.z.to_double()};
}

inline RPoint to_rpoint(const Vec3& v) {
    return {rational_from_double(v.x), rational_from_double(v.y), rational_from_double(v.z)};
}

/// Axis-aligned box in doubles (for solver-side geometry).
struct Box3 {
    Vec3 lo, hi;
    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
    }
};

inline Box3 to_box3(const RCube& c) {
    Vec3 o = to_vec3(c.origin);
    double s = c.side.to_double();
    return {o, {o.x + s, o.y + s, o.z + s}};
}

}  // namespace diamondlab
