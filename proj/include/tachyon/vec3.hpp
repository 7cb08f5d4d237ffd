#ifndef TACHYON_VEC3_HPP
#define TACHYON_VEC3_HPP

#include "tachyon/big_real.hpp"

namespace tachyon {

struct Vec3 {
    BigReal x, y, z;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(const BigReal& s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend Vec3 operator*(const Vec3& v, const BigReal& s) { return s * v; }
    friend Vec3 operator/(const Vec3& v, const BigReal& s) { return {v.x / s, v.y / s, v.z / s}; }
    friend Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }
};

inline BigReal dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline BigReal norm(const Vec3& a) { return sqrt(dot(a, a)); }

}  // namespace tachyon

#endif
