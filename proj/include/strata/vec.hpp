#pragma once

#include <array>
#include <cmath>

namespace strata {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Row-major 3x3 matrix; just enough operations for the affine frame dynamics.
struct Mat3 {
    std::array<double, 9> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return r;
    }
    static Mat3 zero() { return {}; }

    double& operator()(int r, int c) { return m[3 * r + c]; }
    double operator()(int r, int c) const { return m[3 * r + c]; }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    Mat3& operator*=(double s) {
        for (double& v : m) v *= s;
        return *this;
    }

    double frobenius() const {
        double s = 0;
        for (double v : m) s += v * v;
        return std::sqrt(s);
    }

    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    // Inverse via adjugate; caller checks det() against a threshold first.
    Mat3 inverse() const {
        Mat3 r;
        double d = det();
        double inv = 1.0 / d;
        r.m[0] = (m[4] * m[8] - m[5] * m[7]) * inv;
        r.m[1] = (m[2] * m[7] - m[1] * m[8]) * inv;
        r.m[2] = (m[1] * m[5] - m[2] * m[4]) * inv;
        r.m[3] = (m[5] * m[6] - m[3] * m[8]) * inv;
        r.m[4] = (m[0] * m[8] - m[2] * m[6]) * inv;
        r.m[5] = (m[2] * m[3] - m[0] * m[5]) * inv;
        r.m[6] = (m[3] * m[7] - m[4] * m[6]) * inv;
        r.m[7] = (m[1] * m[6] - m[0] * m[7]) * inv;
        r.m[8] = (m[0] * m[4] - m[1] * m[3]) * inv;
        return r;
    }
};

inline Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
inline Mat3 operator*(double s, Mat3 a) { return a *= s; }
inline Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a.m[0] * v.x + a.m[1] * v.y + a.m[2] * v.z,
            a.m[3] * v.x + a.m[4] * v.y + a.m[5] * v.z,
            a.m[6] * v.x + a.m[7] * v.y + a.m[8] * v.z};
}

// u v^T
inline Mat3 outer(const Vec3& u, const Vec3& v) {
    Mat3 r;
    r.m = {u.x * v.x, u.x * v.y, u.x * v.z,
           u.y * v.x, u.y * v.y, u.y * v.z,
           u.z * v.x, u.z * v.y, u.z * v.z};
    return r;
}

}  // namespace strata
