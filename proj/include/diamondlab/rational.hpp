#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace diamondlab {

/// Exact rational arithmetic on int64 with overflow detection.
///
/// All combinatorial geometry (cell origins, side lengths, jump costs) is
/// kept exact; floating point enters only in solvers and Monte Carlo code.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Rational: 64-bit overflow (resolution guard)");
        return static_cast<std::int64_t>(v);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return reduced(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return reduced(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return reduced((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::domain_error("Rational: division by zero");
        return reduced((__int128)a.num * b.den, (__int128)a.den * b.num);
    }
    Rational operator-() const { Rational r; r.num = -num; r.den = den; return r; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den <= (__int128)b.num * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    /// Largest integer k with k <= a (exact).
    static std::int64_t floor_int(const Rational& a) {
        std::int64_t q = a.num / a.den;
        if (a.num % a.den != 0 && a.num < 0) --q;
        return q;
    }

    /// floor(a / b) without constructing the quotient (avoids mixed-base
    /// denominator blowup; works for any operand pair).
    static std::int64_t floor_div(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num * b.den;
        __int128 d = (__int128)a.den * b.num;
        if (d == 0) throw std::domain_error("Rational::floor_div by zero");
        if (d < 0) { n = -n; d = -d; }
        __int128 q = n / d;
        if (n % d != 0 && n < 0) --q;
        return checked(q);
    }

  private:
    static Rational reduced(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        Rational r;
        r.num = checked(n);
        r.den = checked(d);
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
};

/// Exact point in [0,1]^3.
struct RPoint {
    Rational x, y, z;
    Rational operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

/// Axis-aligned cube with exact coordinates: [origin, origin + side]^3.
struct RCube {
    RPoint origin;
    Rational side;

    RPoint center() const {
        Rational h = side / Rational(2);
        return {origin.x + h, origin.y + h, origin.z + h};
    }
    bool contains_open(const RPoint& p) const {
        for (int i = 0; i < 3; ++i) {
            Rational lo = origin[i], hi = origin[i] + side;
            if (!(lo < p[i] && p[i] < hi)) return false;
        }
        return true;
    }
    bool contains_closed(const RPoint& p) const {
        for (int i = 0; i < 3; ++i) {
            Rational lo = origin[i], hi = origin[i] + side;
            if (!(lo <= p[i] && p[i] <= hi)) return false;
        }
        return true;
    }
    /// Middle-third subcube (the region K that gets doubled).
    RCube middle_third() const {
        Rational t = side / Rational(3);
        return {{origin.x + t, origin.y + t, origin.z + t}, t};
    }
    /// Concentric subcube of given side.
    RCube central(const Rational& s) const {
        Rational off = (side - s) / Rational(2);
        return {{origin.x + off, origin.y + off, origin.z + off}, s};
    }
    /// Open-interior overlap test for axis-aligned cubes.
    bool overlaps_open(const RCube& o) const {
        for (int i = 0; i < 3; ++i) {
            Rational alo = origin[i], ahi = origin[i] + side;
            Rational blo = o.origin[i], bhi = o.origin[i] + o.side;
            Rational lo = alo > blo ? alo : blo;
            Rational hi = ahi < bhi ? ahi : bhi;
            if (!(lo < hi)) return false;
        }
        return true;
    }
};

/// Rational from a double. Exact when the dyadic denominator fits in 62
/// bits; otherwise quantized to a 2^-40 grid. Only used where inputs come
/// from floating-point code paths; constructed geometry stays exact.
Rational rational_from_double(double v);

}  // namespace diamondlab
