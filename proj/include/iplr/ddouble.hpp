#pragma once

#include <cmath>

namespace iplr {

// Unevaluated sum hi + lo of two doubles (about 106 significant bits).
// Criterion values fall far below double resolution relative to the O(1)
// terms being summed, so the exact evaluation paths run in this type.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD operator+(const DD& a, const DD& b) {
    DD s = two_sum(a.hi, b.hi);
    DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(const DD& a) { return {-a.hi, -a.lo}; }
inline DD operator-(const DD& a, const DD& b) { return a + (-b); }

inline DD operator*(const DD& a, const DD& b) {
    double p = a.hi * b.hi;
    double e = std::fma(a.hi, b.hi, -p);
    e += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p, e);
}

inline DD operator/(const DD& a, const DD& b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    double q3 = r.hi / b.hi;
    return DD(q1) + DD(q2) + DD(q3);
}

inline DD& operator+=(DD& a, const DD& b) { return a = a + b; }
inline DD& operator-=(DD& a, const DD& b) { return a = a - b; }
inline DD& operator*=(DD& a, const DD& b) { return a = a * b; }

inline bool operator<(const DD& a, const DD& b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }

// b^e for integer e, exact whenever the double power is exact.
inline DD dd_pow(double b, int e) {
    DD r(1.0);
    DD x(b);
    bool inv = e < 0;
    unsigned n = static_cast<unsigned>(inv ? -e : e);
    while (n) {
        if (n & 1) r = r * x;
        x = x * x;
        n >>= 1;
    }
    return inv ? DD(1.0) / r : r;
}

}  // namespace iplr
