#pragma once

#include <cmath>

namespace mkdv::detail {

/// Forward-mode dual number a + b*eps with eps^2 = 0.  Nest Dual<Dual<double>>
/// for mixed second derivatives.
template <typename T>
struct Dual {
    T v{};
    T d{};

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift
    constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

template <typename T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <typename T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <typename T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <typename T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    const T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
}
template <typename T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }

template <typename T> Dual<T> operator+(Dual<T> a, double s) { a.v += s; return a; }
template <typename T> Dual<T> operator+(double s, Dual<T> a) { a.v += s; return a; }
template <typename T> Dual<T> operator-(Dual<T> a, double s) { a.v -= s; return a; }
template <typename T> Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.v, -a.d}; }
template <typename T> Dual<T> operator*(const Dual<T>& a, double s) { return {a.v * s, a.d * s}; }
template <typename T> Dual<T> operator*(double s, const Dual<T>& a) { return {a.v * s, a.d * s}; }
template <typename T> Dual<T> operator/(const Dual<T>& a, double s) { return {a.v / s, a.d / s}; }
template <typename T> Dual<T> operator/(double s, const Dual<T>& a) { return Dual<T>(s) / a; }

template <typename T> Dual<T> sin(const Dual<T>& a) {
    using std::cos; using std::sin;
    return {sin(a.v), a.d * cos(a.v)};
}
template <typename T> Dual<T> cos(const Dual<T>& a) {
    using std::cos; using std::sin;
    return {cos(a.v), -(a.d * sin(a.v))};
}
template <typename T> Dual<T> sinh(const Dual<T>& a);
template <typename T> Dual<T> cosh(const Dual<T>& a) {
    using std::cosh; using std::sinh;
    return {cosh(a.v), a.d * sinh(a.v)};
}
template <typename T> Dual<T> sinh(const Dual<T>& a) {
    using std::cosh; using std::sinh;
    return {sinh(a.v), a.d * cosh(a.v)};
}
template <typename T> Dual<T> tanh(const Dual<T>& a) {
    using std::tanh;
    const T t = tanh(a.v);
    return {t, a.d * (1.0 - t * t)};
}
template <typename T> Dual<T> exp(const Dual<T>& a) {
    using std::exp;
    const T e = exp(a.v);
    return {e, a.d * e};
}
template <typename T> Dual<T> sqrt(const Dual<T>& a) {
    using std::sqrt;
    const T r = sqrt(a.v);
    return {r, a.d / (2.0 * r)};
}

inline double value_of(double x) { return x; }
template <typename T> double value_of(const Dual<T>& a) { return value_of(a.v); }

}  // namespace mkdv::detail
