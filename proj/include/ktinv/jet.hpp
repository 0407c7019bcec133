#pragma once

#include <cmath>
#include <concepts>

namespace ktinv {

/// Second-order forward-mode number in two variables (x, y): value, gradient
/// and Hessian propagated through arithmetic. The mixed slot `xy` is stored
/// once, so the Hessian is symmetric by construction.
///
/// T may be double or an exact rational type (mpq_class); transcendental
/// functions are only provided for floating-point T.
template <class T>
struct BasicJet {
    T v{0}, x{0}, y{0}, xx{0}, xy{0}, yy{0};

    BasicJet() = default;
    BasicJet(T value) : v(value) {}  // NOLINT: constants promote implicitly
    BasicJet(T v_, T x_, T y_, T xx_, T xy_, T yy_)
        : v(std::move(v_)), x(std::move(x_)), y(std::move(y_)), xx(std::move(xx_)), xy(std::move(xy_)),
          yy(std::move(yy_)) {}

    static BasicJet variable_x(T value) { return BasicJet(std::move(value), T(1), T(0), T(0), T(0), T(0)); }
    static BasicJet variable_y(T value) { return BasicJet(std::move(value), T(0), T(1), T(0), T(0), T(0)); }

    BasicJet& operator+=(const BasicJet& o) {
        v += o.v; x += o.x; y += o.y; xx += o.xx; xy += o.xy; yy += o.yy;
        return *this;
    }
    BasicJet& operator-=(const BasicJet& o) {
        v -= o.v; x -= o.x; y -= o.y; xx -= o.xx; xy -= o.xy; yy -= o.yy;
        return *this;
    }
    BasicJet& operator*=(const BasicJet& o) { return *this = *this * o; }
    BasicJet& operator/=(const BasicJet& o) { return *this = *this / o; }

    friend BasicJet operator-(const BasicJet& a) { return BasicJet(-a.v, -a.x, -a.y, -a.xx, -a.xy, -a.yy); }
    friend BasicJet operator+(BasicJet a, const BasicJet& b) { return a += b; }
    friend BasicJet operator-(BasicJet a, const BasicJet& b) { return a -= b; }

    friend BasicJet operator*(const BasicJet& a, const BasicJet& b) {
        BasicJet r;
        r.v = a.v * b.v;
        r.x = a.x * b.v + a.v * b.x;
        r.y = a.y * b.v + a.v * b.y;
        r.xx = a.xx * b.v + T(2) * a.x * b.x + a.v * b.xx;
        r.xy = a.xy * b.v + a.x * b.y + a.y * b.x + a.v * b.xy;
        r.yy = a.yy * b.v + T(2) * a.y * b.y + a.v * b.yy;
        return r;
    }

    friend BasicJet operator/(const BasicJet& a, const BasicJet& b) { return a * reciprocal(b); }
};

/// Applies a scalar function g with g(u) = g0, g'(u) = g1, g''(u) = g2.
template <class T>
BasicJet<T> chain(const BasicJet<T>& u, const T& g0, const T& g1, const T& g2) {
    BasicJet<T> r;
    r.v = g0;
    r.x = g1 * u.x;
    r.y = g1 * u.y;
    r.xx = g2 * u.x * u.x + g1 * u.xx;
    r.xy = g2 * u.x * u.y + g1 * u.xy;
    r.yy = g2 * u.y * u.y + g1 * u.yy;
    return r;
}

template <class T>
BasicJet<T> reciprocal(const BasicJet<T>& u) {
    const T inv = T(1) / u.v;
    const T inv2 = inv * inv;
    return chain(u, inv, T(-inv2), T(T(2) * inv2 * inv));
}

template <class T>
BasicJet<T> square(const BasicJet<T>& u) {
    return u * u;
}

template <class T>
BasicJet<T> ipow(const BasicJet<T>& u, int n) {
    if (n < 0) return reciprocal(ipow(u, -n));
    BasicJet<T> r(T(1));
    for (int i = 0; i < n; ++i) r = r * u;
    return r;
}

template <std::floating_point T>
BasicJet<T> sqrt(const BasicJet<T>& u) {
    const T s = std::sqrt(u.v);
    return chain(u, s, T(0.5) / s, T(-0.25) / (s * u.v));
}

template <std::floating_point T>
BasicJet<T> sin(const BasicJet<T>& u) {
    return chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
}

template <std::floating_point T>
BasicJet<T> cos(const BasicJet<T>& u) {
    return chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
}

template <std::floating_point T>
BasicJet<T> tan(const BasicJet<T>& u) {
    const T t = std::tan(u.v);
    const T sec2 = T(1) + t * t;
    return chain(u, t, sec2, T(2) * sec2 * t);
}

template <std::floating_point T>
BasicJet<T> exp(const BasicJet<T>& u) {
    const T e = std::exp(u.v);
    return chain(u, e, e, e);
}

template <std::floating_point T>
BasicJet<T> log(const BasicJet<T>& u) {
    return chain(u, std::log(u.v), T(1) / u.v, T(-1) / (u.v * u.v));
}

/// atan2 with the derivative d theta = (X dY - Y dX) / (X^2 + Y^2).
template <std::floating_point T>
BasicJet<T> atan2(const BasicJet<T>& Y, const BasicJet<T>& X) {
    const T q = X.v * X.v + Y.v * Y.v;
    const T qx = T(2) * (X.v * X.x + Y.v * Y.x);
    const T qy = T(2) * (X.v * X.y + Y.v * Y.y);
    const T nx = X.v * Y.x - Y.v * X.x;
    const T ny = X.v * Y.y - Y.v * X.y;
    const T nxx = X.x * Y.x + X.v * Y.xx - Y.x * X.x - Y.v * X.xx;
    const T nxy = X.y * Y.x + X.v * Y.xy - Y.y * X.x - Y.v * X.xy;
    const T nyy = X.y * Y.y + X.v * Y.yy - Y.y * X.y - Y.v * X.yy;

    BasicJet<T> r;
    r.v = std::atan2(Y.v, X.v);
    r.x = nx / q;
    r.y = ny / q;
    r.xx = (nxx - r.x * qx) / q;
    r.xy = (nxy - r.x * qy) / q;
    r.yy = (nyy - r.y * qy) / q;
    return r;
}

using PotentialJet2 = BasicJet<double>;

}  // namespace ktinv
