#pragma once

#include <array>

#include "ktinv/jet.hpp"
#include "ktinv/kt_core.hpp"
#include "ktinv/potential.hpp"

namespace ktinv {

/// Coefficients c with R = c . (b1..b6), where
///   R = d_x(K21 Vx + K22 Vy) - d_y(K11 Vx + K12 Vy)
///     = K12 (Vxx - Vyy) + (K22 - K11) Vxy - 3 (b4 + b6 y) Vx + 3 (b5 + b6 x) Vy.
template <class T>
std::array<T, 6> bd_coefficients(const BasicJet<T>& j, const T& x, const T& y) {
    const T d = j.xx - j.yy;
    const T m = j.xy;
    return {
        -m,
        m,
        d,
        -x * d - T(2) * y * m - T(3) * j.x,
        -y * d + T(2) * x * m + T(3) * j.y,
        -x * y * d + (x * x - y * y) * m - T(3) * y * j.x + T(3) * x * j.y,
    };
}

double bd_residual(const KtParams& params, const PotentialSpec& spec, const Point2& pt);

std::array<double, 6> bd_row(const PotentialSpec& spec, const Point2& pt);

}  // namespace ktinv
