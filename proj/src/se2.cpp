#include "ktinv/se2.hpp"

#include <cmath>

namespace ktinv {

Point2 apply_point(const SE2Element& g, const Point2& pt) {
    const double c = std::cos(g.p3());
    const double s = std::sin(g.p3());
    return {pt.x * c - pt.y * s + g.p1(), pt.x * s + pt.y * c + g.p2()};
}

SE2Element compose(const SE2Element& g2, const SE2Element& g1) {
    const Point2 t = apply_point(g2, {g1.p1(), g1.p2()});
    return {t.x, t.y, g1.p3() + g2.p3()};
}

SE2Element inverse(const SE2Element& g) {
    const double c = std::cos(g.p3());
    const double s = std::sin(g.p3());
    return {-(c * g.p1() + s * g.p2()), -(-s * g.p1() + c * g.p2()), -g.p3()};
}

// Decomposition K = A + c (.) R + b6 R (x) R, with A the constant part
// [[b1, b3], [b3, b2]], c = (-b4, b5) the coefficients of the symmetrized
// products X_j (.) R, and R = -y d_x + x d_y. A rotation about the origin maps
// A -> Q A Q^T, c -> Q c and fixes R; a translation by p maps
// R -> R + w with w = (p2, -p1), hence c -> c + b6 w and
// A -> A + c w^T + w c^T + b6 w w^T.
KtParams act_on_kt(const SE2Element& g, const KtParams& k) {
    const double co = std::cos(g.p3());
    const double si = std::sin(g.p3());

    // rotation
    const double a11 = k.b1() * co * co - 2.0 * k.b3() * co * si + k.b2() * si * si;
    const double a22 = k.b1() * si * si + 2.0 * k.b3() * co * si + k.b2() * co * co;
    const double a12 = (k.b1() - k.b2()) * si * co + k.b3() * (co * co - si * si);
    const double c1 = -k.b4() * co - k.b5() * si;
    const double c2 = -k.b4() * si + k.b5() * co;
    const double b6 = k.b6();

    // translation
    const double w1 = g.p2();
    const double w2 = -g.p1();
    const double t11 = a11 + 2.0 * c1 * w1 + b6 * w1 * w1;
    const double t22 = a22 + 2.0 * c2 * w2 + b6 * w2 * w2;
    const double t12 = a12 + c1 * w2 + c2 * w1 + b6 * w1 * w2;
    const double n1 = c1 + b6 * w1;
    const double n2 = c2 + b6 * w2;

    return {t11, t22, t12, -n1, n2, b6};
}

void rotate_gradient_hessian(double theta, double& gx, double& gy, double& hxx, double& hxy, double& hyy) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double ngx = c * gx - s * gy;
    const double ngy = s * gx + c * gy;
    // Q H Q^T
    const double nxx = c * c * hxx - 2.0 * c * s * hxy + s * s * hyy;
    const double nyy = s * s * hxx + 2.0 * c * s * hxy + c * c * hyy;
    const double nxy = c * s * (hxx - hyy) + (c * c - s * s) * hxy;
    gx = ngx;
    gy = ngy;
    hxx = nxx;
    hxy = nxy;
    hyy = nyy;
}

}  // namespace ktinv
