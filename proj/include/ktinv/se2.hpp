#pragma once

#include "ktinv/kt_core.hpp"

namespace ktinv {

/// x' = x cos p3 - y sin p3 + p1,  y' = x sin p3 + y cos p3 + p2.
Point2 apply_point(const SE2Element& g, const Point2& pt);

/// g2 o g1 (apply g1 first).
SE2Element compose(const SE2Element& g2, const SE2Element& g1);
SE2Element inverse(const SE2Element& g);

/// Pushforward of the tensor by g: the result at g(x) is R K(x) R^T.
/// Linear in the parameters; act(g2, act(g1, K)) == act(g2 o g1, K).
KtParams act_on_kt(const SE2Element& g, const KtParams& params);

/// Rotates a gradient / Hessian pair into the frame moved by rotation angle theta.
void rotate_gradient_hessian(double theta, double& gx, double& gy, double& hxx, double& hxy, double& hyy);

}  // namespace ktinv
