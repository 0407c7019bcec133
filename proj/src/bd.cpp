#include "ktinv/bd.hpp"

namespace ktinv {

double bd_residual(const KtParams& params, const PotentialSpec& spec, const Point2& pt) {
    require_tensor(params, "bd_residual");
    const PotentialJet2 j = eval_potential(spec, pt);
    const SymMatrix2 k = kt_components_at(params, pt);
    return k.k12 * (j.xx - j.yy) + (k.k22 - k.k11) * j.xy - 3.0 * (params.b4() + params.b6() * pt.y) * j.x +
           3.0 * (params.b5() + params.b6() * pt.x) * j.y;
}

std::array<double, 6> bd_row(const PotentialSpec& spec, const Point2& pt) {
    return bd_coefficients(eval_potential(spec, pt), pt.x, pt.y);
}

}  // namespace ktinv
