#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ktinv/kt_core.hpp"
#include "ktinv/potential.hpp"

namespace ktinv {

/// Partial derivatives (d/dx, d/dy, d/dpx, d/dpy) of a phase-space function.
using PhaseGradient = std::array<double, 4>;

/// F = 1/2 K^{ij} p_i p_j + U with U(q) the line integral of K dV from a base
/// point. The metric tensor gives F = H - V(base).
///
/// dU is obtained by differentiating the quadrature of the last path segment
/// with respect to its endpoint, so it equals K dV only where the potential
/// is compatible with K. {H, F} therefore measures compatibility instead of
/// vanishing by construction.
class FirstIntegral {
public:
    /// `base` defaults to (+-1, +-1) in the quadrant of each evaluation point.
    FirstIntegral(KtParams k, PotentialSpec spec, std::optional<Point2> base = std::nullopt, double margin = 0.1);

    /// H = 1/2 (px^2 + py^2) + V with U = V evaluated directly.
    static FirstIntegral hamiltonian(PotentialSpec spec);

    const KtParams& tensor() const { return k_; }
    const PotentialSpec& potential() const { return spec_; }

    double scalar_part(const Point2& q) const;
    Point2 scalar_gradient(const Point2& q) const;
    double value(const PhasePoint& z) const;
    PhaseGradient gradient(const PhasePoint& z) const;

private:
    Point2 base_for(const Point2& q) const;

    KtParams k_;
    PotentialSpec spec_;
    std::optional<Point2> base_;
    double margin_;
    bool direct_ = false;
};

/// Sum over i of dF/dq_i dG/dp_i - dF/dp_i dG/dq_i.
double poisson_bracket(const FirstIntegral& f, const FirstIntegral& g, const PhasePoint& z);

/// {H, F} for the integral built from `params`.
double poisson_bracket(const KtParams& params, const PotentialSpec& spec, const PhasePoint& z);

/// U(target) - U(base) by composite 16-node Gauss-Legendre panels. Throws NotCompatible when the residual does not
/// vanish along the path or two admissible paths disagree beyond 1e-8, and
/// PathThroughSingularity when no path with at most one bend keeps the margin.
double integral_scalar_part(const KtParams& params, const PotentialSpec& spec, const Point2& base,
                            const Point2& target, double margin = 0.1);

/// Gauss-Legendre nodes and weights on [0, 1].
const std::vector<std::pair<double, double>>& gauss_legendre_unit(int n = 16);

}  // namespace ktinv
