#include "ktinv/kt_core.hpp"

#include <algorithm>
#include <numeric>

namespace ktinv {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroTensor: return "ZeroTensor";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::SingularPoint: return "SingularPoint";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::NoFoci: return "NoFoci";
        case ErrorKind::NotCanonizable: return "NotCanonizable";
        case ErrorKind::BackendUnavailable: return "BackendUnavailable";
        case ErrorKind::ValidationFailed: return "ValidationFailed";
        case ErrorKind::SamplingExhausted: return "SamplingExhausted";
        case ErrorKind::NotCompatible: return "NotCompatible";
        case ErrorKind::PathThroughSingularity: return "PathThroughSingularity";
    }
    return "Unknown";
}

KtParams::KtParams(double b1, double b2, double b3, double b4, double b5, double b6)
    : KtParams(std::array<double, 6>{b1, b2, b3, b4, b5, b6}) {}

KtParams::KtParams(const std::array<double, 6>& b) : b_(b) {
    for (double v : b_) {
        if (!std::isfinite(v)) fail(ErrorKind::DomainError, "Killing tensor parameters must be finite");
    }
}

double KtParams::norm() const {
    return std::sqrt(std::inner_product(b_.begin(), b_.end(), b_.begin(), 0.0));
}

bool KtParams::is_zero() const {
    return std::all_of(b_.begin(), b_.end(), [](double v) { return v == 0.0; });
}

const std::array<std::string, 6>& KtParams::slot_labels() {
    static const std::array<std::string, 6> labels{"b1", "b2", "b3", "b4", "b5", "b6"};
    return labels;
}

KtParams operator+(const KtParams& a, const KtParams& b) {
    std::array<double, 6> r{};
    for (std::size_t i = 0; i < 6; ++i) r[i] = a[i] + b[i];
    return KtParams(r);
}

KtParams operator-(const KtParams& a, const KtParams& b) {
    std::array<double, 6> r{};
    for (std::size_t i = 0; i < 6; ++i) r[i] = a[i] - b[i];
    return KtParams(r);
}

KtParams operator*(double s, const KtParams& a) {
    std::array<double, 6> r{};
    for (std::size_t i = 0; i < 6; ++i) r[i] = s * a[i];
    return KtParams(r);
}

void require_tensor(const KtParams& p, const char* context) {
    if (p.is_zero()) fail(ErrorKind::ZeroTensor, std::string(context) + ": all six parameters are zero");
}

double distance_sq(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

PolarPoint2::PolarPoint2(double r, double theta) : r_(r), theta_(theta) {
    if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(theta))
        fail(ErrorKind::DomainError, "polar point requires finite r > 0");
}

Point2 PolarPoint2::to_cartesian() const { return {r_ * std::cos(theta_), r_ * std::sin(theta_)}; }

double normalize_angle(double a) {
    double r = std::remainder(a, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

SE2Element::SE2Element(double p1, double p2, double p3) : p1_(p1), p2_(p2), p3_(normalize_angle(p3)) {
    if (!std::isfinite(p1) || !std::isfinite(p2) || !std::isfinite(p3))
        fail(ErrorKind::DomainError, "group element parameters must be finite");
}

SymMatrix2 kt_components_at(const KtParams& p, const Point2& pt) {
    require_tensor(p, "kt_components_at");
    const double x = pt.x;
    const double y = pt.y;
    return {p.b1() + 2.0 * p.b4() * y + p.b6() * y * y,
            p.b3() - p.b4() * x - p.b5() * y - p.b6() * x * y,
            p.b2() + 2.0 * p.b5() * x + p.b6() * x * x};
}

// K = A^{ij} X_i X_j + (-b4 X_1 + b5 X_2) (.) R + b6 R R with X_1, X_2 the
// translation generators and R the rotation generator, written in the polar
// frame (d_r, d_theta).
SymMatrix2 kt_to_polar_components(const KtParams& p, const PolarPoint2& pt) {
    require_tensor(p, "kt_to_polar_components");
    const double r = pt.r();
    const double c = std::cos(pt.theta());
    const double s = std::sin(pt.theta());
    const double b1 = p.b1(), b2 = p.b2(), b3 = p.b3(), b4 = p.b4(), b5 = p.b5(), b6 = p.b6();

    SymMatrix2 k;
    k.k11 = b1 * c * c + 2.0 * b3 * c * s + b2 * s * s;
    k.k12 = (b3 * (c * c - s * s) + (b2 - b1) * c * s) / r - b4 * c + b5 * s;
    k.k22 = (b1 * s * s - 2.0 * b3 * c * s + b2 * c * c) / (r * r) + 2.0 * (b4 * s + b5 * c) / r + b6;
    return k;
}

KtParams lincomb(std::span<const double> coeffs, std::span<const KtParams> tensors) {
    if (coeffs.size() != tensors.size())
        fail(ErrorKind::LengthMismatch, "lincomb: " + std::to_string(coeffs.size()) + " coefficients for " +
                                            std::to_string(tensors.size()) + " tensors");
    if (tensors.empty()) fail(ErrorKind::LengthMismatch, "lincomb: at least one tensor is required");
    std::array<double, 6> acc{};
    for (std::size_t k = 0; k < tensors.size(); ++k) {
        for (std::size_t i = 0; i < 6; ++i) acc[i] += coeffs[k] * tensors[k][i];
    }
    return KtParams(acc);
}

KtParams metric_kt() { return {1, 1, 0, 0, 0, 0}; }

// Written as 0 - t so that a = 0 or b = 0 yields +0 rather than -0 in reports.
KtParams polar_kt_at(double a, double b) { return {b * b, a * a, 0.0 - a * b, 0.0 - b, 0.0 - a, 1.0}; }

KtParams eh_canonical_kt(double ell) {
    if (!(ell > 0.0)) fail(ErrorKind::DomainError, "eh_canonical_kt requires ell > 0");
    return {ell, 0, 0, 0, 0, 1};
}

KtParams cartesian_rotated_kt(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * c, s * s, s * c, 0, 0, 0};
}

}  // namespace ktinv
