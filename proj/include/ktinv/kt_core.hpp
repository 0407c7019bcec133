#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ktinv/errors.hpp"

namespace ktinv {

/// Parameters (b1..b6) of a Killing two-tensor in the Euclidean plane:
///   K11 = b1 + 2 b4 y + b6 y^2
///   K12 = b3 - b4 x - b5 y - b6 x y
///   K22 = b2 + 2 b5 x + b6 x^2
/// The zero vector is a valid KtParams (e.g. the result of a cancelling linear
/// combination); operations that need an actual tensor reject it.
class KtParams {
public:
    KtParams() = default;
    KtParams(double b1, double b2, double b3, double b4, double b5, double b6);
    explicit KtParams(const std::array<double, 6>& b);

    double b1() const { return b_[0]; }
    double b2() const { return b_[1]; }
    double b3() const { return b_[2]; }
    double b4() const { return b_[3]; }
    double b5() const { return b_[4]; }
    double b6() const { return b_[5]; }

    double operator[](std::size_t i) const { return b_[i]; }
    const std::array<double, 6>& values() const { return b_; }

    double norm() const;
    bool is_zero() const;

    /// Slot labels used in reports: "b1".."b6".
    static const std::array<std::string, 6>& slot_labels();

    friend bool operator==(const KtParams&, const KtParams&) = default;

private:
    std::array<double, 6> b_{};
};

KtParams operator+(const KtParams& a, const KtParams& b);
KtParams operator-(const KtParams& a, const KtParams& b);
KtParams operator*(double s, const KtParams& a);

/// Throws ZeroTensor when `p` is the zero vector.
void require_tensor(const KtParams& p, const char* context);

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

double distance_sq(const Point2& a, const Point2& b);

class PolarPoint2 {
public:
    /// Throws DomainError unless r > 0.
    PolarPoint2(double r, double theta);

    double r() const { return r_; }
    double theta() const { return theta_; }
    Point2 to_cartesian() const;

private:
    double r_;
    double theta_;
};

/// Contravariant symmetric 2x2 tensor. The quadratic form uses the single
/// off-diagonal slot twice: F = k11 p1^2 + 2 k12 p1 p2 + k22 p2^2.
struct SymMatrix2 {
    double k11 = 0.0;
    double k12 = 0.0;
    double k22 = 0.0;
};

/// Proper rigid motion x -> R(p3) x + (p1, p2); p3 is kept in (-pi, pi].
class SE2Element {
public:
    SE2Element() = default;
    SE2Element(double p1, double p2, double p3);

    double p1() const { return p1_; }
    double p2() const { return p2_; }
    double p3() const { return p3_; }

    static SE2Element identity() { return {}; }
    bool is_identity() const { return p1_ == 0.0 && p2_ == 0.0 && p3_ == 0.0; }

private:
    double p1_ = 0.0;
    double p2_ = 0.0;
    double p3_ = 0.0;
};

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
    double px = 0.0;
    double py = 0.0;

    Point2 position() const { return {x, y}; }
};

double normalize_angle(double a);

SymMatrix2 kt_components_at(const KtParams& params, const Point2& pt);

/// Contravariant (r, theta) components of the tensor at a polar point.
SymMatrix2 kt_to_polar_components(const KtParams& params, const PolarPoint2& pt);

KtParams lincomb(std::span<const double> coeffs, std::span<const KtParams> tensors);

KtParams metric_kt();
/// Rotational tensor about (a, b): K11 = (y-b)^2, K12 = -(x-a)(y-b), K22 = (x-a)^2.
KtParams polar_kt_at(double a, double b);
/// Elliptic-hyperbolic tensor in canonical position, foci at (+-sqrt(ell), 0).
KtParams eh_canonical_kt(double ell);
/// Constant tensor e e^T with e = (cos phi, sin phi).
KtParams cartesian_rotated_kt(double phi);

}  // namespace ktinv
