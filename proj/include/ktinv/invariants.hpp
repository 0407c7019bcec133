#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "ktinv/kt_core.hpp"

namespace ktinv {

inline constexpr double kDefaultClassTol = 1e-9;

struct FociPair {
    Point2 s_plus;
    Point2 s_minus;
    bool coincident = false;
};

/// Joint invariants of a pair (kA, kB). kA supplies d1..d3 and the foci S3, S4;
/// kB supplies d4..d6 and the foci S1, S2.
///   d7 = |S2 S3|^2, d8 = |S1 S3|^2, d9 = |S2 S4|^2
struct InvariantVector {
    double d1 = 0, d2 = 0, d3 = 0, d4 = 0, d5 = 0, d6 = 0, d7 = 0, d8 = 0, d9 = 0;

    std::array<double, 9> as_array() const { return {d1, d2, d3, d4, d5, d6, d7, d8, d9}; }
};

struct DerivedInvariants {
    double sigma1 = 0.0;  // from kB
    double sigma2 = 0.0;  // from kA
    std::optional<double> k1_sq;  // squared half focal distance of kA
    std::optional<double> k2_sq;  // squared half focal distance of kB
    // Offsets of the kA center from the kB focal frame, modulo the reflection
    // isotropy (both nonnegative). Present when kB is elliptic-hyperbolic.
    std::optional<double> a_rec;
    std::optional<double> b_rec;
    double tri_area = 0.0;  // area of S1 S2 S3
};

enum class OrbitClass { EllipticHyperbolic, Polar, Parabolic, Cartesian, MetricMultiple };

enum class PairLabel {
    SWCanonical,
    GeneralQuadrilateral,
    PolarEH_General,
    PolarEH_Collinear,
    PolarEH_Isosceles,
    PolarEH_Concentric,
    Other,
};

struct PairClass {
    PairLabel label = PairLabel::Other;
    std::optional<int> paper_case_label;
    std::optional<std::string> discrepancy_note;
};

std::string to_string(OrbitClass c);
std::string to_string(PairLabel l);

/// (d1, d2, d3) of a single tensor.
std::array<double, 3> invariants_single(const KtParams& params);

/// b4^2 - b5^2 + b6 (b2 - b1)
double sigma_of(const KtParams& params);

/// Throws NoFoci when b6 == 0.
FociPair foci(const KtParams& params, double tol = kDefaultClassTol);

/// Rigid motion g with act_on_kt(g, params) = (b1', b2', 0, 0, 0, b6) and
/// (b1' - b2') / b6 >= 0; foci of the result lie on the x-axis.
/// Throws NotCanonizable unless the tensor is elliptic-hyperbolic or polar.
std::pair<SE2Element, KtParams> canonicalize(const KtParams& params, double tol = kDefaultClassTol);

/// Among the focus labelings, the one maximizing (d7, d8, d9)
/// lexicographically is used, which makes the result independent of frame.
InvariantVector joint_invariants(const KtParams& kA, const KtParams& kB, double tol = kDefaultClassTol);

DerivedInvariants derived_invariants(const KtParams& kA, const KtParams& kB, double tol = kDefaultClassTol);

OrbitClass classify_kt(const KtParams& params, double tol = kDefaultClassTol);

PairClass classify_pair(const KtParams& kA, const KtParams& kB, double tol = kDefaultClassTol);

}  // namespace ktinv
