#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ktinv/invariants.hpp"
#include "ktinv/nullspace.hpp"

namespace ktinv {

enum class SwStatus { Ok, DegenerateFamily, NoPolarPair };
std::string to_string(SwStatus s);

struct SwReport {
    double omega = 0, alpha = 0, beta = 0;
    SwStatus status = SwStatus::Ok;
    NullspaceResult nullspace;
    std::optional<NullspaceResult> exact;  // rank certificate when requested
    std::optional<KtParams> polar_tensor;
    std::optional<KtParams> eh_tensor;
    std::optional<InvariantVector> pair_invariants;
    PairClass pair_class;
    /// d1 != 0, d3 = 0, d4 != 0, d6 != 0, d7 = d8 = d9
    std::array<bool, 5> conditions{};
    bool theorem_holds = false;
};

/// Compatible tensors of the SW potential; for a three-dimensional space the
/// polar member (b6 = 1, d3 = 0) and an elliptic-hyperbolic member (polar
/// plus the cartesian direction) are extracted and classified as a pair.
SwReport characterize_sw(double omega, double alpha, double beta, const SampleConfig& cfg = {},
                         double tol = kDefaultRankTol, bool certify_exact = false,
                         double class_tol = kDefaultRankTol);

struct DegeneracyRow {
    double a = 0, b = 0, ell = 0;
    PairClass pair_class;
    InvariantVector invariants;
    DerivedInvariants derived;
    FamilyNullspaceResult surviving_family;
    std::string surviving;  // none, omega-only, alpha-only, beta-only, full, or mixed
    std::optional<int> paper_case;
    std::optional<std::string> discrepancy_note;
};

DegeneracyRow degeneracy_study(double a, double b, double ell, const SampleConfig& cfg = {},
                               double tol = kDefaultRankTol);

struct KValue {
    double value = 0.0;
    std::string label;  // as given, e.g. "2/3" or "sqrt(2)"
};

enum class TtwVerdict { MultiSeparable, PolarOnly, Degenerate };
std::string to_string(TtwVerdict v);

struct TtwScanRow {
    KValue k;
    int dim = 0;
    bool special_value = false;
    TtwVerdict verdict = TtwVerdict::Degenerate;
    std::vector<double> singular_values;
    std::optional<double> gap;
    std::optional<std::string> error;
};

/// k values at which the trigonometric expansion set is linearly dependent.
const std::vector<KValue>& ttw_special_values();
/// Values where the cartesian-tensor expansion set is dependent.
const std::vector<KValue>& ttw_reduced_values();
/// Default proposition scan set followed by the remaining special values.
std::vector<KValue> ttw_default_scan();
bool is_special_k(double k);

std::vector<TtwScanRow> ttw_scan(const std::vector<KValue>& ks, double omega, double alpha, double beta,
                                 const SampleConfig& cfg = {}, double tol = kDefaultRankTol);

/// Largest relative residual of cartesian_rotated_kt(phi) against the TTW
/// potential on the sample set.
double cartesian_angle_residual(double k, double phi, double omega, double alpha, double beta,
                                const SampleConfig& cfg = {});
bool cartesian_angle_check(double k, double phi, double omega, double alpha, double beta,
                           const SampleConfig& cfg = {}, double tol = kDefaultRankTol);

struct AuditReport {
    int trials = 0;
    std::uint64_t seed = 0;
    std::array<double, 9> max_invariant_drift{};  // relative, per component
    double max_foci_error = 0.0;
    double max_group_law_error = 0.0;
    int label_checks = 0;
    int label_mismatches = 0;
    bool passed = false;
};

/// Randomized invariance, equivariance and group-law checks.
AuditReport invariance_audit(int trials, std::uint64_t seed = 42);

}  // namespace ktinv
