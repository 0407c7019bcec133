#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ktinv/kt_core.hpp"
#include "ktinv/potential.hpp"
#include "ktinv/sampling.hpp"

namespace ktinv {

inline constexpr double kDefaultRankTol = 1e-8;

enum class Backend { Numeric, ExactRational };
std::string to_string(Backend b);

struct LinearSystem {
    Eigen::MatrixXd rows;
    std::vector<std::string> column_labels;
    std::vector<double> row_scales;
    std::string potential_id;
};

/// Exact rank evidence: pivot columns of the fraction-free echelon form and
/// its last pivot (a nonzero integer minor of the sampled matrix).
struct RankCertificate {
    int rank = 0;
    std::vector<int> pivot_columns;
    std::string last_pivot;
    int rows = 0;
};

struct NullspaceResult {
    int dim = 0;
    std::vector<KtParams> basis;
    /// Coordinates of each basis vector in the caller's subspace basis
    /// (restricted solves only).
    std::vector<std::vector<double>> coordinates;
    std::vector<double> singular_values;
    std::optional<double> gap;  // sigma_rank / sigma_rank+1
    std::optional<RankCertificate> certificate;
    double tol_used = kDefaultRankTol;
    Backend backend = Backend::Numeric;
    double validation_residual = 0.0;
    int samples = 0;
};

struct FamilyNullspaceResult {
    int dim = 0;
    std::vector<std::string> parameter_labels;  // omega, alpha, beta
    std::vector<std::array<double, 3>> basis;
    std::vector<double> singular_values;
    std::optional<double> gap;
    double tol_used = kDefaultRankTol;
    double validation_residual = 0.0;
};

/// One row per sample, each divided by its max-abs entry (zero rows keep
/// scale 1).
LinearSystem assemble_system(const PotentialSpec& spec, const SampleSet& samples);

/// SVD null space of the system. Basis is canonical: reduced echelon form of
/// the null space, then Gram-Schmidt, unit norm, first nonzero entry positive.
NullspaceResult nullspace(const LinearSystem& sys, double tol = kDefaultRankTol);

/// Compatible tensors of `spec`. The numeric basis is re-validated on an
/// independent Halton set (ValidationFailed otherwise). The exact backend
/// throws BackendUnavailable for families without rational jets.
NullspaceResult compatible_kts(const PotentialSpec& spec, const SampleConfig& cfg = {}, double tol = kDefaultRankTol,
                               Backend backend = Backend::Numeric);

/// Null space restricted to span(subspace); throws DomainError unless the
/// spanning vectors are independent.
NullspaceResult restricted_compatible(const PotentialSpec& spec, const std::vector<KtParams>& subspace,
                                      const SampleConfig& cfg = {}, double tol = kDefaultRankTol);

/// (omega, alpha, beta) for which V = omega (x^2 + y^2) + alpha / x^2 + beta / y^2
/// is compatible with every tensor in `tensors`.
FamilyNullspaceResult compatible_potential_params(const std::vector<KtParams>& tensors,
                                                  const SampleConfig& cfg = {}, double tol = kDefaultRankTol);

/// Largest relative residual ||A v|| / sigma_max(A) of the given tensors on
/// the validation sample set (Halton bases 5, 7).
double validation_residual(const PotentialSpec& spec, const std::vector<KtParams>& basis,
                           const SampleConfig& cfg = {});

/// Rational lattice used by the exact backend (see README).
std::vector<ExactPoint2> exact_lattice(const PotentialSpec& spec, const SampleConfig& cfg);

/// Canonical orthonormal basis of the column span of `b`.
std::vector<Eigen::VectorXd> canonical_basis(const Eigen::MatrixXd& b);

}  // namespace ktinv
