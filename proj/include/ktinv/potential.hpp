#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "ktinv/jet.hpp"
#include "ktinv/kt_core.hpp"

namespace ktinv {

using ExactJet2 = BasicJet<mpq_class>;

/// Rational point used by the exact backend. `r` is set when the radius is
/// itself rational (required by radial families such as Kepler).
struct ExactPoint2 {
    mpq_class x;
    mpq_class y;
    std::optional<mpq_class> r;
};

namespace family {
struct Free {};
/// V = omega (x^2 + y^2)
struct Oscillator { double omega = 0.0; };
/// V = omega (x^2 + y^2) + alpha / x^2 + beta / y^2
struct SW { double omega = 0.0, alpha = 0.0, beta = 0.0; };
/// V = omega r^2 + alpha / (r cos k theta)^2 + beta / (r sin k theta)^2 + gamma / r,
/// theta = atan2(y, x).
struct TTW { double omega = 0.0, alpha = 0.0, beta = 0.0, k = 1.0, gamma = 0.0; };
/// V = -mu / r
struct Kepler { double mu = 0.0; };
/// User potential written once against the jet type; the exact callback is
/// optional and enables the rational backend.
struct Custom {
    std::string name;
    std::function<PotentialJet2(const PotentialJet2& x, const PotentialJet2& y)> eval;
    std::function<ExactJet2(const ExactJet2& x, const ExactJet2& y)> eval_exact;
};
}  // namespace family

using FamilyVariant =
    std::variant<family::Free, family::Oscillator, family::SW, family::TTW, family::Kepler, family::Custom>;

/// A potential family instance, optionally placed by a rigid motion g:
/// the placed potential is V(g^{-1} x).
class PotentialSpec {
public:
    static PotentialSpec free();
    static PotentialSpec oscillator(double omega);
    static PotentialSpec sw(double omega, double alpha, double beta);
    /// Throws DomainError when k == 0.
    static PotentialSpec ttw(double omega, double alpha, double beta, double k, double gamma = 0.0);
    static PotentialSpec kepler(double mu);
    static PotentialSpec custom(family::Custom c);

    const FamilyVariant& family() const { return family_; }
    const SE2Element& placement() const { return placement_; }

    /// Same family, moved by g (composed with any existing placement).
    PotentialSpec placed(const SE2Element& g) const;

    /// Short machine-readable family tag: free, oscillator, sw, ttw, kepler, custom.
    std::string family_name() const;
    /// Human-readable descriptor, e.g. "sw(omega=1,alpha=2,beta=3)".
    std::string descriptor() const;

    /// True when the jet is rational at suitable rational points, so the
    /// exact backend can run.
    bool has_rational_jet() const;
    /// True when the exact backend needs points with rational radius.
    bool needs_rational_radius() const;

private:
    explicit PotentialSpec(FamilyVariant f) : family_(std::move(f)) {}

    FamilyVariant family_;
    SE2Element placement_;
};

/// Value, gradient and Hessian at `pt`. Throws SingularPoint (naming the
/// violated constraint) on the family's singular set.
PotentialJet2 eval_potential(const PotentialSpec& spec, const Point2& pt);

/// Exact jet at a rational point. Throws BackendUnavailable for families
/// without rational jets and SingularPoint on the singular set.
ExactJet2 eval_potential_exact(const PotentialSpec& spec, const ExactPoint2& pt);

/// True when `pt` keeps at least `margin` clearance from the declared singular
/// set of the family (|x|, |y| for SW; |cos k theta|, |sin k theta| at half the
/// margin and r for TTW; r for Kepler).
bool respects_margin(const PotentialSpec& spec, const Point2& pt, double margin);

}  // namespace ktinv
