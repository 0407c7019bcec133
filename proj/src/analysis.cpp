#include "ktinv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ktinv/bd.hpp"
#include "ktinv/se2.hpp"

namespace ktinv {

namespace {

double sq(double v) { return v * v; }

// Coefficients of P = b6 (b1 - b2) - b4^2 + b5^2 and Q = b6 b3 + b4 b5 along
// n + t w, as polynomials c0 + c1 t + c2 t^2.
std::array<double, 3> poly_p(const KtParams& n, const KtParams& w) {
    return {n.b6() * (n.b1() - n.b2()) - sq(n.b4()) + sq(n.b5()),
            n.b6() * (w.b1() - w.b2()) + w.b6() * (n.b1() - n.b2()) - 2.0 * n.b4() * w.b4() + 2.0 * n.b5() * w.b5(),
            w.b6() * (w.b1() - w.b2()) - sq(w.b4()) + sq(w.b5())};
}

std::array<double, 3> poly_q(const KtParams& n, const KtParams& w) {
    return {n.b6() * n.b3() + n.b4() * n.b5(),
            n.b6() * w.b3() + w.b6() * n.b3() + n.b4() * w.b5() + w.b4() * n.b5(),
            w.b6() * w.b3() + w.b4() * w.b5()};
}

std::vector<double> real_roots(const std::array<double, 3>& c) {
    const double big = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
    if (big == 0.0) return {0.0};
    const double eps = 1e-12 * big;
    if (std::abs(c[2]) <= eps) {
        if (std::abs(c[1]) <= eps) return {};
        return {-c[0] / c[1]};
    }
    const double disc = c[1] * c[1] - 4.0 * c[2] * c[0];
    if (disc < -eps * big) return {};
    const double s = std::sqrt(std::max(0.0, disc));
    const double q = -0.5 * (c[1] + std::copysign(s, c[1]));
    std::vector<double> r{q / c[2]};
    if (q != 0.0) r.push_back(c[0] / q);
    return r;
}

double eval_poly(const std::array<double, 3>& c, double t) { return c[0] + t * (c[1] + t * c[2]); }

// Remove the metric multiple that fixes d2 at `target` (b6 != 0).
KtParams fix_metric_part(const KtParams& k, double target) {
    const double d2 = invariants_single(k)[1];
    const double s = (target - d2) / (2.0 * k.b6());
    return k + s * metric_kt();
}

bool near_unit(const std::array<double, 3>& v, int axis) {
    for (int i = 0; i < 3; ++i)
        if (std::abs(std::abs(v[i]) - (i == axis ? 1.0 : 0.0)) > 1e-6) return false;
    return true;
}

std::vector<KValue> signed_values(std::initializer_list<std::pair<int, int>> fracs) {
    std::vector<KValue> out;
    for (auto [p, q] : fracs) {
        const std::string base = q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
        out.push_back({static_cast<double>(p) / q, base});
        out.push_back({-static_cast<double>(p) / q, "-" + base});
    }
    return out;
}

}  // namespace

std::string to_string(SwStatus s) {
    switch (s) {
        case SwStatus::Ok: return "Ok";
        case SwStatus::DegenerateFamily: return "DegenerateFamily";
        case SwStatus::NoPolarPair: return "NoPolarPair";
    }
    return "?";
}

std::string to_string(TtwVerdict v) {
    switch (v) {
        case TtwVerdict::MultiSeparable: return "MultiSeparable";
        case TtwVerdict::PolarOnly: return "PolarOnly";
        case TtwVerdict::Degenerate: return "Degenerate";
    }
    return "?";
}

SwReport characterize_sw(double omega, double alpha, double beta, const SampleConfig& cfg, double tol,
                         bool certify_exact, double class_tol) {
    SwReport rep;
    rep.omega = omega;
    rep.alpha = alpha;
    rep.beta = beta;
    const PotentialSpec spec = PotentialSpec::sw(omega, alpha, beta);
    rep.nullspace = compatible_kts(spec, cfg, tol, Backend::Numeric);
    if (certify_exact) rep.exact = compatible_kts(spec, cfg, tol, Backend::ExactRational);

    if (rep.nullspace.dim > 3) {
        rep.status = SwStatus::DegenerateFamily;
        return rep;
    }
    if (rep.nullspace.dim < 3) {
        rep.status = SwStatus::NoPolarPair;
        return rep;
    }

    // span minus the metric direction
    const Eigen::Map<const Eigen::Matrix<double, 6, 1>> gmap(metric_kt().values().data());
    const Eigen::Matrix<double, 6, 1> g = gmap.normalized();
    Eigen::MatrixXd b(6, 3);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 6; ++i) b(i, j) = rep.nullspace.basis[j][i];
    const Eigen::VectorXd gc = b.transpose() * g;
    if ((b * gc - g).norm() > 1e-6) {
        rep.status = SwStatus::NoPolarPair;
        return rep;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gc.transpose(), Eigen::ComputeFullV);
    const Eigen::MatrixXd rest = b * svd.matrixV().rightCols(2);  // orthonormal, orthogonal to g

    const double c1 = rest(5, 0), c2 = rest(5, 1);
    const double cn = std::hypot(c1, c2);
    if (cn < 1e-8) {
        rep.status = SwStatus::NoPolarPair;
        return rep;
    }
    const Eigen::VectorXd n6v = (c1 * rest.col(0) + c2 * rest.col(1)) / (cn * cn);  // b6 = 1
    const Eigen::VectorXd w1v = (-c2 * rest.col(0) + c1 * rest.col(1)) / cn;       // b6 = 0, unit
    const KtParams n6(n6v[0], n6v[1], n6v[2], n6v[3], n6v[4], n6v[5]);
    const KtParams w1(w1v[0], w1v[1], w1v[2], w1v[3], w1v[4], w1v[5]);

    const auto P = poly_p(n6, w1);
    const auto Q = poly_q(n6, w1);
    std::vector<double> cands = real_roots(P);
    for (double t : real_roots(Q)) cands.push_back(t);
    const double pscale = std::max({1.0, std::abs(P[0]), std::abs(P[1]), std::abs(P[2]), std::abs(Q[0]),
                                    std::abs(Q[1]), std::abs(Q[2])});
    std::optional<double> best;
    double best_err = 0.0;
    for (double t : cands) {
        const double err = std::abs(eval_poly(P, t)) + std::abs(eval_poly(Q, t));
        if (!best || err < best_err) {
            best = t;
            best_err = err;
        }
    }
    if (!best || best_err > 1e-8 * pscale * std::max(1.0, sq(*best))) {
        rep.status = SwStatus::NoPolarPair;
        return rep;
    }

    const KtParams kp = fix_metric_part(n6 + *best * w1, 0.0);
    rep.polar_tensor = kp;

    // elliptic-hyperbolic member: polar plus the cartesian direction, scaled to unit focal half-distance
    KtParams ke = kp + w1;
    double d3 = invariants_single(ke)[2];
    if (d3 > 0.0) {
        ke = kp + (sq(ke.b6()) / std::sqrt(d3)) * w1;
        d3 = invariants_single(ke)[2];
    }
    if ((ke.b1() - ke.b2()) / ke.b6() < 0.0) ke = kp - (ke - kp);
    ke = fix_metric_part(ke, std::sqrt(d3));
    rep.eh_tensor = ke;

    rep.pair_invariants = joint_invariants(kp, ke, class_tol);
    rep.pair_class = classify_pair(kp, ke, class_tol);
    const InvariantVector& v = *rep.pair_invariants;
    const double dscale = std::max({1.0, v.d7, v.d8, v.d9});
    rep.conditions = {
        std::abs(v.d1) > class_tol * std::max(1.0, kp.norm()),
        v.d3 <= class_tol * std::max(1.0, std::pow(kp.norm(), 4)),
        std::abs(v.d4) > class_tol * std::max(1.0, ke.norm()),
        v.d6 > class_tol * std::max(1.0, std::pow(ke.norm(), 4)),
        std::abs(v.d7 - v.d8) <= class_tol * dscale && std::abs(v.d8 - v.d9) <= class_tol * dscale,
    };
    rep.theorem_holds = rep.nullspace.dim >= 3 && rep.pair_class.label == PairLabel::SWCanonical;
    return rep;
}

DegeneracyRow degeneracy_study(double a, double b, double ell, const SampleConfig& cfg, double tol) {
    const KtParams ka = polar_kt_at(a, b);
    const KtParams kb = eh_canonical_kt(ell);
    DegeneracyRow row;
    row.a = a;
    row.b = b;
    row.ell = ell;
    row.pair_class = classify_pair(ka, kb);
    row.invariants = joint_invariants(ka, kb);
    row.derived = derived_invariants(ka, kb);
    row.surviving_family = compatible_potential_params({ka, kb}, cfg, tol);
    row.paper_case = row.pair_class.paper_case_label;
    row.discrepancy_note = row.pair_class.discrepancy_note;

    const auto& fam = row.surviving_family;
    if (fam.dim == 0) row.surviving = "none";
    else if (fam.dim == 3) row.surviving = "full";
    else if (fam.dim == 1 && near_unit(fam.basis[0], 0)) row.surviving = "omega-only";
    else if (fam.dim == 1 && near_unit(fam.basis[0], 1)) row.surviving = "alpha-only";
    else if (fam.dim == 1 && near_unit(fam.basis[0], 2)) row.surviving = "beta-only";
    else row.surviving = "mixed";
    return row;
}

const std::vector<KValue>& ttw_special_values() {
    static const std::vector<KValue> v = signed_values({{2, 1}, {3, 2}, {1, 1}, {1, 2}, {1, 4}, {1, 6}, {1, 8},
                                                        {1, 10}, {1, 12}, {1, 14}, {1, 16}, {3, 4}, {2, 3}, {3, 8},
                                                        {1, 3}, {3, 10}, {2, 7}, {3, 14}, {1, 5}, {3, 16}, {2, 5},
                                                        {1, 7}});
    return v;
}

const std::vector<KValue>& ttw_reduced_values() {
    static const std::vector<KValue> v = signed_values({{1, 1}, {2, 1}, {2, 3}, {1, 2}, {2, 5}});
    return v;
}

bool is_special_k(double k) {
    const auto& s = ttw_special_values();
    return std::any_of(s.begin(), s.end(), [k](const KValue& v) { return std::abs(v.value - k) < 1e-12; });
}

std::vector<KValue> ttw_default_scan() {
    std::vector<KValue> out = signed_values({{1, 1}, {2, 1}, {3, 2}, {1, 2}, {2, 3}, {2, 5}, {3, 1}, {1, 3}});
    out.push_back({std::sqrt(2.0), "sqrt(2)"});
    out.push_back({std::numbers::pi / 3.0, "pi/3"});
    for (const auto& s : ttw_special_values()) {
        const bool seen =
            std::any_of(out.begin(), out.end(), [&](const KValue& v) { return std::abs(v.value - s.value) < 1e-12; });
        if (!seen) out.push_back(s);
    }
    return out;
}

std::vector<TtwScanRow> ttw_scan(const std::vector<KValue>& ks, double omega, double alpha, double beta,
                                 const SampleConfig& cfg, double tol) {
    std::vector<TtwScanRow> rows;
    rows.reserve(ks.size());
    for (const auto& k : ks) {
        TtwScanRow row;
        row.k = k;
        row.special_value = is_special_k(k.value);
        try {
            const NullspaceResult ns = compatible_kts(PotentialSpec::ttw(omega, alpha, beta, k.value), cfg, tol);
            row.dim = ns.dim;
            row.singular_values = ns.singular_values;
            row.gap = ns.gap;
            row.verdict = ns.dim >= 3 ? TtwVerdict::MultiSeparable
                          : ns.dim == 2 ? TtwVerdict::PolarOnly
                                        : TtwVerdict::Degenerate;
        } catch (const KtError& e) {
            row.error = e.what();
            row.verdict = TtwVerdict::Degenerate;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double cartesian_angle_residual(double k, double phi, double omega, double alpha, double beta,
                                const SampleConfig& cfg) {
    const PotentialSpec spec = PotentialSpec::ttw(omega, alpha, beta, k);
    return validation_residual(spec, {cartesian_rotated_kt(phi)}, cfg);
}

bool cartesian_angle_check(double k, double phi, double omega, double alpha, double beta, const SampleConfig& cfg,
                           double tol) {
    return cartesian_angle_residual(k, phi, omega, alpha, beta, cfg) <= tol;
}

AuditReport invariance_audit(int trials, std::uint64_t seed) {
    if (trials < 1) fail(ErrorKind::DomainError, "trials must be at least 1");
    AuditReport rep;
    rep.trials = trials;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto element = [&] { return SE2Element(3.0 * u(rng), 3.0 * u(rng), std::numbers::pi * u(rng)); };
    auto random_eh = [&] {
        // random placement of a canonical tensor plus a metric multiple keeps the foci well separated
        const double ell = 1.0 + 4.0 * (0.5 * (u(rng) + 1.0));
        const double scale = 0.5 + 0.5 * (u(rng) + 1.0);
        return scale * act_on_kt(element(), eh_canonical_kt(ell)) + u(rng) * metric_kt();
    };

    for (int t = 0; t < trials; ++t) {
        KtParams ka, kb;
        switch (t % 5) {
            case 0: ka = polar_kt_at(0.0, 0.0); kb = eh_canonical_kt(1.0 + 8.0 * 0.5 * (u(rng) + 1.0)); break;
            case 1: ka = polar_kt_at(2.0 * u(rng), 0.0); kb = eh_canonical_kt(4.0); break;
            case 2: ka = polar_kt_at(0.0, 0.5 + std::abs(2.0 * u(rng))); kb = eh_canonical_kt(4.0); break;
            case 3: ka = polar_kt_at(2.0 * u(rng), 2.0 * u(rng)); kb = random_eh(); break;
            default: ka = random_eh(); kb = random_eh(); break;
        }
        // common random placement of the pair
        const SE2Element h = element();
        ka = act_on_kt(h, ka);
        kb = act_on_kt(h, kb);

        const SE2Element g = element();
        const KtParams ga = act_on_kt(g, ka);
        const KtParams gb = act_on_kt(g, kb);

        const auto d0 = joint_invariants(ka, kb).as_array();
        const auto d1 = joint_invariants(ga, gb).as_array();
        for (int i = 0; i < 9; ++i)
            rep.max_invariant_drift[i] =
                std::max(rep.max_invariant_drift[i], std::abs(d1[i] - d0[i]) / std::max(1.0, std::abs(d0[i])));

        const FociPair f0 = foci(kb);
        const FociPair f1 = foci(gb);
        const Point2 p = apply_point(g, f0.s_plus), m = apply_point(g, f0.s_minus);
        const double direct = std::max(std::sqrt(distance_sq(p, f1.s_plus)), std::sqrt(distance_sq(m, f1.s_minus)));
        const double swapped = std::max(std::sqrt(distance_sq(p, f1.s_minus)), std::sqrt(distance_sq(m, f1.s_plus)));
        rep.max_foci_error = std::max(rep.max_foci_error, std::min(direct, swapped));

        const SE2Element g2 = element();
        const KtParams lhs = act_on_kt(g2, act_on_kt(g, ka));
        const KtParams rhs = act_on_kt(compose(g2, g), ka);
        rep.max_group_law_error =
            std::max(rep.max_group_law_error, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));

        rep.label_checks += 3;
        if (classify_kt(ka) != classify_kt(ga)) ++rep.label_mismatches;
        if (classify_kt(kb) != classify_kt(gb)) ++rep.label_mismatches;
        if (classify_pair(ka, kb).label != classify_pair(ga, gb).label) ++rep.label_mismatches;
    }
    const double drift = *std::max_element(rep.max_invariant_drift.begin(), rep.max_invariant_drift.end());
    rep.passed = drift < 1e-9 && rep.max_foci_error < 1e-10 && rep.max_group_law_error < 1e-12 &&
                 rep.label_mismatches == 0;
    return rep;
}

}  // namespace ktinv
