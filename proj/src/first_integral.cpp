#include "ktinv/first_integral.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

#include "ktinv/bd.hpp"

namespace ktinv {

namespace {

struct OneForm {
    double w1, w2;
    double j11, j12, j21, j22;  // j_ab = d w_a / d x_b
};

// w = K grad V and its Jacobian.
OneForm one_form(const KtParams& b, const PotentialSpec& spec, const Point2& z) {
    const PotentialJet2 v = eval_potential(spec, z);
    const SymMatrix2 k = kt_components_at(b, z);
    const double k11x = 0.0, k11y = 2.0 * (b.b4() + b.b6() * z.y);
    const double k12x = -b.b4() - b.b6() * z.y, k12y = -b.b5() - b.b6() * z.x;
    const double k22x = 2.0 * (b.b5() + b.b6() * z.x), k22y = 0.0;
    OneForm f;
    f.w1 = k.k11 * v.x + k.k12 * v.y;
    f.w2 = k.k12 * v.x + k.k22 * v.y;
    f.j11 = k11x * v.x + k.k11 * v.xx + k12x * v.y + k.k12 * v.xy;
    f.j12 = k11y * v.x + k.k11 * v.xy + k12y * v.y + k.k12 * v.yy;
    f.j21 = k12x * v.x + k.k12 * v.xx + k22x * v.y + k.k22 * v.xy;
    f.j22 = k12y * v.x + k.k12 * v.xy + k22y * v.y + k.k22 * v.yy;
    return f;
}

bool point_ok(const PotentialSpec& spec, const Point2& p, double margin) {
    if (!respects_margin(spec, p, margin)) return false;
    try {
        eval_potential(spec, p);
    } catch (const KtError& e) {
        if (e.kind() == ErrorKind::SingularPoint) return false;
        throw;
    }
    return true;
}

bool segment_ok(const PotentialSpec& spec, const Point2& a, const Point2& c, double margin) {
    constexpr int n = 64;
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        if (!point_ok(spec, {a.x + t * (c.x - a.x), a.y + t * (c.y - a.y)}, 0.5 * margin)) return false;
    }
    return true;
}

using Path = std::vector<Point2>;

std::vector<Path> admissible_paths(const PotentialSpec& spec, const Point2& b, const Point2& q, double margin) {
    std::vector<Path> out;
    if (segment_ok(spec, b, q, margin)) out.push_back({b, q});
    std::vector<Point2> bends{{q.x, b.y}, {b.x, q.y}};
    const double nb = std::hypot(b.x, b.y), nq = std::hypot(q.x, q.y);
    if (nb > 0.0 && nq > 0.0) {
        bends.push_back({nb * q.x / nq, nb * q.y / nq});
        bends.push_back({nq * b.x / nb, nq * b.y / nb});
    }
    for (const auto& m : bends) {
        if (distance_sq(m, b) == 0.0 || distance_sq(m, q) == 0.0) continue;
        if (segment_ok(spec, b, m, margin) && segment_ok(spec, m, q, margin)) out.push_back({b, m, q});
    }
    return out;
}

using Triple = std::array<double, 3>;

Triple gl_panel(const std::function<Triple(double)>& f, double t0, double t1) {
    Triple acc{0.0, 0.0, 0.0};
    const double h = t1 - t0;
    for (const auto& [t, w] : gauss_legendre_unit()) {
        const Triple v = f(t0 + t * h);
        for (int i = 0; i < 3; ++i) acc[i] += w * h * v[i];
    }
    return acc;
}

// Composite Gauss-Legendre, halving panels until the two-panel estimate
// agrees with the one-panel estimate.
Triple gl_adaptive(const std::function<Triple(double)>& f, double t0, double t1, const Triple& whole, int depth) {
    const double tm = 0.5 * (t0 + t1);
    const Triple left = gl_panel(f, t0, tm);
    const Triple right = gl_panel(f, tm, t1);
    double err = 0.0, mag = 0.0;
    for (int i = 0; i < 3; ++i) {
        err = std::max(err, std::abs(left[i] + right[i] - whole[i]));
        mag = std::max(mag, std::abs(left[i] + right[i]));
    }
    if (err <= 1e-14 * std::max(1.0, mag) || depth >= 10)
        return {left[0] + right[0], left[1] + right[1], left[2] + right[2]};
    const Triple a = gl_adaptive(f, t0, tm, left, depth + 1);
    const Triple b = gl_adaptive(f, tm, t1, right, depth + 1);
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Triple gl_integrate(const std::function<Triple(double)>& f) { return gl_adaptive(f, 0.0, 1.0, gl_panel(f, 0.0, 1.0), 0); }

// Integral of w over the segment a -> c, and its derivative with respect to
// c with a held fixed.
Triple segment_terms(const KtParams& k, const PotentialSpec& spec, const Point2& a, const Point2& c) {
    const double dx = c.x - a.x, dy = c.y - a.y;
    return gl_integrate([&](double t) -> Triple {
        const OneForm f = one_form(k, spec, {a.x + t * dx, a.y + t * dy});
        return {f.w1 * dx + f.w2 * dy, t * (f.j11 * dx + f.j21 * dy) + f.w1, t * (f.j12 * dx + f.j22 * dy) + f.w2};
    });
}

double path_integral(const KtParams& k, const PotentialSpec& spec, const Path& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) acc += segment_terms(k, spec, p[i], p[i + 1])[0];
    return acc;
}

Point2 segment_gradient(const KtParams& k, const PotentialSpec& spec, const Point2& m, const Point2& q) {
    const Triple t = segment_terms(k, spec, m, q);
    return {t[1], t[2]};
}

double relative_residual_at(const KtParams& k, const PotentialSpec& spec, const Point2& p) {
    const auto row = bd_row(spec, p);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 6; ++i) {
        num += row[i] * k[i];
        den += std::abs(row[i] * k[i]);
    }
    return den > 0.0 ? std::abs(num) / den : 0.0;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_unit(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) fail(ErrorKind::DomainError, "quadrature needs at least one node");

    std::vector<std::pair<double, double>> nodes;
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            const double p = std::legendre(n, x);
            const double pm = n > 1 ? std::legendre(n - 1, x) : 1.0;
            dp = n * (x * p - pm) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            const double p = std::legendre(n, x);
            const double pm = n > 1 ? std::legendre(n - 1, x) : 1.0;
            dp = n * (x * p - pm) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.emplace_back(0.5 * (1.0 - x), 0.5 * w);
    }
    return cache.emplace(n, std::move(nodes)).first->second;
}

FirstIntegral::FirstIntegral(KtParams k, PotentialSpec spec, std::optional<Point2> base, double margin)
    : k_(k), spec_(std::move(spec)), base_(base), margin_(margin) {
    require_tensor(k_, "FirstIntegral");
}

FirstIntegral FirstIntegral::hamiltonian(PotentialSpec spec) {
    FirstIntegral h(metric_kt(), std::move(spec));
    h.direct_ = true;
    return h;
}

Point2 FirstIntegral::base_for(const Point2& q) const {
    if (base_) return *base_;
    return {q.x < 0.0 ? -1.0 : 1.0, q.y < 0.0 ? -1.0 : 1.0};
}

double FirstIntegral::scalar_part(const Point2& q) const {
    if (direct_) return eval_potential(spec_, q).v;
    const auto paths = admissible_paths(spec_, base_for(q), q, margin_);
    if (paths.empty()) fail(ErrorKind::PathThroughSingularity, "no admissible path to the evaluation point");
    return path_integral(k_, spec_, paths.front());
}

Point2 FirstIntegral::scalar_gradient(const Point2& q) const {
    if (direct_) {
        const PotentialJet2 v = eval_potential(spec_, q);
        return {v.x, v.y};
    }
    const auto paths = admissible_paths(spec_, base_for(q), q, margin_);
    if (paths.empty()) fail(ErrorKind::PathThroughSingularity, "no admissible path to the evaluation point");
    const Path& p = paths.front();
    return segment_gradient(k_, spec_, p[p.size() - 2], q);
}

double FirstIntegral::value(const PhasePoint& z) const {
    const SymMatrix2 k = kt_components_at(k_, z.position());
    const double kin = 0.5 * (k.k11 * z.px * z.px + 2.0 * k.k12 * z.px * z.py + k.k22 * z.py * z.py);
    return kin + scalar_part(z.position());
}

PhaseGradient FirstIntegral::gradient(const PhasePoint& z) const {
    const KtParams& b = k_;
    const SymMatrix2 k = kt_components_at(b, z.position());
    const double pp11 = z.px * z.px, pp12 = z.px * z.py, pp22 = z.py * z.py;
    // derivatives of the component polynomials
    const double k12x = -b.b4() - b.b6() * z.y;
    const double k22x = 2.0 * (b.b5() + b.b6() * z.x);
    const double k11y = 2.0 * (b.b4() + b.b6() * z.y);
    const double k12y = -b.b5() - b.b6() * z.x;
    const Point2 du = scalar_gradient(z.position());
    return {
        0.5 * (2.0 * k12x * pp12 + k22x * pp22) + du.x,
        0.5 * (k11y * pp11 + 2.0 * k12y * pp12) + du.y,
        k.k11 * z.px + k.k12 * z.py,
        k.k12 * z.px + k.k22 * z.py,
    };
}

double poisson_bracket(const FirstIntegral& f, const FirstIntegral& g, const PhasePoint& z) {
    const PhaseGradient a = f.gradient(z);
    const PhaseGradient b = g.gradient(z);
    return (a[0] * b[2] - a[2] * b[0]) + (a[1] * b[3] - a[3] * b[1]);
}

double poisson_bracket(const KtParams& params, const PotentialSpec& spec, const PhasePoint& z) {
    return poisson_bracket(FirstIntegral::hamiltonian(spec), FirstIntegral(params, spec), z);
}

double integral_scalar_part(const KtParams& params, const PotentialSpec& spec, const Point2& base,
                            const Point2& target, double margin) {
    require_tensor(params, "integral_scalar_part");
    const auto paths = admissible_paths(spec, base, target, margin);
    if (paths.empty()) fail(ErrorKind::PathThroughSingularity, "no straight or one-bend path keeps the margin");

    const Path& p = paths.front();
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
        for (int i = 0; i <= 16; ++i) {
            const double t = i / 16.0;
            const Point2 z{p[s].x + t * (p[s + 1].x - p[s].x), p[s].y + t * (p[s + 1].y - p[s].y)};
            if (relative_residual_at(params, spec, z) > 1e-8)
                fail(ErrorKind::NotCompatible, "compatibility residual does not vanish along the path");
        }
    }

    const double u = path_integral(params, spec, p);
    if (paths.size() > 1) {
        const double u2 = path_integral(params, spec, paths[1]);
        if (std::abs(u - u2) > 1e-8 * std::max(1.0, std::abs(u)))
            fail(ErrorKind::NotCompatible, "line integral depends on the path");
    }
    return u;
}

}  // namespace ktinv
