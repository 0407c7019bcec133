#include "ktinv/potential.hpp"

#include <cmath>
#include <sstream>

#include "ktinv/se2.hpp"

namespace ktinv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class T>
BasicJet<T> sw_jet(const T& omega, const T& alpha, const T& beta, const T& x, const T& y) {
    BasicJet<T> j;
    j.v = omega * (x * x + y * y);
    j.x = T(2) * omega * x;
    j.y = T(2) * omega * y;
    j.xx = T(2) * omega;
    j.yy = T(2) * omega;
    if (alpha != 0) {
        const T x2 = x * x;
        const T x3 = x2 * x;
        j.v += alpha / x2;
        j.x -= T(2) * alpha / x3;
        j.xx += T(6) * alpha / (x3 * x);
    }
    if (beta != 0) {
        const T y2 = y * y;
        const T y3 = y2 * y;
        j.v += beta / y2;
        j.y -= T(2) * beta / y3;
        j.yy += T(6) * beta / (y3 * y);
    }
    return j;
}

template <class T>
BasicJet<T> kepler_jet(const T& mu, const T& x, const T& y, const T& r) {
    const T r2 = r * r;
    const T r3 = r2 * r;
    const T r5 = r3 * r2;
    BasicJet<T> j;
    j.v = -mu / r;
    j.x = mu * x / r3;
    j.y = mu * y / r3;
    j.xx = mu * (y * y - T(2) * x * x) / r5;
    j.xy = T(-3) * mu * x * y / r5;
    j.yy = mu * (x * x - T(2) * y * y) / r5;
    return j;
}

// Polar composition: V(r, theta) = omega r^2 + g(theta) / r^2 + gamma / r with
// g = alpha sec^2(k theta) + beta csc^2(k theta); Cartesian derivatives by the
// chain rule through r(x, y) and theta(x, y).
PotentialJet2 ttw_jet(const family::TTW& f, double x, double y) {
    const double r2 = x * x + y * y;
    const double r = std::sqrt(r2);
    const double th = std::atan2(y, x);
    const double k = f.k;
    const double c = std::cos(k * th);
    const double s = std::sin(k * th);

    double g = 0.0, g1 = 0.0, g2 = 0.0;
    if (f.alpha != 0.0) {
        const double sec2 = 1.0 / (c * c);
        const double t = s / c;
        g += f.alpha * sec2;
        g1 += 2.0 * f.alpha * k * sec2 * t;
        g2 += 2.0 * f.alpha * k * k * (2.0 * sec2 * t * t + sec2 * sec2);
    }
    if (f.beta != 0.0) {
        const double csc2 = 1.0 / (s * s);
        const double ct = c / s;
        g += f.beta * csc2;
        g1 -= 2.0 * f.beta * k * csc2 * ct;
        g2 += 2.0 * f.beta * k * k * (2.0 * csc2 * ct * ct + csc2 * csc2);
    }

    const double r3 = r2 * r;
    const double r4 = r2 * r2;
    const double V = f.omega * r2 + g / r2 + f.gamma / r;
    const double Vr = 2.0 * f.omega * r - 2.0 * g / r3 - f.gamma / r2;
    const double Vrr = 2.0 * f.omega + 6.0 * g / r4 + 2.0 * f.gamma / r3;
    const double Vt = g1 / r2;
    const double Vtt = g2 / r2;
    const double Vrt = -2.0 * g1 / r3;

    const double rx = x / r, ry = y / r;
    const double rxx = y * y / r3, rxy = -x * y / r3, ryy = x * x / r3;
    const double tx = -y / r2, ty = x / r2;
    const double txx = 2.0 * x * y / r4, txy = (y * y - x * x) / r4, tyy = -2.0 * x * y / r4;

    PotentialJet2 j;
    j.v = V;
    j.x = Vr * rx + Vt * tx;
    j.y = Vr * ry + Vt * ty;
    j.xx = Vrr * rx * rx + 2.0 * Vrt * rx * tx + Vtt * tx * tx + Vr * rxx + Vt * txx;
    j.xy = Vrr * rx * ry + Vrt * (rx * ty + ry * tx) + Vtt * tx * ty + Vr * rxy + Vt * txy;
    j.yy = Vrr * ry * ry + 2.0 * Vrt * ry * ty + Vtt * ty * ty + Vr * ryy + Vt * tyy;
    return j;
}

[[noreturn]] void singular(const std::string& what, const Point2& pt) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at (" << pt.x << ", " << pt.y << ")";
    fail(ErrorKind::SingularPoint, os.str());
}

bool finite_jet(const PotentialJet2& j) {
    return std::isfinite(j.v) && std::isfinite(j.x) && std::isfinite(j.y) && std::isfinite(j.xx) &&
           std::isfinite(j.xy) && std::isfinite(j.yy);
}

PotentialJet2 eval_unplaced(const FamilyVariant& fam, const Point2& pt) {
    const double x = pt.x;
    const double y = pt.y;
    return std::visit(
        overloaded{
            [](const family::Free&) { return PotentialJet2{}; },
            [&](const family::Oscillator& f) { return sw_jet(f.omega, 0.0, 0.0, x, y); },
            [&](const family::SW& f) {
                if (f.alpha != 0.0 && x == 0.0) singular("SW requires x != 0", pt);
                if (f.beta != 0.0 && y == 0.0) singular("SW requires y != 0", pt);
                return sw_jet(f.omega, f.alpha, f.beta, x, y);
            },
            [&](const family::TTW& f) {
                const bool radial = f.alpha != 0.0 || f.beta != 0.0 || f.gamma != 0.0;
                if (radial && x == 0.0 && y == 0.0) singular("TTW requires r != 0", pt);
                const double th = std::atan2(y, x);
                if (f.alpha != 0.0 && std::cos(f.k * th) == 0.0) singular("TTW requires cos(k theta) != 0", pt);
                if (f.beta != 0.0 && std::sin(f.k * th) == 0.0) singular("TTW requires sin(k theta) != 0", pt);
                return ttw_jet(f, x, y);
            },
            [&](const family::Kepler& f) {
                const double r = std::hypot(x, y);
                if (f.mu != 0.0 && r == 0.0) singular("Kepler requires r != 0", pt);
                if (f.mu == 0.0) return PotentialJet2{};
                return kepler_jet(f.mu, x, y, r);
            },
            [&](const family::Custom& f) {
                if (!f.eval) fail(ErrorKind::DomainError, "custom potential '" + f.name + "' has no evaluator");
                return f.eval(PotentialJet2::variable_x(x), PotentialJet2::variable_y(y));
            },
        },
        fam);
}

}  // namespace

PotentialSpec PotentialSpec::free() { return PotentialSpec(family::Free{}); }
PotentialSpec PotentialSpec::oscillator(double omega) { return PotentialSpec(family::Oscillator{omega}); }
PotentialSpec PotentialSpec::sw(double omega, double alpha, double beta) {
    return PotentialSpec(family::SW{omega, alpha, beta});
}
PotentialSpec PotentialSpec::ttw(double omega, double alpha, double beta, double k, double gamma) {
    if (k == 0.0 || !std::isfinite(k)) fail(ErrorKind::DomainError, "TTW requires a finite k != 0");
    return PotentialSpec(family::TTW{omega, alpha, beta, k, gamma});
}
PotentialSpec PotentialSpec::kepler(double mu) { return PotentialSpec(family::Kepler{mu}); }
PotentialSpec PotentialSpec::custom(family::Custom c) {
    if (!c.eval) fail(ErrorKind::DomainError, "custom potential requires an evaluator");
    return PotentialSpec(std::move(c));
}

PotentialSpec PotentialSpec::placed(const SE2Element& g) const {
    PotentialSpec out = *this;
    out.placement_ = compose(g, placement_);
    return out;
}

std::string PotentialSpec::family_name() const {
    return std::visit(overloaded{
                          [](const family::Free&) { return std::string("free"); },
                          [](const family::Oscillator&) { return std::string("oscillator"); },
                          [](const family::SW&) { return std::string("sw"); },
                          [](const family::TTW&) { return std::string("ttw"); },
                          [](const family::Kepler&) { return std::string("kepler"); },
                          [](const family::Custom&) { return std::string("custom"); },
                      },
                      family_);
}

std::string PotentialSpec::descriptor() const {
    std::string d = std::visit(
        overloaded{
            [](const family::Free&) { return std::string("free()"); },
            [](const family::Oscillator& f) { return "oscillator(omega=" + fmt_num(f.omega) + ")"; },
            [](const family::SW& f) {
                return "sw(omega=" + fmt_num(f.omega) + ",alpha=" + fmt_num(f.alpha) + ",beta=" + fmt_num(f.beta) +
                       ")";
            },
            [](const family::TTW& f) {
                return "ttw(omega=" + fmt_num(f.omega) + ",alpha=" + fmt_num(f.alpha) + ",beta=" +
                       fmt_num(f.beta) + ",k=" + fmt_num(f.k) + ",gamma=" + fmt_num(f.gamma) + ")";
            },
            [](const family::Kepler& f) { return "kepler(mu=" + fmt_num(f.mu) + ")"; },
            [](const family::Custom& f) { return "custom(" + f.name + ")"; },
        },
        family_);
    if (!placement_.is_identity()) {
        d += "@(" + fmt_num(placement_.p1()) + "," + fmt_num(placement_.p2()) + "," + fmt_num(placement_.p3()) + ")";
    }
    return d;
}

bool PotentialSpec::has_rational_jet() const {
    if (!placement_.is_identity()) return false;
    return std::visit(overloaded{
                          [](const family::TTW&) { return false; },
                          [](const family::Custom& f) { return static_cast<bool>(f.eval_exact); },
                          [](const auto&) { return true; },
                      },
                      family_);
}

bool PotentialSpec::needs_rational_radius() const {
    return std::holds_alternative<family::Kepler>(family_);
}

PotentialJet2 eval_potential(const PotentialSpec& spec, const Point2& pt) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) fail(ErrorKind::DomainError, "point must be finite");
    const SE2Element& g = spec.placement();
    PotentialJet2 j;
    if (g.is_identity()) {
        j = eval_unplaced(spec.family(), pt);
    } else {
        j = eval_unplaced(spec.family(), apply_point(inverse(g), pt));
        rotate_gradient_hessian(g.p3(), j.x, j.y, j.xx, j.xy, j.yy);
    }
    if (!finite_jet(j)) singular("non-finite potential jet", pt);
    return j;
}

ExactJet2 eval_potential_exact(const PotentialSpec& spec, const ExactPoint2& pt) {
    if (!spec.has_rational_jet())
        fail(ErrorKind::BackendUnavailable, "exact backend unavailable for " + spec.descriptor());
    const mpq_class& x = pt.x;
    const mpq_class& y = pt.y;
    return std::visit(
        overloaded{
            [](const family::Free&) { return ExactJet2{}; },
            [&](const family::Oscillator& f) {
                return sw_jet(mpq_class(f.omega), mpq_class(0), mpq_class(0), x, y);
            },
            [&](const family::SW& f) {
                if ((f.alpha != 0.0 && x == 0) || (f.beta != 0.0 && y == 0))
                    fail(ErrorKind::SingularPoint, "SW singular set hit by exact sample");
                return sw_jet(mpq_class(f.omega), mpq_class(f.alpha), mpq_class(f.beta), x, y);
            },
            [&](const family::Kepler& f) {
                if (!pt.r) fail(ErrorKind::BackendUnavailable, "Kepler exact jets need a rational radius");
                if (*pt.r == 0) fail(ErrorKind::SingularPoint, "Kepler requires r != 0");
                return kepler_jet(mpq_class(f.mu), x, y, *pt.r);
            },
            [&](const family::Custom& f) {
                return f.eval_exact(ExactJet2::variable_x(x), ExactJet2::variable_y(y));
            },
            [](const family::TTW&) -> ExactJet2 {
                fail(ErrorKind::BackendUnavailable, "TTW jets are not rational");
            },
        },
        spec.family());
}

bool respects_margin(const PotentialSpec& spec, const Point2& pt_in, double margin) {
    const SE2Element& g = spec.placement();
    const Point2 pt = g.is_identity() ? pt_in : apply_point(inverse(g), pt_in);
    return std::visit(overloaded{
                          [&](const family::SW& f) {
                              return (f.alpha == 0.0 || std::abs(pt.x) >= margin) &&
                                     (f.beta == 0.0 || std::abs(pt.y) >= margin);
                          },
                          [&](const family::TTW& f) {
                              const double th = std::atan2(pt.y, pt.x);
                              const double half = 0.5 * margin;
                              return std::hypot(pt.x, pt.y) >= margin &&
                                     (f.alpha == 0.0 || std::abs(std::cos(f.k * th)) >= half) &&
                                     (f.beta == 0.0 || std::abs(std::sin(f.k * th)) >= half);
                          },
                          [&](const family::Kepler&) { return std::hypot(pt.x, pt.y) >= margin; },
                          [](const auto&) { return true; },
                      },
                      spec.family());
}

}  // namespace ktinv
