#include <random>

#include "doctest.h"
#include "ktinv/kt_core.hpp"
#include "ktinv/potential.hpp"
#include "ktinv/se2.hpp"
#include "oracles.hpp"

using namespace ktinv;
using doctest::Approx;

TEST_CASE("components of standard tensors") {
    const SymMatrix2 m = kt_components_at(metric_kt(), {0.3, -1.7});
    CHECK(m.k11 == 1.0);
    CHECK(m.k12 == 0.0);
    CHECK(m.k22 == 1.0);

    const SymMatrix2 e = kt_components_at(eh_canonical_kt(4.0), {1.0, 2.0});
    CHECK(e.k11 == 8.0);
    CHECK(e.k12 == -2.0);
    CHECK(e.k22 == 1.0);

    const SymMatrix2 r = kt_components_at({0, 0, 0, 0, 0, 1}, {1.0, 1.0});
    CHECK(r.k11 == 1.0);
    CHECK(r.k12 == -1.0);
    CHECK(r.k22 == 1.0);

    CHECK_THROWS_AS(kt_components_at(KtParams{}, {1, 1}), KtError);
}

TEST_CASE("polar components") {
    const SymMatrix2 m = kt_to_polar_components(metric_kt(), PolarPoint2(2.0, 0.7));
    CHECK(m.k11 == Approx(1.0));
    CHECK(m.k12 == Approx(0.0));
    CHECK(m.k22 == Approx(0.25));

    for (double th : {0.0, 0.4, 2.5, -1.2}) {
        const SymMatrix2 r = kt_to_polar_components({0, 0, 0, 0, 0, 1}, PolarPoint2(1.3, th));
        CHECK(r.k11 == Approx(0.0).epsilon(1e-12));
        CHECK(r.k12 == Approx(0.0).epsilon(1e-12));
        CHECK(r.k22 == Approx(1.0));

        const double rad = 1.7;
        const SymMatrix2 c = kt_to_polar_components(cartesian_rotated_kt(0.0), PolarPoint2(rad, th));
        CHECK(c.k11 == Approx(std::cos(th) * std::cos(th)));
        CHECK(c.k12 == Approx(-std::sin(th) * std::cos(th) / rad));
        CHECK(c.k22 == Approx(std::sin(th) * std::sin(th) / (rad * rad)));
    }
    CHECK_THROWS_AS(PolarPoint2(0.0, 1.0), KtError);
    CHECK_THROWS_AS(PolarPoint2(-1.0, 1.0), KtError);
}

TEST_CASE("polar components match the Jacobian pushforward") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(0.5, 3.0), ut(-3.1, 3.1);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const KtParams b = oracle::random_params(rng);
        const PolarPoint2 pp(ur(rng), ut(rng));
        const Point2 p = pp.to_cartesian();
        const SymMatrix2 k = kt_components_at(b, p);
        const double r2 = p.x * p.x + p.y * p.y, r = std::sqrt(r2);
        // rows: gradients of r and theta
        const double j[2][2] = {{p.x / r, p.y / r}, {-p.y / r2, p.x / r2}};
        const double kk[2][2] = {{k.k11, k.k12}, {k.k12, k.k22}};
        double out[2][2] = {};
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c)
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v) out[a][c] += j[a][u] * kk[u][v] * j[c][v];
        const SymMatrix2 got = kt_to_polar_components(b, pp);
        worst = std::max({worst, std::abs(got.k11 - out[0][0]), std::abs(got.k12 - out[0][1]),
                          std::abs(got.k22 - out[1][1])});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("tensor constructors") {
    CHECK(metric_kt() == KtParams(1, 0 + 1, 0, 0, 0, 0));
    CHECK(polar_kt_at(0, 0) == KtParams(0, 0, 0, 0, 0, 1));
    CHECK(polar_kt_at(1, 0) == KtParams(0, 1, 0, 0, -1, 1));
    CHECK(cartesian_rotated_kt(0.0) == KtParams(1, 0, 0, 0, 0, 0));
    CHECK(eh_canonical_kt(4.0) == KtParams(4, 0, 0, 0, 0, 1));
    CHECK_THROWS_AS(eh_canonical_kt(0.0), KtError);
    CHECK_THROWS_AS(eh_canonical_kt(-1.0), KtError);

    // polar_kt_at(a, b) reproduces (y-b)^2, -(x-a)(y-b), (x-a)^2
    const double a = 0.7, b = -1.3;
    const Point2 p{1.9, 0.4};
    const SymMatrix2 k = kt_components_at(polar_kt_at(a, b), p);
    CHECK(k.k11 == Approx((p.y - b) * (p.y - b)));
    CHECK(k.k12 == Approx(-(p.x - a) * (p.y - b)));
    CHECK(k.k22 == Approx((p.x - a) * (p.x - a)));

    const double phi = 0.6;
    const KtParams c = cartesian_rotated_kt(phi);
    CHECK(c.b1() == Approx(std::cos(phi) * std::cos(phi)));
    CHECK(c.b2() == Approx(std::sin(phi) * std::sin(phi)));
    CHECK(c.b3() == Approx(std::sin(phi) * std::cos(phi)));
}

TEST_CASE("lincomb") {
    const KtParams k{1, 2, 3, 4, 5, 6}, kp{-1, 0, 2, 0, 1, 1};
    const std::vector<KtParams> ts{k, kp};
    CHECK(lincomb(std::vector<double>{1.0, 0.0}, ts) == k);
    CHECK(lincomb(std::vector<double>{1.0, 1.0},
                  std::vector<KtParams>{{1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1}}) == KtParams(1, 0, 0, 0, 0, 1));
    const KtParams z = lincomb(std::vector<double>{-1.0, 1.0}, std::vector<KtParams>{k, k});
    CHECK(z.is_zero());
    CHECK_THROWS_AS(require_tensor(z, "test"), KtError);
    CHECK_THROWS_AS(lincomb(std::vector<double>{1.0}, ts), KtError);
    CHECK_THROWS_AS(lincomb(std::vector<double>{}, std::vector<KtParams>{}), KtError);
}

TEST_CASE("components are linear in the parameters") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 100; ++i) {
        const KtParams a = oracle::random_params(rng), b = oracle::random_params(rng);
        const double s = u(rng), t = u(rng);
        const Point2 p{u(rng), u(rng)};
        const SymMatrix2 lhs = kt_components_at(lincomb(std::vector<double>{s, t}, std::vector<KtParams>{a, b}), p);
        const SymMatrix2 ka = kt_components_at(a, p), kb = kt_components_at(b, p);
        CHECK(lhs.k11 == Approx(s * ka.k11 + t * kb.k11).epsilon(1e-13));
        CHECK(lhs.k12 == Approx(s * ka.k12 + t * kb.k12).epsilon(1e-13));
        CHECK(lhs.k22 == Approx(s * ka.k22 + t * kb.k22).epsilon(1e-13));
    }
}

TEST_CASE("SE2 element normalizes its angle") {
    const SE2Element g(0, 0, 3 * std::numbers::pi);
    CHECK(g.p3() == Approx(std::numbers::pi));
    const SE2Element h(0, 0, -std::numbers::pi);
    CHECK(h.p3() == Approx(std::numbers::pi));
    CHECK(SE2Element(0, 0, 7.0).p3() == Approx(7.0 - 2 * std::numbers::pi));
}

TEST_CASE("potential jets") {
    const PotentialJet2 f = eval_potential(PotentialSpec::free(), {3, -2});
    CHECK(f.v == 0.0);
    CHECK(f.x == 0.0);
    CHECK(f.yy == 0.0);

    const PotentialJet2 s = eval_potential(PotentialSpec::sw(1, 1, 1), {1, 2});
    CHECK(s.v == Approx(6.25));
    CHECK(s.x == Approx(0.0));
    CHECK(s.xx == Approx(8.0));
    CHECK(s.yy == Approx(2.375));
    CHECK(s.xy == 0.0);

    CHECK_THROWS_AS(eval_potential(PotentialSpec::sw(1, 1, 1), {0, 2}), KtError);
    CHECK_THROWS_AS(eval_potential(PotentialSpec::kepler(1), {0, 0}), KtError);
    CHECK_THROWS_AS(PotentialSpec::ttw(1, 1, 1, 0.0), KtError);
    try {
        eval_potential(PotentialSpec::sw(1, 1, 1), {1, 0});
        FAIL("expected SingularPoint");
    } catch (const KtError& e) {
        CHECK(e.kind() == ErrorKind::SingularPoint);
        CHECK(std::string(e.what()).find("y") != std::string::npos);
    }
}

TEST_CASE("TTW with k = 1 equals SW") {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Point2 p = oracle::random_point(rng);
        const PotentialJet2 a = eval_potential(PotentialSpec::ttw(1.5, 0.7, 2.0, 1.0), p);
        const PotentialJet2 b = eval_potential(PotentialSpec::sw(1.5, 0.7, 2.0), p);
        for (double d : {a.v - b.v, a.x - b.x, a.y - b.y, a.xx - b.xx, a.xy - b.xy, a.yy - b.yy})
            worst = std::max(worst, std::abs(d) / std::max(1.0, std::abs(b.v)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("TTW jets match finite differences at non-integer k") {
    std::mt19937_64 rng(9);
    const PotentialSpec spec = PotentialSpec::ttw(1.0, 0.5, 0.8, std::sqrt(2.0), 0.3);
    const double h = 1e-5;
    int checked = 0;
    for (int i = 0; i < 200 && checked < 40; ++i) {
        const Point2 p = oracle::random_point(rng);
        if (!respects_margin(spec, p, 0.3)) continue;
        ++checked;
        const auto j = eval_potential(spec, p);
        const auto px = eval_potential(spec, {p.x + h, p.y}), mx = eval_potential(spec, {p.x - h, p.y});
        const auto py = eval_potential(spec, {p.x, p.y + h}), my = eval_potential(spec, {p.x, p.y - h});
        CHECK(j.x == Approx((px.v - mx.v) / (2 * h)).epsilon(1e-6));
        CHECK(j.y == Approx((py.v - my.v) / (2 * h)).epsilon(1e-6));
        CHECK(j.xx == Approx((px.x - mx.x) / (2 * h)).epsilon(1e-6));
        CHECK(j.xy == Approx((py.x - my.x) / (2 * h)).epsilon(1e-6));
        CHECK(j.yy == Approx((py.y - my.y) / (2 * h)).epsilon(1e-6));
    }
    CHECK(checked >= 20);
}

TEST_CASE("custom potential second derivatives match finite differences") {
    family::Custom c;
    c.name = "henon";
    c.eval = [](const PotentialJet2& x, const PotentialJet2& y) {
        return 0.5 * (x * x + y * y) + x * x * y - y * y * y / 3.0 + sin(x * y);
    };
    const PotentialSpec spec = PotentialSpec::custom(c);
    std::mt19937_64 rng(21);
    const double h = 1e-4;
    for (int i = 0; i < 50; ++i) {
        const Point2 p = oracle::random_point(rng);
        const auto j = eval_potential(spec, p);
        const auto px = eval_potential(spec, {p.x + h, p.y}), mx = eval_potential(spec, {p.x - h, p.y});
        const auto py = eval_potential(spec, {p.x, p.y + h}), my = eval_potential(spec, {p.x, p.y - h});
        CHECK(j.xx == Approx((px.x - mx.x) / (2 * h)).epsilon(1e-6));
        CHECK(j.xy == Approx((py.x - my.x) / (2 * h)).epsilon(1e-6));
        CHECK(j.xy == Approx((px.y - mx.y) / (2 * h)).epsilon(1e-6));
        CHECK(j.yy == Approx((py.y - my.y) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("placed potentials evaluate V(g^-1 x)") {
    const SE2Element g(0.4, -0.3, 0.9);
    const PotentialSpec base = PotentialSpec::sw(1, 2, 3);
    const PotentialSpec moved = base.placed(g);
    std::mt19937_64 rng(2);
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
        const Point2 q = oracle::random_point(rng, 0.3);
        const Point2 x = apply_point(g, q);
        const auto j = eval_potential(moved, x);
        CHECK(j.v == Approx(eval_potential(base, q).v));
        const auto px = eval_potential(moved, {x.x + h, x.y}), mx = eval_potential(moved, {x.x - h, x.y});
        CHECK(j.x == Approx((px.v - mx.v) / (2 * h)).epsilon(1e-6));
        CHECK(j.xx == Approx((px.x - mx.x) / (2 * h)).epsilon(1e-6));
    }
}
