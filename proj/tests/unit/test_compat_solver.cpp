#include <random>

#include "doctest.h"
#include "ktinv/bd.hpp"
#include "ktinv/exact_linalg.hpp"
#include "ktinv/first_integral.hpp"
#include "ktinv/nullspace.hpp"
#include "ktinv/parallel.hpp"
#include "ktinv/se2.hpp"
#include "oracles.hpp"

using namespace ktinv;
using doctest::Approx;

namespace {

// Rank over Q by plain Gaussian elimination on mpq_class.
int mpq_rank(std::vector<std::vector<mpq_class>> m) {
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    int rank = 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
        std::size_t p = rank;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == static_cast<std::size_t>(rank) || m[r][c] == 0) continue;
            const mpq_class f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Largest principal angle (as sin) between two spans given by orthonormal-ish
// bases in R^6.
double subspace_distance(const std::vector<KtParams>& a, const std::vector<KtParams>& b) {
    auto mat = [](const std::vector<KtParams>& v) {
        Eigen::MatrixXd m(6, static_cast<Eigen::Index>(v.size()));
        for (std::size_t j = 0; j < v.size(); ++j)
            for (int i = 0; i < 6; ++i) m(i, static_cast<Eigen::Index>(j)) = v[j][i];
        return Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ() *
                               Eigen::MatrixXd::Identity(6, static_cast<Eigen::Index>(v.size())));
    };
    const Eigen::MatrixXd qa = mat(a), qb = mat(b);
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(qa.transpose() * qb).singularValues();
    const double c = s.minCoeff();
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

}  // namespace

TEST_CASE("residual examples") {
    std::mt19937_64 rng(51);
    const PotentialSpec sw = PotentialSpec::sw(1, 1, 1);
    for (int i = 0; i < 20; ++i) {
        const Point2 p = oracle::random_point(rng);
        CHECK(bd_residual(metric_kt(), sw, p) == Approx(0).scale(1.0));
        CHECK(bd_residual(metric_kt(), PotentialSpec::ttw(1, 2, 3, 1.7), p) == Approx(0).scale(1.0));
        CHECK(bd_residual({0, 0, 0, 0, 0, 1}, sw, p) == Approx(0).scale(1.0));
    }
    CHECK(bd_residual({0, 0, 0, 1, 0, 0}, sw, {1, 2}) == Approx(-5.625));
    CHECK_THROWS_AS(bd_residual(KtParams{}, sw, {1, 2}), KtError);
    CHECK_THROWS_AS(bd_residual(metric_kt(), sw, {0, 2}), KtError);
}

TEST_CASE("residual agrees with the closed form and with finite differences") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst_closed = 0.0, worst_fd = 0.0;
    for (int i = 0; i < 200; ++i) {
        const KtParams k = oracle::random_params(rng);
        const PotentialSpec sw = PotentialSpec::sw(u(rng), u(rng), u(rng));
        const Point2 p = oracle::random_point(rng, 0.3);
        const double r = bd_residual(k, sw, p);
        const double cf = oracle::closed_form_residual(k, eval_potential(sw, p), p);
        worst_closed = std::max(worst_closed, std::abs(r - cf) / std::max(1.0, std::abs(cf)));

        // Vxy != 0: compare against differentiating the one-form numerically
        const PotentialSpec ttw = PotentialSpec::ttw(u(rng), u(rng), u(rng), 1.3, u(rng));
        if (!respects_margin(ttw, p, 0.3)) continue;
        const double fd = oracle::fd_residual(k, ttw, p);
        worst_fd = std::max(worst_fd, std::abs(bd_residual(k, ttw, p) - fd) / std::max(1.0, std::abs(fd)));
    }
    CHECK(worst_closed < 1e-12);
    CHECK(worst_fd < 1e-5);
}

TEST_CASE("closed-form residual of the SW family against a polar tensor") {
    // R = 6 w (b x - a y) + 6 a alpha (y - b) / x^4 - 6 b beta (x - a) / y^4
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const double w = u(rng), al = u(rng), be = u(rng), a = u(rng), b = u(rng);
        const Point2 p = oracle::random_point(rng, 0.3);
        const double want = 6 * w * (b * p.x - a * p.y) + 6 * a * al * (p.y - b) / std::pow(p.x, 4) -
                            6 * b * be * (p.x - a) / std::pow(p.y, 4);
        CHECK(bd_residual(polar_kt_at(a, b), PotentialSpec::sw(w, al, be), p) ==
              Approx(want).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("rows") {
    const auto z = bd_row(PotentialSpec::free(), {0.3, 1.1});
    for (double v : z) CHECK(v == 0.0);
    const auto r = bd_row(PotentialSpec::sw(1, 1, 1), {1, 2});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);

    std::mt19937_64 rng(57);
    const PotentialSpec spec = PotentialSpec::ttw(1, 0.5, 2, 0.7);
    for (int i = 0; i < 100; ++i) {
        const KtParams k = oracle::random_params(rng);
        const Point2 p = oracle::random_point(rng);
        if (!respects_margin(spec, p, 0.1)) continue;
        const auto row = bd_row(spec, p);
        double dot = 0.0;
        for (int j = 0; j < 6; ++j) dot += row[j] * k[j];
        CHECK(dot == Approx(bd_residual(k, spec, p)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("sampling") {
    CHECK(halton(1, 2) == 0.5);
    CHECK(halton(3, 2) == 0.75);
    CHECK(halton(1, 3) == Approx(1.0 / 3));
    const PotentialSpec sw = PotentialSpec::sw(1, 2, 3);
    const SampleSet s = make_samples(sw, {});
    CHECK(s.points.size() == 240);
    for (const auto& p : s.points) {
        const double r = std::hypot(p.x, p.y);
        CHECK(r >= 0.5);
        CHECK(r <= 2.5);
        CHECK(std::abs(p.x) >= 0.1);
        CHECK(std::abs(p.y) >= 0.1);
    }
    SampleConfig bad;
    bad.count = 11;
    CHECK_THROWS_AS(make_samples(sw, bad), KtError);
    bad = {};
    bad.margin = 0.0;
    CHECK_THROWS_AS(make_samples(sw, bad), KtError);
    bad = {};
    bad.margin = 3.0;
    try {
        make_samples(sw, bad);
        FAIL("expected SamplingExhausted");
    } catch (const KtError& e) {
        CHECK(e.kind() == ErrorKind::SamplingExhausted);
    }
}

TEST_CASE("assembly") {
    const LinearSystem f = assemble_system(PotentialSpec::free(), make_samples(PotentialSpec::free(), {}));
    CHECK(f.rows.isZero());
    const PotentialSpec sw = PotentialSpec::sw(1, 2, 3);
    const LinearSystem a = assemble_system(sw, make_samples(sw, {}));
    const LinearSystem b = assemble_system(sw, make_samples(sw, {}));
    CHECK(a.rows.rows() == 240);
    CHECK(a.rows.cols() == 6);
    CHECK(a.rows == b.rows);
    CHECK(a.row_scales == b.row_scales);
    CHECK(a.column_labels.front() == "b1");
    for (double s : a.row_scales) CHECK(s > 0.0);
    CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(a.rows).rank() == 3);
}

TEST_CASE("assembly does not depend on the worker count") {
    const PotentialSpec spec = PotentialSpec::ttw(1, 1, 1, std::sqrt(2.0));
    setenv("KT_INVARIANTS_THREADS", "1", 1);
    const LinearSystem one = assemble_system(spec, make_samples(spec, {}));
    setenv("KT_INVARIANTS_THREADS", "4", 1);
    const LinearSystem four = assemble_system(spec, make_samples(spec, {}));
    unsetenv("KT_INVARIANTS_THREADS");
    CHECK(one.rows == four.rows);
}

TEST_CASE("null-space dimensions") {
    struct Row {
        PotentialSpec spec;
        int dim;
    };
    const std::vector<Row> table{
        {PotentialSpec::free(), 6},
        {PotentialSpec::oscillator(1), 4},
        {PotentialSpec::sw(0, 1, 0), 4},
        {PotentialSpec::kepler(1), 4},
        {PotentialSpec::sw(1, 2, 3), 3},
        {PotentialSpec::sw(1, 1, 0), 3},
        {PotentialSpec::ttw(1, 1, 1, std::sqrt(2.0)), 2},
    };
    for (const auto& r : table) {
        CAPTURE(r.spec.descriptor());
        const NullspaceResult n = compatible_kts(r.spec);
        CHECK(n.dim == r.dim);
        CHECK(static_cast<int>(n.basis.size()) == r.dim);
        CHECK(n.validation_residual <= n.tol_used);
        if (r.spec.has_rational_jet()) {
            const NullspaceResult e = compatible_kts(r.spec, {}, kDefaultRankTol, Backend::ExactRational);
            CHECK(e.dim == r.dim);
            REQUIRE(e.certificate.has_value());
            CHECK(e.certificate->rank == 6 - r.dim);
            CHECK(subspace_distance(n.basis, e.basis) < 1e-10);
        }
    }
}

TEST_CASE("null-space bases") {
    const NullspaceResult osc = compatible_kts(PotentialSpec::oscillator(1));
    for (const auto& b : osc.basis) {
        CHECK(b.b4() == Approx(0).scale(1.0));
        CHECK(b.b5() == Approx(0).scale(1.0));
        CHECK(b.norm() == Approx(1.0));
    }
    const NullspaceResult sw = compatible_kts(PotentialSpec::sw(1, 2, 3));
    for (const auto& b : sw.basis) {
        CHECK(std::abs(b.b3()) + std::abs(b.b4()) + std::abs(b.b5()) < 1e-10);
        const auto& v = b.values();
        const auto first = std::find_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
        CHECK(*first > 0.0);
    }
    CHECK(sw.gap.has_value());
    CHECK(*sw.gap > 1e6);
    CHECK(sw.singular_values.size() == 6);
}

TEST_CASE("SW constraint sets per parameter pattern") {
    // b3, b4, b5 zero-pattern implied by the closed-form residual
    struct Case {
        double w, a, b;
        int dim;
    };
    for (const Case& c : std::vector<Case>{{1, 1, 1, 3}, {1, 0, 0, 4}, {0, 1, 0, 4}, {0, 0, 1, 4}, {0, 1, 1, 3},
                                            {1, 1, 0, 3}, {1, 0, 1, 3}, {0, 0, 0, 6}}) {
        CAPTURE(c.w);
        CAPTURE(c.a);
        CAPTURE(c.b);
        CHECK(compatible_kts(PotentialSpec::sw(c.w, c.a, c.b)).dim == c.dim);
    }
}

TEST_CASE("backends agree on random rational SW instances") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
    for (int i = 0; i < 20; ++i) {
        const double w = static_cast<double>(num(rng)) / den(rng);
        const double a = static_cast<double>(num(rng)) / den(rng);
        const double b = static_cast<double>(num(rng)) / den(rng);
        const PotentialSpec spec = PotentialSpec::sw(w, a, b);
        CAPTURE(spec.descriptor());
        CHECK(compatible_kts(spec).dim ==
              compatible_kts(spec, {}, kDefaultRankTol, Backend::ExactRational).dim);
    }
}

TEST_CASE("exact backend availability") {
    try {
        compatible_kts(PotentialSpec::ttw(1, 1, 1, std::sqrt(2.0)), {}, kDefaultRankTol, Backend::ExactRational);
        FAIL("expected BackendUnavailable");
    } catch (const KtError& e) {
        CHECK(e.kind() == ErrorKind::BackendUnavailable);
    }
    for (const auto& p : exact_lattice(PotentialSpec::kepler(1), {})) {
        REQUIRE(p.r.has_value());
        CHECK(*p.r * *p.r == p.x * p.x + p.y * p.y);
    }
    for (const auto& p : exact_lattice(PotentialSpec::sw(1, 2, 3), {})) {
        const double r = std::hypot(p.x.get_d(), p.y.get_d());
        CHECK(r >= 0.5);
        CHECK(r <= 2.5);
    }
}

TEST_CASE("fraction-free elimination matches rational Gaussian elimination") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> u(-5, 5), pick(0, 3);
    for (int t = 0; t < 200; ++t) {
        const int rows = 3 + pick(rng), cols = 6;
        MpzMatrix m(rows, std::vector<mpz_class>(cols));
        std::vector<std::vector<mpq_class>> q(rows, std::vector<mpq_class>(cols));
        // low-rank structure: rows are combinations of a few generators
        const int gens = 1 + pick(rng);
        std::vector<std::vector<int>> g(gens, std::vector<int>(cols));
        for (auto& row : g)
            for (auto& x : row) x = u(rng);
        for (int r = 0; r < rows; ++r) {
            std::vector<int> c(gens);
            for (auto& x : c) x = u(rng);
            for (int j = 0; j < cols; ++j) {
                int s = 0;
                for (int k = 0; k < gens; ++k) s += c[k] * g[k][j];
                m[r][j] = s;
                q[r][j] = s;
            }
        }
        const BareissResult br = bareiss_echelon(m, cols);
        CHECK(br.rank == mpq_rank(q));
        for (const auto& v : exact_nullspace(br, cols)) {
            for (int r = 0; r < rows; ++r) {
                mpq_class s = 0;
                for (int j = 0; j < cols; ++j) s += q[r][j] * v[j];
                CHECK(s == 0);
            }
        }
    }
    const auto pr = primitive_row({mpq_class(1, 2), mpq_class(-3, 4), mpq_class(0)});
    CHECK(pr[0] == 2);
    CHECK(pr[1] == -3);
    CHECK(pr[2] == 0);
}

TEST_CASE("restricted solve") {
    std::vector<KtParams> reduced;
    for (int i = 0; i < 5; ++i) {
        std::array<double, 6> e{};
        e[i] = 1.0;
        reduced.emplace_back(e);
    }
    const NullspaceResult t = restricted_compatible(PotentialSpec::ttw(1, 1, 1, std::sqrt(2.0)), reduced);
    CHECK(t.dim == 1);
    for (const auto& b : t.basis) {
        CHECK(b.b4() == Approx(0).scale(1.0));
        CHECK(b.b5() == Approx(0).scale(1.0));
        CHECK(b.b1() == Approx(b.b2()));
    }
    CHECK(t.coordinates.size() == 1);
    CHECK(t.coordinates[0].size() == 5);

    CHECK(restricted_compatible(PotentialSpec::sw(1, 2, 3), {metric_kt(), polar_kt_at(0, 0)}).dim == 2);
    CHECK(restricted_compatible(PotentialSpec::ttw(1, 2, 3, 0.6), {metric_kt()}).dim == 1);
    CHECK(restricted_compatible(PotentialSpec::kepler(2), {metric_kt()}).dim == 1);
    CHECK_THROWS_AS(restricted_compatible(PotentialSpec::sw(1, 2, 3), {metric_kt(), 2.0 * metric_kt()}), KtError);
}

TEST_CASE("dual solve for SW-family parameters") {
    const FamilyNullspaceResult full = compatible_potential_params({polar_kt_at(0, 0)});
    CHECK(full.dim == 3);
    const FamilyNullspaceResult iso = compatible_potential_params({polar_kt_at(0, 2), eh_canonical_kt(4)});
    REQUIRE(iso.dim == 1);
    CHECK(std::abs(iso.basis[0][0]) < 1e-10);
    CHECK(std::abs(iso.basis[0][1]) == Approx(1.0));
    CHECK(std::abs(iso.basis[0][2]) < 1e-10);
    const FamilyNullspaceResult col = compatible_potential_params({polar_kt_at(2, 0), eh_canonical_kt(4)});
    REQUIRE(col.dim == 1);
    CHECK(std::abs(col.basis[0][2]) == Approx(1.0));
    CHECK(compatible_potential_params({polar_kt_at(1, 1), eh_canonical_kt(4)}).dim == 0);
    CHECK(compatible_potential_params({metric_kt()}).dim == 3);
    CHECK(compatible_potential_params({cartesian_rotated_kt(0.0)}).dim == 3);
    CHECK(compatible_potential_params({cartesian_rotated_kt(0.3)}).dim == 1);
}

TEST_CASE("null space is equivariant") {
    std::mt19937_64 rng(67);
    for (const PotentialSpec& base :
         {PotentialSpec::sw(1, 2, 3), PotentialSpec::oscillator(1), PotentialSpec::kepler(1)}) {
        for (int i = 0; i < 5; ++i) {
            std::uniform_real_distribution<double> t(-0.3, 0.3), a(-3.1, 3.1);
            const SE2Element g(t(rng), t(rng), a(rng));
            const NullspaceResult n0 = compatible_kts(base);
            const NullspaceResult n1 = compatible_kts(base.placed(g));
            REQUIRE(n0.dim == n1.dim);
            std::vector<KtParams> image;
            for (const auto& b : n0.basis) image.push_back(act_on_kt(g, b));
            CHECK(subspace_distance(image, n1.basis) < 1e-7);
        }
    }
}

TEST_CASE("sample-count stability") {
    for (const PotentialSpec& s : {PotentialSpec::free(), PotentialSpec::oscillator(2), PotentialSpec::sw(1, 2, 3),
                                   PotentialSpec::kepler(1), PotentialSpec::ttw(1, 1, 1, 1.0),
                                   PotentialSpec::ttw(1, 1, 1, 3.0)}) {
        SampleConfig twice;
        twice.count = 480;
        CHECK(compatible_kts(s).dim == compatible_kts(s, twice).dim);
    }
}

TEST_CASE("scalar part of the integral") {
    const PotentialSpec sw = PotentialSpec::sw(1, 1, 1);
    const Point2 b{1, 1}, t{1.5, 1.2};
    CHECK(integral_scalar_part(metric_kt(), sw, b, t) ==
          Approx(eval_potential(sw, t).v - eval_potential(sw, b).v).epsilon(1e-12));

    // gradient of the quadrature against finite differences and K dV
    const FirstIntegral rot({0, 0, 0, 0, 0, 1}, sw);
    std::mt19937_64 rng(71);
    const double h = 1e-5;
    for (int i = 0; i < 50; ++i) {
        const Point2 q = oracle::random_point(rng, 0.3);
        const Point2 g = rot.scalar_gradient(q);
        const double fx = (rot.scalar_part({q.x + h, q.y}) - rot.scalar_part({q.x - h, q.y})) / (2 * h);
        const double fy = (rot.scalar_part({q.x, q.y + h}) - rot.scalar_part({q.x, q.y - h})) / (2 * h);
        CHECK(g.x == Approx(fx).epsilon(1e-7).scale(1.0));
        CHECK(g.y == Approx(fy).epsilon(1e-7).scale(1.0));
        const auto v = eval_potential(sw, q);
        CHECK(g.x == Approx(q.y * q.y * v.x - q.x * q.y * v.y).epsilon(1e-9));
        CHECK(g.y == Approx(-q.x * q.y * v.x + q.x * q.x * v.y).epsilon(1e-9));
    }

    try {
        integral_scalar_part({0, 0, 0, 1, 0, 0}, sw, b, t);
        FAIL("expected NotCompatible");
    } catch (const KtError& e) {
        CHECK(e.kind() == ErrorKind::NotCompatible);
    }
    try {
        integral_scalar_part(metric_kt(), sw, {1, 1}, {-1, -1}, 1.5);
        FAIL("expected PathThroughSingularity");
    } catch (const KtError& e) {
        CHECK(e.kind() == ErrorKind::PathThroughSingularity);
    }
}

TEST_CASE("quadrature nodes") {
    const auto& gl = gauss_legendre_unit(16);
    CHECK(gl.size() == 16);
    double w = 0.0, m7 = 0.0;
    for (const auto& [x, wt] : gl) {
        w += wt;
        m7 += wt * std::pow(x, 7);
    }
    CHECK(w == Approx(1.0).epsilon(1e-14));
    CHECK(m7 == Approx(1.0 / 8).epsilon(1e-14));
}

TEST_CASE("Poisson brackets") {
    const PotentialSpec sw = PotentialSpec::sw(1, 1, 1);
    const FirstIntegral h = FirstIntegral::hamiltonian(sw);
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> up(-2, 2);
    for (int i = 0; i < 100; ++i) {
        const Point2 q = oracle::random_point(rng);
        const PhasePoint z{q.x, q.y, up(rng), up(rng)};
        CHECK(poisson_bracket(h, h, z) == 0.0);
        CHECK(std::abs(poisson_bracket({0, 0, 0, 0, 0, 1}, sw, z)) < 1e-10);
    }
    const FirstIntegral f1({1, 0, 0, 0, 0, 0}, sw), f2({0, 0, 0, 0, 0, 1}, sw);
    CHECK(std::abs(poisson_bracket(f1, f2, {1, 2, 0.3, -0.7})) > 1e-3);
    // an incompatible tensor gives a nonzero bracket with H
    CHECK(std::abs(poisson_bracket({0, 0, 0, 1, 0, 0}, sw, {1, 2, 0.3, -0.7})) > 1e-3);
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                        if (i == 57) fail(ErrorKind::DomainError, "boom");
                    }),
                    KtError);
    CHECK(worker_count() >= 1);
}
