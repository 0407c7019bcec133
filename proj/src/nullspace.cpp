#include "ktinv/nullspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ktinv/bd.hpp"
#include "ktinv/exact_linalg.hpp"
#include "ktinv/parallel.hpp"

namespace ktinv {

namespace {

struct DenseNull {
    std::vector<double> sv;
    int rank = 0;
    std::optional<double> gap;
    std::vector<Eigen::VectorXd> basis;
};

std::vector<double> singular_values_of(const Eigen::MatrixXd& a) {
    std::vector<double> sv(a.cols(), 0.0);
    if (a.rows() == 0) return sv;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const Eigen::VectorXd s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) sv[i] = s[i];
    return sv;
}

// Rank counts singular values above tol * ref; ref defaults to sigma_max.
DenseNull dense_null(const Eigen::MatrixXd& a, double tol, double ref = 0.0) {
    if (!(tol > 0.0)) fail(ErrorKind::DomainError, "rank tolerance must be positive");
    const Eigen::Index n = a.cols();
    DenseNull out;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    out.sv.assign(n, 0.0);
    if (a.rows() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
        const Eigen::VectorXd s = svd.singularValues();
        for (Eigen::Index i = 0; i < s.size(); ++i) out.sv[i] = s[i];
        v = svd.matrixV();
    }
    const double scale = ref > 0.0 ? ref : (out.sv.empty() ? 0.0 : out.sv[0]);
    for (double s : out.sv)
        if (scale > 0.0 && s > tol * scale) ++out.rank;
    if (out.rank > 0 && out.rank < n && out.sv[out.rank] > 0.0) out.gap = out.sv[out.rank - 1] / out.sv[out.rank];
    if (out.rank < n) out.basis = canonical_basis(v.rightCols(n - out.rank));
    return out;
}

KtParams to_params(const Eigen::VectorXd& v) { return KtParams(v[0], v[1], v[2], v[3], v[4], v[5]); }

Eigen::MatrixXd scale_rows(Eigen::MatrixXd m, std::vector<double>* scales) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double s = m.row(i).cwiseAbs().maxCoeff();
        const double used = s > 0.0 ? s : 1.0;
        m.row(i) /= used;
        if (scales) scales->push_back(used);
    }
    return m;
}

// Scales rows of a derived system by a magnitude taken before the
// contraction, so rows that cancel to roundoff stay near zero.
Eigen::MatrixXd scale_rows_by(Eigen::MatrixXd m, const Eigen::MatrixXd& magnitude) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double s = magnitude.row(i).maxCoeff();
        if (s > 0.0) m.row(i) /= s;
    }
    return m;
}

// Relative residual max_v ||A v|| / ref for unit-normalized v; ref defaults
// to sigma_max(A).
double relative_residual(const Eigen::MatrixXd& a, const std::vector<Eigen::VectorXd>& vs, double ref = 0.0) {
    const auto sv = singular_values_of(a);
    const double smax = ref > 0.0 ? ref : (sv.empty() ? 0.0 : sv[0]);
    if (smax == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& v : vs) {
        const double nv = v.norm();
        if (nv == 0.0) continue;
        worst = std::max(worst, (a * v).norm() / (nv * smax));
    }
    return worst;
}

SampleSet validation_samples(const PotentialSpec& spec, const SampleConfig& cfg) {
    return make_samples(spec, cfg, 5, 7);
}

// mpq_class(n, d) does not reduce; GMP arithmetic expects canonical values.
mpq_class frac(long n, long d) {
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

std::uint64_t pick_stride(std::uint64_t n) {
    std::uint64_t s = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(0.6180339887 * static_cast<double>(n)));
    while (std::gcd(s, n) != 1) ++s;
    return s;
}

bool usable(const PotentialSpec& spec, const Point2& p, const SampleConfig& cfg) {
    const double r = std::hypot(p.x, p.y);
    if (r < cfg.r_min || r > cfg.r_max) return false;
    if (!respects_margin(spec, p, cfg.margin)) return false;
    try {
        eval_potential(spec, p);
    } catch (const KtError& e) {
        if (e.kind() == ErrorKind::SingularPoint) return false;
        throw;
    }
    return true;
}

}  // namespace

std::string to_string(Backend b) { return b == Backend::Numeric ? "numeric" : "exact"; }

std::vector<Eigen::VectorXd> canonical_basis(const Eigen::MatrixXd& b) {
    const Eigen::Index n = b.rows();
    Eigen::MatrixXd m = b.transpose();
    const Eigen::Index d = m.rows();
    const double big = d > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < n && r < d; ++c) {
        Eigen::Index p = r;
        for (Eigen::Index i = r + 1; i < d; ++i)
            if (std::abs(m(i, c)) > std::abs(m(p, c))) p = i;
        if (std::abs(m(p, c)) <= 1e-9 * big) continue;
        m.row(r).swap(m.row(p));
        m.row(r) /= m(r, c);
        for (Eigen::Index i = 0; i < d; ++i)
            if (i != r) m.row(i) -= m(i, c) * m.row(r);
        ++r;
    }

    std::vector<Eigen::VectorXd> out;
    for (Eigen::Index i = 0; i < r; ++i) {
        Eigen::VectorXd v = m.row(i).transpose();
        for (const auto& u : out) v -= u.dot(v) * u;
        const double nv = v.norm();
        if (nv == 0.0) continue;
        v /= nv;
        for (Eigen::Index k = 0; k < n; ++k)
            if (std::abs(v[k]) < 1e-14) v[k] = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (v[k] != 0.0) {
                if (v[k] < 0.0) v = -v;
                break;
            }
        }
        out.push_back(v / v.norm());
    }
    return out;
}

LinearSystem assemble_system(const PotentialSpec& spec, const SampleSet& samples) {
    const std::size_t m = samples.points.size();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m), 6);
    parallel_for(m, [&](std::size_t i) {
        const auto row = bd_row(spec, samples.points[i]);
        for (int j = 0; j < 6; ++j) a(static_cast<Eigen::Index>(i), j) = row[j];
    });
    LinearSystem sys;
    sys.rows = scale_rows(std::move(a), &sys.row_scales);
    sys.column_labels.assign(KtParams::slot_labels().begin(), KtParams::slot_labels().end());
    sys.potential_id = spec.descriptor();
    return sys;
}

NullspaceResult nullspace(const LinearSystem& sys, double tol) {
    if (sys.rows.cols() != 6) fail(ErrorKind::LengthMismatch, "system must have six columns");
    if (!sys.rows.allFinite()) fail(ErrorKind::DomainError, "system has non-finite entries");
    DenseNull dn = dense_null(sys.rows, tol);
    NullspaceResult res;
    res.dim = 6 - dn.rank;
    for (const auto& v : dn.basis) res.basis.push_back(to_params(v));
    res.singular_values = std::move(dn.sv);
    res.gap = dn.gap;
    res.tol_used = tol;
    res.backend = Backend::Numeric;
    res.samples = static_cast<int>(sys.rows.rows());
    return res;
}

double validation_residual(const PotentialSpec& spec, const std::vector<KtParams>& basis, const SampleConfig& cfg) {
    const LinearSystem val = assemble_system(spec, validation_samples(spec, cfg));
    std::vector<Eigen::VectorXd> vs;
    for (const auto& k : basis) vs.push_back(Eigen::Map<const Eigen::VectorXd>(k.values().data(), 6));
    return relative_residual(val.rows, vs);
}

std::vector<ExactPoint2> exact_lattice(const PotentialSpec& spec, const SampleConfig& cfg) {
    validate_config(cfg);
    std::vector<ExactPoint2> cand;
    if (spec.needs_rational_radius()) {
        // rational points on circles: rho ((1 - t^2), 2 t) / (1 + t^2)
        const int i_lo = std::max(0, static_cast<int>(std::ceil(7.0 * (cfg.r_min - 0.5))));
        const int i_hi = static_cast<int>(std::floor(7.0 * (cfg.r_max - 0.5)));
        for (int i = i_lo; i <= i_hi; ++i) {
            const mpq_class rho = frac(1, 2) + frac(i, 7);
            for (int j = -11; j <= 11; ++j) {
                const mpq_class t = frac(j, 11);
                const mpq_class den = 1 + t * t;
                const mpq_class x = rho * (1 - t * t) / den;
                const mpq_class y = rho * 2 * t / den;
                for (int sgn : {1, -1}) {
                    if (sgn < 0 && x == 0) continue;
                    const mpq_class xs = sgn * x;
                    if (usable(spec, {xs.get_d(), y.get_d()}, cfg)) cand.push_back({xs, y, rho});
                }
            }
        }
    } else {
        const int ix = static_cast<int>(std::ceil(7.0 * (cfg.r_max + 0.5)));
        const int jy = static_cast<int>(std::ceil(11.0 * (cfg.r_max + 0.5)));
        for (int i = -ix; i <= ix; ++i) {
            const mpq_class x = frac(1, 2) + frac(i, 7);
            for (int j = -jy; j <= jy; ++j) {
                const mpq_class y = frac(1, 2) + frac(j, 11);
                const Point2 p{x.get_d(), y.get_d()};
                if (usable(spec, p, cfg)) cand.push_back({x, y, std::nullopt});
            }
        }
    }
    const std::uint64_t n = cand.size();
    if (n < 12) fail(ErrorKind::SamplingExhausted, "rational lattice has fewer than 12 usable points");
    const std::uint64_t want = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(cfg.count));
    const std::uint64_t stride = pick_stride(n);
    std::vector<ExactPoint2> out;
    out.reserve(want);
    for (std::uint64_t t = 0; t < want; ++t) out.push_back(cand[(cfg.seed + t * stride) % n]);
    return out;
}

NullspaceResult compatible_kts(const PotentialSpec& spec, const SampleConfig& cfg, double tol, Backend backend) {
    validate_config(cfg);
    NullspaceResult res;
    if (backend == Backend::Numeric) {
        res = nullspace(assemble_system(spec, make_samples(spec, cfg)), tol);
    } else {
        if (!spec.has_rational_jet())
            fail(ErrorKind::BackendUnavailable, "no rational jet for " + spec.descriptor());
        const auto pts = exact_lattice(spec, cfg);
        MpzMatrix rows;
        rows.reserve(pts.size());
        for (const auto& p : pts) {
            const ExactJet2 j = eval_potential_exact(spec, p);
            const auto c = bd_coefficients(j, p.x, p.y);
            auto prim = primitive_row(MpqVector(c.begin(), c.end()));
            if (std::any_of(prim.begin(), prim.end(), [](const mpz_class& v) { return v != 0; }))
                rows.push_back(std::move(prim));
        }
        const BareissResult ech = bareiss_echelon(rows, 6);
        const auto ns = exact_nullspace(ech, 6);
        Eigen::MatrixXd b(6, static_cast<Eigen::Index>(ns.size()));
        for (std::size_t k = 0; k < ns.size(); ++k)
            for (int i = 0; i < 6; ++i) b(i, static_cast<Eigen::Index>(k)) = ns[k][i].get_d();
        res.dim = 6 - ech.rank;
        for (const auto& v : canonical_basis(b)) res.basis.push_back(to_params(v));
        res.certificate = RankCertificate{ech.rank, ech.pivot_columns, ech.last_pivot.get_str(),
                                          static_cast<int>(rows.size())};
        res.tol_used = tol;
        res.backend = Backend::ExactRational;
        res.samples = static_cast<int>(pts.size());
    }
    res.validation_residual = validation_residual(spec, res.basis, cfg);
    if (res.validation_residual > tol)
        fail(ErrorKind::ValidationFailed, "basis residual " + std::to_string(res.validation_residual) +
                                              " exceeds tolerance on the validation samples");
    return res;
}

NullspaceResult restricted_compatible(const PotentialSpec& spec, const std::vector<KtParams>& subspace,
                                      const SampleConfig& cfg, double tol) {
    if (subspace.empty()) fail(ErrorKind::LengthMismatch, "empty subspace");
    const auto m = static_cast<Eigen::Index>(subspace.size());
    Eigen::MatrixXd s(6, m);
    for (Eigen::Index k = 0; k < m; ++k)
        for (int i = 0; i < 6; ++i) s(i, k) = subspace[k][i];
    const auto ssv = singular_values_of(s);
    if (m > 6 || ssv.back() <= 1e-10 * ssv.front())
        fail(ErrorKind::DomainError, "subspace vectors are not linearly independent");

    validate_config(cfg);
    const LinearSystem sys = assemble_system(spec, make_samples(spec, cfg));
    // rows are already normalized; rescaling after the projection would
    // inflate rows that cancel to roundoff
    const Eigen::MatrixXd reduced = sys.rows * s;
    DenseNull dn = dense_null(reduced, tol, singular_values_of(sys.rows)[0] * ssv.front());

    NullspaceResult res;
    res.dim = static_cast<int>(m) - dn.rank;
    for (const auto& c : dn.basis) {
        res.coordinates.emplace_back(c.data(), c.data() + c.size());
        res.basis.push_back(to_params(s * c));
    }
    res.singular_values = std::move(dn.sv);
    res.gap = dn.gap;
    res.tol_used = tol;
    res.samples = cfg.count;
    res.validation_residual = validation_residual(spec, res.basis, cfg);
    if (res.validation_residual > tol)
        fail(ErrorKind::ValidationFailed, "restricted basis fails the validation samples");
    return res;
}

FamilyNullspaceResult compatible_potential_params(const std::vector<KtParams>& tensors, const SampleConfig& cfg,
                                                  double tol) {
    if (tensors.empty()) fail(ErrorKind::LengthMismatch, "no tensors given");
    for (const auto& k : tensors) require_tensor(k, "compatible_potential_params");
    validate_config(cfg);

    const std::array<PotentialSpec, 3> parts{PotentialSpec::oscillator(1.0), PotentialSpec::sw(0.0, 1.0, 0.0),
                                             PotentialSpec::sw(0.0, 0.0, 1.0)};
    const PotentialSpec probe = PotentialSpec::sw(1.0, 1.0, 1.0);

    auto build = [&](const SampleSet& ss) {
        const auto np = static_cast<Eigen::Index>(ss.points.size());
        const auto nt = static_cast<Eigen::Index>(tensors.size());
        Eigen::MatrixXd a(np * nt, 3), mag(np * nt, 3);
        parallel_for(ss.points.size(), [&](std::size_t i) {
            std::array<std::array<double, 6>, 3> rows;
            for (int f = 0; f < 3; ++f) rows[f] = bd_row(parts[f], ss.points[i]);
            for (Eigen::Index t = 0; t < nt; ++t) {
                for (int f = 0; f < 3; ++f) {
                    double acc = 0.0, size = 0.0;
                    for (int j = 0; j < 6; ++j) {
                        acc += rows[f][j] * tensors[t][j];
                        size = std::max(size, std::abs(rows[f][j]));
                    }
                    a(static_cast<Eigen::Index>(i) * nt + t, f) = acc;
                    mag(static_cast<Eigen::Index>(i) * nt + t, f) = size * tensors[t].norm();
                }
            }
        });
        const Eigen::MatrixXd scaled_mag = scale_rows_by(mag, mag);
        return std::make_pair(scale_rows_by(std::move(a), mag), singular_values_of(scaled_mag)[0]);
    };

    const auto [a, ref] = build(make_samples(probe, cfg));
    DenseNull dn = dense_null(a, tol, ref);
    FamilyNullspaceResult res;
    res.dim = 3 - dn.rank;
    res.parameter_labels = {"omega", "alpha", "beta"};
    for (const auto& v : dn.basis) res.basis.push_back({v[0], v[1], v[2]});
    res.singular_values = std::move(dn.sv);
    res.gap = dn.gap;
    res.tol_used = tol;
    const auto [av, vref] = build(make_samples(probe, cfg, 5, 7));
    res.validation_residual = relative_residual(av, dn.basis, vref);
    if (res.validation_residual > tol)
        fail(ErrorKind::ValidationFailed, "family basis fails the validation samples");
    return res;
}

}  // namespace ktinv
