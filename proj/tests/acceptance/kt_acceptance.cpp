#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ktinv/analysis.hpp"
#include "ktinv/first_integral.hpp"
#include "ktinv/invariants.hpp"
#include "ktinv/nullspace.hpp"
#include "ktinv/se2.hpp"

using namespace ktinv;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<KValue> proposition_ks() {
    std::vector<KValue> ks;
    for (const auto& [v, l] : std::vector<std::pair<double, std::string>>{{1, "1"},     {2, "2"},   {0.5, "1/2"},
                                                                          {2.0 / 3, "2/3"}, {0.4, "2/5"}, {3, "3"}}) {
        ks.push_back({v, l});
        ks.push_back({-v, "-" + l});
    }
    ks.push_back({std::sqrt(2.0), "sqrt(2)"});
    return ks;
}

// dim 3 exactly at k = +-1, dim 2 elsewhere, stable across sample counts and
// tolerances
void scan_check(Outcome& o, double omega, double alpha, double beta) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ks = proposition_ks();
    SampleConfig twice;
    twice.count = 480;
    const auto base = ttw_scan(ks, omega, alpha, beta);
    const auto more = ttw_scan(ks, omega, alpha, beta, twice);
    const auto tight = ttw_scan(ks, omega, alpha, beta, {}, kDefaultRankTol / 100);
    const double elapsed = seconds_since(t0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const bool unit = std::abs(std::abs(ks[i].value) - 1.0) < 1e-12;
        o.detail << " k=" << ks[i].label << ":" << base[i].dim;
        o.require(base[i].dim == (unit ? 3 : 2), "dim at k=" + ks[i].label);
        o.require(base[i].verdict == more[i].verdict && base[i].verdict == tight[i].verdict,
                  "verdict stability at k=" + ks[i].label);
    }
    o.detail << " time=" << elapsed << "s";
    o.require(elapsed < 5.0, "runtime");
}

void ac1(Outcome& o) { scan_check(o, 1, 1, 1); }

void ac1_unequal(Outcome& o) { scan_check(o, 1, 1, 2); }

void ac2(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const SwReport r = characterize_sw(1, 2, 3, {}, 1e-8, true, 1e-8);
    const double elapsed = seconds_since(t0);
    o.detail << " dim=" << r.nullspace.dim << " class=" << to_string(r.pair_class.label);
    o.require(r.nullspace.dim == 3, "numeric dim");
    o.require(r.pair_class.label == PairLabel::SWCanonical, "pair class");
    for (std::size_t i = 0; i < r.conditions.size(); ++i)
        o.require(r.conditions[i], "condition " + std::to_string(i + 1));
    o.require(r.theorem_holds, "theorem_holds");
    const bool cert = r.exact && r.exact->certificate && r.exact->certificate->rank == 3;
    o.detail << " exact_rank=" << (cert ? 3 : -1) << " time=" << elapsed << "s";
    o.require(cert, "exact rank certificate");
    o.require(elapsed < 1.0, "runtime");
}

void ac3(Outcome& o) {
    struct Row {
        std::string name;
        PotentialSpec spec;
        int dim;
    };
    const std::vector<Row> rows{{"free", PotentialSpec::free(), 6},
                                {"oscillator", PotentialSpec::oscillator(1), 4},
                                {"alpha/x^2", PotentialSpec::sw(0, 1, 0), 4},
                                {"kepler", PotentialSpec::kepler(1), 4},
                                {"sw", PotentialSpec::sw(1, 2, 3), 3},
                                {"ttw(sqrt2)", PotentialSpec::ttw(1, 1, 1, std::sqrt(2.0)), 2}};
    for (const auto& r : rows) {
        const int n = compatible_kts(r.spec).dim;
        o.detail << " " << r.name << ":" << n;
        o.require(n == r.dim, r.name + " numeric dim");
        if (r.spec.has_rational_jet()) {
            const int e = compatible_kts(r.spec, {}, kDefaultRankTol, Backend::ExactRational).dim;
            o.detail << "/" << e;
            o.require(e == n, r.name + " backend agreement");
        }
    }
}

void ac4(Outcome& o) {
    struct Case {
        double a, b;
        int dim;
        std::string surviving;
        int paper_case;
        bool note;
    };
    for (const Case& c : std::vector<Case>{{1, 1, 0, "none", 1, false},
                                           {0, 2, 1, "alpha-only", 2, true},
                                           {2, 0, 1, "beta-only", 3, true},
                                           {0, 0, 3, "full", 4, false}}) {
        const DegeneracyRow r = degeneracy_study(c.a, c.b, 4.0);
        o.detail << " (" << c.a << "," << c.b << "):" << r.surviving_family.dim << "/" << r.surviving;
        o.require(r.surviving_family.dim == c.dim, "surviving dim");
        o.require(r.surviving == c.surviving, "surviving direction");
        o.require(r.paper_case == c.paper_case, "case label");
        o.require(r.discrepancy_note.has_value() == c.note, "discrepancy note");
    }
}

void ac5(Outcome& o) {
    const AuditReport a = invariance_audit(1000);
    double drift = 0.0;
    for (double d : a.max_invariant_drift) drift = std::max(drift, d);
    o.detail << " drift=" << drift << " foci=" << a.max_foci_error << " group=" << a.max_group_law_error
             << " mismatches=" << a.label_mismatches << "/" << a.label_checks;
    o.require(drift < 1e-9, "invariant drift");
    o.require(a.max_foci_error < 1e-10, "foci equivariance");
    o.require(a.max_group_law_error < 1e-12, "group law");
    o.require(a.label_mismatches == 0, "labels");
}

void ac6(Outcome& o) {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> ua(-2, 2), ub(0, 2), ul(1, 9), ut(-3, 3), ang(-3.1, 3.1);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = ua(rng), b = ub(rng), l = ul(rng);
        const SE2Element g(ut(rng), ut(rng), ang(rng));
        const DerivedInvariants d =
            derived_invariants(act_on_kt(g, polar_kt_at(a, b)), act_on_kt(g, eh_canonical_kt(l)));
        worst = std::max({worst, std::abs(*d.a_rec - std::abs(a)), std::abs(*d.b_rec - std::abs(b))});
    }
    o.detail << " max_error=" << worst;
    o.require(worst < 1e-9, "recovery error");
}

void ac7(Outcome& o) {
    const PotentialSpec sw = PotentialSpec::sw(1, 1, 1);
    const NullspaceResult ns = compatible_kts(sw);
    o.require(ns.dim == 3, "null-space dim");
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> uq(-2.5, 2.5), up(-2, 2);
    double worst = 0.0;
    int points = 0;
    while (points < 100) {
        const PhasePoint z{uq(rng), uq(rng), up(rng), up(rng)};
        const double r = std::hypot(z.x, z.y);
        if (r < 0.5 || r > 2.5 || std::abs(z.x) < 0.1 || std::abs(z.y) < 0.1) continue;
        ++points;
        for (const auto& k : ns.basis) worst = std::max(worst, std::abs(poisson_bracket(k, sw, z)));
    }
    const FirstIntegral f1(cartesian_rotated_kt(0.0), sw), f2(polar_kt_at(0, 0), sw);
    const double b12 = poisson_bracket(f1, f2, {1, 2, 0.3, -0.7});
    o.detail << " max|{H,F}|=" << worst << " |{F1,F2}|=" << std::abs(b12);
    o.require(worst < 1e-10, "{H,F}");
    o.require(std::abs(b12) > 1e-3, "{F1,F2}");
}

void ac8(Outcome& o) {
    std::vector<KtParams> sub;
    for (int i = 0; i < 5; ++i) {
        std::array<double, 6> e{};
        e[i] = 1.0;
        sub.emplace_back(e);
    }
    const NullspaceResult r = restricted_compatible(PotentialSpec::ttw(1, 1, 1, std::sqrt(2.0)), sub);
    double b45 = 0.0;
    for (const auto& b : r.basis) b45 = std::max(b45, std::hypot(b.b4(), b.b5()));
    o.detail << " dim=" << r.dim << " max|(b4,b5)|=" << b45;
    o.require(r.dim >= 1, "nonempty");
    o.require(b45 < 1e-10, "b4 = b5 = 0");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::string which = "all";
    app.add_option("--criterion", which, "1..8, 1u (unequal alpha, beta) or all");
    CLI11_PARSE(app, argc, argv);

    const std::map<std::string, std::pair<std::string, std::function<void(Outcome&)>>> table{
        {"1", {"TTW scan at (1,1,1)", ac1}},
        {"1u", {"TTW scan at (1,1,2)", ac1_unequal}},
        {"2", {"SW characterization", ac2}},
        {"3", {"dimension table", ac3}},
        {"4", {"degeneracy table", ac4}},
        {"5", {"invariance suite", ac5}},
        {"6", {"offset recovery", ac6}},
        {"7", {"first integrals", ac7}},
        {"8", {"restricted subspace", ac8}},
    };
    std::vector<std::string> run;
    if (which == "all") {
        for (const char* k : {"1", "1u", "2", "3", "4", "5", "6", "7", "8"}) run.emplace_back(k);
    } else if (table.count(which)) {
        run.push_back(which);
    } else {
        std::fprintf(stderr, "unknown criterion %s\n", which.c_str());
        return 64;
    }

    bool all = true;
    for (const auto& id : run) {
        const auto& [name, fn] = table.at(id);
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        all = all && o.pass;
        std::printf("%s AC%s %s:%s\n", o.pass ? "PASS" : "FAIL", id.c_str(), name.c_str(), o.detail.str().c_str());
    }
    return all ? 0 : 1;
}
