#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli_parse.hpp"
#include "ktinv/analysis.hpp"
#include "ktinv/invariants.hpp"
#include "ktinv/nullspace.hpp"
#include "ktinv/report.hpp"
#include "ktinv/se2.hpp"

using namespace ktinv;
using cli::UsageError;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitValidation = 3;
constexpr int kExitUsage = 64;

struct Common {
    std::string format = "json";
    std::string out;
    int samples = 240;
    double tol = kDefaultRankTol;
    double class_tol = kDefaultClassTol;
    std::uint64_t seed = 42;
    std::string backend = "numeric";
    double r_min = 0.5, r_max = 2.5, margin = 0.1;

    SampleConfig sample_config() const {
        SampleConfig c;
        c.count = samples;
        c.seed = seed;
        c.r_min = r_min;
        c.r_max = r_max;
        c.margin = margin;
        return c;
    }

    Json config_json(const std::string& command) const {
        Json j = to_json(sample_config());
        j["tol"] = tol;
        j["class_tol"] = class_tol;
        j["backend"] = backend;
        j["command"] = command;
        return j;
    }
};

struct FamilyArgs {
    std::string family = "sw";
    double omega = 1.0, alpha = 1.0, beta = 1.0, mu = 1.0, gamma = 0.0;
    std::string k = "1";

    PotentialSpec spec() const {
        if (family == "free") return PotentialSpec::free();
        if (family == "oscillator") return PotentialSpec::oscillator(omega);
        if (family == "sw") return PotentialSpec::sw(omega, alpha, beta);
        if (family == "ttw") return PotentialSpec::ttw(omega, alpha, beta, cli::parse_k(k).value, gamma);
        if (family == "kepler") return PotentialSpec::kepler(mu);
        throw UsageError("unknown family '" + family + "'");
    }

    Json json() const {
        Json j{{"family", family}};
        if (family == "oscillator" || family == "sw" || family == "ttw") j["omega"] = omega;
        if (family == "sw" || family == "ttw") {
            j["alpha"] = alpha;
            j["beta"] = beta;
        }
        if (family == "ttw") {
            j["k"] = k;
            j["gamma"] = gamma;
        }
        if (family == "kepler") j["mu"] = mu;
        return j;
    }

    static FamilyArgs from_json(const Json& j) {
        FamilyArgs f;
        f.family = j.at("family").get<std::string>();
        if (j.contains("omega")) f.omega = j["omega"].get<double>();
        if (j.contains("alpha")) f.alpha = j["alpha"].get<double>();
        if (j.contains("beta")) f.beta = j["beta"].get<double>();
        if (j.contains("k")) f.k = j["k"].get<std::string>();
        if (j.contains("gamma")) f.gamma = j["gamma"].get<double>();
        if (j.contains("mu")) f.mu = j["mu"].get<double>();
        return f;
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "markdown"}))
        ->capture_default_str();
    sub->add_option("--out", c.out, "Write the report to this path instead of stdout");
    sub->add_option("--samples", c.samples, "Sample count")->check(CLI::Range(12, 1000000))->capture_default_str();
    sub->add_option("--tol", c.tol, "Relative rank tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--class-tol", c.class_tol, "Classification tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "Sampling seed")->capture_default_str();
    sub->add_option("--backend", c.backend, "Null-space backend")
        ->check(CLI::IsMember({"numeric", "exact", "both"}))
        ->capture_default_str();
    sub->add_option("--r-min", c.r_min, "Inner sampling radius")->capture_default_str();
    sub->add_option("--r-max", c.r_max, "Outer sampling radius")->capture_default_str();
    sub->add_option("--margin", c.margin, "Clearance from singular sets")->capture_default_str();
}

void add_family(CLI::App* sub, FamilyArgs& f) {
    sub->add_option("--family", f.family, "free, oscillator, sw, ttw or kepler")
        ->check(CLI::IsMember({"free", "oscillator", "sw", "ttw", "kepler"}))
        ->capture_default_str();
    sub->add_option("--omega", f.omega)->capture_default_str();
    sub->add_option("--alpha", f.alpha)->capture_default_str();
    sub->add_option("--beta", f.beta)->capture_default_str();
    sub->add_option("--k", f.k, "TTW k (p/q, sqrt(n), pi/m or decimal)")->capture_default_str();
    sub->add_option("--gamma", f.gamma)->capture_default_str();
    sub->add_option("--mu", f.mu)->capture_default_str();
}

// Tables carry the config as extra columns; JSON nests it.
std::string render(const Common& c, const Json& report, const Json& table_rows) {
    if (c.format == "json") return dump_json(report);
    Json rows = table_rows;
    if (rows.is_array()) {
        for (auto& r : rows) {
            if (!r.is_object()) continue;
            r["samples"] = c.samples;
            r["tol"] = c.tol;
            r["seed"] = c.seed;
            r["backend"] = c.backend;
        }
    }
    return c.format == "csv" ? to_csv(rows) : to_markdown(rows);
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) fail(ErrorKind::DomainError, "cannot open output file " + c.out);
    f << text;
}

Json tensor_summary(const KtParams& k, double tol) {
    require_tensor(k, "tensor");
    const auto inv = invariants_single(k);
    Json j{{"params", to_json(k)},
           {"orbit_class", to_string(classify_kt(k, tol))},
           {"invariants", Json::array({inv[0], inv[1], inv[2]})},
           {"sigma", sigma_of(k)}};
    j["foci"] = k.b6() != 0.0 ? to_json(foci(k, tol)) : Json(nullptr);
    return j;
}

Json pair_report(const Common& c, const std::string& command, const std::vector<KtParams>& tensors) {
    Json rep{{"config", c.config_json(command)}};
    if (tensors.size() == 1) {
        rep["tensor"] = tensor_summary(tensors[0], c.class_tol);
        rep["class"] = rep["tensor"]["orbit_class"];
        return rep;
    }
    const KtParams& a = tensors[0];
    const KtParams& b = tensors[1];
    rep["tensor_a"] = tensor_summary(a, c.class_tol);
    rep["tensor_b"] = tensor_summary(b, c.class_tol);
    const PairClass pc = classify_pair(a, b, c.class_tol);
    rep["class"] = to_string(pc.label);
    rep["pair_class"] = to_json(pc);
    if (a.b6() != 0.0 && b.b6() != 0.0) {
        rep["invariants"] = to_json(joint_invariants(a, b, c.class_tol));
        rep["derived"] = to_json(derived_invariants(a, b, c.class_tol));
    } else {
        rep["invariants"] = nullptr;
        rep["derived"] = nullptr;
    }
    return rep;
}

std::vector<KtParams> parse_tensors(const std::vector<std::string>& lits, std::size_t min, std::size_t max) {
    if (lits.size() < min || lits.size() > max)
        throw UsageError("expected between " + std::to_string(min) + " and " + std::to_string(max) + " tensors");
    std::vector<KtParams> out;
    for (const auto& l : lits) out.push_back(cli::parse_tensor(l));
    return out;
}

Json basis_rows(const NullspaceResult& r) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.basis.size(); ++i) {
        Json row{{"backend", to_string(r.backend)}, {"dim", r.dim}, {"index", i}};
        for (int s = 0; s < 6; ++s) row[KtParams::slot_labels()[s]] = r.basis[i][s];
        rows.push_back(row);
    }
    if (rows.empty()) rows.push_back({{"backend", to_string(r.backend)}, {"dim", r.dim}});
    return rows;
}

int revalidate(const Common& c, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    Json rep;
    try {
        rep = Json::parse(f);
    } catch (const Json::exception& e) {
        throw UsageError(std::string("invalid JSON input: ") + e.what());
    }
    try {
        const FamilyArgs fam = FamilyArgs::from_json(rep.at("potential"));
        const Json& cfgj = rep.at("config");
        Common cc = c;
        cc.samples = cfgj.at("samples").get<int>();
        cc.seed = cfgj.at("seed").get<std::uint64_t>();
        cc.r_min = cfgj.at("r_min").get<double>();
        cc.r_max = cfgj.at("r_max").get<double>();
        cc.margin = cfgj.at("margin").get<double>();
        cc.tol = cfgj.at("tol").get<double>();
        const PotentialSpec spec = fam.spec();

        Json out{{"config", cc.config_json("compatible --input")}, {"potential", fam.json()}, {"input", path}};
        Json checks = Json::array();
        bool ok = true;
        for (const char* key : {"numeric", "exact"}) {
            if (!rep.contains(key)) continue;
            std::vector<KtParams> basis;
            for (const auto& b : rep[key].at("basis")) basis.push_back(KtParams(b.get<std::array<double, 6>>()));
            const double res = basis.empty() ? 0.0 : validation_residual(spec, basis, cc.sample_config());
            const bool pass = res <= cc.tol;
            ok = ok && pass;
            checks.push_back({{"backend", key}, {"basis_size", basis.size()}, {"validation_residual", res},
                              {"passed", pass}});
        }
        if (checks.empty()) throw UsageError("input report has no basis to validate");
        out["checks"] = checks;
        out["passed"] = ok;
        emit(c, render(c, out, checks));
        return ok ? kExitOk : kExitValidation;
    } catch (const Json::exception& e) {
        throw UsageError(std::string("input is not a compatible report: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Killing two-tensor invariants and compatible-potential analysis"};
    app.require_subcommand(1);

    Common c;
    FamilyArgs fam;

    std::vector<std::string> pair_lits;
    std::string tensor_lit;
    auto* inv = app.add_subcommand("invariants", "Invariants of one tensor or a pair");
    inv->add_option("--pair", pair_lits, "Two tensor literals")->expected(2);
    inv->add_option("--tensor", tensor_lit, "Single tensor literal");
    add_common(inv, c);

    auto* cls = app.add_subcommand("classify", "Orbit or pair classification");
    cls->add_option("--pair", pair_lits, "Two tensor literals")->expected(2);
    cls->add_option("--tensor", tensor_lit, "Single tensor literal");
    add_common(cls, c);

    std::string g_lit, point_lit;
    bool canon = false;
    auto* tr = app.add_subcommand("transform", "Apply a rigid motion or canonicalize");
    tr->add_option("--tensor", tensor_lit, "Tensor literal")->required();
    tr->add_option("--g", g_lit, "Group element p1,p2,p3");
    tr->add_option("--point", point_lit, "Point x,y to move along with the tensor");
    tr->add_flag("--canonicalize", canon, "Return the moving frame and canonical form");
    add_common(tr, c);

    std::string input_path;
    std::vector<std::string> restrict_lits;
    auto* comp = app.add_subcommand("compatible", "Compatible Killing tensors of a potential");
    add_family(comp, fam);
    comp->add_option("--input", input_path, "Re-validate the basis of a previous JSON report");
    comp->add_option("--restrict", restrict_lits, "Restrict to the span of these tensors");
    add_common(comp, c);

    std::vector<std::string> dual_lits;
    auto* dual = app.add_subcommand("dual-solve", "SW-family parameters compatible with given tensors");
    dual->add_option("--tensors", dual_lits, "Tensor literals")->required();
    add_common(dual, c);

    std::string k_list;
    double phi = 0.0;
    bool angle = false;
    auto* scan = app.add_subcommand("ttw-scan", "Compatible-tensor dimension of TTW over k");
    scan->add_option("--omega", fam.omega)->capture_default_str();
    scan->add_option("--alpha", fam.alpha)->capture_default_str();
    scan->add_option("--beta", fam.beta)->capture_default_str();
    scan->add_option("--k", k_list, "Comma-separated k values (default: proposition set plus special values)");
    scan->add_option("--phi", phi, "Angle for the rotated cartesian check")->capture_default_str();
    scan->add_flag("--angle-check", angle, "Also run the rotated cartesian tensor check at --phi");
    add_common(scan, c);

    double a = 0.0, b = 0.0, ell = 4.0;
    bool table = false;
    auto* deg = app.add_subcommand("degeneracy", "Surviving SW family for a polar + elliptic-hyperbolic pair");
    deg->add_option("--a", a)->capture_default_str();
    deg->add_option("--b", b)->capture_default_str();
    deg->add_option("--ell", ell)->capture_default_str();
    deg->add_flag("--table", table, "Run the four sign patterns (1,1), (0,2), (2,0), (0,0)");
    add_common(deg, c);

    double sw_omega = 1.0, sw_alpha = 2.0, sw_beta = 3.0;
    auto* sw = app.add_subcommand("sw", "Invariant characterization of an SW potential");
    sw->add_option("--omega", sw_omega)->capture_default_str();
    sw->add_option("--alpha", sw_alpha)->capture_default_str();
    sw->add_option("--beta", sw_beta)->capture_default_str();
    add_common(sw, c);

    int trials = 1000;
    auto* aud = app.add_subcommand("audit", "Randomized invariance and equivariance checks");
    aud->add_option("--trials", trials)->check(CLI::PositiveNumber)->capture_default_str();
    add_common(aud, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const SampleConfig cfg = c.sample_config();
        validate_config(cfg);

        if (inv->parsed() || cls->parsed()) {
            const std::string name = inv->parsed() ? "invariants" : "classify";
            std::vector<KtParams> ts;
            if (!pair_lits.empty() && !tensor_lit.empty()) throw UsageError("use either --pair or --tensor");
            if (!pair_lits.empty()) ts = parse_tensors(pair_lits, 2, 2);
            else if (!tensor_lit.empty()) ts = {cli::parse_tensor(tensor_lit)};
            else throw UsageError("--pair or --tensor is required");
            const Json rep = pair_report(c, name, ts);
            emit(c, render(c, rep, rep));
            return kExitOk;
        }

        if (tr->parsed()) {
            const KtParams k = cli::parse_tensor(tensor_lit);
            require_tensor(k, "transform");
            Json rep{{"config", c.config_json("transform")}, {"input", to_json(k)}};
            if (canon) {
                const auto [g, kc] = canonicalize(k, c.class_tol);
                rep["frame"] = Json::array({g.p1(), g.p2(), g.p3()});
                rep["canonical"] = to_json(kc);
            } else {
                if (g_lit.empty()) throw UsageError("--g or --canonicalize is required");
                const SE2Element g = cli::parse_group_element(g_lit);
                rep["g"] = Json::array({g.p1(), g.p2(), g.p3()});
                rep["result"] = to_json(act_on_kt(g, k));
                if (!point_lit.empty()) {
                    const auto xy = cli::split(point_lit, ',');
                    if (xy.size() != 2) throw UsageError("--point expects x,y");
                    const Point2 p{cli::parse_real(xy[0]), cli::parse_real(xy[1])};
                    rep["point"] = to_json(apply_point(g, p));
                }
            }
            emit(c, render(c, rep, rep));
            return kExitOk;
        }

        if (comp->parsed()) {
            if (!input_path.empty()) return revalidate(c, input_path);
            const PotentialSpec spec = fam.spec();
            Json rep{{"config", c.config_json("compatible")}, {"potential", fam.json()},
                     {"descriptor", spec.descriptor()}};
            Json rows = Json::array();
            if (!restrict_lits.empty()) {
                if (c.backend != "numeric") throw UsageError("--restrict supports the numeric backend only");
                const auto sub = parse_tensors(restrict_lits, 1, 6);
                const NullspaceResult r = restricted_compatible(spec, sub, cfg, c.tol);
                Json sj = Json::array();
                for (const auto& s : sub) sj.push_back(to_json(s));
                rep["subspace"] = sj;
                rep["numeric"] = to_json(r);
                rows = basis_rows(r);
            } else {
                std::optional<NullspaceResult> num, ex;
                if (c.backend != "exact") num = compatible_kts(spec, cfg, c.tol, Backend::Numeric);
                if (c.backend != "numeric") ex = compatible_kts(spec, cfg, c.tol, Backend::ExactRational);
                if (num) {
                    rep["numeric"] = to_json(*num);
                    for (const auto& r : basis_rows(*num)) rows.push_back(r);
                }
                if (ex) {
                    rep["exact"] = to_json(*ex);
                    for (const auto& r : basis_rows(*ex)) rows.push_back(r);
                }
                if (num && ex) rep["backends_agree"] = num->dim == ex->dim;
            }
            emit(c, render(c, rep, rows));
            return kExitOk;
        }

        if (dual->parsed()) {
            const auto ts = parse_tensors(dual_lits, 1, 16);
            const FamilyNullspaceResult r = compatible_potential_params(ts, cfg, c.tol);
            Json tj = Json::array();
            for (const auto& t : ts) tj.push_back(to_json(t));
            Json rep{{"config", c.config_json("dual-solve")}, {"tensors", tj}, {"family", "sw"},
                     {"result", to_json(r)}};
            Json rows = Json::array();
            for (const auto& v : r.basis) rows.push_back({{"dim", r.dim}, {"omega", v[0]}, {"alpha", v[1]}, {"beta", v[2]}});
            if (rows.empty()) rows.push_back({{"dim", r.dim}});
            emit(c, render(c, rep, rows));
            return kExitOk;
        }

        if (scan->parsed()) {
            if (c.backend != "numeric") throw UsageError("ttw-scan supports the numeric backend only");
            const auto ks = k_list.empty() ? ttw_default_scan() : cli::parse_k_list(k_list);
            const auto rows = ttw_scan(ks, fam.omega, fam.alpha, fam.beta, cfg, c.tol);
            Json jr = Json::array();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                Json r = to_json(rows[i]);
                if (angle) {
                    try {
                        r["angle_check"] = cartesian_angle_check(rows[i].k.value, phi, fam.omega, fam.alpha,
                                                                 fam.beta, cfg, c.tol);
                    } catch (const KtError& e) {
                        r["angle_check"] = nullptr;
                    }
                }
                jr.push_back(r);
            }
            Json rep{{"config", c.config_json("ttw-scan")},
                     {"potential", {{"family", "ttw"}, {"omega", fam.omega}, {"alpha", fam.alpha}, {"beta", fam.beta}}},
                     {"rows", jr}};
            if (angle) rep["phi"] = phi;
            emit(c, render(c, rep, jr));
            return kExitOk;
        }

        if (deg->parsed()) {
            std::vector<std::pair<double, double>> cases;
            if (table) cases = {{1, 1}, {0, 2}, {2, 0}, {0, 0}};
            else cases = {{a, b}};
            Json jr = Json::array();
            for (const auto& [ca, cb] : cases) jr.push_back(to_json(degeneracy_study(ca, cb, ell, cfg, c.tol)));
            Json rep{{"config", c.config_json("degeneracy")}, {"rows", jr}};
            Json flat = Json::array();
            for (const auto& r : jr) {
                Json f = r;
                f.erase("surviving_family");
                f.erase("invariants");
                f.erase("derived");
                flat.push_back(f);
            }
            emit(c, render(c, rep, flat));
            return kExitOk;
        }

        if (sw->parsed()) {
            const SwReport r = characterize_sw(sw_omega, sw_alpha, sw_beta, cfg, c.tol, c.backend != "numeric",
                                               c.tol);
            Json rep{{"config", c.config_json("sw")}, {"report", to_json(r)}};
            emit(c, render(c, rep, rep));
            return kExitOk;
        }

        if (aud->parsed()) {
            const AuditReport r = invariance_audit(trials, c.seed);
            Json rep{{"config", c.config_json("audit")}, {"report", to_json(r)}};
            emit(c, render(c, rep, Json::array({to_json(r)})));
            return r.passed ? kExitOk : kExitValidation;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const KtError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::ValidationFailed ? kExitValidation : kExitDomain;
    }
    return kExitUsage;
}
