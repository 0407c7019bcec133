#include "ktinv/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ktinv {

namespace {

std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <class T>
Json opt_str(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

void dump_rec(const Json& j, std::ostringstream& os, int indent) {
    const std::string pad(indent, ' ');
    const std::string inner(indent + 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << Json(it.key()).dump() << ": ";
                dump_rec(it.value(), os, indent + 2);
            }
            os << "\n" << pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    dump_rec(j[i], os, indent + 2);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                dump_rec(j[i], os, indent + 2);
            }
            os << "\n" << pad << "]";
            return;
        }
        case Json::value_t::number_float:
            os << fmt17(j.get<double>());
            return;
        default:
            os << j.dump();
    }
}

std::string cell(const Json& j) {
    if (j.is_null()) return "";
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) return fmt17(j.get<double>());
    return j.dump();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
        if (flat) {
            std::string s;
            for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ";" : "") + cell(j[i]);
            out.emplace_back(prefix, s);
        } else {
            for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
        }
    } else {
        out.emplace_back(prefix, cell(j));
    }
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

using Table = std::pair<std::vector<std::string>, std::vector<std::vector<std::string>>>;

Table tabulate(const Json& j) {
    Table t;
    if (j.is_array()) {
        std::vector<std::vector<std::pair<std::string, std::string>>> rows;
        for (const auto& e : j) {
            rows.emplace_back();
            flatten(e, "", rows.back());
            for (const auto& [k, v] : rows.back())
                if (std::find(t.first.begin(), t.first.end(), k) == t.first.end()) t.first.push_back(k);
        }
        for (const auto& r : rows) {
            std::vector<std::string> line(t.first.size());
            for (const auto& [k, v] : r)
                line[std::find(t.first.begin(), t.first.end(), k) - t.first.begin()] = v;
            t.second.push_back(std::move(line));
        }
    } else {
        t.first = {"key", "value"};
        std::vector<std::pair<std::string, std::string>> kv;
        flatten(j, "", kv);
        for (auto& [k, v] : kv) t.second.push_back({k, v});
    }
    return t;
}

}  // namespace

Json to_json(const KtParams& k) {
    Json a = Json::array();
    for (double v : k.values()) a.push_back(v);
    return a;
}

Json to_json(const Point2& p) { return Json::array({p.x, p.y}); }

Json to_json(const SampleConfig& cfg) {
    return {{"samples", cfg.count}, {"seed", cfg.seed}, {"r_min", cfg.r_min}, {"r_max", cfg.r_max},
            {"margin", cfg.margin}};
}

Json to_json(const FociPair& f) {
    return {{"s_plus", to_json(f.s_plus)}, {"s_minus", to_json(f.s_minus)}, {"coincident", f.coincident}};
}

Json to_json(const InvariantVector& v) {
    Json a = Json::array();
    for (double d : v.as_array()) a.push_back(d);
    return a;
}

Json to_json(const DerivedInvariants& d) {
    return {{"sigma1", d.sigma1}, {"sigma2", d.sigma2}, {"k1_sq", opt(d.k1_sq)}, {"k2_sq", opt(d.k2_sq)},
            {"a_rec", opt(d.a_rec)},  {"b_rec", opt(d.b_rec)},   {"tri_area", d.tri_area}};
}

Json to_json(const PairClass& c) {
    return {{"label", to_string(c.label)},
            {"paper_case_label", opt_str(c.paper_case_label)},
            {"discrepancy_note", opt_str(c.discrepancy_note)}};
}

Json to_json(const NullspaceResult& r) {
    Json j;
    j["backend"] = to_string(r.backend);
    j["dim"] = r.dim;
    Json basis = Json::array();
    for (const auto& b : r.basis) basis.push_back(to_json(b));
    j["basis"] = basis;
    if (!r.coordinates.empty()) j["coordinates"] = r.coordinates;
    if (r.backend == Backend::Numeric) {
        j["singular_values"] = r.singular_values;
        j["gap"] = opt(r.gap);
    }
    if (r.certificate) {
        j["rank_certificate"] = {{"rank", r.certificate->rank},
                                 {"pivot_columns", r.certificate->pivot_columns},
                                 {"last_pivot", r.certificate->last_pivot},
                                 {"rows", r.certificate->rows}};
    }
    j["tol_used"] = r.tol_used;
    j["samples"] = r.samples;
    j["validation_residual"] = r.validation_residual;
    return j;
}

Json to_json(const FamilyNullspaceResult& r) {
    Json basis = Json::array();
    for (const auto& b : r.basis) basis.push_back(Json::array({b[0], b[1], b[2]}));
    return {{"dim", r.dim},
            {"parameter_labels", r.parameter_labels},
            {"basis", basis},
            {"singular_values", r.singular_values},
            {"gap", opt(r.gap)},
            {"tol_used", r.tol_used},
            {"validation_residual", r.validation_residual}};
}

Json to_json(const SwReport& r) {
    Json j;
    j["omega"] = r.omega;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["status"] = to_string(r.status);
    j["nullspace"] = to_json(r.nullspace);
    if (r.exact) j["exact"] = to_json(*r.exact);
    j["polar_tensor"] = r.polar_tensor ? to_json(*r.polar_tensor) : Json(nullptr);
    j["eh_tensor"] = r.eh_tensor ? to_json(*r.eh_tensor) : Json(nullptr);
    j["pair_invariants"] = r.pair_invariants ? to_json(*r.pair_invariants) : Json(nullptr);
    j["pair_class"] = to_json(r.pair_class);
    j["conditions"] = {{"d1_nonzero", r.conditions[0]},
                       {"d3_zero", r.conditions[1]},
                       {"d4_nonzero", r.conditions[2]},
                       {"d6_nonzero", r.conditions[3]},
                       {"d7_d8_d9_equal", r.conditions[4]}};
    j["theorem_holds"] = r.theorem_holds;
    return j;
}

Json to_json(const DegeneracyRow& r) {
    return {{"a", r.a},
            {"b", r.b},
            {"ell", r.ell},
            {"pair_class", to_string(r.pair_class.label)},
            {"paper_case", opt_str(r.paper_case)},
            {"surviving", r.surviving},
            {"surviving_dim", r.surviving_family.dim},
            {"surviving_family", to_json(r.surviving_family)},
            {"invariants", to_json(r.invariants)},
            {"derived", to_json(r.derived)},
            {"discrepancy_note", opt_str(r.discrepancy_note)}};
}

Json to_json(const TtwScanRow& r) {
    return {{"k", r.k.label},
            {"dim", r.dim},
            {"verdict", to_string(r.verdict)},
            {"k_value", r.k.value},
            {"special_value", r.special_value},
            {"gap", opt(r.gap)},
            {"singular_values", r.singular_values},
            {"error", opt_str(r.error)}};
}

Json to_json(const AuditReport& r) {
    return {{"trials", r.trials},
            {"seed", r.seed},
            {"max_invariant_drift", r.max_invariant_drift},
            {"max_foci_error", r.max_foci_error},
            {"max_group_law_error", r.max_group_law_error},
            {"label_checks", r.label_checks},
            {"label_mismatches", r.label_mismatches},
            {"passed", r.passed}};
}

std::string dump_json(const Json& j) {
    std::ostringstream os;
    dump_rec(j, os, 0);
    os << "\n";
    return os.str();
}

std::string to_csv(const Json& j) {
    const Table t = tabulate(j);
    std::ostringstream os;
    for (std::size_t i = 0; i < t.first.size(); ++i) os << (i ? "," : "") << csv_escape(t.first[i]);
    os << "\n";
    for (const auto& r : t.second) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(r[i]);
        os << "\n";
    }
    return os.str();
}

std::string to_markdown(const Json& j) {
    const Table t = tabulate(j);
    std::ostringstream os;
    os << "|";
    for (const auto& h : t.first) os << " " << h << " |";
    os << "\n|";
    for (std::size_t i = 0; i < t.first.size(); ++i) os << " --- |";
    os << "\n";
    for (const auto& r : t.second) {
        os << "|";
        for (const auto& c : r) os << " " << c << " |";
        os << "\n";
    }
    return os.str();
}

}  // namespace ktinv
