#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ktinv/analysis.hpp"
#include "ktinv/invariants.hpp"
#include "ktinv/nullspace.hpp"
#include "ktinv/report.hpp"
#include "ktinv/se2.hpp"

namespace py = pybind11;
using namespace ktinv;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

KtParams tensor_from(const std::vector<double>& b) {
    if (b.size() != 6) fail(ErrorKind::LengthMismatch, "a tensor needs 6 parameters");
    return KtParams(b[0], b[1], b[2], b[3], b[4], b[5]);
}

std::vector<double> tensor_to(const KtParams& k) { return {k.values().begin(), k.values().end()}; }

SampleConfig config(int samples, std::uint64_t seed) {
    SampleConfig cfg;
    cfg.count = samples;
    cfg.seed = seed;
    return cfg;
}

PotentialSpec family_spec(const std::string& name, const py::kwargs& kw) {
    auto get = [&](const char* key, double dflt) { return kw.contains(key) ? kw[key].cast<double>() : dflt; };
    if (name == "free") return PotentialSpec::free();
    if (name == "oscillator") return PotentialSpec::oscillator(get("omega", 1.0));
    if (name == "sw") return PotentialSpec::sw(get("omega", 1.0), get("alpha", 2.0), get("beta", 3.0));
    if (name == "ttw")
        return PotentialSpec::ttw(get("omega", 1.0), get("alpha", 1.0), get("beta", 1.0), get("k", 1.0),
                                  get("gamma", 0.0));
    if (name == "kepler") return PotentialSpec::kepler(get("mu", 1.0));
    fail(ErrorKind::DomainError, "unknown family '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Killing tensor invariants, orbit classification and compatibility solver";

    static py::exception<KtError> kt_error(m, "KtError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const KtError& e) {
            py::object err = kt_error;
            py::object inst = err(e.what());
            inst.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(kt_error.ptr(), inst.ptr());
        }
    });

    m.def("metric", [] { return tensor_to(metric_kt()); });
    m.def("polar", [](double a, double b) { return tensor_to(polar_kt_at(a, b)); }, py::arg("a"), py::arg("b"));
    m.def("eh", [](double ell) { return tensor_to(eh_canonical_kt(ell)); }, py::arg("ell"));
    m.def("cartesian", [](double phi) { return tensor_to(cartesian_rotated_kt(phi)); }, py::arg("phi"));

    m.def("act", [](const std::vector<double>& g, const std::vector<double>& b) {
        if (g.size() != 3) fail(ErrorKind::LengthMismatch, "a group element needs 3 parameters");
        return tensor_to(act_on_kt(SE2Element(g[0], g[1], g[2]), tensor_from(b)));
    }, py::arg("g"), py::arg("params"));

    m.def("invariants_single", [](const std::vector<double>& b) { return invariants_single(tensor_from(b)); });
    m.def("classify_kt", [](const std::vector<double>& b, double tol) {
        return to_string(classify_kt(tensor_from(b), tol));
    }, py::arg("params"), py::arg("tol") = kDefaultClassTol);
    m.def("joint_invariants", [](const std::vector<double>& a, const std::vector<double>& b, double tol) {
        return joint_invariants(tensor_from(a), tensor_from(b), tol).as_array();
    }, py::arg("ka"), py::arg("kb"), py::arg("tol") = kDefaultClassTol);
    m.def("classify_pair", [](const std::vector<double>& a, const std::vector<double>& b, double tol) {
        return to_py(to_json(classify_pair(tensor_from(a), tensor_from(b), tol)));
    }, py::arg("ka"), py::arg("kb"), py::arg("tol") = kDefaultClassTol);

    m.def("compatible", [](const std::string& family, int samples, std::uint64_t seed, double tol,
                           const std::string& backend, const py::kwargs& kw) {
        const Backend be = backend == "exact" ? Backend::ExactRational : Backend::Numeric;
        return to_py(to_json(compatible_kts(family_spec(family, kw), config(samples, seed), tol, be)));
    }, py::arg("family"), py::kw_only(), py::arg("samples") = 240, py::arg("seed") = 42,
       py::arg("tol") = kDefaultRankTol, py::arg("backend") = "numeric");

    m.def("dual_solve", [](const std::vector<std::vector<double>>& tensors, int samples, std::uint64_t seed) {
        std::vector<KtParams> ks;
        for (const auto& t : tensors) ks.push_back(tensor_from(t));
        return to_py(to_json(compatible_potential_params(ks, config(samples, seed))));
    }, py::arg("tensors"), py::kw_only(), py::arg("samples") = 240, py::arg("seed") = 42);

    m.def("characterize_sw", [](double omega, double alpha, double beta, bool exact) {
        return to_py(to_json(characterize_sw(omega, alpha, beta, {}, kDefaultRankTol, exact)));
    }, py::arg("omega"), py::arg("alpha"), py::arg("beta"), py::arg("exact") = false);

    m.def("degeneracy", [](double a, double b, double ell) {
        return to_py(to_json(degeneracy_study(a, b, ell)));
    }, py::arg("a"), py::arg("b"), py::arg("ell"));

    m.def("ttw_scan", [](const std::vector<double>& ks, double omega, double alpha, double beta) {
        std::vector<KValue> kv;
        for (double k : ks) kv.push_back({k, Json(k).dump()});
        Json rows = Json::array();
        for (const auto& r : ttw_scan(kv, omega, alpha, beta)) rows.push_back(to_json(r));
        return to_py(rows);
    }, py::arg("ks"), py::arg("omega") = 1.0, py::arg("alpha") = 1.0, py::arg("beta") = 2.0);

    m.def("audit", [](int trials, std::uint64_t seed) { return to_py(to_json(invariance_audit(trials, seed))); },
          py::arg("trials") = 200, py::arg("seed") = 42);
}
