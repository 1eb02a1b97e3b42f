// Python bindings. Reports cross the boundary as JSON strings; the qoslab
// package parses them into dicts so the binding layer stays thin.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qoslab/serialize.hpp"

namespace py = pybind11;
using namespace qoslab;

namespace {

std::string dumps(const Json& j) { return j.dump(); }

CoeffFamily gaussian_family(const SystemParams& params, const VectorSpaceDesc& desc,
                            RngStream rng) {
    CoeffFamily a = CoeffFamily::zero(params, desc);
    for (auto& per_coord : a.blocks)
        for (auto& m : per_coord)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    m(i, c) = Complex(rng.gaussian(), rng.gaussian());
    return a;
}

}  // namespace

PYBIND11_MODULE(_qoslab, m) {
    m.doc() = "quantized orthonormal systems core";

    py::register_exception<unsupported_norm_error>(m, "UnsupportedNormError");
    py::register_exception<resource_error>(m, "ResourceError");

    py::class_<QSystemInstance>(m, "System")
        .def_property_readonly("kind", [](const QSystemInstance& s) { return s.kind_tag; })
        .def_property_readonly("dims", [](const QSystemInstance& s) { return s.params.dims; })
        .def_property_readonly("sample_count",
                               [](const QSystemInstance& s) { return s.space->size(); })
        .def_property_readonly("complete", [](const QSystemInstance& s) { return s.is_complete; })
        .def_property_readonly("exactly_orthonormal",
                               [](const QSystemInstance& s) { return s.exactly_orthonormal; })
        .def("to_json", [](const QSystemInstance& s) { return system_to_json(s).dump(); })
        .def("__repr__", [](const QSystemInstance& s) {
            return "<qoslab.System " + s.kind_tag + ", " + std::to_string(s.params.count()) +
                   " blocks>";
        });

    m.def(
        "build_system",
        [](const std::string& spec, std::uint64_t seed) {
            return build_system_from_spec(spec, seed);
        },
        py::arg("spec"), py::arg("seed") = 0);
    m.def("system_from_json",
          [](const std::string& text) { return system_from_json(Json::parse(text)); });

    m.def("verify_orthonormality", [](const QSystemInstance& sys) {
        OrthonormalityReport rep = verify_orthonormality(sys);
        Json j = to_json(rep);
        j["tolerance"] = sys.defect_tolerance();
        j["pass"] = rep.max_defect <= sys.defect_tolerance();
        return dumps(j);
    });
    m.def("uniform_bound", [](const QSystemInstance& sys) { return uniform_bound(sys); });

    m.def(
        "verify_riesz",
        [](const QSystemInstance& sys, const std::string& p, int trials, int level,
           std::uint64_t seed) {
            return dumps(to_json(
                verify_riesz(sys, parse_exponent(p), trials, level, RngStream(seed, 0))));
        },
        py::arg("system"), py::arg("p") = "2", py::arg("trials") = 100, py::arg("level") = 1,
        py::arg("seed") = 0);

    m.def(
        "roundtrip_defect",
        [](const QSystemInstance& sys, int trials, std::uint64_t seed) {
            RngStream rng(seed, 0);
            double worst = 0.0;
            for (int t = 0; t < trials; ++t) {
                CoeffFamily a =
                    gaussian_family(sys.params, VectorSpaceDesc::scalar(), rng.substream(t));
                SampledVectorFunction f = inverse(a, sys);
                CoeffFamily fw = forward(f, sys);
                const double ratio =
                    lp_sigma_norm(fw, Exponent(2.0)) / lp_omega_norm(f, Exponent(2.0));
                worst = std::max(worst, std::abs(ratio - 1.0));
                worst = std::max(
                    worst, lp_omega_norm(subtract(inverse(fw, sys), f), Exponent(2.0)));
            }
            return worst;
        },
        py::arg("system"), py::arg("trials") = 20, py::arg("seed") = 0);

    m.def(
        "estimate_constants",
        [](const QSystemInstance& sys, const std::string& e, const std::vector<int>& sigma,
           const std::string& p, const std::string& method, std::size_t budget,
           std::uint64_t seed) {
            return dumps(to_json(estimate_constants(sys, parse_space_desc(e), sigma,
                                                    parse_exponent(p),
                                                    parse_constants_method(method), budget,
                                                    RngStream(seed, 0))));
        },
        py::arg("system"), py::arg("E") = "scalar", py::arg("sigma") = std::vector<int>{},
        py::arg("p") = "2", py::arg("method") = "exact-svd", py::arg("budget") = 10000,
        py::arg("seed") = 0);

    m.def(
        "clt",
        [](const std::vector<int>& dims, const std::string& h, const std::vector<int>& schedule,
           std::size_t n, std::uint64_t seed) {
            return dumps(to_json(
                clt_functional(dims, parse_clt_functional(h), schedule, n, RngStream(seed, 0))));
        },
        py::arg("dims"), py::arg("h") = "s2sq", py::arg("m") = std::vector<int>{1, 4, 16},
        py::arg("n") = 100000, py::arg("seed") = 0);

    m.def(
        "approximate_deltas",
        [](const QSystemInstance& sys, const std::vector<double>& eps) {
            Json j = to_json(approximate_deltas(sys, eps));
            j["bessel_audit"] = bessel_audit(sys);
            return dumps(j);
        },
        py::arg("system"), py::arg("eps"));

    m.def(
        "pisier_map",
        [](const std::string& e, int d, const std::string& map_name, const std::string& method,
           std::size_t budget, std::uint64_t seed) {
            ComplexMatrix t;
            if (map_name == "identity") {
                t = ComplexMatrix::Identity(d * d, d * d);
            } else if (map_name == "transpose") {
                t = ComplexMatrix::Zero(d * d, d * d);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) t(i * d + j, j * d + i) = 1.0;
            } else {
                throw std::invalid_argument("pisier_map: unknown map " + map_name);
            }
            return dumps(to_json(pisier_criterion(parse_space_desc(e), d, t,
                                                  parse_constants_method(method), budget,
                                                  RngStream(seed, 0))));
        },
        py::arg("E"), py::arg("d") = 2, py::arg("map") = "transpose",
        py::arg("method") = "stochastic-ascent", py::arg("budget") = 2000, py::arg("seed") = 0);
}
