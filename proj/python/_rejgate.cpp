#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/operators.h>
#include <pybind11/stl/filesystem.h>

#include "rejgate/calibrate.hpp"
#include "rejgate/dataio.hpp"
#include "rejgate/error.hpp"
#include "rejgate/metrics.hpp"
#include "rejgate/rejector.hpp"
#include "rejgate/simulate.hpp"
#include "rejgate/version.hpp"

namespace py = pybind11;
using namespace rejgate;

namespace {

// Reports cross the boundary as plain dicts with the same keys as the json report.
py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::handle& obj) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Dataset make_dataset(const std::vector<double>& confidence, const std::vector<bool>& correct,
                     const std::optional<std::vector<std::optional<std::string>>>& groups,
                     const std::optional<std::vector<double>>& logits,
                     const std::optional<std::vector<std::string>>& ids) {
    const auto n = confidence.size();
    auto same_size = [n](std::size_t m, const char* what) {
        if (m != n) throw InvalidArgument(std::string(what) + " length differs from confidence");
    };
    same_size(correct.size(), "correct");
    if (groups) same_size(groups->size(), "groups");
    if (logits) same_size(logits->size(), "logits");
    if (ids) same_size(ids->size(), "ids");
    Dataset d;
    d.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(confidence[i] >= 0.0 && confidence[i] <= 1.0)) {
            throw DataError("row " + std::to_string(i) + ": confidence outside [0,1]");
        }
        PredictionRecord r;
        r.id = ids ? (*ids)[i] : std::to_string(i);
        r.confidence = confidence[i];
        r.correct = correct[i];
        if (groups) r.group = (*groups)[i];
        if (logits) r.logit = (*logits)[i];
        d.records.push_back(std::move(r));
    }
    return d;
}

BinningScheme scheme_of(const std::string& kind, std::size_t bins) { return {parse_binning_kind(kind), bins}; }

}  // namespace

PYBIND11_MODULE(_rejgate, m) {
    m.doc() = "Rejection-gate value metrics, thresholds, calibration and rejectors";
    m.attr("__version__") = kVersion;

    auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    py::register_exception<DataError>(m, "DataError", error.ptr());

    py::class_<CostModel>(m, "CostModel")
        .def(py::init<double, double, double>(), py::arg("v"), py::arg("c_d"), py::arg("c_w"))
        .def_static("from_k", &CostModel::from_k, py::arg("k"))
        .def_property_readonly("v", &CostModel::v)
        .def_property_readonly("c_d", &CostModel::c_d)
        .def_property_readonly("c_w", &CostModel::c_w)
        .def_property_readonly("k", &CostModel::k)
        .def(py::self == py::self)
        .def("__repr__", [](const CostModel& c) {
            return "CostModel(v=" + format_double(c.v()) + ", c_d=" + format_double(c.c_d()) +
                   ", c_w=" + format_double(c.c_w()) + ")";
        });

    py::class_<Threshold>(m, "Threshold")
        .def_static("at", &Threshold::at, py::arg("value"))
        .def_static("reject_all", &Threshold::reject_all)
        .def_static("parse", &Threshold::parse, py::arg("text"))
        .def_property_readonly("is_reject_all", &Threshold::is_reject_all)
        .def_property_readonly("value", &Threshold::value)
        .def_property_readonly("position", &Threshold::position)
        .def("accepts", &Threshold::accepts, py::arg("confidence"))
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def(py::self <= py::self)
        .def("__str__", &Threshold::to_string)
        .def("__repr__", [](const Threshold& t) { return "Threshold(" + t.to_string() + ")"; });

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("confidence"), py::arg("correct"), py::arg("groups") = py::none(),
             py::arg("logits") = py::none(), py::arg("ids") = py::none())
        .def("__len__", &Dataset::size)
        .def_property_readonly("confidence", [](const Dataset& d) {
            std::vector<double> out;
            for (const auto& r : d.records) out.push_back(r.confidence);
            return out;
        })
        .def_property_readonly("correct", [](const Dataset& d) {
            std::vector<bool> out;
            for (const auto& r : d.records) out.push_back(r.correct);
            return out;
        })
        .def_property_readonly("groups", [](const Dataset& d) {
            std::vector<std::optional<std::string>> out;
            for (const auto& r : d.records) out.push_back(r.group);
            return out;
        })
        .def_property_readonly("logits", [](const Dataset& d) {
            std::vector<std::optional<double>> out;
            for (const auto& r : d.records) out.push_back(r.logit);
            return out;
        })
        .def_property_readonly("ids", [](const Dataset& d) {
            std::vector<std::string> out;
            for (const auto& r : d.records) out.push_back(r.id);
            return out;
        });

    py::class_<RejectorSpec>(m, "Rejector")
        .def_property_readonly("kind", [](const RejectorSpec& s) { return to_string(s.kind); })
        .def_property_readonly("global_threshold", [](const RejectorSpec& s) { return s.global_threshold; })
        .def_property_readonly("group_thresholds", [](const RejectorSpec& s) { return s.group_thresholds; })
        .def_property_readonly("trusted_groups", [](const RejectorSpec& s) { return s.trusted_groups; })
        .def_property_readonly("cost", [](const RejectorSpec& s) { return s.cost; })
        .def("to_dict", [](const RejectorSpec& s) { return to_python(rejector_to_json(s)); })
        .def_static("from_dict", [](const py::dict& d) { return rejector_from_json(from_python(d)); })
        .def("save", [](const RejectorSpec& s, const std::filesystem::path& p) { save_rejector(s, p); })
        .def_static("load", &load_rejector, py::arg("path"))
        .def("decide", [](const RejectorSpec& s, const Dataset& d) {
            std::vector<bool> out;
            for (const auto& r : d.records) out.push_back(apply(s, r) == Decision::accept);
            return out;
        }, py::arg("dataset"), "True where the record is accepted")
        .def("evaluate", [](const RejectorSpec& s, const Dataset& d, const CostModel& cost) {
            return to_python(to_json(evaluate(s, d, cost)));
        }, py::arg("dataset"), py::arg("cost"));

    m.def("optimal_threshold", &optimal_threshold, py::arg("cost"));
    m.def("deployed_value", [](const Dataset& d, const CostModel& c, const Threshold& t) {
        return to_python(to_json(deployed_value(d, c, t)));
    }, py::arg("dataset"), py::arg("cost"), py::arg("threshold"));
    m.def("expected_value", [](const Dataset& d, const CostModel& c, const Threshold& t) {
        return to_python(to_json(expected_value(d, c, t)));
    }, py::arg("dataset"), py::arg("cost"), py::arg("threshold"));

    m.def("ece", [](const Dataset& d, const std::string& scheme, std::size_t bins) {
        return ece(d, scheme_of(scheme, bins));
    }, py::arg("dataset"), py::arg("scheme") = "equal_width", py::arg("bins") = 15);
    m.def("reliability_table", [](const Dataset& d, const std::string& scheme, std::size_t bins) {
        return to_python(to_json(reliability_table(d, scheme_of(scheme, bins))));
    }, py::arg("dataset"), py::arg("scheme") = "equal_width", py::arg("bins") = 15);
    m.def("value_gap", &value_gap, py::arg("dataset"), py::arg("cost"), py::arg("threshold"));
    m.def("empirical_threshold", [](const Dataset& d, const CostModel& c) {
        const auto fit = empirical_threshold(d, c);
        return py::make_tuple(fit.threshold, fit.mean_value);
    }, py::arg("dataset"), py::arg("cost"), "Returns (threshold, mean deployed value)");
    m.def("threshold_divergence", &threshold_divergence, py::arg("dataset"), py::arg("cost"));
    m.def("value_curve", [](const Dataset& d, const CostModel& c) {
        py::list rows;
        for (const auto& row : value_curve(d, c).rows) {
            py::dict r;
            r["threshold"] = row.threshold;
            r["deployed_mean_value"] = row.deployed_mean_value;
            r["expected_mean_value"] = row.expected_mean_value;
            r["acceptance_rate"] = row.acceptance_rate;
            rows.append(r);
        }
        return rows;
    }, py::arg("dataset"), py::arg("cost"));
    m.def("full_report", [](const Dataset& d, const CostModel& c, const std::string& scheme, std::size_t bins) {
        return to_python(to_json(full_report(d, c, scheme_of(scheme, bins))));
    }, py::arg("dataset"), py::arg("cost"), py::arg("scheme") = "equal_width", py::arg("bins") = 15);

    m.def("nll", &nll, py::arg("dataset"));
    m.def("fit_temperature", [](const Dataset& d) { return fit_temperature(d).temperature; }, py::arg("dataset"),
          "Fitted temperature of the stored logits");
    m.def("apply_temperature", [](const Dataset& d, double temperature) {
        return apply_temperature(d, {temperature, 0.0, 0});
    }, py::arg("dataset"), py::arg("temperature"));

    m.def("fit_global", &fit_global, py::arg("dataset"), py::arg("cost"));
    m.def("fit_per_group", &fit_per_group, py::arg("dataset"), py::arg("cost"),
          py::arg("min_group_size") = kDefaultMinGroupSize);
    m.def("fit_trusted_subset", &fit_trusted_subset, py::arg("dataset"), py::arg("cost"),
          py::arg("epsilon") = kDefaultEpsilon, py::arg("min_group_size") = kDefaultMinGroupSize);
    m.def("identify_trusted_subsets", [](const Dataset& d, const CostModel& c, double eps, std::size_t min_size) {
        return to_python(to_json(identify_trusted_subsets(d, c, eps, min_size)));
    }, py::arg("dataset"), py::arg("cost"), py::arg("epsilon") = kDefaultEpsilon,
          py::arg("min_group_size") = kDefaultMinGroupSize);

    m.def("generate_calibrated", [](std::size_t n, double alpha, double beta, std::uint64_t seed) {
        return generate_calibrated({n, alpha, beta, std::nullopt, 0.99, seed});
    }, py::arg("n"), py::arg("alpha") = 2.0, py::arg("beta") = 2.0, py::arg("seed") = 0);
    m.def("generate_distorted", [](std::size_t n, double gamma, double delta, double alpha, double beta,
                                   std::uint64_t seed) {
        return generate_distorted({n, alpha, beta, std::nullopt, 0.99, seed}, {gamma, delta});
    }, py::arg("n"), py::arg("gamma") = 1.0, py::arg("delta") = 0.0, py::arg("alpha") = 2.0, py::arg("beta") = 2.0,
          py::arg("seed") = 0);
    m.def("generate_rare_high_confidence", [](std::size_t n, double hc, double high_conf, double alpha, double beta,
                                              std::uint64_t seed) {
        return generate_rare_high_confidence({n, alpha, beta, hc, high_conf, seed});
    }, py::arg("n"), py::arg("hc"), py::arg("high_conf") = 0.99, py::arg("alpha") = 2.0, py::arg("beta") = 2.0,
          py::arg("seed") = 0);
    m.def("generate_scaled_logits", [](std::size_t n, double z_scale, double temperature, std::uint64_t seed) {
        return generate_scaled_logits({n, z_scale, temperature, seed});
    }, py::arg("n"), py::arg("z_scale") = 2.0, py::arg("temperature") = 2.0, py::arg("seed") = 0);
    m.def("run_workflow", [](const Dataset& d, const CostModel& c, const Threshold& t, std::size_t replications,
                             std::uint64_t seed) {
        return to_python(to_json(run_workflow(d, c, t, replications, seed)));
    }, py::arg("dataset"), py::arg("cost"), py::arg("threshold"), py::arg("replications") = 20, py::arg("seed") = 0);

    m.def("load_dataset", [](const std::filesystem::path& p, const std::string& group_column) {
        LoadOptions opts;
        opts.group_column = group_column;
        return load_dataset(p, opts);
    }, py::arg("path"), py::arg("group_column") = "group");
    m.def("write_dataset", [](const Dataset& d, const std::filesystem::path& p, const std::string& format) {
        write_dataset(d, p, parse_dataset_format(format));
    }, py::arg("dataset"), py::arg("path"), py::arg("format") = "csv");
}
