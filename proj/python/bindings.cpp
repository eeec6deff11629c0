#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "chirpex/acceptance.hpp"
#include "chirpex/analysis.hpp"
#include "chirpex/config.hpp"
#include "chirpex/errors.hpp"
#include "chirpex/propagator.hpp"
#include "chirpex/rotations.hpp"
#include "chirpex/runner.hpp"

namespace py = pybind11;
using namespace chirpex;

namespace {

// Python dicts cross the boundary as JSON text; keeps RunConfig's JSON schema as the single source.
RunConfig config_from(const py::object& spec) {
    if (py::isinstance<py::str>(spec)) return preset(spec.cast<std::string>());
    const auto text = py::module_::import("json").attr("dumps")(spec).cast<std::string>();
    auto patch = nlohmann::json::parse(text);
    nlohmann::json base = RunConfig{}.to_json();
    if (patch.contains("preset")) {
        base = preset(patch["preset"].get<std::string>()).to_json();
        patch.erase("preset");
    }
    base.merge_patch(patch);
    auto config = RunConfig::from_json(base);
    config.validate();
    return config;
}

py::dict config_dict(const RunConfig& config) {
    return py::module_::import("json").attr("loads")(config.to_json().dump());
}

py::array_t<double> states_array(const std::vector<MagVector>& states) {
    py::array_t<double> out({static_cast<py::ssize_t>(states.size()), py::ssize_t{3}});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < states.size(); ++i) {
        v(i, 0) = states[i].mx;
        v(i, 1) = states[i].my;
        v(i, 2) = states[i].mz;
    }
    return out;
}

py::array_t<double> to_array(const std::vector<double>& values) {
    return py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
}

py::dict metrics_dict(const ProfileMetrics& m) {
    py::dict d;
    d["min_mx"] = m.min_mx;
    d["mean_mx"] = m.mean_mx;
    d["max_abs_phase_dev_deg"] = m.max_abs_phase_dev_deg;
    d["max_abs_mz"] = m.max_abs_mz;
    d["count"] = m.count;
    return d;
}

}  // namespace

PYBIND11_MODULE(_chirpex, m) {
    m.doc() = "Chirp excitation design, Bloch simulation and phase-dispersion predictions";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("solve_alpha", &solve_alpha, py::arg("theta0"), "Stage-II rotation angle α = arccos(tan²θ₀).");
    m.def("theta0_from_cot2", &theta0_from_cot2, py::arg("cot2"));
    m.def("sweep_rate_for", &sweep_rate_for, py::arg("theta0"), py::arg("amplitude"),
          "Sweep rate a = 2A²cotθ₀/α (rad/s²).");
    m.def(
        "three_stage_propagator",
        [](double theta0, double alpha) {
            const auto mat = three_stage_propagator(theta0, alpha).matrix();
            py::array_t<double> out({3, 3});
            auto v = out.mutable_unchecked<2>();
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) v(r, c) = mat(r, c);
            return out;
        },
        py::arg("theta0"), py::arg("alpha"), "Ry(θ₀)·Rx(α)·Ry(θ₀) as a 3×3 array.");

    m.def("preset_names", &preset_names);
    m.def(
        "config", [](const py::object& spec) { return config_dict(config_from(spec)); }, py::arg("spec"),
        "Resolved, validated run configuration for a preset name or a dict (optionally with a 'preset' key).");

    m.def(
        "waveform",
        [](const py::object& spec) {
            const auto config = config_from(spec);
            const auto w = sample(config.build_sequence(), config.sampling_policy());
            py::dict d;
            d["t"] = to_array(w.sample_times());
            d["amplitude"] = to_array(w.amplitude);
            d["phase"] = to_array(w.phase);
            d["dt"] = w.dt;
            d["total_duration"] = w.total_duration();
            return d;
        },
        py::arg("spec"), "Sampled waveform: times (s), amplitude (rad/s), phase (rad).");

    m.def(
        "propagate",
        [](const py::object& spec, double offset_hz, std::array<double, 3> initial) {
            const auto config = config_from(spec);
            auto policy = config.sampling_policy();
            policy.max_offset = std::max(policy.max_offset, std::abs(hz_to_rad(offset_hz)));
            const auto w = sample(config.build_sequence(), policy);
            py::gil_scoped_release release;
            const auto out = propagate(w, hz_to_rad(offset_hz), MagVector{initial[0], initial[1], initial[2]});
            return std::array<double, 3>{out.mx, out.my, out.mz};
        },
        py::arg("spec"), py::arg("offset_hz"), py::arg("initial") = std::array<double, 3>{0.0, 0.0, 1.0},
        "Final magnetization at one resonance offset (Hz).");

    m.def(
        "simulate",
        [](const py::object& spec, unsigned threads) {
            auto config = config_from(spec);
            config.threads = threads;
            SimulationResult r;
            {
                py::gil_scoped_release release;
                r = simulate(config);
            }
            std::vector<double> offsets_hz;
            for (double w : r.profile.source.offsets) offsets_hz.push_back(rad_to_hz(w));
            py::dict d;
            d["offsets_hz"] = to_array(offsets_hz);
            d["raw"] = states_array(r.profile.source.final_states);
            d["corrected"] = states_array(r.profile.corrected);
            d["zero_order_phase"] = r.profile.applied_phase;
            d["metrics"] = metrics_dict(r.metrics);
            d["predicted_edge_residual_deg"] = r.predicted_edge_residual_deg;
            d["max_norm_error"] = r.max_norm_error;
            d["warnings"] = r.sequence.warnings;
            d["config"] = config_dict(r.config);
            return d;
        },
        py::arg("spec"), py::arg("threads") = 0u,
        "Sweep the offset grid, apply zero-order correction and return profile and metrics.");

    m.def(
        "predict",
        [](const py::object& spec) {
            py::list rows;
            for (const auto& r : predict(config_from(spec))) {
                py::dict d;
                d["delta_s"] = r.delta_s;
                d["delta_omega_hz"] = r.delta_omega_hz;
                d["excitation_rad"] = r.excitation_rad;
                d["phi1_rad"] = r.phi1_rad;
                d["residual_rad"] = r.residual_rad;
                d["edge_residual_rad"] = r.edge_residual_rad;
                d["quadrature_rad"] = r.quadrature_rad;
                d["status"] = r.status;
                rows.append(d);
            }
            return rows;
        },
        py::arg("spec"), "Analytic phase-dispersion table.");

    m.def(
        "edge_residual",
        [](double amplitude_hz, double bandwidth_hz, double half_sweep_hz, double sweep_rate_factor) {
            const double A = hz_to_rad(amplitude_hz);
            return edge_residual(DispersionModel{A, A, sweep_rate_factor * A * A, hz_to_rad(bandwidth_hz),
                                                 hz_to_rad(half_sweep_hz)});
        },
        py::arg("amplitude_hz"), py::arg("bandwidth_hz"), py::arg("half_sweep_hz"), py::arg("sweep_rate_factor") = 2.7,
        "Residual dispersion (rad) at the band edge.");

    m.def(
        "run_acceptance",
        [](unsigned threads) {
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = run_acceptance(AcceptanceOptions{threads});
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["id"] = r.id;
                d["title"] = r.title;
                d["passed"] = r.passed;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("threads") = 0u);
}
