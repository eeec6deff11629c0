// chirpex: chirp excitation sequence design, Bloch simulation and phase-dispersion predictions.
//
//   chirpex simulate --preset fig4b --out results
//   chirpex predict  --preset fig4b
//   chirpex waveform --config run.json --taper 0.1
//   chirpex selftest

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "chirpex/acceptance.hpp"
#include "chirpex/config.hpp"
#include "chirpex/errors.hpp"
#include "chirpex/runner.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kCheckFailed = 2, kIoError = 3 };

struct RunFlags {
    std::string preset;
    std::string config_path;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    std::optional<double> grid_step_hz;
    std::optional<double> taper;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--preset", f.preset, "fig4a | fig4b | fig5");
    cmd->add_option("--config", f.config_path, "JSON run configuration (frequencies in Hz)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--threads", f.threads, "sweep workers (default: all cores)");
    cmd->add_option("--grid-step-hz", f.grid_step_hz, "offset grid step in Hz");
    cmd->add_option("--taper", f.taper, "edge taper fraction in [0, 0.5)");
}

// Preset (or the preset named inside the file) as base, file values on top, flags last.
chirpex::RunConfig resolve(const RunFlags& f) {
    using nlohmann::json;
    json file = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw chirpex::IoError("cannot read config " + f.config_path);
        try {
            file = json::parse(in);
        } catch (const json::exception& e) {
            throw chirpex::ConfigError("config " + f.config_path + ": " + e.what());
        }
        if (!file.is_object()) throw chirpex::ConfigError("config " + f.config_path + ": expected a JSON object");
    }
    std::string base = f.preset;
    if (base.empty() && file.contains("preset")) base = file["preset"].get<std::string>();
    if (base.empty() && f.config_path.empty()) throw chirpex::ConfigError("give --preset or --config");

    json merged = base.empty() ? chirpex::RunConfig{}.to_json() : chirpex::preset(base).to_json();
    file.erase("preset");
    merged.merge_patch(file);
    auto config = chirpex::RunConfig::from_json(merged);

    if (f.out) config.output_dir = *f.out;
    if (f.threads) config.threads = *f.threads;
    if (f.grid_step_hz) config.grid.step_hz = *f.grid_step_hz;
    if (f.taper) {
        config.taper_fraction = *f.taper;
        if (config.sequence == chirpex::SequenceKind::chorus && *f.taper > 0.0)
            config.sequence = chirpex::SequenceKind::chorus_tapered;
    }
    config.validate();
    return config;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const chirpex::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const chirpex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const chirpex::ResourceError& e) {
        std::cerr << "config error: " << e.what() << " (increase dt or reduce the sweep)\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chirp excitation pulse design and Bloch simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", chirpex::kVersion);

    RunFlags sim_flags, pred_flags, wave_flags;
    auto* sim = app.add_subcommand("simulate", "sweep the offset grid and write profile.txt");
    add_run_flags(sim, sim_flags);
    auto* pred = app.add_subcommand("predict", "write the analytic phase-dispersion table predict.txt");
    add_run_flags(pred, pred_flags);
    auto* wave = app.add_subcommand("waveform", "write the sampled pulse sequence waveform.txt");
    add_run_flags(wave, wave_flags);
    unsigned selftest_threads = 0;
    auto* self = app.add_subcommand("selftest", "run the acceptance checks");
    self->add_option("--threads", selftest_threads, "sweep workers (default: all cores)");

    CLI11_PARSE(app, argc, argv);

    if (*sim) {
        return guarded([&] {
            const auto config = resolve(sim_flags);
            chirpex::SimulationResult result;
            const auto path = chirpex::run_simulate(config, &result);
            std::cout << chirpex::summary(result) << "profile         " << path << '\n';
            return result.max_norm_error <= 1e-9 ? kOk : kCheckFailed;
        });
    }
    if (*pred) {
        return guarded([&] {
            const auto config = resolve(pred_flags);
            std::vector<chirpex::PredictionRow> rows;
            const auto path = chirpex::run_predict(config, &rows);
            std::cout << rows.size() << " rows -> " << path << '\n';
            return kOk;
        });
    }
    if (*wave) {
        return guarded([&] {
            const auto config = resolve(wave_flags);
            chirpex::SampledWaveform w;
            const auto path = chirpex::run_waveform(config, &w);
            std::cout << w.size() << " samples, dt " << w.dt << " s -> " << path << '\n';
            return kOk;
        });
    }
    return guarded([&] {
        bool all = true;
        for (const auto& r : chirpex::run_acceptance({selftest_threads})) {
            std::cout << chirpex::format_result(r) << std::endl;
            all = all && r.passed;
        }
        std::cout << (all ? "selftest passed" : "selftest FAILED") << '\n';
        return all ? kOk : kCheckFailed;
    });
}
