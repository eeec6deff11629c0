#include "chirpex/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "chirpex/errors.hpp"

namespace chirpex {

SimulationResult simulate(const RunConfig& config) {
    SimulationResult r;
    r.config = config;
    r.sequence = config.build_sequence();
    r.waveform = sample(r.sequence, config.sampling_policy());
    const auto raw = sweep_profile(r.waveform, config.offset_grid(), config.threads);
    r.max_norm_error = max_norm_error(raw);
    r.profile = zero_order_correct(raw);
    const double B = hz_to_rad(config.bandwidth_hz);
    const double band = std::min(B, hz_to_rad(config.grid.half_bandwidth_hz));
    r.metrics = profile_metrics(r.profile, -band, band);
    r.predicted_edge_residual_deg = edge_residual(config.dispersion_model()) * 180.0 / M_PI;
    return r;
}

std::string summary(const SimulationResult& r) {
    std::ostringstream os;
    os.precision(6);
    os << "sequence        " << r.config.name << " (" << to_string(r.config.sequence) << ")\n"
       << "duration        " << r.sequence.total_duration() * 1e3 << " ms, " << r.waveform.size() << " samples, dt "
       << r.waveform.dt << " s\n"
       << "offsets         " << r.profile.size() << " over +/-" << r.config.grid.half_bandwidth_hz / 1e3 << " kHz\n"
       << "zero-order      " << r.profile.applied_phase * 180.0 / M_PI << " deg\n"
       << "band            +/-" << r.config.bandwidth_hz / 1e3 << " kHz, " << r.metrics.count << " offsets\n"
       << "min Mx          " << r.metrics.min_mx << '\n'
       << "mean Mx         " << r.metrics.mean_mx << '\n'
       << "max |Mz|        " << r.metrics.max_abs_mz << '\n'
       << "max phase dev   " << r.metrics.max_abs_phase_dev_deg << " deg\n"
       << "edge residual   " << r.predicted_edge_residual_deg << " deg (predicted)\n"
       << "norm error      " << r.max_norm_error << '\n'
       << "wall time       " << r.profile.source.wall_time_s << " s\n";
    for (const auto& w : r.sequence.warnings) os << "warning         " << w << '\n';
    return os.str();
}

std::vector<PredictionRow> predict(const RunConfig& config) {
    const DispersionModel model = config.dispersion_model();
    const double edge = edge_residual(model);
    const double theta0 = design_theta0();

    auto row_for = [&](double delta) {
        PredictionRow row;
        row.delta_s = delta;
        row.delta_omega_hz = rad_to_hz(model.offset_shift_for_delta(delta));
        row.edge_residual_rad = edge;
        try {
            row.excitation_rad = excitation_phase_diff(delta, model);
            row.phi1_rad = inversion_phase_diff(delta, model);
            row.residual_rad = combined_residual(delta, model);
        } catch (const DomainError&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.excitation_rad = row.phi1_rad = row.residual_rad = row.quadrature_rad = nan;
            row.status = "delta_out_of_range";
            return row;
        }
        try {
            row.quadrature_rad = quadrature_excitation_phase_diff(delta, model, theta0);
        } catch (const DomainError&) {
            row.quadrature_rad = std::numeric_limits<double>::quiet_NaN();
            row.status = "quadrature_out_of_range";
        }
        return row;
    };

    std::vector<PredictionRow> rows;
    for (double f : config.delta_fractions) rows.push_back(row_for(f * model.t1()));
    rows.push_back(row_for(2.0 * model.bandwidth / model.sweep_rate));
    return rows;
}

namespace {

template <class Write>
std::string write_output(const RunConfig& config, const char* file, Write&& write) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir.empty() ? "." : config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    const fs::path path = dir / file;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write(os);
    os.flush();
    if (!os) throw IoError("failed writing " + path.string());
    return path.string();
}

}  // namespace

std::string run_simulate(const RunConfig& config, SimulationResult* result) {
    SimulationResult r = simulate(config);
    auto path = write_output(config, kProfileFile, [&](std::ostream& os) { write_profile(os, config, r.profile); });
    if (result) *result = std::move(r);
    return path;
}

std::string run_predict(const RunConfig& config, std::vector<PredictionRow>* rows) {
    auto table = predict(config);
    auto path = write_output(config, kPredictFile, [&](std::ostream& os) { write_predictions(os, config, table); });
    if (rows) *rows = std::move(table);
    return path;
}

std::string run_waveform(const RunConfig& config, SampledWaveform* waveform) {
    const auto w = sample(config.build_sequence(), config.sampling_policy());
    auto path = write_output(config, kWaveformFile, [&](std::ostream& os) { write_waveform(os, config, w); });
    if (waveform) *waveform = w;
    return path;
}

}  // namespace chirpex
