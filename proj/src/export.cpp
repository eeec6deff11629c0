#include "chirpex/export.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <ostream>

namespace chirpex {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_run_header(std::ostream& os, const RunConfig& config) {
    auto j = config.to_json();
    j.erase("output_dir");
    j.erase("threads");
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
    os << "# chirpex " << kVersion << '\n';
    os << "# config_hash " << hash << '\n';
    os << "# config " << j.dump() << '\n';
}

namespace {

void write_segments(std::ostream& os, const SampledWaveform& w) {
    os << "# label " << w.label << '\n';
    os << "# dt " << format_double(w.dt) << '\n';
    for (const auto& s : w.segments) {
        os << "# segment " << (s.kind == SegmentKind::chirp ? "chirp" : "delay") << " first=" << s.first
           << " count=" << s.count << " dt=" << format_double(s.dt) << " start=" << format_double(s.start_time)
           << '\n';
    }
}

}  // namespace

void write_waveform(std::ostream& os, const RunConfig& config, const SampledWaveform& waveform) {
    write_run_header(os, config);
    write_segments(os, waveform);
    os << "# t_seconds, amplitude_hz, phase_rad\n";
    const auto times = waveform.sample_times();
    for (std::size_t i = 0; i < waveform.size(); ++i)
        os << format_double(times[i]) << ", " << format_double(rad_to_hz(waveform.amplitude[i])) << ", "
           << format_double(waveform.phase[i]) << '\n';
}

void write_profile(std::ostream& os, const RunConfig& config, const PhaseCorrectedProfile& profile) {
    write_run_header(os, config);
    os << "# label " << profile.source.label << '\n';
    os << "# dt " << format_double(profile.source.dt) << '\n';
    os << "# zero_order_phase_rad " << format_double(profile.applied_phase)
       << (profile.degenerate ? " (degenerate)" : "") << '\n';
    os << "# offset_hz, mx, my, mz, phase_deg, transverse_mag\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto& m = profile.corrected[i];
        os << format_double(rad_to_hz(profile.source.offsets[i])) << ", " << format_double(m.mx) << ", "
           << format_double(m.my) << ", " << format_double(m.mz) << ", "
           << format_double(std::atan2(m.my, m.mx) * 180.0 / M_PI) << ", " << format_double(m.transverse())
           << '\n';
    }
}

void write_predictions(std::ostream& os, const RunConfig& config, const std::vector<PredictionRow>& rows) {
    write_run_header(os, config);
    os << "# delta_s, delta_omega_hz, excitation_rad, phi1_rad, residual_rad, edge_residual_rad, quadrature_rad, status\n";
    for (const auto& r : rows)
        os << format_double(r.delta_s) << ", " << format_double(r.delta_omega_hz) << ", " << format_double(r.excitation_rad)
           << ", " << format_double(r.phi1_rad) << ", " << format_double(r.residual_rad) << ", "
           << format_double(r.edge_residual_rad) << ", " << format_double(r.quadrature_rad) << ", " << r.status
           << '\n';
}

}  // namespace chirpex
