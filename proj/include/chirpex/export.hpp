#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chirpex/analysis.hpp"
#include "chirpex/config.hpp"
#include "chirpex/waveform.hpp"

namespace chirpex {

// One row of the analytic prediction table; non-finite entries are written as nan.
struct PredictionRow {
    double delta_s = 0.0;
    double delta_omega_hz = 0.0;
    double excitation_rad = 0.0;       // excitation_phase_diff
    double phi1_rad = 0.0;      // inversion_phase_diff
    double residual_rad = 0.0;  // combined_residual
    double edge_residual_rad = 0.0;
    double quadrature_rad = 0.0;  // quadrature counterpart of excitation_rad
    std::string status = "ok";
};

// `#`-prefixed lines: tool version, config hash and canonical config JSON.
void write_run_header(std::ostream& os, const RunConfig& config);

// Columns: t_seconds, amplitude_hz, phase_rad.
void write_waveform(std::ostream& os, const RunConfig& config, const SampledWaveform& waveform);

// Columns: offset_hz, mx, my, mz, phase_deg, transverse_mag (zero-order corrected).
void write_profile(std::ostream& os, const RunConfig& config, const PhaseCorrectedProfile& profile);

// Columns: delta_s, delta_omega_hz, excitation_rad, phi1_rad, residual_rad, edge_residual_rad, quadrature_rad, status.
void write_predictions(std::ostream& os, const RunConfig& config, const std::vector<PredictionRow>& rows);

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace chirpex
