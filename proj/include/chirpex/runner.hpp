#pragma once

#include <string>
#include <vector>

#include "chirpex/analysis.hpp"
#include "chirpex/config.hpp"
#include "chirpex/export.hpp"
#include "chirpex/propagator.hpp"
#include "chirpex/waveform.hpp"

namespace chirpex {

// θ₀ used by the presets (cot²θ₀ = 2, the a ≈ 2.7A² design point).
inline double design_theta0() { return theta0_from_cot2(2.0); }

struct SimulationResult {
    RunConfig config;
    SequenceSpec sequence;
    SampledWaveform waveform;
    PhaseCorrectedProfile profile;
    ProfileMetrics metrics;  // over [−B, B]
    double predicted_edge_residual_deg = 0.0;
    double max_norm_error = 0.0;
};

// Build, sample, sweep the grid, zero-order correct and summarize. No file output.
SimulationResult simulate(const RunConfig& config);

// Human-readable summary (band metrics, prediction, wall time, warnings).
std::string summary(const SimulationResult& result);

// Analytic rows for config.delta_fractions (× T1) plus the far-edge row Δ = 2B/a.
std::vector<PredictionRow> predict(const RunConfig& config);

// Output file names inside config.output_dir.
inline constexpr const char* kProfileFile = "profile.txt";
inline constexpr const char* kPredictFile = "predict.txt";
inline constexpr const char* kWaveformFile = "waveform.txt";

// Each writes its file into config.output_dir (created if missing) and returns the path.
// Throws IoError when the file cannot be written.
std::string run_simulate(const RunConfig& config, SimulationResult* result = nullptr);
std::string run_predict(const RunConfig& config, std::vector<PredictionRow>* rows = nullptr);
std::string run_waveform(const RunConfig& config, SampledWaveform* waveform = nullptr);

}  // namespace chirpex
