#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chirpex/analysis.hpp"
#include "chirpex/propagator.hpp"
#include "chirpex/waveform.hpp"

namespace chirpex {

inline constexpr const char* kVersion = "0.1.0";

enum class SequenceKind { two_pulse, chorus, chorus_tapered, custom };

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(std::string_view name);

struct GridConfig {
    double half_bandwidth_hz = 0.0;
    double step_hz = 0.0;
};

// Everything needed to reproduce a run. Frequencies are Hz; converted to rad/s on use.
struct RunConfig {
    std::string name = "custom";
    SequenceKind sequence = SequenceKind::chorus;
    double amplitude_hz = 0.0;      // π/2 chirp amplitude A
    double pi_amplitude_hz = 0.0;   // final π chirp amplitude A1
    double bandwidth_hz = 0.0;      // B
    double half_sweep_hz = 0.0;     // C
    double sweep_rate_factor = 2.7;  // a = factor·(2π·A)²
    std::optional<double> sweep_rate;  // rad/s², overrides the factor
    double taper_fraction = 0.0;
    GridConfig grid;
    double dt_s = 0.0;  // > 0 fixes the sample step
    double max_phase_step = M_PI / 20;
    double max_rotation_step = M_PI / 20;
    std::vector<double> delta_fractions{0.0, 0.1, 0.3, 0.5, 0.7, 0.9};  // Δ/T1 rows for predict
    unsigned threads = 0;
    std::string output_dir = ".";
    // Segments for SequenceKind::custom.
    std::vector<Segment> custom_segments;

    // Throws ConfigError on non-positive frequencies, B ≥ C or a grid wider than C.
    void validate() const;

    double sweep_rate_rad() const;
    SequenceSpec build_sequence() const;
    DispersionModel dispersion_model() const;
    OffsetGrid offset_grid() const;
    SamplingPolicy sampling_policy() const;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);

    // FNV-1a of the canonical JSON form. Excludes output_dir and threads, which never change results.
    std::uint64_t hash() const;
};

// fig4a, fig4b or fig5. Throws ConfigError for anything else.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace chirpex
