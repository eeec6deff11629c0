#include "chirpex/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chirpex/errors.hpp"

namespace chirpex {

using nlohmann::json;

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::two_pulse: return "two_pulse";
        case SequenceKind::chorus: return "chorus";
        case SequenceKind::chorus_tapered: return "chorus_tapered";
        case SequenceKind::custom: return "custom";
    }
    return "custom";
}

SequenceKind sequence_kind_from_string(std::string_view name) {
    if (name == "two_pulse") return SequenceKind::two_pulse;
    if (name == "chorus") return SequenceKind::chorus;
    if (name == "chorus_tapered") return SequenceKind::chorus_tapered;
    if (name == "custom") return SequenceKind::custom;
    throw ConfigError("unknown sequence kind '" + std::string(name) + "'");
}

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << field << " must be positive, got " << v;
        throw ConfigError(msg.str());
    }
}

double largest_sweep(const RunConfig& c) {
    if (c.sequence != SequenceKind::custom) return hz_to_rad(c.half_sweep_hz);
    double widest = 0.0;
    for (const auto& s : c.custom_segments)
        if (const auto* ch = std::get_if<Chirp>(&s)) widest = std::max(widest, ch->params.half_sweep);
    return widest;
}

json segment_to_json(const Segment& s) {
    if (const auto* ch = std::get_if<Chirp>(&s)) {
        const auto& p = ch->params;
        return {{"type", "chirp"},
                {"amplitude_hz", rad_to_hz(p.amplitude)},
                {"half_sweep_hz", rad_to_hz(p.half_sweep)},
                {"sweep_rate", p.sweep_rate},
                {"taper_fraction", p.taper_fraction},
                {"role", p.role == PulseRole::invert_pi ? "invert_pi" : "excite_half_pi"}};
    }
    return {{"type", "delay"}, {"duration_s", std::get<Delay>(s).duration}};
}

Segment segment_from_json(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "delay") return Delay{j.at("duration_s").get<double>()};
    if (type != "chirp") throw ConfigError("custom segment type must be 'chirp' or 'delay'");
    ChirpParams p;
    p.amplitude = hz_to_rad(j.at("amplitude_hz").get<double>());
    p.half_sweep = hz_to_rad(j.at("half_sweep_hz").get<double>());
    if (j.contains("sweep_rate")) {
        p.sweep_rate = j.at("sweep_rate").get<double>();
    } else {
        p.sweep_rate = j.value("sweep_rate_factor", 2.7) * p.amplitude * p.amplitude;
    }
    p.taper_fraction = j.value("taper_fraction", 0.0);
    const auto role = j.value("role", std::string("excite_half_pi"));
    if (role == "invert_pi")
        p.role = PulseRole::invert_pi;
    else if (role == "excite_half_pi")
        p.role = PulseRole::excite_half_pi;
    else
        throw ConfigError("chirp role must be 'excite_half_pi' or 'invert_pi'");
    p.validate();
    return Chirp{p};
}

// Builders enforce the adiabaticity limits; validate() runs this too so they surface as config errors.
SequenceSpec build_unchecked(const RunConfig& c) {
    const double A = hz_to_rad(c.amplitude_hz);
    const double A1 = hz_to_rad(c.pi_amplitude_hz);
    const double B = hz_to_rad(c.bandwidth_hz);
    const double C = hz_to_rad(c.half_sweep_hz);
    const double a = c.sweep_rate_rad();
    SequenceSpec spec;
    switch (c.sequence) {
        case SequenceKind::two_pulse: spec = build_two_pulse(A, A1, B, C, a); break;
        case SequenceKind::chorus:
        case SequenceKind::chorus_tapered: spec = build_chorus(A, A1, B, C, a, c.taper_fraction); break;
        case SequenceKind::custom: spec.segments = c.custom_segments; break;
    }
    spec.label = c.name;
    return spec;
}

}  // namespace

void RunConfig::validate() const {
    require_positive(amplitude_hz, "amplitude_hz");
    require_positive(pi_amplitude_hz, "pi_amplitude_hz");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(half_sweep_hz, "half_sweep_hz");
    require_positive(sweep_rate_rad(), "sweep rate");
    require_positive(grid.half_bandwidth_hz, "grid.half_bandwidth_hz");
    require_positive(grid.step_hz, "grid.step_hz");
    if (bandwidth_hz >= half_sweep_hz) {
        std::ostringstream msg;
        msg << "bandwidth B = " << bandwidth_hz << " Hz must be below the half sweep C = " << half_sweep_hz << " Hz";
        throw ConfigError(msg.str());
    }
    if (hz_to_rad(grid.half_bandwidth_hz) > largest_sweep(*this) * (1.0 + 1e-12))
        throw ConfigError("grid extent exceeds the sweep half-width C");
    if (!(taper_fraction >= 0.0 && taper_fraction < 0.5)) throw ConfigError("taper_fraction must lie in [0, 0.5)");
    if (dt_s < 0.0) throw ConfigError("dt_s must be non-negative");
    if (!(max_phase_step > 0.0) || !(max_rotation_step > 0.0)) throw ConfigError("sampling bounds must be positive");
    if (sequence == SequenceKind::custom && custom_segments.empty())
        throw ConfigError("custom sequence needs custom_segments");
    try {
        (void)OffsetGrid::from_step(hz_to_rad(grid.half_bandwidth_hz), hz_to_rad(grid.step_hz));
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    (void)build_unchecked(*this);
}

double RunConfig::sweep_rate_rad() const {
    if (sweep_rate) return *sweep_rate;
    const double A = hz_to_rad(amplitude_hz);
    return sweep_rate_factor * A * A;
}

SequenceSpec RunConfig::build_sequence() const {
    validate();
    return build_unchecked(*this);
}

DispersionModel RunConfig::dispersion_model() const {
    DispersionModel m{hz_to_rad(amplitude_hz), hz_to_rad(pi_amplitude_hz), sweep_rate_rad(), hz_to_rad(bandwidth_hz),
                      hz_to_rad(half_sweep_hz)};
    m.validate();
    return m;
}

OffsetGrid RunConfig::offset_grid() const {
    return OffsetGrid::from_step(hz_to_rad(grid.half_bandwidth_hz), hz_to_rad(grid.step_hz));
}

SamplingPolicy RunConfig::sampling_policy() const {
    SamplingPolicy p;
    p.max_phase_step = max_phase_step;
    p.max_rotation_step = max_rotation_step;
    p.max_offset = hz_to_rad(grid.half_bandwidth_hz);
    p.fixed_dt = dt_s;
    return p;
}

json RunConfig::to_json() const {
    json j{{"name", name},
           {"sequence", to_string(sequence)},
           {"amplitude_hz", amplitude_hz},
           {"pi_amplitude_hz", pi_amplitude_hz},
           {"bandwidth_hz", bandwidth_hz},
           {"half_sweep_hz", half_sweep_hz},
           {"sweep_rate_factor", sweep_rate_factor},
           {"taper_fraction", taper_fraction},
           {"grid", {{"half_bandwidth_hz", grid.half_bandwidth_hz}, {"step_hz", grid.step_hz}}},
           {"sampling", {{"dt_s", dt_s}, {"max_phase_step", max_phase_step}, {"max_rotation_step", max_rotation_step}}},
           {"delta_fractions", delta_fractions},
           {"threads", threads},
           {"output_dir", output_dir}};
    j["sweep_rate"] = sweep_rate ? json(*sweep_rate) : json(nullptr);
    if (!custom_segments.empty()) {
        json segs = json::array();
        for (const auto& s : custom_segments) segs.push_back(segment_to_json(s));
        j["custom_segments"] = segs;
    }
    return j;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    try {
        c.name = j.value("name", c.name);
        c.sequence = sequence_kind_from_string(j.value("sequence", to_string(c.sequence)));
        c.amplitude_hz = j.value("amplitude_hz", c.amplitude_hz);
        c.pi_amplitude_hz = j.value("pi_amplitude_hz", c.pi_amplitude_hz);
        c.bandwidth_hz = j.value("bandwidth_hz", c.bandwidth_hz);
        c.half_sweep_hz = j.value("half_sweep_hz", c.half_sweep_hz);
        c.sweep_rate_factor = j.value("sweep_rate_factor", c.sweep_rate_factor);
        if (j.contains("sweep_rate") && !j["sweep_rate"].is_null()) c.sweep_rate = j["sweep_rate"].get<double>();
        c.taper_fraction = j.value("taper_fraction", c.taper_fraction);
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            c.grid.half_bandwidth_hz = g.value("half_bandwidth_hz", c.grid.half_bandwidth_hz);
            c.grid.step_hz = g.value("step_hz", c.grid.step_hz);
        }
        if (j.contains("sampling")) {
            const auto& s = j["sampling"];
            c.dt_s = s.value("dt_s", c.dt_s);
            c.max_phase_step = s.value("max_phase_step", c.max_phase_step);
            c.max_rotation_step = s.value("max_rotation_step", c.max_rotation_step);
        }
        if (j.contains("delta_fractions")) c.delta_fractions = j["delta_fractions"].get<std::vector<double>>();
        c.threads = j.value("threads", c.threads);
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("custom_segments"))
            for (const auto& s : j["custom_segments"]) c.custom_segments.push_back(segment_from_json(s));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

std::uint64_t RunConfig::hash() const {
    json j = to_json();
    j.erase("output_dir");
    j.erase("threads");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    c.name = std::string(name);
    if (name == "fig4a") {
        c.sequence = SequenceKind::two_pulse;
        c.amplitude_hz = 1e3;
        c.pi_amplitude_hz = 10e3;
        c.bandwidth_hz = 50e3;
        c.half_sweep_hz = 400e3;
        c.grid = {50e3, 2e3};
    } else if (name == "fig4b") {
        c.sequence = SequenceKind::chorus;
        c.amplitude_hz = 1e3;
        c.pi_amplitude_hz = 10e3;
        c.bandwidth_hz = 50e3;
        c.half_sweep_hz = 150e3;
        c.grid = {50e3, 2e3};
    } else if (name == "fig5") {
        c.sequence = SequenceKind::chorus_tapered;
        c.amplitude_hz = 3e3;
        c.pi_amplitude_hz = 15e3;
        c.bandwidth_hz = 150e3;
        c.half_sweep_hz = 180e3;
        c.taper_fraction = 0.1;
        c.grid = {150e3, 6e3};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig4a, fig4b or fig5)");
    }
    c.sweep_rate_factor = 2.7;
    return c;
}

std::vector<std::string> preset_names() { return {"fig4a", "fig4b", "fig5"}; }

}  // namespace chirpex
