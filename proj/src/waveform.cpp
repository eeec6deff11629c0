#include "chirpex/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chirpex/errors.hpp"
#include "chirpex/rotations.hpp"

namespace chirpex {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_band(double bandwidth, double half_sweep) {
    if (!(bandwidth > 0.0) || !(half_sweep > bandwidth)) {
        std::ostringstream msg;
        msg << "sequence requires C > B > 0 (B = " << bandwidth << ", C = " << half_sweep << " rad/s)";
        throw ConfigError(msg.str());
    }
}

// A₁²/a₁ for an inversion chirp; errors below the hard ratio, warns below the soft one.
void check_inversion(const ChirpParams& p, const char* which, std::vector<std::string>& warnings) {
    const double ratio = p.amplitude * p.amplitude / p.sweep_rate;
    std::ostringstream msg;
    msg << which << " pi pulse: A1^2/a1 = " << ratio;
    if (ratio < kAdiabaticHardRatio) {
        msg << " < " << kAdiabaticHardRatio
            << "; inversion is not adiabatic. Raise the pi amplitude or lower the sweep rate.";
        throw ConfigError(msg.str());
    }
    if (ratio < kAdiabaticWarnRatio) {
        msg << " < " << kAdiabaticWarnRatio << "; adiabatic inversion is marginal";
        warnings.push_back(msg.str());
    }
}

}  // namespace

void ChirpParams::validate() const {
    if (!(amplitude > 0.0) || !(half_sweep > 0.0) || !(sweep_rate > 0.0))
        throw ConfigError("chirp requires A > 0, C > 0 and a > 0");
    if (!std::isfinite(duration()) || !(duration() > 0.0)) throw ConfigError("chirp duration 2C/a is not finite");
    if (!(taper_fraction >= 0.0 && taper_fraction < 0.5)) throw ConfigError("taper fraction must lie in [0, 0.5)");
}

double segment_duration(const ChirpParams& params) { return 2.0 * params.half_sweep / params.sweep_rate; }

double segment_duration(const Segment& segment) {
    return std::visit(overloaded{[](const Chirp& c) { return segment_duration(c.params); },
                                 [](const Delay& d) { return d.duration; }},
                      segment);
}

double SequenceSpec::total_duration() const {
    double total = 0.0;
    for (const auto& s : segments) total += segment_duration(s);
    return total;
}

double chirp_phase(double t, const ChirpParams& params) {
    const double T = params.duration();
    if (!(t >= 0.0 && t <= T)) {
        std::ostringstream msg;
        msg << "chirp_phase: t = " << t << " outside [0, " << T << "]";
        throw DomainError(msg.str());
    }
    return -params.half_sweep * t + 0.5 * params.sweep_rate * t * t;
}

double sweep_rate_for(double theta0, double amplitude) {
    if (!(amplitude > 0.0)) throw DomainError("sweep_rate_for: amplitude must be positive");
    const double alpha = solve_alpha(theta0);
    if (alpha < 1e-6) throw DegenerateInputError("sweep_rate_for: alpha -> 0 (theta0 -> pi/4), sweep rate diverges");
    return 2.0 * amplitude * amplitude / (std::tan(theta0) * alpha);
}

SequenceSpec build_two_pulse(double amplitude, double pi_amplitude, double bandwidth, double half_sweep,
                             double sweep_rate) {
    check_band(bandwidth, half_sweep);
    const ChirpParams excite{amplitude, half_sweep, sweep_rate, 0.0, PulseRole::excite_half_pi};
    const ChirpParams invert{pi_amplitude, half_sweep, 2.0 * sweep_rate, 0.0, PulseRole::invert_pi};
    excite.validate();
    invert.validate();

    SequenceSpec spec;
    spec.label = "two_pulse";
    check_inversion(invert, "final", spec.warnings);
    const double T = excite.duration();
    spec.segments = {Chirp{excite}, Chirp{invert}, Delay{0.5 * T}};
    return spec;
}

SequenceSpec build_chorus(double amplitude, double pi_amplitude, double bandwidth, double half_sweep,
                          double sweep_rate, double taper_fraction) {
    check_band(bandwidth, half_sweep);
    const ChirpParams excite{amplitude, half_sweep, sweep_rate, taper_fraction, PulseRole::excite_half_pi};
    const ChirpParams center{pi_amplitude / std::sqrt(2.0), half_sweep, sweep_rate, taper_fraction,
                             PulseRole::invert_pi};
    const ChirpParams last{pi_amplitude, half_sweep, 2.0 * sweep_rate, taper_fraction, PulseRole::invert_pi};
    excite.validate();
    center.validate();
    last.validate();

    SequenceSpec spec;
    spec.label = taper_fraction > 0.0 ? "chorus_tapered" : "chorus";
    check_inversion(center, "center", spec.warnings);
    check_inversion(last, "final", spec.warnings);
    const double T = excite.duration();
    spec.segments = {Chirp{excite}, Chirp{center}, Delay{0.5 * T}, Chirp{last}};
    return spec;
}

std::vector<double> taper_envelope(std::size_t n_samples, double taper_fraction) {
    if (!(taper_fraction >= 0.0 && taper_fraction < 0.5))
        throw DomainError("taper_envelope: taper fraction must lie in [0, 0.5)");
    std::vector<double> gain(n_samples, 1.0);
    if (taper_fraction == 0.0 || n_samples == 0) return gain;

    auto ramp = static_cast<std::size_t>(std::lround(taper_fraction * static_cast<double>(n_samples)));
    ramp = std::clamp<std::size_t>(ramp, 1, std::max<std::size_t>(1, n_samples / 2));
    for (std::size_t k = 0; k < ramp && k < n_samples; ++k) {
        const double s = std::sin(0.5 * M_PI * static_cast<double>(k) / static_cast<double>(ramp));
        gain[k] = s * s;
        gain[n_samples - 1 - k] = s * s;
    }
    return gain;
}

double SamplingPolicy::choose_dt(const SequenceSpec& spec) const {
    if (fixed_dt > 0.0) return fixed_dt;
    double dt = std::numeric_limits<double>::infinity();
    double peak = 0.0;
    for (const auto& seg : spec.segments) {
        if (const auto* c = std::get_if<Chirp>(&seg)) {
            const auto& p = c->params;
            // (C + a·dt)·dt ≤ max_phase_step
            const double disc = p.half_sweep * p.half_sweep + 4.0 * p.sweep_rate * max_phase_step;
            dt = std::min(dt, 2.0 * max_phase_step / (p.half_sweep + std::sqrt(disc)));
            peak = std::max(peak, p.amplitude);
        }
    }
    const double field = std::hypot(peak, max_offset);
    if (field > 0.0) dt = std::min(dt, max_rotation_step / field);
    if (!std::isfinite(dt)) {
        // Delay-only sequence without offsets: one sample per segment is exact.
        dt = 0.0;
        for (const auto& seg : spec.segments) dt = std::max(dt, segment_duration(seg));
    }
    return dt;
}

double SampledWaveform::total_duration() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.dt * static_cast<double>(s.count);
    return total;
}

double SampledWaveform::max_amplitude() const {
    double peak = 0.0;
    for (double a : amplitude) peak = std::max(peak, a);
    return peak;
}

std::vector<double> SampledWaveform::sample_times() const {
    std::vector<double> t(size());
    for (const auto& s : segments)
        for (std::size_t k = 0; k < s.count; ++k) t[s.first + k] = s.start_time + s.dt * static_cast<double>(k);
    return t;
}

SampledWaveform sample(const SequenceSpec& spec, const SamplingPolicy& policy) {
    if (spec.segments.empty()) throw ConfigError("sample: sequence has no segments");
    const double dt = policy.choose_dt(spec);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sample: could not choose a positive dt");

    std::vector<std::size_t> counts;
    std::size_t total = 0;
    for (const auto& seg : spec.segments) {
        const double d = segment_duration(seg);
        if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("sample: segment duration must be positive");
        const double ratio = d / dt;
        if (ratio > static_cast<double>(policy.max_samples)) throw ResourceError("sample: sample budget exceeded");
        // 1e-9 slack keeps exact multiples (1 ms / 1 µs) from rounding up.
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-9))));
        counts.push_back(n);
        total += n;
        if (total > policy.max_samples) {
            std::ostringstream msg;
            msg << "sample: dt = " << dt << " s needs more than " << policy.max_samples << " samples";
            throw ResourceError(msg.str());
        }
    }

    SampledWaveform w;
    w.label = spec.label;
    w.dt = dt;
    w.amplitude.reserve(total);
    w.phase.reserve(total);
    w.frequency.reserve(total);

    double start = 0.0;
    for (std::size_t s = 0; s < spec.segments.size(); ++s) {
        const std::size_t n = counts[s];
        const double d = segment_duration(spec.segments[s]);
        SampledSegment span;
        span.first = w.amplitude.size();
        span.count = n;
        span.dt = d / static_cast<double>(n);
        span.start_time = start;

        if (const auto* c = std::get_if<Chirp>(&spec.segments[s])) {
            span.kind = SegmentKind::chirp;
            const auto& p = c->params;
            const auto gain = taper_envelope(n, p.taper_fraction);
            for (std::size_t k = 0; k < n; ++k) {
                const double t = span.dt * static_cast<double>(k);
                w.amplitude.push_back(p.amplitude * gain[k]);
                w.phase.push_back(chirp_phase(t, p));
                w.frequency.push_back(p.frequency_at(t + 0.5 * span.dt));
            }
        } else {
            span.kind = SegmentKind::delay;
            w.amplitude.insert(w.amplitude.end(), n, 0.0);
            w.phase.insert(w.phase.end(), n, 0.0);
            w.frequency.insert(w.frequency.end(), n, 0.0);
        }
        w.segments.push_back(span);
        start += d;
    }
    return w;
}

}  // namespace chirpex
