#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace chirpex {

inline constexpr double kTwoPi = 2.0 * M_PI;

inline constexpr double hz_to_rad(double hz) { return kTwoPi * hz; }
inline constexpr double rad_to_hz(double w) { return w / kTwoPi; }

enum class PulseRole { excite_half_pi, invert_pi };

// One linear chirp: frequency −C + a·t swept over t ∈ [0, 2C/a] with peak amplitude A.
// Units rad/s and rad/s².
struct ChirpParams {
    double amplitude = 0.0;   // A
    double half_sweep = 0.0;  // C
    double sweep_rate = 0.0;  // a
    double taper_fraction = 0.0;
    PulseRole role = PulseRole::excite_half_pi;

    double duration() const { return 2.0 * half_sweep / sweep_rate; }
    double frequency_at(double t) const { return -half_sweep + sweep_rate * t; }

    // Throws ConfigError when A, C, a or the taper are out of range.
    void validate() const;
};

struct Chirp {
    ChirpParams params;
};

struct Delay {
    double duration = 0.0;  // s
};

using Segment = std::variant<Chirp, Delay>;

double segment_duration(const ChirpParams& params);
double segment_duration(const Segment& segment);

struct SequenceSpec {
    std::string label;
    std::vector<Segment> segments;
    // Non-fatal notes raised while building (e.g. marginal adiabaticity).
    std::vector<std::string> warnings;

    double total_duration() const;
};

// φ(t) = −C·t + a·t²/2. Throws DomainError for t outside [0, 2C/a].
double chirp_phase(double t, const ChirpParams& params);

// a = 2A²·cot θ₀ / α(θ₀): stage II sweeps 2A·cot θ₀ in time α/A.
double sweep_rate_for(double theta0, double amplitude);

// A₁²/a₁ below this is rejected; below kAdiabaticWarnRatio a warning is attached.
inline constexpr double kAdiabaticHardRatio = 4.0;
inline constexpr double kAdiabaticWarnRatio = 10.0;

// [π/2 (A, C, a), π (A1, C, 2a), delay T/2]; total 2T.
SequenceSpec build_two_pulse(double amplitude, double pi_amplitude, double bandwidth, double half_sweep,
                             double sweep_rate);

// [π/2 (A, C, a), π (A1/√2, C, a), delay T/2, π (A1, C, 2a)]; total 3T.
SequenceSpec build_chorus(double amplitude, double pi_amplitude, double bandwidth, double half_sweep,
                          double sweep_rate, double taper_fraction = 0.0);

// Unit flat-top with sin² ramps over the first and last round(fraction·n) samples.
std::vector<double> taper_envelope(std::size_t n_samples, double taper_fraction);

struct SamplingPolicy {
    double max_phase_step = M_PI / 20;     // bound on |ω_c|·dt
    double max_rotation_step = M_PI / 20;  // bound on ‖(A cos φ, A sin φ, ω₀)‖·dt
    double max_offset = 0.0;               // largest |ω₀| that will be simulated, rad/s
    double fixed_dt = 0.0;                 // > 0 overrides the bounds above
    std::size_t max_samples = std::size_t{1} << 24;

    // Largest dt satisfying both bounds for every segment of `spec`.
    double choose_dt(const SequenceSpec& spec) const;
};

enum class SegmentKind { chirp, delay };

struct SampledSegment {
    SegmentKind kind = SegmentKind::delay;
    std::size_t first = 0;  // index of first sample
    std::size_t count = 0;
    double dt = 0.0;  // segment duration / count, ≤ the nominal dt
    double start_time = 0.0;
};

// Piecewise samples. Inside sample i (duration dt of its segment) the field is
// amplitude[i]·(cos φ, sin φ, ·) with φ(τ) = phase[i] + frequency[i]·τ, τ ∈ [0, dt).
// frequency[i] is the chirp frequency at the sample midpoint, so the phase reached at
// the end of a sample equals the exact chirp phase there.
struct SampledWaveform {
    std::string label;
    double dt = 0.0;  // nominal (policy) step
    std::vector<double> amplitude;
    std::vector<double> phase;
    std::vector<double> frequency;
    std::vector<SampledSegment> segments;

    std::size_t size() const { return amplitude.size(); }
    double total_duration() const;
    double max_amplitude() const;
    // Start time of every sample.
    std::vector<double> sample_times() const;
};

SampledWaveform sample(const SequenceSpec& spec, const SamplingPolicy& policy);

}  // namespace chirpex
