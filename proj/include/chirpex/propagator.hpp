#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chirpex/rotations.hpp"
#include "chirpex/waveform.hpp"

namespace chirpex {

// Symmetric offset grid over [−B, B] with n_points ≥ 2 (rad/s).
class OffsetGrid {
public:
    OffsetGrid(double half_bandwidth, std::size_t n_points);

    // Grid covering [−B, B] in increments of `step` (B must be a multiple of step within 1e-6).
    static OffsetGrid from_step(double half_bandwidth, double step);

    double half_bandwidth() const { return half_bandwidth_; }
    std::size_t size() const { return n_points_; }
    double spacing() const { return 2.0 * half_bandwidth_ / static_cast<double>(n_points_ - 1); }
    double offset(std::size_t i) const;
    std::vector<double> offsets() const;

private:
    double half_bandwidth_;
    std::size_t n_points_;
};

struct ExcitationProfile {
    std::vector<double> offsets;  // rad/s
    std::vector<MagVector> final_states;
    std::string label;
    double dt = 0.0;
    double wall_time_s = 0.0;

    std::size_t size() const { return offsets.size(); }
};

// Exact rotation of `state` about (A cos φ, A sin φ, ω₀) by ‖·‖·dt.
MagVector step(const MagVector& state, double amplitude, double phase, double offset, double dt);

// Bloch propagation through every sample of `waveform`. Each sample is stepped exactly in the
// frame co-rotating with its phase, so the linear phase ramp inside a sample is integrated exactly.
MagVector propagate(const SampledWaveform& waveform, double offset, const MagVector& initial = MagVector::ez());

struct Trajectory {
    std::vector<double> times;  // s, at sample boundaries
    std::vector<MagVector> states;
};

// States at t = 0, after every `stride`-th sample, and at the end.
Trajectory trajectory(const SampledWaveform& waveform, double offset, const MagVector& initial,
                      std::size_t stride = 1);

// Classical RK4 of dM/dt = b(t) × M on the same per-sample field, `refinement` substeps per sample.
// Verification oracle only.
MagVector rk4_oracle(const SampledWaveform& waveform, double offset, const MagVector& initial = MagVector::ez(),
                     int refinement = 8);

// ω̃ = √((ω₀ − ω_c(t))² + A²), ω_c(t) = −C + a·t.
double effective_field(double offset, double t, const ChirpParams& params);

// min over stages I/III of ω̃²/a = A²(1 + cot²θ₀)/a. ≥ 1 is treated as adiabatic.
double adiabaticity_margin(const ChirpParams& params, double theta0);

// Propagates every grid offset from e_z. Results are index-ordered and independent of `threads`
// (0 = hardware concurrency).
ExcitationProfile sweep_profile(const SampledWaveform& waveform, const OffsetGrid& grid, unsigned threads = 0);
ExcitationProfile sweep_profile(const SampledWaveform& waveform, const std::vector<double>& offsets,
                                unsigned threads = 0);

// Largest |‖M‖ − 1| over a profile.
double max_norm_error(const ExcitationProfile& profile);

}  // namespace chirpex
