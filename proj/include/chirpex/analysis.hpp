#pragma once

#include <cstddef>
#include <vector>

#include "chirpex/propagator.hpp"
#include "chirpex/waveform.hpp"

namespace chirpex {

// Parameters of the analytic phase-dispersion predictions. All rad/s, rad/s², s.
// Δ (passed per call) is the time the sweep takes to move from −B to the offset of interest.
struct DispersionModel {
    double amplitude = 0.0;     // A, excitation chirp
    double pi_amplitude = 0.0;  // A1, final inversion chirp
    double sweep_rate = 0.0;    // a
    double bandwidth = 0.0;     // B
    double half_sweep = 0.0;    // C

    // Time from −C to −B.
    double t0() const { return (half_sweep - bandwidth) / sweep_rate; }
    // Time from −B to C.
    double t1() const { return (half_sweep + bandwidth) / sweep_rate; }
    double total_time() const { return 2.0 * half_sweep / sweep_rate; }

    double delta_for_offset_shift(double shift) const { return shift / sweep_rate; }
    double offset_shift_for_delta(double delta) const { return sweep_rate * delta; }

    // Throws ConfigError unless C > B > 0 and A, A1, a > 0.
    void validate() const;
};

// Φ(−B) − Φ(−B + aΔ) for the excitation chirp:
// (a/2)(2T1Δ − Δ²) + (A²/2a)·ln(T1/(T1 − Δ)).
double excitation_phase_diff(double delta, const DispersionModel& model);

// Φ₁(−B) − Φ₁(−B + aΔ) for the inversion chirp at rate 2a:
// (a/4)(2(T1 − T0)Δ − 2Δ²) + (A1²/4a)·ln(T1T0/((T1 − Δ)(T0 + Δ))).
double inversion_phase_diff(double delta, const DispersionModel& model);

// Residual left after the π pulse and the T/2 delay:
// (A1²/4a)·ln((T1 − Δ)(T0 + Δ)/(T1T0)) + (A²/2a)·ln(T1/(T1 − Δ)).
// Equals excitation_phase_diff − inversion_phase_diff − aTΔ/2.
double combined_residual(double delta, const DispersionModel& model);

// Residual at the far band edge Δ = 2B/a: (A²/2a)·ln((1 + B/C)/(1 − B/C)).
double edge_residual(const DispersionModel& model);

// ∫ √((ω₀ − ω_c(t))² + A²) dt over [from_t, to_t] of the chirp, by adaptive Gauss–Kronrod
// quadrature to 1e-9 rad absolute.
double numeric_phase_integral(double offset, const ChirpParams& params, double from_t, double to_t);

// Quadrature counterpart of excitation_phase_diff: the stage-III phase Φ(ω₀) = ∫ω̃ dt from
// t1 after the resonance crossing to the end of the sweep, differenced between −B and −B + aΔ.
// theta0 fixes t1 = A·cot θ₀ / a.
double quadrature_excitation_phase_diff(double delta, const DispersionModel& model, double theta0);

struct PhaseCorrectedProfile {
    ExcitationProfile source;
    double applied_phase = 0.0;  // φ₀, rad; corrected = Rz(φ₀)·source
    std::vector<MagVector> corrected;
    bool degenerate = false;  // no transverse signal to align

    std::size_t size() const { return corrected.size(); }
};

// Rotates every state by φ₀ about z.
PhaseCorrectedProfile apply_zero_order(const ExcitationProfile& profile, double phi0);

// Single φ₀ maximizing the mean corrected Mx, i.e. aligning Σ(Mx, My) with +x.
PhaseCorrectedProfile zero_order_correct(const ExcitationProfile& profile);

// Phase atan2(My, Mx) of each state, unwrapped by nearest-branch continuation outward from `seed`.
std::vector<double> unwrapped_phase(const std::vector<MagVector>& states, std::size_t seed);

struct ProfileMetrics {
    double min_mx = 0.0;
    double mean_mx = 0.0;
    double max_abs_phase_dev_deg = 0.0;
    double max_abs_mz = 0.0;
    std::size_t count = 0;
};

// Statistics over offsets in [band_lo, band_hi] (rad/s). Phase deviation is measured from +x
// after unwrapping seeded at the band center.
ProfileMetrics profile_metrics(const PhaseCorrectedProfile& profile, double band_lo, double band_hi);

}  // namespace chirpex
