#include "chirpex/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "chirpex/errors.hpp"

namespace chirpex {

OffsetGrid::OffsetGrid(double half_bandwidth, std::size_t n_points)
    : half_bandwidth_(half_bandwidth), n_points_(n_points) {
    if (n_points_ < 2) throw PreconditionError("OffsetGrid: need at least 2 points");
    if (!(half_bandwidth_ > 0.0) || !std::isfinite(half_bandwidth_))
        throw PreconditionError("OffsetGrid: half bandwidth must be positive");
}

OffsetGrid OffsetGrid::from_step(double half_bandwidth, double step) {
    if (!(step > 0.0)) throw PreconditionError("OffsetGrid: step must be positive");
    const double intervals = 2.0 * half_bandwidth / step;
    const double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > 1e-6 * std::max(1.0, rounded))
        throw PreconditionError("OffsetGrid: 2B is not a whole number of steps");
    return OffsetGrid(half_bandwidth, static_cast<std::size_t>(rounded) + 1);
}

double OffsetGrid::offset(std::size_t i) const {
    // Symmetric construction: offset(i) == −offset(n−1−i) exactly.
    const double u = static_cast<double>(2 * i) - static_cast<double>(n_points_ - 1);
    return half_bandwidth_ * u / static_cast<double>(n_points_ - 1);
}

std::vector<double> OffsetGrid::offsets() const {
    std::vector<double> out(n_points_);
    for (std::size_t i = 0; i < n_points_; ++i) out[i] = offset(i);
    return out;
}

MagVector step(const MagVector& state, double amplitude, double phase, double offset, double dt) {
    const double bx = amplitude * std::cos(phase);
    const double by = amplitude * std::sin(phase);
    const double bz = offset;
    const double field = std::sqrt(bx * bx + by * by + bz * bz);
    if (field == 0.0) return state;
    const MagVector k{bx / field, by / field, bz / field};
    const double angle = field * dt;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const MagVector kxv = cross(k, state);
    const double kv = dot(k, state) * (1.0 - c);
    return {state.mx * c + kxv.mx * s + k.mx * kv, state.my * c + kxv.my * s + k.my * kv,
            state.mz * c + kxv.mz * s + k.mz * kv};
}

namespace {

MagVector rotate_z(const MagVector& v, double angle) {
    if (angle == 0.0) return v;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.mx - s * v.my, s * v.mx + c * v.my, v.mz};
}

// Walks samples [first, last) in the co-rotating frame. `frame` is the phase ψ with
// M_lab = Rz(ψ)·state; on return the state is still expressed in that frame.
template <class Visit>
void walk(const SampledWaveform& w, double offset, MagVector& state, double& frame, std::size_t first,
          std::size_t last, Visit&& visit) {
    for (const auto& seg : w.segments) {
        const std::size_t lo = std::max(first, seg.first);
        const std::size_t hi = std::min(last, seg.first + seg.count);
        for (std::size_t i = lo; i < hi; ++i) {
            state = rotate_z(state, frame - w.phase[i]);
            state = step(state, w.amplitude[i], 0.0, offset - w.frequency[i], seg.dt);
            frame = w.phase[i] + w.frequency[i] * seg.dt;
            visit(i, seg);
        }
    }
}

}  // namespace

MagVector propagate(const SampledWaveform& waveform, double offset, const MagVector& initial) {
    MagVector state = initial;
    double frame = 0.0;
    walk(waveform, offset, state, frame, 0, waveform.size(), [](std::size_t, const SampledSegment&) {});
    return rotate_z(state, frame);
}

Trajectory trajectory(const SampledWaveform& waveform, double offset, const MagVector& initial, std::size_t stride) {
    if (stride == 0) throw PreconditionError("trajectory: stride must be positive");
    Trajectory out;
    MagVector state = initial;
    double frame = 0.0;
    out.times.push_back(0.0);
    out.states.push_back(initial);
    std::size_t taken = 0;
    const std::size_t n = waveform.size();
    walk(waveform, offset, state, frame, 0, n, [&](std::size_t i, const SampledSegment& seg) {
        ++taken;
        if (taken % stride == 0 || i + 1 == n) {
            out.times.push_back(seg.start_time + seg.dt * static_cast<double>(i - seg.first + 1));
            out.states.push_back(rotate_z(state, frame));
        }
    });
    return out;
}

MagVector rk4_oracle(const SampledWaveform& waveform, double offset, const MagVector& initial, int refinement) {
    if (refinement < 1) throw PreconditionError("rk4_oracle: refinement must be >= 1");
    MagVector m = initial;
    for (const auto& seg : waveform.segments) {
        const double h = seg.dt / refinement;
        for (std::size_t i = seg.first; i < seg.first + seg.count; ++i) {
            const double amp = waveform.amplitude[i];
            const double phi0 = waveform.phase[i];
            const double freq = waveform.frequency[i];
            auto rhs = [&](double tau, const MagVector& v) {
                const double phi = phi0 + freq * tau;
                return cross(MagVector{amp * std::cos(phi), amp * std::sin(phi), offset}, v);
            };
            auto axpy = [](const MagVector& v, double s, const MagVector& d) {
                return MagVector{v.mx + s * d.mx, v.my + s * d.my, v.mz + s * d.mz};
            };
            for (int k = 0; k < refinement; ++k) {
                const double tau = h * k;
                const MagVector k1 = rhs(tau, m);
                const MagVector k2 = rhs(tau + 0.5 * h, axpy(m, 0.5 * h, k1));
                const MagVector k3 = rhs(tau + 0.5 * h, axpy(m, 0.5 * h, k2));
                const MagVector k4 = rhs(tau + h, axpy(m, h, k3));
                m.mx += h / 6.0 * (k1.mx + 2.0 * k2.mx + 2.0 * k3.mx + k4.mx);
                m.my += h / 6.0 * (k1.my + 2.0 * k2.my + 2.0 * k3.my + k4.my);
                m.mz += h / 6.0 * (k1.mz + 2.0 * k2.mz + 2.0 * k3.mz + k4.mz);
            }
        }
    }
    return m;
}

double effective_field(double offset, double t, const ChirpParams& params) {
    return std::hypot(offset - params.frequency_at(t), params.amplitude);
}

double adiabaticity_margin(const ChirpParams& params, double theta0) {
    const double cot = 1.0 / std::tan(theta0);
    return params.amplitude * params.amplitude * (1.0 + cot * cot) / params.sweep_rate;
}

ExcitationProfile sweep_profile(const SampledWaveform& waveform, const OffsetGrid& grid, unsigned threads) {
    return sweep_profile(waveform, grid.offsets(), threads);
}

ExcitationProfile sweep_profile(const SampledWaveform& waveform, const std::vector<double>& offsets,
                                unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    ExcitationProfile profile;
    profile.offsets = offsets;
    profile.final_states.resize(offsets.size());
    profile.label = waveform.label;
    profile.dt = waveform.dt;

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, offsets.size())));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < offsets.size(); i = next++)
            profile.final_states[i] = propagate(waveform, offsets[i]);
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
    }
    profile.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return profile;
}

double max_norm_error(const ExcitationProfile& profile) {
    double worst = 0.0;
    for (const auto& m : profile.final_states) worst = std::max(worst, std::abs(m.norm() - 1.0));
    return worst;
}

}  // namespace chirpex
