#include "chirpex/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "chirpex/errors.hpp"

namespace chirpex {

void DispersionModel::validate() const {
    if (!(amplitude > 0.0) || !(pi_amplitude > 0.0) || !(sweep_rate > 0.0))
        throw ConfigError("DispersionModel: A, A1 and a must be positive");
    if (!(bandwidth > 0.0) || !(half_sweep > bandwidth)) throw ConfigError("DispersionModel: requires C > B > 0");
}

namespace {

void check_delta(double delta, const DispersionModel& model, const char* who) {
    if (!(delta >= 0.0 && delta < model.t1())) {
        std::ostringstream msg;
        msg << who << ": delta = " << delta << " s outside [0, T1 = " << model.t1() << ")";
        throw DomainError(msg.str());
    }
}

}  // namespace

double excitation_phase_diff(double delta, const DispersionModel& model) {
    check_delta(delta, model, "excitation_phase_diff");
    const double a = model.sweep_rate;
    const double t1 = model.t1();
    const double A = model.amplitude;
    return 0.5 * a * (2.0 * t1 * delta - delta * delta) + A * A / (2.0 * a) * std::log(t1 / (t1 - delta));
}

double inversion_phase_diff(double delta, const DispersionModel& model) {
    check_delta(delta, model, "inversion_phase_diff");
    const double a = model.sweep_rate;
    const double t0 = model.t0();
    const double t1 = model.t1();
    const double A1 = model.pi_amplitude;
    return 0.25 * a * (2.0 * (t1 - t0) * delta - 2.0 * delta * delta) +
           A1 * A1 / (4.0 * a) * std::log(t1 * t0 / ((t1 - delta) * (t0 + delta)));
}

double combined_residual(double delta, const DispersionModel& model) {
    check_delta(delta, model, "combined_residual");
    const double a = model.sweep_rate;
    const double t0 = model.t0();
    const double t1 = model.t1();
    const double A = model.amplitude;
    const double A1 = model.pi_amplitude;
    return A1 * A1 / (4.0 * a) * std::log((t1 - delta) * (t0 + delta) / (t1 * t0)) +
           A * A / (2.0 * a) * std::log(t1 / (t1 - delta));
}

double edge_residual(const DispersionModel& model) {
    if (!(model.bandwidth >= 0.0) || !(model.half_sweep > model.bandwidth))
        throw DomainError("edge_residual: requires C > B");
    const double r = model.bandwidth / model.half_sweep;
    const double A = model.amplitude;
    return A * A / (2.0 * model.sweep_rate) * std::log((1.0 + r) / (1.0 - r));
}

double numeric_phase_integral(double offset, const ChirpParams& params, double from_t, double to_t) {
    if (!(to_t >= from_t)) throw PreconditionError("numeric_phase_integral: to_t < from_t");
    if (to_t == from_t) return 0.0;
    const double A = params.amplitude;
    auto integrand = [&](double t) { return std::hypot(offset - params.frequency_at(t), A); };

    // The integrand has a curvature spike (a kink when A = 0) at the resonance crossing.
    std::vector<double> knots{from_t};
    const double crossing = (offset + params.half_sweep) / params.sweep_rate;
    if (crossing > from_t && crossing < to_t) knots.push_back(crossing);
    knots.push_back(to_t);

    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k];
        const double hi = knots[k + 1];
        const double scale = std::max(integrand(lo), integrand(hi)) * (hi - lo);
        // Relative tolerance; below ~1e-13 the error estimate is roundoff and never converges.
        const double tol = std::max(1e-9 / (4.0 * std::max(scale, 1e-300)), 1e-13);
        total += Quad::integrate(integrand, lo, hi, 15, tol);
    }
    return total;
}

double quadrature_excitation_phase_diff(double delta, const DispersionModel& model, double theta0) {
    check_delta(delta, model, "quadrature_excitation_phase_diff");
    const ChirpParams chirp{model.amplitude, model.half_sweep, model.sweep_rate, 0.0, PulseRole::excite_half_pi};
    const double stage3_lag = model.amplitude / (std::tan(theta0) * model.sweep_rate);
    const double end = chirp.duration();

    auto stage3_phase = [&](double offset) {
        const double crossing = (offset + model.half_sweep) / model.sweep_rate;
        const double start = crossing + stage3_lag;
        if (!(start < end)) throw DomainError("quadrature_excitation_phase_diff: stage III starts after the sweep ends");
        return numeric_phase_integral(offset, chirp, start, end);
    };
    return stage3_phase(-model.bandwidth) - stage3_phase(-model.bandwidth + model.offset_shift_for_delta(delta));
}

PhaseCorrectedProfile apply_zero_order(const ExcitationProfile& profile, double phi0) {
    PhaseCorrectedProfile out;
    out.source = profile;
    out.applied_phase = phi0;
    out.corrected.reserve(profile.size());
    const double c = std::cos(phi0);
    const double s = std::sin(phi0);
    for (const auto& m : profile.final_states) out.corrected.push_back({c * m.mx - s * m.my, s * m.mx + c * m.my, m.mz});
    return out;
}

PhaseCorrectedProfile zero_order_correct(const ExcitationProfile& profile) {
    if (profile.size() == 0) throw PreconditionError("zero_order_correct: empty profile");
    double sx = 0.0;
    double sy = 0.0;
    double mag = 0.0;
    for (const auto& m : profile.final_states) {
        sx += m.mx;
        sy += m.my;
        mag += m.transverse();
    }
    const double resultant = std::hypot(sx, sy);
    if (mag == 0.0 || resultant <= 1e-12 * mag) {
        auto out = apply_zero_order(profile, 0.0);
        out.degenerate = true;
        return out;
    }
    return apply_zero_order(profile, -std::atan2(sy, sx));
}

std::vector<double> unwrapped_phase(const std::vector<MagVector>& states, std::size_t seed) {
    std::vector<double> phase(states.size());
    if (states.empty()) return phase;
    if (seed >= states.size()) throw PreconditionError("unwrapped_phase: seed out of range");
    auto nearest = [](double raw, double ref) { return raw + 2.0 * M_PI * std::round((ref - raw) / (2.0 * M_PI)); };
    phase[seed] = std::atan2(states[seed].my, states[seed].mx);
    for (std::size_t i = seed + 1; i < states.size(); ++i)
        phase[i] = nearest(std::atan2(states[i].my, states[i].mx), phase[i - 1]);
    for (std::size_t i = seed; i-- > 0;) phase[i] = nearest(std::atan2(states[i].my, states[i].mx), phase[i + 1]);
    return phase;
}

ProfileMetrics profile_metrics(const PhaseCorrectedProfile& profile, double band_lo, double band_hi) {
    if (!(band_hi >= band_lo)) throw PreconditionError("profile_metrics: band_hi < band_lo");
    const double slack = 1e-9 * std::max({std::abs(band_lo), std::abs(band_hi), 1.0});
    const auto& offsets = profile.source.offsets;

    std::vector<MagVector> in_band;
    std::vector<double> in_offsets;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (offsets[i] >= band_lo - slack && offsets[i] <= band_hi + slack) {
            in_band.push_back(profile.corrected[i]);
            in_offsets.push_back(offsets[i]);
        }
    }
    if (in_band.empty()) throw PreconditionError("profile_metrics: no offsets inside the band");

    const double center = 0.5 * (band_lo + band_hi);
    std::size_t seed = 0;
    for (std::size_t i = 1; i < in_offsets.size(); ++i)
        if (std::abs(in_offsets[i] - center) < std::abs(in_offsets[seed] - center)) seed = i;
    const auto phase = unwrapped_phase(in_band, seed);

    ProfileMetrics m;
    m.count = in_band.size();
    m.min_mx = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < in_band.size(); ++i) {
        m.min_mx = std::min(m.min_mx, in_band[i].mx);
        sum += in_band[i].mx;
        m.max_abs_mz = std::max(m.max_abs_mz, std::abs(in_band[i].mz));
        m.max_abs_phase_dev_deg = std::max(m.max_abs_phase_dev_deg, std::abs(phase[i]) * 180.0 / M_PI);
    }
    m.mean_mx = sum / static_cast<double>(in_band.size());
    return m;
}

}  // namespace chirpex
