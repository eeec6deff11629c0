#include "chirpex/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "chirpex/config.hpp"
#include "chirpex/runner.hpp"

namespace chirpex {

QuadratureCheck check_against_quadrature(const DispersionModel& model, const PhaseDiffFn& closed_form,
                                         double tolerance) {
    QuadratureCheck check;
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double delta = f * model.t1();
        const double oracle = quadrature_excitation_phase_diff(delta, model, design_theta0());
        const double rel = std::abs(closed_form(delta, model) - oracle) / std::abs(oracle);
        check.worst_relative_error = std::max(check.worst_relative_error, rel);
    }
    check.passed = check.worst_relative_error <= tolerance;
    return check;
}

namespace {

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

bool bitwise_equal(const ExcitationProfile& a, const ExcitationProfile& b) {
    return a.size() == b.size() &&
           std::memcmp(a.final_states.data(), b.final_states.data(), a.size() * sizeof(MagVector)) == 0 &&
           std::memcmp(a.offsets.data(), b.offsets.data(), a.size() * sizeof(double)) == 0;
}

struct Suite {
    AcceptanceOptions options;
    double worst_norm_error = 0.0;

    // Shared fig4b artefacts, built once.
    RunConfig fig4b = preset("fig4b");
    SampledWaveform fig4b_waveform;
    ExcitationProfile fig4b_profile;

    void note_norm(const ExcitationProfile& p) { worst_norm_error = std::max(worst_norm_error, max_norm_error(p)); }
    void note_norm(const MagVector& m) { worst_norm_error = std::max(worst_norm_error, std::abs(m.norm() - 1.0)); }

    const SampledWaveform& waveform() {
        if (fig4b_waveform.size() == 0) fig4b_waveform = sample(fig4b.build_sequence(), fig4b.sampling_policy());
        return fig4b_waveform;
    }
    const ExcitationProfile& profile() {
        if (fig4b_profile.size() == 0) {
            fig4b_profile = sweep_profile(waveform(), fig4b.offset_grid(), options.threads);
            note_norm(fig4b_profile);
        }
        return fig4b_profile;
    }

    CriterionResult flip_condition() {
        const double a2 = solve_alpha(theta0_from_cot2(2.0));
        const double r2 = sweep_rate_for(theta0_from_cot2(2.0), 1.0);
        const double a3 = solve_alpha(theta0_from_cot2(3.0));
        const double r3 = sweep_rate_for(theta0_from_cot2(3.0), 1.0);
        const bool ok = std::abs(a2 - 1.0472) <= 1e-3 && std::abs(r2 - 2.70) <= 0.01 && std::abs(a3 - 1.23) <= 0.005 &&
                        std::abs(r3 - 2.81) <= 0.01;
        return {1, "flip-condition numbers", ok,
                "cot2=2: alpha=" + fmt(a2) + " a/A^2=" + fmt(r2) + "; cot2=3: alpha=" + fmt(a3) + " a/A^2=" + fmt(r3)};
    }

    CriterionResult preset_timing() {
        const auto a = preset("fig4a").build_sequence();
        const double T = segment_duration(a.segments.at(0));
        const double two_t = a.total_duration();
        const double b_total = preset("fig4b").build_sequence().total_duration();
        const double f5_total = preset("fig5").build_sequence().total_duration();
        const bool ok = std::abs(T * 1e3 - 47.15) <= 0.1 && std::abs(two_t - 2.0 * T) <= 1e-15 &&
                        std::abs(b_total * 1e3 - 53.05) <= 0.05 && std::abs(f5_total * 1e3 - 7.07) <= 0.02;
        return {2, "preset timing", ok,
                "fig4a T=" + fmt(T * 1e3) + " ms, 2T=" + fmt(two_t * 1e3) + " ms; fig4b total=" + fmt(b_total * 1e3) +
                    " ms; fig5 total=" + fmt(f5_total * 1e3) + " ms"};
    }

    CriterionResult edge() {
        const double A = 1.0;
        const DispersionModel m{A, 10.0, 2.7 * A * A, 1.0, 3.0};
        const double v = edge_residual(m);
        const double deg = v * 180.0 / M_PI;
        const bool ok = std::abs(v - std::log(2.0) / 5.4) <= 1e-12 && std::abs(deg - 7.0) <= 1.0;
        return {3, "edge residual", ok, "B/C=1/3: " + fmt(v, 10) + " rad = " + fmt(deg) + " deg"};
    }

    CriterionResult oracle() {
        const auto& w = waveform();
        const OffsetGrid grid(hz_to_rad(fig4b.bandwidth_hz), 11);
        auto worst_diff = [&](const SampledWaveform& wf) {
            double worst = 0.0;
            for (double off : grid.offsets()) {
                const MagVector p = propagate(wf, off);
                const MagVector r = rk4_oracle(wf, off, MagVector::ez(), 8);
                note_norm(p);
                worst = std::max({worst, std::abs(p.mx - r.mx), std::abs(p.my - r.my), std::abs(p.mz - r.mz)});
            }
            return worst;
        };
        const double coarse = worst_diff(w);
        auto policy = fig4b.sampling_policy();
        policy.fixed_dt = 0.5 * w.dt;
        const double fine = worst_diff(sample(fig4b.build_sequence(), policy));
        const double gain = coarse / fine;
        const bool ok = coarse <= 1e-6 && gain >= 4.0;
        return {4, "oracle equivalence", ok,
                "max |propagate - rk4| = " + fmt(coarse) + " at dt=" + fmt(w.dt) + ", " + fmt(fine) +
                    " at dt/2 (gain " + fmt(gain, 4) + "x)"};
    }

    CriterionResult inversion() {
        const double A1 = hz_to_rad(fig4b.pi_amplitude_hz);
        const double C = hz_to_rad(fig4b.half_sweep_hz);
        const double a1 = 2.0 * fig4b.sweep_rate_rad();
        SequenceSpec spec;
        spec.label = "fig4b_final_pi";
        spec.segments = {Chirp{ChirpParams{A1, C, a1, 0.0, PulseRole::invert_pi}}};
        auto policy = fig4b.sampling_policy();
        const auto w = sample(spec, policy);
        const OffsetGrid grid(hz_to_rad(fig4b.bandwidth_hz), 51);
        const auto p = sweep_profile(w, grid, options.threads);
        note_norm(p);
        double worst = -1.0;
        for (const auto& m : p.final_states) worst = std::max(worst, m.mz);
        return {5, "inversion property", worst <= -0.98,
                "max Mz over 51 offsets = " + fmt(worst) + " (limit -0.98)"};
    }

    CriterionResult excitation_quality() {
        const auto corrected = zero_order_correct(profile());
        const double B = hz_to_rad(fig4b.bandwidth_hz);
        const auto m = profile_metrics(corrected, -B, B);
        const bool ok = m.min_mx >= 0.95 && m.max_abs_mz <= 0.15;
        return {6, "excitation quality (fig4b)", ok,
                "min Mx = " + fmt(m.min_mx) + " (>= 0.95), max |Mz| = " + fmt(m.max_abs_mz) + " (<= 0.15) over " +
                    std::to_string(m.count) + " offsets"};
    }

    CriterionResult dispersion_ordering() {
        const double B = hz_to_rad(fig4b.bandwidth_hz);
        const auto chorus = profile_metrics(zero_order_correct(profile()), -B, B);

        RunConfig two = fig4b;
        two.name = "fig4b_two_pulse";
        two.sequence = SequenceKind::two_pulse;
        const auto w2 = sample(two.build_sequence(), two.sampling_policy());
        const auto p2 = sweep_profile(w2, two.offset_grid(), options.threads);
        note_norm(p2);
        const auto pair = profile_metrics(zero_order_correct(p2), -B, B);

        const double bound = edge_residual(fig4b.dispersion_model()) * 180.0 / M_PI + 5.0;
        const bool ok = chorus.max_abs_phase_dev_deg < pair.max_abs_phase_dev_deg &&
                        chorus.max_abs_phase_dev_deg <= bound;
        return {7, "dispersion-cancellation ordering", ok,
                "three-pulse " + fmt(chorus.max_abs_phase_dev_deg) + " deg < two-pulse " +
                    fmt(pair.max_abs_phase_dev_deg) + " deg; bound " + fmt(bound) + " deg"};
    }

    CriterionResult analytic_vs_quadrature() {
        const auto check = check_against_quadrature(fig4b.dispersion_model(), excitation_phase_diff, 0.05);
        return {8, "analytic vs quadrature", check.passed,
                "worst relative error " + fmt(check.worst_relative_error) + " (<= 0.05)"};
    }

    CriterionResult determinism() {
        const auto& w = waveform();
        const auto grid = fig4b.offset_grid();
        const auto one = sweep_profile(w, grid, 1);
        const auto eight = sweep_profile(w, grid, 8);
        note_norm(one);
        note_norm(eight);
        const bool ok = bitwise_equal(one, eight) && bitwise_equal(one, profile());
        return {9, "determinism", ok, std::string(ok ? "identical" : "DIFFERENT") + " at 1 and 8 workers"};
    }

    CriterionResult norm() {
        return {10, "norm conservation", worst_norm_error <= 1e-9,
                "max | |M| - 1 | = " + fmt(worst_norm_error) + " (<= 1e-9)"};
    }
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    Suite suite;
    suite.options = options;
    using Check = CriterionResult (Suite::*)();
    const std::pair<int, Check> checks[] = {
        {1, &Suite::flip_condition},   {2, &Suite::preset_timing},      {3, &Suite::edge},
        {4, &Suite::oracle},           {5, &Suite::inversion},          {6, &Suite::excitation_quality},
        {7, &Suite::dispersion_ordering}, {8, &Suite::analytic_vs_quadrature}, {9, &Suite::determinism},
        {10, &Suite::norm},
    };
    std::vector<CriterionResult> results;
    for (const auto& [id, check] : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = (suite.*check)();
        } catch (const std::exception& e) {
            r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(r);
    }
    return results;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.title << ": " << r.detail << " (" << fmt(r.seconds, 3)
       << " s)";
    return os.str();
}

}  // namespace chirpex
