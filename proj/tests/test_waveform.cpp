#include <doctest.h>

#include <cmath>
#include <numeric>

#include "chirpex/errors.hpp"
#include "chirpex/rotations.hpp"
#include "chirpex/waveform.hpp"

using namespace chirpex;

namespace {

const double kA = hz_to_rad(1e3);
const double kA1 = hz_to_rad(10e3);
const double kB = hz_to_rad(50e3);
const double kRate = 2.7 * kA * kA;

}  // namespace

TEST_CASE("chirp_phase") {
    const ChirpParams p{kA, hz_to_rad(150e3), kRate, 0.0, PulseRole::excite_half_pi};
    const double T = p.duration();
    CHECK(chirp_phase(0.0, p) == 0.0);
    CHECK(std::abs(chirp_phase(T, p)) <= 1e-9 * p.half_sweep * T);
    CHECK(chirp_phase(p.half_sweep / p.sweep_rate, p) ==
          doctest::Approx(-p.half_sweep * p.half_sweep / (2.0 * p.sweep_rate)).epsilon(1e-14));
    CHECK_THROWS_AS(chirp_phase(-1e-9, p), DomainError);
    CHECK_THROWS_AS(chirp_phase(T * 1.001, p), DomainError);

    // central difference of φ gives −C + a·t
    const double t = 0.3 * T;
    const double h = 1e-7;
    CHECK((chirp_phase(t + h, p) - chirp_phase(t - h, p)) / (2 * h) ==
          doctest::Approx(p.frequency_at(t)).epsilon(1e-6));
}

TEST_CASE("sweep_rate_for") {
    CHECK(std::abs(sweep_rate_for(theta0_from_cot2(2.0), 1.0) - 2.70) <= 0.01);
    CHECK(std::abs(sweep_rate_for(theta0_from_cot2(3.0), 1.0) - 2.81) <= 0.01);
    CHECK(sweep_rate_for(theta0_from_cot2(2.0), kA) / (kA * kA) ==
          doctest::Approx(sweep_rate_for(theta0_from_cot2(2.0), 1.0)));
    CHECK_THROWS_AS(sweep_rate_for(M_PI / 4, 1.0), DegenerateInputError);
    CHECK_THROWS_AS(sweep_rate_for(M_PI / 4 - 1e-14, 1.0), DegenerateInputError);
    CHECK_THROWS_AS(sweep_rate_for(1.0, 1.0), DomainError);
}

TEST_CASE("segment durations reproduce the quoted times") {
    const ChirpParams a{kA, hz_to_rad(400e3), kRate};
    const ChirpParams b{kA, hz_to_rad(150e3), kRate};
    const double A3 = hz_to_rad(3e3);
    const ChirpParams c{A3, hz_to_rad(180e3), 2.7 * A3 * A3};
    CHECK(std::abs(segment_duration(a) * 1e3 - 47.15) <= 0.1);
    CHECK(std::abs(segment_duration(b) * 1e3 - 17.68) <= 0.05);
    CHECK(std::abs(segment_duration(c) * 1e3 - 2.36) <= 0.01);
}

TEST_CASE("build_two_pulse") {
    const auto spec = build_two_pulse(kA, kA1, kB, hz_to_rad(400e3), kRate);
    REQUIRE(spec.segments.size() == 3);
    const double T = segment_duration(spec.segments[0]);
    CHECK(segment_duration(spec.segments[1]) == doctest::Approx(T / 2).epsilon(1e-15));
    CHECK(segment_duration(spec.segments[2]) == doctest::Approx(T / 2).epsilon(1e-15));
    CHECK(spec.total_duration() == doctest::Approx(2 * T).epsilon(1e-15));
    // 2T, not the 94.13 ms printed alongside T = 47.15 ms
    CHECK(std::abs(spec.total_duration() * 1e3 - 94.3) <= 0.2);
    CHECK(std::holds_alternative<Delay>(spec.segments[2]));
    CHECK(std::get<Chirp>(spec.segments[1]).params.sweep_rate == 2.0 * kRate);
    CHECK(std::get<Chirp>(spec.segments[1]).params.role == PulseRole::invert_pi);
    CHECK(spec.warnings.empty());

    SUBCASE("errors") {
        CHECK_THROWS_AS(build_two_pulse(kA, kA1, hz_to_rad(500e3), hz_to_rad(400e3), kRate), ConfigError);
        CHECK_THROWS_AS(build_two_pulse(kA, kA1, 0.0, hz_to_rad(400e3), kRate), ConfigError);
        // A1²/a1 = 2 < 4
        const double weak = std::sqrt(2.0 * 2.0 * kRate);
        try {
            build_two_pulse(kA, weak, kB, hz_to_rad(400e3), kRate);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("A1^2/a1 = 2") != std::string::npos);
        }
        // between the hard and soft limits: builds, with a warning
        const auto marginal = build_two_pulse(kA, std::sqrt(6.0 * 2.0 * kRate), kB, hz_to_rad(400e3), kRate);
        CHECK(marginal.warnings.size() == 1);
    }
}

TEST_CASE("build_chorus") {
    const auto spec = build_chorus(kA, kA1, kB, hz_to_rad(150e3), kRate);
    REQUIRE(spec.segments.size() == 4);
    CHECK(std::abs(spec.total_duration() * 1e3 - 53.05) <= 0.05);
    const auto& center = std::get<Chirp>(spec.segments[1]).params;
    const auto& last = std::get<Chirp>(spec.segments[3]).params;
    CHECK(center.amplitude == kA1 / std::sqrt(2.0));
    CHECK(std::abs(last.amplitude / center.amplitude - std::sqrt(2.0)) <= 1e-12);
    CHECK(last.sweep_rate == 2.0 * center.sweep_rate);
    CHECK(std::get<Delay>(spec.segments[2]).duration == doctest::Approx(segment_duration(spec.segments[0]) / 2));
    CHECK(spec.total_duration() == doctest::Approx(3.0 * segment_duration(spec.segments[0])).epsilon(1e-15));

    const double A3 = hz_to_rad(3e3);
    const auto tapered = build_chorus(A3, hz_to_rad(15e3), hz_to_rad(150e3), hz_to_rad(180e3), 2.7 * A3 * A3, 0.1);
    CHECK(std::abs(tapered.total_duration() * 1e3 - 7.07) <= 0.02);
    CHECK(tapered.label == "chorus_tapered");
    CHECK(tapered.warnings.size() == 2);  // A1²/a1 ≈ 4.6 for both π pulses
    for (const auto& s : tapered.segments)
        if (const auto* c = std::get_if<Chirp>(&s)) CHECK(c->params.taper_fraction == 0.1);
}

TEST_CASE("taper_envelope") {
    const auto flat = taper_envelope(64, 0.0);
    CHECK(std::all_of(flat.begin(), flat.end(), [](double g) { return g == 1.0; }));

    const auto g = taper_envelope(100, 0.1);
    for (std::size_t k = 10; k < 90; ++k) CHECK(g[k] == 1.0);
    CHECK(g[0] == 0.0);
    CHECK(g[99] == 0.0);
    CHECK(g[5] == doctest::Approx(0.5).epsilon(1e-15));
    for (std::size_t k = 0; k < 100; ++k) CHECK(g[k] == g[99 - k]);
    for (std::size_t k = 1; k < 10; ++k) CHECK(g[k] > g[k - 1]);

    CHECK_THROWS_AS(taper_envelope(100, 0.5), DomainError);
    CHECK_THROWS_AS(taper_envelope(100, -0.1), DomainError);

    SUBCASE("energy never grows with the taper fraction") {
        for (std::size_t n : {7u, 100u, 1001u, 4096u}) {
            double previous = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 50; ++i) {
                const auto env = taper_envelope(n, 0.49 * i / 49.0);
                const double sum = std::accumulate(env.begin(), env.end(), 0.0);
                CHECK(sum <= previous + 1e-12);
                previous = sum;
            }
        }
    }
}

TEST_CASE("sample") {
    SUBCASE("pure delay") {
        SequenceSpec spec;
        spec.segments = {Delay{1e-3}};
        SamplingPolicy policy;
        policy.fixed_dt = 1e-6;
        const auto w = sample(spec, policy);
        CHECK(w.size() == 1000);
        CHECK(std::all_of(w.amplitude.begin(), w.amplitude.end(), [](double a) { return a == 0.0; }));
        CHECK(w.total_duration() == doctest::Approx(1e-3).epsilon(1e-14));
    }

    const auto spec = build_chorus(kA, kA1, kB, hz_to_rad(150e3), kRate);
    SamplingPolicy policy;
    policy.max_offset = kB;
    const auto w = sample(spec, policy);

    SUBCASE("dt honours both step bounds") {
        for (const auto& seg : spec.segments)
            if (const auto* c = std::get_if<Chirp>(&seg)) {
                const auto& p = c->params;
                CHECK((p.half_sweep + p.sweep_rate * w.dt) * w.dt <= M_PI / 20 * (1 + 1e-12));
            }
        CHECK(std::hypot(kA1, kB) * w.dt <= M_PI / 20 * (1 + 1e-12));
    }
    SUBCASE("layout and invariants") {
        REQUIRE(w.segments.size() == 4);
        CHECK(std::abs(w.total_duration() - spec.total_duration()) <= w.dt);
        CHECK(w.amplitude[0] == kA);
        CHECK(w.phase[0] == 0.0);
        for (std::size_t i = 0; i < w.size(); ++i) {
            CHECK(w.amplitude[i] >= 0.0);
            CHECK(std::isfinite(w.phase[i]));
        }
        const auto& delay = w.segments[2];
        CHECK(delay.kind == SegmentKind::delay);
        for (std::size_t i = delay.first; i < delay.first + delay.count; ++i) CHECK(w.amplitude[i] == 0.0);
        for (const auto& s : w.segments) CHECK(s.dt <= w.dt);
    }
    SUBCASE("sampled phase is a linear frequency sweep") {
        for (std::size_t si : {0u, 1u, 3u}) {
            const auto& seg = w.segments[si];
            const auto& p = std::get<Chirp>(spec.segments[si]).params;
            const std::size_t mid = seg.first + seg.count / 2;
            const double f_mid = (w.phase[mid + 1] - w.phase[mid]) / seg.dt;
            const double t_mid = seg.dt * static_cast<double>(seg.count / 2);
            CHECK(std::abs(f_mid - p.frequency_at(t_mid + seg.dt / 2)) <= 1e-6 * p.half_sweep);
            if (seg.count % 2 == 0) CHECK(std::abs(f_mid) <= p.sweep_rate * seg.dt / 2 * (1 + 1e-6));

            // slope of the finite-difference frequency is a, endpoints are ∓C
            const double f_lo = (w.phase[seg.first + 1] - w.phase[seg.first]) / seg.dt;
            const std::size_t last = seg.first + seg.count - 2;
            const double f_hi = (w.phase[last + 1] - w.phase[last]) / seg.dt;
            const double slope = (f_hi - f_lo) / (seg.dt * static_cast<double>(seg.count - 2));
            CHECK(std::abs(slope - p.sweep_rate) <= 1e-6 * p.sweep_rate);
            CHECK(std::abs(f_lo + p.half_sweep) <= p.sweep_rate * seg.dt);
            CHECK(std::abs(f_hi - p.half_sweep) <= 2 * p.sweep_rate * seg.dt);
        }
    }
    SUBCASE("sample budget") {
        SamplingPolicy tight = policy;
        tight.fixed_dt = 1e-12;
        CHECK_THROWS_AS(sample(spec, tight), ResourceError);
    }
}
