#include <doctest.h>

#include <cmath>
#include <random>

#include "chirpex/errors.hpp"
#include "chirpex/rotations.hpp"

using namespace chirpex;

namespace {

// Truncated power series Σ (θΩ)^k / k!, independent of Rodrigues.
Matrix3 series_exp(const Matrix3& gen, double angle, int terms) {
    Matrix3 sum = Matrix3::identity();
    Matrix3 term = Matrix3::identity();
    for (int k = 1; k < terms; ++k) {
        term = (angle / k) * (term * gen);
        sum = sum + term;
    }
    return sum;
}

MagVector random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    MagVector v{n(rng), n(rng), n(rng)};
    const double s = v.norm();
    return {v.mx / s, v.my / s, v.mz / s};
}

void check_close(const MagVector& a, const MagVector& b, double tol) {
    CHECK(std::abs(a.mx - b.mx) <= tol);
    CHECK(std::abs(a.my - b.my) <= tol);
    CHECK(std::abs(a.mz - b.mz) <= tol);
}

}  // namespace

TEST_CASE("generators match the displayed matrices") {
    CHECK(generator(Axis::x) == Matrix3{{0, 0, 0, 0, 0, -1, 0, 1, 0}});
    CHECK(generator(Axis::y) == Matrix3{{0, 0, 1, 0, 0, 0, -1, 0, 0}});
    CHECK(generator(Axis::z) == Matrix3{{0, -1, 0, 1, 0, 0, 0, 0, 0}});

    // Ω_k v = e_k × v
    const MagVector v{0.3, -1.2, 0.7};
    for (Axis ax : {Axis::x, Axis::y, Axis::z}) check_close(generator(ax).apply(v), cross(unit(ax), v), 0.0);
}

TEST_CASE("axis_rotation") {
    SUBCASE("zero angle is identity") {
        CHECK(max_abs_diff(axis_rotation(Axis::x, 0.0).matrix(), Matrix3::identity()) == 0.0);
    }
    SUBCASE("half turn about y sends e_z to -e_z") {
        check_close(axis_rotation(Axis::y, M_PI).apply(MagVector::ez()), {0, 0, -1}, 1e-15);
    }
    SUBCASE("matches the 20-term series for exp(0.3 Ωx)") {
        const Matrix3 oracle = series_exp(generator(Axis::x), 0.3, 20);
        CHECK(max_abs_diff(axis_rotation(Axis::x, 0.3).matrix(), oracle) <= 1e-12);
    }
    SUBCASE("matches the series about arbitrary axes") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> ang(-2.0, 2.0);
        for (int i = 0; i < 50; ++i) {
            const MagVector k = random_unit(rng);
            const double theta = ang(rng);
            const Matrix3 gen{{0, -k.mz, k.my, k.mz, 0, -k.mx, -k.my, k.mx, 0}};
            CHECK(max_abs_diff(axis_rotation(k, theta).matrix(), series_exp(gen, theta, 40)) <= 1e-12);
        }
    }
    SUBCASE("non-unit axis is rejected") {
        CHECK_THROWS_AS(axis_rotation(MagVector{1.0, 1.0, 0.0}, 0.1), PreconditionError);
        CHECK_THROWS_AS(axis_rotation(MagVector{0.0, 0.0, 0.0}, 0.1), PreconditionError);
    }
}

TEST_CASE("rotation invariants on random draws") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ang(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const Rotation3 r = axis_rotation(random_unit(rng), ang(rng));
        CHECK(r.orthogonality_error() <= 1e-9);
        CHECK(std::abs(r.determinant() - 1.0) <= 1e-9);

        // composed matrix == sequential application
        const Rotation3 s = axis_rotation(random_unit(rng), ang(rng));
        const MagVector v = random_unit(rng);
        const MagVector composed = (r * s).apply(v);
        const MagVector sequential = r.apply(s.apply(v));
        CHECK(std::abs(composed.mx - sequential.mx) <= 1e-12);
        CHECK(std::abs(composed.my - sequential.my) <= 1e-12);
        CHECK(std::abs(composed.mz - sequential.mz) <= 1e-12);
    }
}

TEST_CASE("solve_alpha") {
    CHECK(std::abs(solve_alpha(theta0_from_cot2(2.0)) - 1.0472) <= 1e-3);
    CHECK(std::abs(solve_alpha(theta0_from_cot2(3.0)) - 1.23) <= 0.005);
    CHECK(solve_alpha(M_PI / 4) == 0.0);

    CHECK_THROWS_AS(solve_alpha(M_PI / 4 + 1e-3), DomainError);
    CHECK_THROWS_AS(solve_alpha(0.0), DomainError);
    CHECK_THROWS_AS(solve_alpha(-0.1), DomainError);

    // round trip α → θ₀ → α
    for (int i = 0; i < 100; ++i) {
        const double alpha = (M_PI / 2) * i / 100.0;
        CHECK(std::abs(solve_alpha(theta0_for_alpha(alpha)) - alpha) <= 1e-12);
    }
}

TEST_CASE("three-stage propagator") {
    const double theta0 = theta0_from_cot2(2.0);
    const double alpha = solve_alpha(theta0);

    SUBCASE("after stages I and II") {
        const MagVector v = (axis_rotation(Axis::x, alpha) * axis_rotation(Axis::y, theta0)).apply(MagVector::ez());
        check_close(v, {std::sin(theta0), -std::cos(theta0) * std::sin(alpha), std::cos(theta0) * std::cos(alpha)},
                    1e-15);
    }
    SUBCASE("alpha = 0 is a y rotation by 2θ₀") {
        const double t = 0.37;
        check_close(three_stage_propagator(t, 0.0).apply(MagVector::ez()), {std::sin(2 * t), 0.0, std::cos(2 * t)},
                    1e-15);
    }
    SUBCASE("flip condition lands in the transverse plane") {
        CHECK(std::abs(three_stage_propagator(theta0, 1.0472).apply(MagVector::ez()).mz) <= 1e-4);
        CHECK(std::abs(three_stage_propagator(theta0, alpha).apply(MagVector::ez()).mz) <= 1e-9);
    }
    SUBCASE("property: z-annihilation for every θ₀ in (0, π/4)") {
        for (int i = 1; i < 400; ++i) {
            const double t = (M_PI / 4) * i / 400.0;
            const MagVector v = three_stage_propagator(t, solve_alpha(t)).apply(MagVector::ez());
            CHECK(std::abs(v.mz) <= 1e-9);
            CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
        }
    }
}
