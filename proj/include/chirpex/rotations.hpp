#pragma once

#include <array>
#include <cmath>

namespace chirpex {

// Magnetization state (Mx, My, Mz) in the rotating frame. Dimensionless.
struct MagVector {
    double mx = 0.0;
    double my = 0.0;
    double mz = 1.0;

    static constexpr MagVector ez() { return {0.0, 0.0, 1.0}; }
    static constexpr MagVector ex() { return {1.0, 0.0, 0.0}; }
    static constexpr MagVector ey() { return {0.0, 1.0, 0.0}; }

    double norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }
    double transverse() const { return std::hypot(mx, my); }

    friend bool operator==(const MagVector&, const MagVector&) = default;
};

inline double dot(const MagVector& a, const MagVector& b) {
    return a.mx * b.mx + a.my * b.my + a.mz * b.mz;
}

inline MagVector cross(const MagVector& a, const MagVector& b) {
    return {a.my * b.mz - a.mz * b.my, a.mz * b.mx - a.mx * b.mz, a.mx * b.my - a.my * b.mx};
}

enum class Axis { x, y, z };

// Dense 3x3 matrix, row-major.
struct Matrix3 {
    std::array<double, 9> m{};

    static constexpr Matrix3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
    static constexpr Matrix3 zero() { return {}; }

    constexpr double& operator()(int r, int c) { return m[3 * r + c]; }
    constexpr double operator()(int r, int c) const { return m[3 * r + c]; }

    Matrix3 transpose() const;
    double determinant() const;
    MagVector apply(const MagVector& v) const;

    friend Matrix3 operator*(const Matrix3& a, const Matrix3& b);
    friend Matrix3 operator+(const Matrix3& a, const Matrix3& b);
    friend Matrix3 operator*(double s, const Matrix3& a);
    friend bool operator==(const Matrix3&, const Matrix3&) = default;
};

double max_abs_diff(const Matrix3& a, const Matrix3& b);

// Proper orthogonal matrix. Only produced by the factories below and by composition,
// so RᵀR = I and det R = +1 hold up to rounding.
class Rotation3 {
public:
    Rotation3() = default;

    static Rotation3 identity() { return Rotation3{}; }

    const Matrix3& matrix() const { return m_; }
    MagVector apply(const MagVector& v) const { return m_.apply(v); }
    MagVector operator*(const MagVector& v) const { return m_.apply(v); }
    Rotation3 operator*(const Rotation3& rhs) const { return Rotation3{m_ * rhs.m_}; }
    Rotation3 inverse() const { return Rotation3{m_.transpose()}; }

    // Largest entrywise deviation of RᵀR from I.
    double orthogonality_error() const;
    double determinant() const { return m_.determinant(); }

private:
    explicit Rotation3(const Matrix3& m) : m_(m) {}
    Matrix3 m_ = Matrix3::identity();

    friend Rotation3 axis_rotation(const MagVector& axis, double angle);
};

// Generators of rotations about x, y, z:
//   Ωx = [[0,0,0],[0,0,-1],[0,1,0]], Ωy = [[0,0,1],[0,0,0],[-1,0,0]], Ωz = [[0,-1,0],[1,0,0],[0,0,0]].
// Ω_k v = e_k × v.
Matrix3 generator(Axis axis);

MagVector unit(Axis axis);

// exp(angle · Ω_axis) by Rodrigues' formula. Throws PreconditionError unless ‖axis‖ = 1 within 1e-9.
Rotation3 axis_rotation(const MagVector& axis, double angle);
Rotation3 axis_rotation(Axis axis, double angle);

// α = arccos(tan²θ₀): the stage-II angle that puts the three-stage product in the transverse plane.
// Domain θ₀ ∈ (0, π/4].
double solve_alpha(double theta0);

// Inverse of solve_alpha: θ₀ = atan(√cos α).
double theta0_for_alpha(double alpha);

// θ₀ with cot²θ₀ = value.
inline double theta0_from_cot2(double cot2) { return std::atan(1.0 / std::sqrt(cot2)); }

// exp(θ₀Ωy) · exp(αΩx) · exp(θ₀Ωy); the rightmost factor acts first.
Rotation3 three_stage_propagator(double theta0, double alpha);

}  // namespace chirpex
