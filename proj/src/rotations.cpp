#include "chirpex/rotations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chirpex/errors.hpp"

namespace chirpex {

Matrix3 Matrix3::transpose() const {
    Matrix3 t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
}

double Matrix3::determinant() const {
    const auto& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

MagVector Matrix3::apply(const MagVector& v) const {
    return {m[0] * v.mx + m[1] * v.my + m[2] * v.mz, m[3] * v.mx + m[4] * v.my + m[5] * v.mz,
            m[6] * v.mx + m[7] * v.my + m[8] * v.mz};
}

Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
    Matrix3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
    return out;
}

Matrix3 operator+(const Matrix3& a, const Matrix3& b) {
    Matrix3 out;
    for (std::size_t i = 0; i < 9; ++i) out.m[i] = a.m[i] + b.m[i];
    return out;
}

Matrix3 operator*(double s, const Matrix3& a) {
    Matrix3 out;
    for (std::size_t i = 0; i < 9; ++i) out.m[i] = s * a.m[i];
    return out;
}

double max_abs_diff(const Matrix3& a, const Matrix3& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    return worst;
}

double Rotation3::orthogonality_error() const {
    return max_abs_diff(m_.transpose() * m_, Matrix3::identity());
}

Matrix3 generator(Axis axis) {
    switch (axis) {
        case Axis::x: return {{0, 0, 0, 0, 0, -1, 0, 1, 0}};
        case Axis::y: return {{0, 0, 1, 0, 0, 0, -1, 0, 0}};
        case Axis::z: return {{0, -1, 0, 1, 0, 0, 0, 0, 0}};
    }
    return Matrix3::zero();
}

MagVector unit(Axis axis) {
    switch (axis) {
        case Axis::x: return MagVector::ex();
        case Axis::y: return MagVector::ey();
        case Axis::z: return MagVector::ez();
    }
    return MagVector::ez();
}

Rotation3 axis_rotation(const MagVector& axis, double angle) {
    const double n = axis.norm();
    if (!(std::abs(n - 1.0) <= 1e-9)) {
        std::ostringstream msg;
        msg << "axis_rotation: axis must be a unit vector, got norm " << n;
        throw PreconditionError(msg.str());
    }
    // R = I + sin(θ) K + (1 − cos θ) K², K = skew(axis)
    const Matrix3 k{{0, -axis.mz, axis.my, axis.mz, 0, -axis.mx, -axis.my, axis.mx, 0}};
    const Matrix3 r = Matrix3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
    return Rotation3{r};
}

Rotation3 axis_rotation(Axis axis, double angle) { return axis_rotation(unit(axis), angle); }

double solve_alpha(double theta0) {
    if (!(theta0 > 0.0)) throw DomainError("solve_alpha: theta0 must be positive");
    double t2 = std::tan(theta0);
    t2 *= t2;
    if (std::abs(t2 - 1.0) < 1e-12) t2 = 1.0;
    if (t2 > 1.0) throw DomainError("solve_alpha: theta0 > pi/4 has no real alpha (tan^2 theta0 > 1)");
    return std::acos(t2);
}

double theta0_for_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= M_PI / 2)) throw DomainError("theta0_for_alpha: alpha outside [0, pi/2]");
    return std::atan(std::sqrt(std::max(0.0, std::cos(alpha))));
}

Rotation3 three_stage_propagator(double theta0, double alpha) {
    const Rotation3 outer = axis_rotation(Axis::y, theta0);
    return outer * axis_rotation(Axis::x, alpha) * outer;
}

}  // namespace chirpex
