#pragma once

#include <array>
#include <vector>

#include "noisymem/grid.hpp"
#include "noisymem/paths.hpp"

namespace noisymem {

using Vec2 = std::array<double, 2>;

/// Row-major 2x2 matrix.
struct Mat2 {
  double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend constexpr Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.m11 * v[0] + a.m12 * v[1], a.m21 * v[0] + a.m22 * v[1]};
  }
  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }
};

// Writing X_1 = X and X_2(t) = int_{-delta}^t X dB turns dX = Z dB into the
// two-dimensional delay system dY = A Y dB + D Y(t - delta) dB.
inline constexpr Mat2 kStateCoupling{0.0, 1.0, 1.0, 0.0};   // A; A^2 = I
inline constexpr Mat2 kDelayCoupling{0.0, -1.0, 0.0, 0.0};  // D

/// F(t) = exp(-A b + t/2 I) = e^{t/2} [cosh b, -sinh b; -sinh b, cosh b], b = B(t).
Mat2 mat_F(double t, double b);

/// exp(A b - t/2 I) = e^{-t/2} [cosh b, sinh b; sinh b, cosh b]; the inverse of mat_F.
Mat2 mat_exp_forward(double t, double b);

/// Y(t_i) = (X(t_i), X_2(t_i)) at every positive-side step.
struct ExactSolution {
  TimeGrid grid;
  std::vector<Vec2> y_values;

  double first_component(std::size_t i) const { return y_values[i][0]; }
  double terminal_value() const { return y_values.back()[0]; }
};

/// Closed-form solution of dX = Z dB, phi = 1, xi = 1 on [0, delta] (T = delta):
///
///   Y(t) = E(t) ( Y(0) + int_0^t F(s) g(s) dB(s) - int_0^t A F(s) g(s) ds ),
///   g(s) = (-K(s - delta), 0),  K(r) = B(r) - B(-delta),
///
/// with E(t) = mat_exp_forward(t, W(t)), F(s) = mat_F(s, W(s)) and
/// W(t) = B(t) - B(0). The exponentials are driven by W because the path is
/// anchored at B(-delta) = 0 rather than B(0) = 0. Y(0) = (1, B(0) - B(-delta)).
/// Both integrals use the left-point rule on the path's own grid.
///
/// Requires grid.horizon() == delta and an aligned grid.
ExactSolution exact_solve(double delta, const TimeGrid& grid, const BrownianPath& path);

}  // namespace noisymem
