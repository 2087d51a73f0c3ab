#pragma once

#include <complex>

namespace weylscan::bessel {

using Complex = std::complex<double>;

// Integer-order cylinder functions for complex argument with Im z >= 0 (the
// region reached through sqrt_upper). Power series below |z| = 12, Hankel
// asymptotics plus stable recurrences beyond. Target accuracy ~1e-10; these
// enter only the free-case matching and test oracles.

Complex J(int n, Complex z);
Complex Y(int n, Complex z);
Complex H1(int n, Complex z); // J + iY
Complex I(int n, Complex z);
Complex K(int n, Complex z);

Complex J_deriv(int n, Complex z);
Complex H1_deriv(int n, Complex z);

} // namespace weylscan::bessel
