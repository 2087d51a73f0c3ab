#include "weylscan/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace weylscan::bessel {

namespace {

constexpr double kSeriesRadius = 12.0;
constexpr double kEulerGamma = 0.57721566490153286060651209;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k)
    f *= double(k);
  return f;
}

double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k)
    h += 1.0 / double(k);
  return h;
}

Complex j_series(int n, Complex z) {
  const Complex h = 0.5 * z;
  const Complex h2 = h * h;
  Complex term = std::pow(h, n) / factorial(n);
  Complex sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= -h2 / (double(m) * double(m + n));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300))
      break;
  }
  return sum;
}

// Downward (Miller) recurrence normalized with 1 = J_0 + 2 sum_{m>=1} J_{2m},
// an entire identity, so valid for complex z as well.
Complex j_miller(int n, Complex z) {
  // The start index needs a generous margin above max(n, |z|); too small a
  // margin leaves dominant-solution contamination of order 1e-8 near |z|=25.
  const int start = ((n + int(1.2 * std::abs(z)) + 40) / 2) * 2 + 2;
  Complex fp1{0.0, 0.0}, f{1e-30, 0.0}, fn{0.0, 0.0}, norm{0.0, 0.0};
  for (int m = start; m >= 0; --m) {
    const Complex fm1 = (2.0 * double(m + 1) / z) * f - fp1;
    fp1 = f;
    f = fm1;
    if (m == n)
      fn = f;
    if (m > 0 && m % 2 == 0)
      norm += 2.0 * f;
    const double mag = std::abs(f);
    if (mag > 1e200) { // rescale to dodge overflow
      fp1 /= mag;
      f /= mag;
      fn /= mag;
      norm /= mag;
    }
  }
  norm += f; // J_0 contribution
  return fn / norm;
}

Complex y_series(int n, Complex z) {
  const Complex h = 0.5 * z;
  const Complex h2 = h * h;
  const Complex lg = std::log(h);

  Complex finite{0.0, 0.0};
  for (int m = 0; m < n; ++m)
    finite += factorial(n - m - 1) / factorial(m) * std::pow(h, 2 * m - n);

  Complex term = std::pow(h, n) / factorial(n);
  Complex series = (harmonic(0) + harmonic(n) - 2.0 * kEulerGamma) * term;
  for (int m = 1; m < 400; ++m) {
    term *= -h2 / (double(m) * double(m + n));
    const Complex contrib =
        (harmonic(m) + harmonic(m + n) - 2.0 * kEulerGamma) * term;
    series += contrib;
    if (std::abs(contrib) < 1e-18 * (std::abs(series) + 1e-300))
      break;
  }
  return (2.0 / M_PI) * lg * j_series(n, z) - finite / M_PI - series / M_PI;
}

// Hankel asymptotic expansion, reliable for |z| > 12 and small order.
Complex h1_asymptotic(int n, Complex z) {
  const double mu = 4.0 * double(n) * double(n);
  Complex sum{1.0, 0.0};
  Complex term{1.0, 0.0};
  double prev = 1e300;
  for (int k = 1; k < 40; ++k) {
    const double num = mu - double(2 * k - 1) * double(2 * k - 1);
    term *= Complex(0.0, 1.0) * num / (8.0 * double(k) * z);
    const double mag = std::abs(term);
    if (mag > prev)
      break; // divergent tail reached
    sum += term;
    prev = mag;
    if (mag < 1e-17)
      break;
  }
  const Complex phase = z - double(n) * M_PI_2 - M_PI_4;
  return std::sqrt(2.0 / (M_PI * z)) *
         std::exp(Complex(0.0, 1.0) * phase) * sum;
}

} // namespace

// On the positive real axis the standard library routines are more accurate
// than the complex series (which loses ~e^{2x} digits to cancellation in K),
// so delegate whenever the argument is exactly real.
bool positive_real(Complex z) { return z.imag() == 0.0 && z.real() > 0.0; }

Complex J(int n, Complex z) {
  if (n < 0)
    return (n % 2 == 0 ? 1.0 : -1.0) * J(-n, z);
  if (positive_real(z))
    return std::cyl_bessel_j(double(n), z.real());
  if (std::abs(z) <= kSeriesRadius)
    return j_series(n, z);
  return j_miller(n, z);
}

Complex H1(int n, Complex z) {
  if (std::abs(z) == 0.0)
    throw std::domain_error("H1: singular at z = 0");
  if (n < 0)
    return (n % 2 == 0 ? 1.0 : -1.0) * H1(-n, z);
  if (std::abs(z) <= kSeriesRadius)
    return J(n, z) + Complex(0.0, 1.0) * y_series(n, z);
  // Upward recurrence from asymptotic seeds; the dominant (Y) part keeps it
  // stable.
  Complex hm1 = h1_asymptotic(0, z);
  if (n == 0)
    return hm1;
  Complex h = h1_asymptotic(1, z);
  for (int m = 1; m < n; ++m) {
    const Complex hp = (2.0 * double(m) / z) * h - hm1;
    hm1 = h;
    h = hp;
  }
  return h;
}

Complex Y(int n, Complex z) {
  if (std::abs(z) == 0.0)
    throw std::domain_error("Y: singular at z = 0");
  if (n < 0)
    return (n % 2 == 0 ? 1.0 : -1.0) * Y(-n, z);
  if (positive_real(z))
    return std::cyl_neumann(double(n), z.real());
  if (std::abs(z) <= kSeriesRadius)
    return y_series(n, z);
  return (H1(n, z) - J(n, z)) / Complex(0.0, 1.0);
}

Complex I(int n, Complex z) {
  if (positive_real(z))
    return std::cyl_bessel_i(double(std::abs(n)), z.real());
  // I_n(z) = e^{-i n pi/2} J_n(iz), valid for -pi < arg z <= pi/2.
  const Complex rot = std::exp(Complex(0.0, -M_PI_2 * double(n)));
  return rot * J(n, Complex(0.0, 1.0) * z);
}

Complex K(int n, Complex z) {
  if (positive_real(z))
    return std::cyl_bessel_k(double(std::abs(n)), z.real());
  // K_n(z) = (pi/2) i^{n+1} H1_n(iz), valid for -pi < arg z <= pi/2.
  const Complex in1 = std::exp(Complex(0.0, M_PI_2 * double(n + 1)));
  return M_PI_2 * in1 * H1(n, Complex(0.0, 1.0) * z);
}

Complex J_deriv(int n, Complex z) {
  return J(n - 1, z) - double(n) / z * J(n, z);
}

Complex H1_deriv(int n, Complex z) {
  return H1(n - 1, z) - double(n) / z * H1(n, z);
}

} // namespace weylscan::bessel
