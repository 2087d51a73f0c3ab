#pragma once

#include <Eigen/Dense>
#include <vector>

#include "weylscan/nevanlinna.hpp"

namespace weylscan {

/// Piecewise-polynomial potential with compact support: q(x) = 0 for
/// |x| > support_radius. Pieces may not overlap.
struct PotentialPiece {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coeffs; // q(x) = sum_j coeffs[j] x^j on [a, b]
};

class Potential {
public:
  Potential() = default;
  Potential(std::vector<PotentialPiece> pieces, double support_radius);

  static Potential free_potential() { return Potential({}, 1.0); }
  /// Square well of depth v0 on [-a, a].
  static Potential square_well(double v0, double a);

  double operator()(double x) const;
  double support_radius() const { return support_radius_; }
  const std::vector<PotentialPiece> &pieces() const { return pieces_; }
  /// Potential reflected through the origin, q(-x).
  Potential reflected() const;

private:
  std::vector<PotentialPiece> pieces_;
  double support_radius_ = 1.0;
};

struct OdeConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double chunk = 0.5; // renormalization interval for the linear system
};

enum class Side { plus, minus };

class degenerate_trace_error : public std::runtime_error {
public:
  degenerate_trace_error() : std::runtime_error("f(0) vanishes to working precision") {}
};

class pole_of_m_error : public std::runtime_error {
public:
  explicit pole_of_m_error(Complex where)
      : std::runtime_error("m_+ + m_- vanishes (pole of the coupled function)"),
        point(where) {}
  Complex point;
};

/// Half-line Titchmarsh-Weyl function m±(lambda) = f'(0)/f(0), f the
/// square-integrable solution of -f'' + q f = lambda f on R±. The branch
/// Im sqrt(lambda) > 0 selects f(x) = exp(i sqrt(lambda) x) beyond the
/// support; integration runs inward from the support edge.
Complex m_half(const Potential &q, Side side, Complex lambda,
               const OdeConfig &config = {});

/// Full-line scalar function m(lambda) = -(m+ + m-)^{-1}.
Complex coupled_m(const Potential &q, Complex lambda,
                  const OdeConfig &config = {});

/// Full-line 2x2 matrix function, the inverse of ((-m+, 1), (1, 1/m-)).
/// Sign and normalization follow the coupled-function convention used for
/// interface problems at x = 0 (see README).
Eigen::Matrix2cd coupled_m_tilde(const Potential &q, Complex lambda,
                                 const OdeConfig &config = {});

/// Solution data (f, f') at x = 0 for the decaying solution, shared plumbing
/// for m_half and tests.
struct TraceData {
  Complex value;
  Complex deriv;
};
TraceData halfline_trace(const Potential &q, Side side, Complex lambda,
                         const OdeConfig &config = {});

} // namespace weylscan
