#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace weylscan {

using Complex = std::complex<double>;

/// sqrt branch with Im >= 0 (cut along [0, inf)); limits onto the cut are
/// taken from the upper half plane.
inline Complex sqrt_upper(Complex z) {
  Complex s = std::sqrt(z);
  return s.imag() < 0.0 ? -s : s;
}

// ---------------------------------------------------------------------------
// Measures with explicit Lebesgue decomposition, used as ground truth for
// boundary-value extraction.

struct Atom {
  double position = 0.0;
  double weight = 0.0; // > 0
};

/// Polynomial density on [a, b]: rho(t) = sum_j coeffs[j] t^j.
struct DensityPiece {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coeffs;
};

class MeasureModel {
public:
  MeasureModel() = default;
  MeasureModel(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<DensityPiece> &pieces() const { return pieces_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }

  double atom_weight_at(double x, double atol = 1e-12) const;
  /// Density value at x; 0 outside all pieces.
  double density_at(double x) const;

private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

/// Cauchy-Stieltjes integral F(lambda) = int (t - lambda)^{-1} d mu(t).
/// Density pieces are integrated with closed-form antiderivatives.
/// Throws std::domain_error for real lambda.
Complex borel_transform(const MeasureModel &m, Complex lambda);

// ---------------------------------------------------------------------------
// Boundary values via the eta-sweep: evaluate on a geometric ladder
// y_j = y0 * ratio^j and extrapolate y -> 0.

struct LadderConfig {
  double y0 = 1e-1;
  double ratio = 0.5;
  int rungs = 24;
  int fit_points = 6;    // log-log regression window for the divergence fit
  double rtol = 1e-7;    // convergence test on successive extrapolants
  double p_min = 0.5;    // fitted exponent >= p_min declares Im = +inf
  void validate() const; // throws std::invalid_argument
};

struct BoundaryLimit {
  double x = 0.0;
  double im_value = 0.0;       // extrapolated Im f(x+i0), meaningless if infinite
  bool im_infinite = false;    // fitted divergence exponent >= p_min
  double divergence_exponent = 0.0;
  double re_value = 0.0;       // extrapolated Re f(x+i0)
  bool re_converged = false;
  Complex residue{0.0, 0.0};   // extrapolated lim i*y*f(x+iy)
  double residue_norm = 0.0;
  double scale = 0.0;          // |f| at the top rung, reference for thresholds
  std::vector<std::pair<double, Complex>> ladder; // (y_j, f(x+iy_j))
  bool converged = false;
};

/// Raised when f cannot be evaluated at some rung; carries the rung index.
class ladder_evaluation_error : public std::runtime_error {
public:
  ladder_evaluation_error(int rung, const std::string &what);
  int rung() const { return rung_; }

private:
  int rung_;
};

BoundaryLimit boundary_limit(const std::function<Complex(Complex)> &f, double x,
                             const LadderConfig &config = {});

/// Order-2 Richardson extrapolation on a geometric ladder (values ordered from
/// the largest y down). Exposed for reuse on matrix entries.
Complex richardson2(const std::vector<Complex> &values, double ratio);

// ---------------------------------------------------------------------------
// Discrete closure operations on sampled grids.

struct GridSet {
  double start = 0.0;
  double step = 1.0; // > 0
  std::vector<std::uint8_t> flags;

  std::size_t size() const { return flags.size(); }
  double point(std::size_t i) const { return start + step * double(i); }
};

/// Discrete surrogate of the essential (absolutely continuous) closure: x is
/// kept iff the window-neighborhood carries a flagged fraction > density_floor.
GridSet clac(const GridSet &s, int window, double density_floor = 0.2);

/// Discrete surrogate of the continuous closure. Uncountability has no
/// faithful finite-sample analog; a count floor per window is used instead,
/// so the output is a candidate set only.
GridSet clc(const GridSet &s, int window, int count_floor = 5);

} // namespace weylscan
