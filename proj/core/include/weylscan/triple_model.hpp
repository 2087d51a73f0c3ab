#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylscan/nevanlinna.hpp"

#include <nlohmann/json_fwd.hpp>

namespace weylscan {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class singular_resolvent : public std::runtime_error {
public:
  explicit singular_resolvent(Complex where)
      : std::runtime_error("resolvent evaluated at a spectral point"),
        point(where) {}
  Complex point;
};

/// Finite-dimensional boundary-triple realization: a Hermitian matrix A0, a
/// full-rank seed block gamma0 = gamma(mu0) and the reference value
/// Re M(mu0). In finite dimensions every quasi boundary triple is an ordinary
/// one, so the construction-time checks below (Hermitian A0, full column
/// rank) are all that remains of the triple axioms.
///
/// The symmetric restriction S is never materialized; its eigenvalues are the
/// eigenvalues of A0 that the gamma-span cannot see, and every operation here
/// refers to them only through ranks and residues.
class TripleModel {
public:
  TripleModel(Matrix a0, Matrix gamma0, Complex mu0, Matrix re_m0);

  int dim() const { return int(a0_.rows()); }       // n
  int probe_dim() const { return int(gamma0_.cols()); } // d

  const Matrix &a0() const { return a0_; }
  const Matrix &gamma0() const { return gamma0_; }
  Complex mu0() const { return mu0_; }
  const Matrix &re_m0() const { return re_m0_; }

  const Eigen::VectorXd &eigenvalues() const { return evals_; }
  const Matrix &eigenvectors() const { return evecs_; }
  double spectral_scale() const { return scale_; }

  /// (A0 - lambda)^{-1} through the stored eigendecomposition.
  Matrix resolvent(Complex lambda) const;

  /// gamma(nu) = (I + (nu - mu0)(A0 - nu)^{-1}) gamma0.
  Matrix gamma_field(Complex nu) const;

  /// M(lambda) = Re M(mu0)
  ///   + gamma0^* [(lambda - Re mu0) + (lambda-mu0)(lambda-conj mu0)(A0-lambda)^{-1}] gamma0.
  Matrix weyl(Complex lambda) const;

  /// Exact lim_{eta->0} i eta M(x + i eta): nonzero only when x is an
  /// eigenvalue of A0 visible to the gamma-span.
  Matrix residue(double x) const;

  /// Ladder-extrapolated estimate of the same limit, for cross-validation.
  Matrix residue_extrapolated(double x, const LadderConfig &config = {}) const;

  /// Orthonormal basis of the boundary traces of the visible eigenspace at x
  /// (column space of gamma0^* E({x})). Throws if x is not an eigenvalue.
  Matrix trace_map_range(double x) const;

  struct SimplicityCertificate {
    bool simple = false;
    int probe_rank = 0;    // rank of the stacked E(Delta) gamma(nu) columns
    int spectral_rank = 0; // dim E(Delta) H
  };

  /// Local simplicity on (a, b): the gamma-field columns at the probe points
  /// span the spectral subspace. Empty probe list selects the default family
  /// scaled to the spectral radius.
  SimplicityCertificate local_simplicity(double a, double b,
                                         std::vector<Complex> probes = {}) const;

  /// Stone's formula by composite Gauss quadrature with panels graded towards
  /// the eigenvalues; converges to E((a,b)) as eps -> 0.
  Matrix stone_projection(double a, double b, double eps,
                          int nodes_per_panel = 16) const;

  /// Exact E((a,b)) and E({x}), for oracles.
  Matrix spectral_projection(double a, double b) const;
  Matrix eigen_projection(double x) const;
  bool is_eigenvalue(double x) const;

  static TripleModel from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
  static TripleModel load(const std::string &path);
  void save(const std::string &path) const;

private:
  double eig_atol() const;

  Matrix a0_, gamma0_, re_m0_;
  Complex mu0_;
  Eigen::VectorXd evals_;
  Matrix evecs_;
  double scale_ = 1.0;
};

/// Default probe family {±i, 1±i, −1±i, 2±2i} scaled by `scale`.
std::vector<Complex> default_probe_points(double scale);

} // namespace weylscan
