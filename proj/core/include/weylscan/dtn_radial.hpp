#pragma once

#include <Eigen/Dense>
#include <vector>

#include "weylscan/nevanlinna.hpp"
#include "weylscan/sturm_liouville.hpp"

namespace weylscan {

/// -Delta + q(r) on the plane with circular interface r = R. The potential is
/// radial with compact support [0, R_q], so the operator is Fourier-diagonal
/// over the angular modes and every map below acts mode by mode.
struct RadialOperator {
  Potential q;  // radial profile; pieces live in [0, support_radius]
  double R = 1.0;
  int max_mode = 16; // K
  OdeConfig ode;

  void validate() const;
  double exterior_edge() const; // max(R_q, R)
};

/// Value and radial derivative of a mode solution at a given radius.
struct ModeSolution {
  Complex value;
  Complex deriv;
};

/// Regular interior solution of -v'' - v'/r + (k^2/r^2 + q)v = lambda v,
/// started with the leading Frobenius behavior v ~ r^|k| near the origin,
/// sampled at the requested radii (ascending, within (0, exterior_edge]).
std::vector<ModeSolution> radial_interior_samples(const RadialOperator &op,
                                                  int k, Complex lambda,
                                                  const std::vector<double> &radii);

/// Decaying exterior solution matched to H1_k(sqrt(lambda) r) at the exterior
/// edge, sampled at the requested radii (ascending, within [R, edge]).
std::vector<ModeSolution> radial_exterior_samples(const RadialOperator &op,
                                                  int k, Complex lambda,
                                                  const std::vector<double> &radii);

struct DtnValue {
  Complex value{0.0, 0.0};
  bool pole = false; // trace at R vanished: a Dirichlet pole of the map
};

/// Interior DtN eigenvalue for mode k: v'(R)/v(R).
DtnValue dtn_interior_mode(const RadialOperator &op, int k, Complex lambda);

/// Exterior DtN eigenvalue for mode k: -u'(R)/u(R) (outward normal of the
/// exterior domain points towards the origin).
DtnValue dtn_exterior_mode(const RadialOperator &op, int k, Complex lambda);

struct ModeWeylValue {
  Complex value{0.0, 0.0};
  Complex wronskian{0.0, 0.0};
  bool eigenvalue_candidate = false; // W(R) ~ 0
};

/// M^{(k)}(lambda) = (Lambda_i + Lambda_e)^{-1}, evaluated pole-free as
/// -u_i(R) u_e(R) / W(R) with W = u_i u_e' - u_i' u_e. Interior Dirichlet
/// poles cancel in this form.
ModeWeylValue M_mode(const RadialOperator &op, int k, Complex lambda);

/// 2x2 block function, the inverse of ((Lambda_i, 1), (1, -1/Lambda_e)),
/// assembled pole-free from the same solution data:
/// ((M, Lambda_e M), (Lambda_e M, -Lambda_i Lambda_e M)).
Eigen::Matrix2cd Mtilde_mode(const RadialOperator &op, int k, Complex lambda);

/// Fourier-diagonal action on coefficients g_k, |k| <= K: returns
/// (M^{(|k|)}(lambda) g_k)_k; indices run -K..K, stored K-offset.
struct AssembledAction {
  std::vector<Complex> coefficients;
  std::vector<int> flagged_modes; // modes with W(R) ~ 0
};
AssembledAction assemble_M(const RadialOperator &op, Complex lambda,
                           const std::vector<Complex> &g);

} // namespace weylscan
