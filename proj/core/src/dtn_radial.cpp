#include "weylscan/dtn_radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "weylscan/bessel.hpp"

namespace weylscan {

void RadialOperator::validate() const {
  if (!(R > 0.0))
    throw std::invalid_argument("RadialOperator: interface radius R must be > 0");
  if (max_mode < 0)
    throw std::invalid_argument("RadialOperator: max_mode must be >= 0");
  for (const auto &p : q.pieces())
    if (p.a < -1e-12)
      throw std::invalid_argument("RadialOperator: radial pieces must live in r >= 0");
}

double RadialOperator::exterior_edge() const {
  return std::max(q.support_radius(), R);
}

namespace {

using State = std::array<Complex, 2>; // (v, v')

constexpr double kPoleRel = 1e-10;

// Radial equation -v'' - v'/r + (k^2/r^2 + q) v = lambda v as a first-order
// system; renormalized chunk by chunk, only ray data survives.
class RadialSystem {
public:
  RadialSystem(const RadialOperator &op, int k, Complex lambda)
      : op_(op), k2_(double(k) * double(k)), lambda_(lambda) {}

  void operator()(const State &s, State &dsdr, double r) const {
    dsdr[0] = s[1];
    dsdr[1] = -s[1] / r + (k2_ / (r * r) + op_.q(r) - lambda_) * s[0];
  }

private:
  const RadialOperator &op_;
  double k2_;
  Complex lambda_;
};

State integrate_radial(const RadialOperator &op, int k, Complex lambda,
                       State y, double r0, double r1) {
  namespace ode = boost::numeric::odeint;
  const auto &cfg = op.ode;
  auto stepper = ode::make_controlled(cfg.atol, cfg.rtol,
                                      ode::runge_kutta_dopri5<State>());
  RadialSystem sys(op, k, lambda);
  const double dir = r1 >= r0 ? 1.0 : -1.0;
  const int chunks = std::max(1, int(std::ceil(std::abs(r1 - r0) / cfg.chunk)));
  double r = r0;
  for (int c = 0; c < chunks; ++c) {
    const double rn = (c + 1 == chunks) ? r1 : r0 + (r1 - r0) * (c + 1) / chunks;
    if (std::abs(rn - r) > 0.0)
      ode::integrate_adaptive(stepper, sys, y, r, rn, dir * cfg.initial_step);
    const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
    if (mag > 0.0) {
      y[0] /= mag;
      y[1] /= mag;
    }
    r = rn;
  }
  return y;
}

void renormalize(State &y) {
  const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
  if (mag > 0.0) {
    y[0] /= mag;
    y[1] /= mag;
  }
}

} // namespace

std::vector<ModeSolution> radial_interior_samples(const RadialOperator &op,
                                                  int k, Complex lambda,
                                                  const std::vector<double> &radii) {
  op.validate();
  const int ka = std::abs(k);
  // Frobenius start v ~ r^|k| as a ray: v = 1, v' = |k|/r0; error O(r0^2).
  const double r0 = 1e-6 * op.R;
  State y{Complex(1.0, 0.0), Complex(double(ka) / r0, 0.0)};

  std::vector<ModeSolution> out;
  out.reserve(radii.size());
  double r = r0;
  for (double target : radii) {
    if (target < r - 1e-15)
      throw std::invalid_argument("radial_interior_samples: radii must ascend");
    y = integrate_radial(op, ka, lambda, y, r, target);
    r = target;
    out.push_back({y[0], y[1]});
  }
  return out;
}

std::vector<ModeSolution> radial_exterior_samples(const RadialOperator &op,
                                                  int k, Complex lambda,
                                                  const std::vector<double> &radii) {
  op.validate();
  const int ka = std::abs(k);
  const double edge = op.exterior_edge();
  const Complex s = sqrt_upper(lambda);

  // Outgoing/decaying matching at the edge, where q vanishes.
  State y{bessel::H1(ka, s * edge), s * bessel::H1_deriv(ka, s * edge)};
  renormalize(y);

  std::vector<ModeSolution> out(radii.size());
  double r = edge;
  for (std::size_t i = radii.size(); i-- > 0;) {
    const double target = radii[i];
    if (target > r + 1e-15 || target < op.R - 1e-15)
      throw std::invalid_argument(
          "radial_exterior_samples: radii must ascend within [R, edge]");
    y = integrate_radial(op, ka, lambda, y, r, target);
    r = target;
    out[i] = {y[0], y[1]};
  }
  return out;
}

DtnValue dtn_interior_mode(const RadialOperator &op, int k, Complex lambda) {
  const ModeSolution v = radial_interior_samples(op, k, lambda, {op.R})[0];
  const double mag = std::max(std::abs(v.value), std::abs(v.deriv));
  if (std::abs(v.value) < kPoleRel * mag)
    return {Complex{0, 0}, true}; // Dirichlet pole of Lambda_i at this mode
  return {v.deriv / v.value, false};
}

DtnValue dtn_exterior_mode(const RadialOperator &op, int k, Complex lambda) {
  const ModeSolution u = radial_exterior_samples(op, k, lambda, {op.R})[0];
  const double mag = std::max(std::abs(u.value), std::abs(u.deriv));
  if (std::abs(u.value) < kPoleRel * mag)
    return {Complex{0, 0}, true}; // cannot occur for Im lambda > 0
  return {-u.deriv / u.value, false};
}

ModeWeylValue M_mode(const RadialOperator &op, int k, Complex lambda) {
  const ModeSolution vi = radial_interior_samples(op, k, lambda, {op.R})[0];
  const ModeSolution ue = radial_exterior_samples(op, k, lambda, {op.R})[0];

  ModeWeylValue out;
  out.wronskian = vi.value * ue.deriv - vi.deriv * ue.value;
  const double scale = (std::abs(vi.value) + std::abs(vi.deriv)) *
                       (std::abs(ue.value) + std::abs(ue.deriv));
  if (std::abs(out.wronskian) < kPoleRel * scale) {
    out.eigenvalue_candidate = true; // interior and exterior solutions align
    return out;
  }
  out.value = -vi.value * ue.value / out.wronskian;
  return out;
}

Eigen::Matrix2cd Mtilde_mode(const RadialOperator &op, int k, Complex lambda) {
  const ModeSolution vi = radial_interior_samples(op, k, lambda, {op.R})[0];
  const ModeSolution ue = radial_exterior_samples(op, k, lambda, {op.R})[0];
  const Complex w = vi.value * ue.deriv - vi.deriv * ue.value;
  const double scale = (std::abs(vi.value) + std::abs(vi.deriv)) *
                       (std::abs(ue.value) + std::abs(ue.deriv));
  if (std::abs(w) < kPoleRel * scale)
    throw std::domain_error("Mtilde_mode: singular block (W(R) ~ 0)");
  Eigen::Matrix2cd m;
  m(0, 0) = -vi.value * ue.value / w;  // M
  m(0, 1) = vi.value * ue.deriv / w;   // Lambda_e M
  m(1, 0) = m(0, 1);
  m(1, 1) = -vi.deriv * ue.deriv / w;  // -Lambda_i Lambda_e M
  return m;
}

AssembledAction assemble_M(const RadialOperator &op, Complex lambda,
                           const std::vector<Complex> &g) {
  op.validate();
  const int K = op.max_mode;
  if (int(g.size()) != 2 * K + 1)
    throw std::invalid_argument("assemble_M: need 2K+1 Fourier coefficients");

  AssembledAction out;
  out.coefficients.resize(g.size());
  std::vector<ModeWeylValue> per_mode(std::size_t(K) + 1);
  for (int k = 0; k <= K; ++k) {
    per_mode[std::size_t(k)] = M_mode(op, k, lambda);
    if (per_mode[std::size_t(k)].eigenvalue_candidate)
      out.flagged_modes.push_back(k);
  }
  for (int k = -K; k <= K; ++k)
    out.coefficients[std::size_t(k + K)] =
        per_mode[std::size_t(std::abs(k))].value * g[std::size_t(k + K)];
  return out;
}

} // namespace weylscan
