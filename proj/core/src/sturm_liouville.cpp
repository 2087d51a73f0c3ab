#include "weylscan/sturm_liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace weylscan {

Potential::Potential(std::vector<PotentialPiece> pieces, double support_radius)
    : pieces_(std::move(pieces)), support_radius_(support_radius) {
  if (!(support_radius_ > 0.0) || !std::isfinite(support_radius_))
    throw std::invalid_argument("Potential: support_radius must be finite and > 0");
  for (const auto &p : pieces_) {
    if (!(p.a < p.b))
      throw std::invalid_argument("Potential: degenerate piece interval");
    if (p.a < -support_radius_ - 1e-12 || p.b > support_radius_ + 1e-12)
      throw std::invalid_argument("Potential: piece outside the support radius");
  }
  auto sorted = pieces_;
  std::sort(sorted.begin(), sorted.end(),
            [](const PotentialPiece &l, const PotentialPiece &r) { return l.a < r.a; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].a < sorted[i - 1].b - 1e-15)
      throw std::invalid_argument("Potential: overlapping pieces");
}

Potential Potential::square_well(double v0, double a) {
  return Potential({PotentialPiece{-a, a, {-v0}}}, a);
}

double Potential::operator()(double x) const {
  for (const auto &p : pieces_) {
    if (x < p.a || x > p.b)
      continue;
    double v = 0.0;
    for (std::size_t j = p.coeffs.size(); j-- > 0;)
      v = v * x + p.coeffs[j];
    return v;
  }
  return 0.0;
}

Potential Potential::reflected() const {
  std::vector<PotentialPiece> out;
  out.reserve(pieces_.size());
  for (const auto &p : pieces_) {
    PotentialPiece r;
    r.a = -p.b;
    r.b = -p.a;
    r.coeffs = p.coeffs;
    for (std::size_t j = 1; j < r.coeffs.size(); j += 2)
      r.coeffs[j] = -r.coeffs[j];
    out.push_back(std::move(r));
  }
  return Potential(std::move(out), support_radius_);
}

namespace {

using State = std::array<Complex, 2>; // (f, f')

// Integrate f'' = (q - lambda) f from x0 to x1 (either direction), with the
// state renormalized chunk by chunk; only the logarithmic derivative
// survives, so the lost scale is irrelevant.
State integrate_schroedinger(const Potential &q, Complex lambda, State y,
                             double x0, double x1, const OdeConfig &cfg) {
  namespace ode = boost::numeric::odeint;
  auto rhs = [&](const State &s, State &dsdx, double x) {
    dsdx[0] = s[1];
    dsdx[1] = (q(x) - lambda) * s[0];
  };
  auto stepper = ode::make_controlled(cfg.atol, cfg.rtol,
                                      ode::runge_kutta_dopri5<State>());
  const double dir = x1 >= x0 ? 1.0 : -1.0;
  const int chunks =
      std::max(1, int(std::ceil(std::abs(x1 - x0) / cfg.chunk)));
  double x = x0;
  for (int c = 0; c < chunks; ++c) {
    const double xn = (c + 1 == chunks) ? x1 : x0 + (x1 - x0) * (c + 1) / chunks;
    ode::integrate_adaptive(stepper, rhs, y, x, xn, dir * cfg.initial_step);
    const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
    if (mag > 0.0) {
      y[0] /= mag;
      y[1] /= mag;
    }
    x = xn;
  }
  return y;
}

} // namespace

TraceData halfline_trace(const Potential &q, Side side, Complex lambda,
                         const OdeConfig &config) {
  // Minus side: the reflected potential turns the problem into a plus-side
  // one; with the interface convention m-(lambda) = -g'(0)/g(0) the reflected
  // trace data is exactly what is needed.
  const Potential qq = side == Side::plus ? q : q.reflected();
  const double x_edge = qq.support_radius();
  const Complex k = sqrt_upper(lambda);

  // Beyond the support the decaying solution is exp(i k x); start with its
  // logarithmic data at the edge (the overall scale does not matter).
  State y{Complex(1.0, 0.0), Complex(0.0, 1.0) * k};
  y = integrate_schroedinger(qq, lambda, y, x_edge, 0.0, config);
  return {y[0], y[1]};
}

Complex m_half(const Potential &q, Side side, Complex lambda,
               const OdeConfig &config) {
  const TraceData t = halfline_trace(q, side, lambda, config);
  if (std::abs(t.value) < 1e-300)
    throw degenerate_trace_error();
  return t.deriv / t.value;
}

Complex coupled_m(const Potential &q, Complex lambda, const OdeConfig &config) {
  const Complex mp = m_half(q, Side::plus, lambda, config);
  const Complex mm = m_half(q, Side::minus, lambda, config);
  const Complex s = mp + mm;
  if (std::abs(s) == 0.0)
    throw pole_of_m_error(lambda);
  return -1.0 / s;
}

Eigen::Matrix2cd coupled_m_tilde(const Potential &q, Complex lambda,
                                 const OdeConfig &config) {
  const Complex mp = m_half(q, Side::plus, lambda, config);
  const Complex mm = m_half(q, Side::minus, lambda, config);
  if (std::abs(mm) == 0.0)
    throw std::domain_error("coupled_m_tilde: m_-(lambda) = 0");
  Eigen::Matrix2cd block;
  block << -mp, 1.0, 1.0, 1.0 / mm;
  const Complex det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
  if (std::abs(det) == 0.0)
    throw std::domain_error("coupled_m_tilde: block matrix is singular");
  Eigen::Matrix2cd inv;
  inv << block(1, 1), -block(0, 1), -block(1, 0), block(0, 0);
  inv /= det;
  return inv;
}

} // namespace weylscan
