#include "weylscan/nevanlinna.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weylscan {

MeasureModel::MeasureModel(std::vector<Atom> atoms,
                           std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  for (const auto &a : atoms_) {
    if (!(a.weight > 0.0))
      throw std::invalid_argument("MeasureModel: atom weights must be > 0");
    if (!std::isfinite(a.position) || !std::isfinite(a.weight))
      throw std::invalid_argument("MeasureModel: non-finite atom");
  }
  for (const auto &p : pieces_) {
    if (!(p.a < p.b))
      throw std::invalid_argument("MeasureModel: degenerate density interval");
  }
  // pairwise disjoint intervals
  auto sorted = pieces_;
  std::sort(sorted.begin(), sorted.end(),
            [](const DensityPiece &l, const DensityPiece &r) { return l.a < r.a; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].a < sorted[i - 1].b)
      throw std::invalid_argument("MeasureModel: overlapping density intervals");
}

double MeasureModel::atom_weight_at(double x, double atol) const {
  double w = 0.0;
  for (const auto &a : atoms_)
    if (std::abs(a.position - x) <= atol)
      w += a.weight;
  return w;
}

double MeasureModel::density_at(double x) const {
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

Complex borel_transform(const MeasureModel &m, Complex lambda) {
  if (lambda.imag() == 0.0)
    throw std::domain_error("borel_transform: lambda must be non-real");

  Complex f{0.0, 0.0};
  for (const auto &a : m.atoms())
    f += a.weight / (a.position - lambda);

  // int_a^b t^j/(t-lambda) dt via the recursion
  //   I_0 = log((b-lambda)/(a-lambda)),  I_j = (b^j - a^j)/j + lambda I_{j-1}.
  for (const auto &p : m.pieces()) {
    Complex ij = std::log((p.b - lambda) / (p.a - lambda));
    double bpow = 1.0, apow = 1.0;
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
      if (j > 0) {
        bpow *= p.b;
        apow *= p.a;
        ij = (bpow - apow) / double(j) + lambda * ij;
      }
      f += p.coeffs[j] * ij;
    }
  }
  return f;
}

void LadderConfig::validate() const {
  if (!(y0 > 0.0))
    throw std::invalid_argument("ladder: y0 must be > 0");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("ladder: ratio must lie in (0,1)");
  if (rungs < 4)
    throw std::invalid_argument("ladder: need at least 4 rungs");
  if (fit_points < 2 || fit_points > rungs)
    throw std::invalid_argument("ladder: fit_points must lie in [2, rungs]");
}

ladder_evaluation_error::ladder_evaluation_error(int rung,
                                                 const std::string &what)
    : std::runtime_error("ladder rung " + std::to_string(rung) + ": " + what),
      rung_(rung) {}

namespace {

// Two elimination sweeps for errors c1*y + c2*y^2 on a geometric ladder.
// Input ordered from the largest y down; returns the second-level table.
std::vector<Complex> richardson2_table(const std::vector<Complex> &v,
                                       double r) {
  if (v.size() < 3)
    return v;
  std::vector<Complex> first(v.size() - 1), second(v.size() - 2);
  for (std::size_t j = 0; j + 1 < v.size(); ++j)
    first[j] = (v[j + 1] - r * v[j]) / (1.0 - r);
  const double r2 = r * r;
  for (std::size_t j = 0; j + 1 < first.size(); ++j)
    second[j] = (first[j + 1] - r2 * first[j]) / (1.0 - r2);
  return second;
}

} // namespace

Complex richardson2(const std::vector<Complex> &values, double ratio) {
  auto t = richardson2_table(values, ratio);
  if (t.empty())
    throw std::invalid_argument("richardson2: empty ladder");
  return t.back();
}

BoundaryLimit boundary_limit(const std::function<Complex(Complex)> &f, double x,
                             const LadderConfig &config) {
  config.validate();

  BoundaryLimit out;
  out.x = x;
  out.ladder.reserve(std::size_t(config.rungs));

  double y = config.y0;
  for (int j = 0; j < config.rungs; ++j, y *= config.ratio) {
    Complex v;
    try {
      v = f(Complex(x, y));
    } catch (const std::exception &e) {
      throw ladder_evaluation_error(j, e.what());
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ladder_evaluation_error(j, "non-finite value");
    out.ladder.emplace_back(y, v);
  }
  out.scale = std::abs(out.ladder.front().second);

  // Divergence exponent: log-log slope of |Im f| on the last fit_points rungs.
  {
    const int L = config.fit_points;
    const int n0 = config.rungs - L;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool degenerate = false;
    for (int j = n0; j < config.rungs; ++j) {
      const double im = std::abs(out.ladder[std::size_t(j)].second.imag());
      if (im < 1e-300) {
        degenerate = true; // boundary imaginary part is numerically zero
        break;
      }
      const double lx = std::log(out.ladder[std::size_t(j)].first);
      const double ly = std::log(im);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    if (degenerate) {
      out.divergence_exponent = 0.0;
    } else {
      const double slope = (double(L) * sxy - sx * sy) / (double(L) * sxx - sx * sx);
      out.divergence_exponent = -slope;
    }
  }
  out.im_infinite = out.divergence_exponent >= config.p_min;

  // Richardson extrapolation of f itself and of i*y*f.
  std::vector<Complex> fv(out.ladder.size()), yfv(out.ladder.size());
  for (std::size_t j = 0; j < out.ladder.size(); ++j) {
    fv[j] = out.ladder[j].second;
    yfv[j] = Complex(0.0, out.ladder[j].first) * out.ladder[j].second;
  }
  const auto ftab = richardson2_table(fv, config.ratio);
  const auto rtab = richardson2_table(yfv, config.ratio);

  out.residue = rtab.back();
  out.residue_norm = std::abs(out.residue);

  const Complex flim = ftab.back();
  out.re_value = flim.real();
  out.im_value = out.im_infinite ? std::numeric_limits<double>::infinity()
                                 : flim.imag();

  auto close = [&](Complex a, Complex b, double ref) {
    return std::abs(a - b) < config.rtol * std::max(1.0, ref);
  };
  const bool res_ok = rtab.size() >= 2 &&
                      close(rtab[rtab.size() - 2], rtab.back(),
                            std::abs(rtab.back()));
  const bool f_ok = ftab.size() >= 2 &&
                    close(ftab[ftab.size() - 2], ftab.back(), std::abs(flim));
  out.re_converged =
      ftab.size() >= 2 &&
      std::abs(ftab[ftab.size() - 2].real() - flim.real()) <
          config.rtol * std::max(1.0, std::abs(flim.real()));
  out.converged = res_ok && (out.im_infinite ? true : f_ok);
  return out;
}

namespace {

GridSet window_filter(const GridSet &s, int window,
                      const std::function<bool(int count, int len)> &keep) {
  if (window < 1)
    throw std::invalid_argument("closure window must be >= 1");
  GridSet out = s;
  const int n = int(s.flags.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - window);
    const int hi = std::min(n - 1, i + window);
    int count = 0;
    for (int j = lo; j <= hi; ++j)
      count += s.flags[std::size_t(j)] != 0;
    out.flags[std::size_t(i)] = keep(count, hi - lo + 1) ? 1 : 0;
  }
  return out;
}

} // namespace

GridSet clac(const GridSet &s, int window, double density_floor) {
  return window_filter(s, window, [&](int count, int len) {
    return double(count) / double(len) > density_floor;
  });
}

GridSet clc(const GridSet &s, int window, int count_floor) {
  if (count_floor < 1)
    throw std::invalid_argument("clc: count_floor must be >= 1");
  return window_filter(s, window,
                       [&](int count, int) { return count >= count_floor; });
}

} // namespace weylscan
