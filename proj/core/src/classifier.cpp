#include "weylscan/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace weylscan {

WeylProvider WeylProvider::scalar(std::string id,
                                  std::function<Complex(Complex)> f) {
  WeylProvider p;
  p.id = std::move(id);
  p.dim = 1;
  p.eval = [f = std::move(f)](Complex lambda) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = f(lambda);
    return m;
  };
  return p;
}

const char *to_string(SpectralTag tag) {
  switch (tag) {
  case SpectralTag::Resolvent: return "resolvent";
  case SpectralTag::Eigenvalue: return "eigenvalue";
  case SpectralTag::AbsolutelyContinuous: return "ac";
  case SpectralTag::SingularContinuousCandidate: return "sc-candidate";
  case SpectralTag::ContinuousUnresolved: return "continuous-unresolved";
  case SpectralTag::Undetermined: return "undetermined";
  }
  return "?";
}

const char *to_string(Purity p) {
  switch (p) {
  case Purity::purely_ac: return "purely_ac";
  case Purity::purely_sc: return "purely_sc";
  case Purity::mixed: return "mixed";
  case Purity::empty: return "empty";
  }
  return "?";
}

namespace {

double spectral_norm(const Eigen::MatrixXcd &m) {
  if (m.rows() == 1 && m.cols() == 1)
    return std::abs(m(0, 0));
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

struct LadderCache {
  // Matrix ladder shared between the per-probe scalar sweeps and the matrix
  // residue extrapolation.
  std::vector<double> ys;
  std::vector<Eigen::MatrixXcd> values;
};

LadderCache evaluate_ladder(const WeylProvider &provider, double x,
                            const LadderConfig &cfg) {
  LadderCache cache;
  cache.ys.reserve(std::size_t(cfg.rungs));
  cache.values.reserve(std::size_t(cfg.rungs));
  double y = cfg.y0;
  for (int j = 0; j < cfg.rungs; ++j, y *= cfg.ratio) {
    cache.ys.push_back(y);
    cache.values.push_back(provider.eval(Complex(x, y)));
  }
  return cache;
}

} // namespace

SpectralClass classify_point(const WeylProvider &provider, double x,
                             const LadderConfig &ladder,
                             const Thresholds &thresholds) {
  LadderConfig cfg = ladder;
  cfg.p_min = thresholds.exponent;
  cfg.validate();

  SpectralClass out;
  LadderCache cache;
  try {
    cache = evaluate_ladder(provider, x, cfg);
    for (const auto &m : cache.values)
      if (!m.allFinite())
        throw std::runtime_error("non-finite provider value");
  } catch (const std::exception &e) {
    out.tag = SpectralTag::Undetermined;
    out.note = std::string("provider failure: ") + e.what();
    return out;
  }

  const int d = provider.dim;
  const double scale = std::max(1e-300, spectral_norm(cache.values.front()));

  // Per-probe boundary limits on the diagonal entries, replayed from the cache.
  for (int j = 0; j < d; ++j) {
    std::size_t rung = 0;
    auto f = [&](Complex) { return cache.values[rung++](j, j); };
    out.evidence.push_back(boundary_limit(f, x, cfg));
  }

  // Residue matrix by entrywise extrapolation of i*y*M.
  out.residue = Eigen::MatrixXcd(d, d);
  std::vector<Complex> entry(cache.values.size());
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      for (std::size_t j = 0; j < cache.values.size(); ++j)
        entry[j] = Complex(0.0, cache.ys[j]) * cache.values[j](r, c);
      out.residue(r, c) = richardson2(entry, cfg.ratio);
    }
  out.residue_norm = spectral_norm(out.residue);

  // A first-order pole has Im M ~ w/y along the ladder, i.e. fitted
  // divergence exponent near 1; band edges (Im M ~ y^{-1/2}) also leave a
  // small nonzero extrapolated residue but fit a strictly smaller exponent.
  bool pole_like = false;
  for (const auto &bl : out.evidence)
    if (bl.im_infinite && bl.divergence_exponent > 0.9)
      pole_like = true;

  const double residue_floor = thresholds.residue_rel * scale;
  if (out.residue_norm > residue_floor && pole_like) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.residue);
    for (long i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > residue_floor)
        ++out.residue_rank;
    out.tag = SpectralTag::Eigenvalue;
    return out;
  }

  bool any_ac = false, any_inf = false, all_im_zero = true, all_re_ok = true;
  for (const auto &bl : out.evidence) {
    if (bl.im_infinite) {
      any_inf = true;
      all_im_zero = false;
      continue;
    }
    if (bl.im_value > thresholds.im_zero * std::max(1.0, scale))
      any_ac = true;
    if (std::abs(bl.im_value) > thresholds.im_zero * std::max(1.0, scale))
      all_im_zero = false;
    if (!bl.re_converged)
      all_re_ok = false;
  }

  if (any_ac)
    out.tag = SpectralTag::AbsolutelyContinuous;
  else if (any_inf)
    // divergent Im with vanishing y*M: the residue test above already ruled
    // out a point mass
    out.tag = SpectralTag::SingularContinuousCandidate;
  else if (all_im_zero && all_re_ok)
    out.tag = SpectralTag::Resolvent;
  else
    out.tag = SpectralTag::ContinuousUnresolved;
  return out;
}

double refine_eigenvalue(const WeylProvider &provider, double x,
                         double halfwidth, const LadderConfig &ladder,
                         double xtol) {
  auto residue_norm_at = [&](double t) {
    LadderConfig cfg = ladder;
    const auto cache = evaluate_ladder(provider, t, cfg);
    std::vector<Complex> entry(cache.values.size());
    double best = 0.0;
    for (int r = 0; r < provider.dim; ++r)
      for (int c = 0; c < provider.dim; ++c) {
        for (std::size_t j = 0; j < cache.values.size(); ++j)
          entry[j] = Complex(0.0, cache.ys[j]) * cache.values[j](r, c);
        best = std::max(best, std::abs(richardson2(entry, ladder.ratio)));
      }
    return best;
  };

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = x - halfwidth, b = x + halfwidth;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = residue_norm_at(c), fd = residue_norm_at(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = residue_norm_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = residue_norm_at(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

int resolve_threads(int requested) {
  if (const char *env = std::getenv("WEYLSCAN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0)
      return n;
  }
  if (requested > 0)
    return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

// Locate a first-order pole inside (lo, hi) by bisection on Re(1/s), which
// crosses zero downward at the pole; s is a diagonal probe of M just above
// the axis.
double bisect_pole(const std::function<double(double)> &g, double lo,
                   double hi, double xtol) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((glo > 0.0) == (gm > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

SpectralReport scan_interval(const WeylProvider &provider, double a, double b,
                             double step, const LadderConfig &ladder,
                             const Thresholds &thresholds, int threads) {
  if (!(step > 0.0))
    throw std::invalid_argument("scan_interval: step must be > 0");
  if (!(a < b))
    throw std::invalid_argument("scan_interval: need a < b");
  LadderConfig cfg = ladder;
  cfg.p_min = thresholds.exponent;
  cfg.validate();

  SpectralReport report;
  report.provider_id = provider.id;
  report.probe_dim = provider.dim;
  report.ladder = cfg;
  report.thresholds = thresholds;
  report.grid_start = a;
  report.grid_step = step;
  report.grid_count = std::size_t(std::floor((b - a) / step + 1e-9)) + 1;

  const std::size_t n = report.grid_count;
  report.points.resize(n);

  // Pole-detector samples just above the axis, one per grid point.
  const double y_probe = cfg.y0 * std::pow(cfg.ratio, cfg.rungs - 1);
  std::vector<Eigen::MatrixXcd> probe_row(n);

  const int nthreads = resolve_threads(threads);
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        const double x = report.grid_point(i);
        report.points[i] = classify_point(provider, x, cfg, thresholds);
        try {
          probe_row[i] = provider.eval(Complex(x, y_probe));
        } catch (const std::exception &) {
          probe_row[i] = Eigen::MatrixXcd::Zero(provider.dim, provider.dim);
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }

  // Eigenvalue sweep: a first-order pole of a diagonal probe makes Re(1/s)
  // cross zero downward between neighboring grid points. Candidates are
  // refined by bisection and confirmed by the full ladder classification, so
  // false proposals die and probe-blind eigenvalues stay invisible (as they
  // must). When b is not on the grid, the trailing remainder
  // (last grid point, b] is swept as one extra segment.
  std::vector<double> sweep_x(n);
  for (std::size_t i = 0; i < n; ++i)
    sweep_x[i] = report.grid_point(i);
  if (b > sweep_x.back() + 1e-12 * std::max(1.0, std::abs(b))) {
    sweep_x.push_back(b);
    try {
      probe_row.push_back(provider.eval(Complex(b, y_probe)));
    } catch (const std::exception &) {
      probe_row.push_back(Eigen::MatrixXcd::Zero(provider.dim, provider.dim));
    }
  }
  std::vector<double> candidates;
  for (int j = 0; j < provider.dim; ++j) {
    for (std::size_t i = 0; i + 1 < sweep_x.size(); ++i) {
      if (probe_row[i].size() == 0 || probe_row[i + 1].size() == 0)
        continue;
      const Complex s0 = probe_row[i](j, j), s1 = probe_row[i + 1](j, j);
      if (std::abs(s0) < 1e-300 || std::abs(s1) < 1e-300)
        continue;
      const double g0 = (1.0 / s0).real(), g1 = (1.0 / s1).real();
      if (!(g0 > 0.0 && g1 < 0.0))
        continue;
      auto g = [&](double t) {
        const Complex s = provider.eval(Complex(t, y_probe))(j, j);
        return std::abs(s) < 1e-300 ? 0.0 : (1.0 / s).real();
      };
      candidates.push_back(bisect_pole(g, sweep_x[i], sweep_x[i + 1], 1e-12));
    }
  }
  // Points already classified as eigenvalues on the grid are kept as well.
  for (std::size_t i = 0; i < n; ++i)
    if (report.points[i].tag == SpectralTag::Eigenvalue)
      candidates.push_back(report.grid_point(i));

  std::sort(candidates.begin(), candidates.end());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (c > 0 && std::abs(candidates[c] - candidates[c - 1]) < 0.5 * step)
      continue; // duplicate proposal
    const double x = candidates[c];
    SpectralClass cls = classify_point(provider, x, cfg, thresholds);
    if (cls.tag != SpectralTag::Eigenvalue)
      continue;
    EigenvalueHit hit;
    hit.x = x;
    hit.residue_norm = cls.residue_norm;
    hit.rank = cls.residue_rank;
    report.eigenvalues.push_back(hit);
    // Mark the grid-nearest point so the pointwise picture matches.
    const long i = std::lround((x - a) / step);
    if (i >= 0 && std::size_t(i) < n) {
      report.points[std::size_t(i)] = std::move(cls);
      report.points[std::size_t(i)].tag = SpectralTag::Eigenvalue;
    }
  }

  // Closure post-processing over the grid sets.
  GridSet pre_ac{a, step, std::vector<std::uint8_t>(n, 0)};
  GridSet pre_sc{a, step, std::vector<std::uint8_t>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    pre_ac.flags[i] =
        report.points[i].tag == SpectralTag::AbsolutelyContinuous ? 1 : 0;
    pre_sc.flags[i] =
        report.points[i].tag == SpectralTag::SingularContinuousCandidate ? 1 : 0;
  }
  report.ac_set = clac(pre_ac, thresholds.closure_window, thresholds.density_floor);
  report.sc_candidate_set =
      clc(pre_sc, thresholds.closure_window, thresholds.count_floor);
  // Eigenvalue points stay excluded from the ac intervals.
  for (std::size_t i = 0; i < n; ++i)
    if (report.points[i].tag == SpectralTag::Eigenvalue)
      report.ac_set.flags[i] = 0;

  // Maximal runs of resolvent points.
  std::optional<std::size_t> run_start;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool res =
        i < n && report.points[i].tag == SpectralTag::Resolvent;
    if (res && !run_start)
      run_start = i;
    if (!res && run_start) {
      report.resolvent_intervals.push_back(
          {report.grid_point(*run_start), report.grid_point(i - 1)});
      run_start.reset();
    }
  }
  return report;
}

Purity purity_check(const SpectralReport &report) {
  const bool has_eig = !report.eigenvalues.empty();
  std::size_t n_ac = 0, n_inf = 0, n_flagged = 0;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    if (report.ac_set.flags.size() == report.points.size() &&
        report.ac_set.flags[i])
      ++n_ac;
    bool inf = false;
    for (const auto &bl : report.points[i].evidence)
      inf = inf || bl.im_infinite;
    if (inf)
      ++n_inf;
    if (report.points[i].tag != SpectralTag::Resolvent)
      ++n_flagged;
  }
  if (!has_eig && n_flagged == 0)
    return Purity::empty;
  if (!has_eig && n_ac > 0 && n_inf < std::size_t(report.thresholds.count_floor))
    return Purity::purely_ac;
  if (!has_eig && n_ac == 0 && n_inf > 0)
    return Purity::purely_sc;
  return Purity::mixed;
}

} // namespace weylscan
