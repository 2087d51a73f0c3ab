#include "weylscan/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "weylscan/bessel.hpp"

namespace weylscan {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::string fmt(Complex z) {
  std::ostringstream ss;
  ss << std::setprecision(12) << z.real() << (z.imag() < 0 ? "-" : "+")
     << std::abs(z.imag()) << "i";
  return ss.str();
}

std::vector<std::pair<double, double>> flag_intervals(const GridSet &set) {
  std::vector<std::pair<double, double>> runs;
  std::size_t i = 0;
  while (i < set.flags.size()) {
    if (!set.flags[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < set.flags.size() && set.flags[j + 1])
      ++j;
    runs.emplace_back(set.start + set.step * double(i),
                      set.start + set.step * double(j));
    i = j + 1;
  }
  return runs;
}

nlohmann::json grid_set_json(const GridSet &set) {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < set.flags.size(); ++i)
    if (set.flags[i])
      indices.push_back(i);
  nlohmann::json j;
  j["start"] = set.start;
  j["step"] = set.step;
  j["size"] = set.flags.size();
  j["indices"] = indices;
  return j;
}

int map_exception(const std::exception &e, std::ostream &log) {
  log << "error: " << e.what() << "\n";
  if (dynamic_cast<const config_error *>(&e) ||
      dynamic_cast<const std::invalid_argument *>(&e))
    return exit_config_error;
  return exit_numeric_error;
}

} // namespace

void write_scan_csv(const SpectralReport &scan, std::ostream &out) {
  out << "x,class,residue_norm,im_limit,divergence_exponent,probe_id\n";
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const SpectralClass &pt = scan.points[i];
    const double x = scan.grid_point(i);
    for (std::size_t p = 0; p < pt.evidence.size(); ++p) {
      const BoundaryLimit &ev = pt.evidence[p];
      out << fmt(x) << ',' << to_string(pt.tag) << ',' << fmt(pt.residue_norm)
          << ',' << (ev.im_infinite ? std::string("inf") : fmt(ev.im_value))
          << ',' << fmt(ev.divergence_exponent) << ',' << p << '\n';
    }
  }
}

void write_scan_json(const SpectralReport &scan, const RunConfig &config,
                     std::ostream &out) {
  nlohmann::json j;
  j["provider"] = scan.provider_id;
  j["probe_dim"] = scan.probe_dim;
  j["ladder"] = {{"y0", scan.ladder.y0},
                 {"ratio", scan.ladder.ratio},
                 {"rungs", scan.ladder.rungs},
                 {"fit_points", scan.ladder.fit_points},
                 {"rtol", scan.ladder.rtol},
                 {"p_min", scan.ladder.p_min}};
  j["thresholds"] = {{"residue_rel", scan.thresholds.residue_rel},
                     {"im_zero", scan.thresholds.im_zero},
                     {"exponent", scan.thresholds.exponent},
                     {"closure_window", scan.thresholds.closure_window},
                     {"density_floor", scan.thresholds.density_floor},
                     {"count_floor", scan.thresholds.count_floor}};
  j["grid"] = {{"start", scan.grid_start},
               {"step", scan.grid_step},
               {"count", scan.grid_count}};
  j["threads"] = config.threads;

  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const SpectralClass &pt = scan.points[i];
    nlohmann::json e = nlohmann::json::array();
    for (const BoundaryLimit &ev : pt.evidence) {
      nlohmann::json probe;
      probe["im_infinite"] = ev.im_infinite;
      probe["im_limit"] = ev.im_value;
      probe["divergence_exponent"] = ev.divergence_exponent;
      probe["re_limit"] = ev.re_value;
      probe["re_converged"] = ev.re_converged;
      e.push_back(std::move(probe));
    }
    nlohmann::json p;
    p["x"] = scan.grid_point(i);
    p["class"] = to_string(pt.tag);
    p["residue_norm"] = pt.residue_norm;
    p["residue_rank"] = pt.residue_rank;
    p["probes"] = std::move(e);
    if (!pt.note.empty())
      p["note"] = pt.note;
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);

  j["ac_set"] = grid_set_json(scan.ac_set);
  j["sc_candidate_set"] = grid_set_json(scan.sc_candidate_set);

  nlohmann::json eig = nlohmann::json::array();
  for (const EigenvalueHit &h : scan.eigenvalues)
    eig.push_back({{"x", h.x}, {"residue_norm", h.residue_norm}, {"rank", h.rank}});
  j["eigenvalues"] = std::move(eig);

  nlohmann::json res = nlohmann::json::array();
  for (const ResolventInterval &r : scan.resolvent_intervals)
    res.push_back({{"a", r.a}, {"b", r.b}});
  j["resolvent_intervals"] = std::move(res);

  j["purity"] = to_string(purity_check(scan));
  j["label"] = "probe-limited";

  out << j.dump(2) << "\n";
}

void write_scan_summary(const SpectralReport &scan, std::ostream &out) {
  out << "provider: " << scan.provider_id << " (probe dim " << scan.probe_dim
      << ")\n";
  out << "grid: [" << scan.grid_start << ", "
      << scan.grid_start + scan.grid_step * double(scan.grid_count - 1)
      << "], step " << scan.grid_step << ", " << scan.grid_count
      << " points\n";

  std::size_t counts[6] = {0, 0, 0, 0, 0, 0};
  for (const SpectralClass &pt : scan.points)
    ++counts[int(pt.tag)];
  out << "classes:";
  for (int t = 0; t < 6; ++t)
    if (counts[t])
      out << " " << to_string(SpectralTag(t)) << "=" << counts[t];
  out << "\n";

  out << "eigenvalues: " << scan.eigenvalues.size() << "\n";
  for (const EigenvalueHit &h : scan.eigenvalues)
    out << "  x = " << std::setprecision(12) << h.x
        << "  residue_norm = " << h.residue_norm << "  rank = " << h.rank
        << "\n";

  auto print_runs = [&](const char *name, const GridSet &set) {
    const auto runs = flag_intervals(set);
    out << name << ": " << runs.size() << " interval(s)\n";
    for (const auto &[a, b] : runs)
      out << "  [" << std::setprecision(12) << a << ", " << b << "]\n";
  };
  print_runs("ac set (after closure)", scan.ac_set);
  print_runs("sc-candidate set (after closure)", scan.sc_candidate_set);

  out << "resolvent intervals: " << scan.resolvent_intervals.size() << "\n";
  for (const ResolventInterval &r : scan.resolvent_intervals)
    out << "  (" << std::setprecision(12) << r.a << ", " << r.b << ")\n";

  out << "purity (probe-limited): " << to_string(purity_check(scan)) << "\n";
}

int run_scan(const RunConfig &config, std::ostream &log, RunArtifacts *out) {
  std::vector<std::string> written;
  try {
    const WeylProvider provider = make_provider(config);
    SpectralReport report =
        scan_interval(provider, config.scan_a, config.scan_b, config.scan_step,
                      config.ladder, config.thresholds, config.threads);

    auto emit = [&](const std::string &path, auto &&writer) {
      if (path.empty())
        return;
      std::ofstream f(path);
      if (!f)
        throw std::runtime_error("cannot open output file: " + path);
      written.push_back(path);
      writer(f);
      f.flush();
      if (!f)
        throw std::runtime_error("failed while writing: " + path);
    };
    emit(config.csv_path, [&](std::ostream &f) { write_scan_csv(report, f); });
    emit(config.json_path,
         [&](std::ostream &f) { write_scan_json(report, config, f); });
    emit(config.summary_path,
         [&](std::ostream &f) { write_scan_summary(report, f); });

    write_scan_summary(report, log);
    if (out) {
      out->scan = std::move(report);
      out->csv_path = config.csv_path;
      out->json_path = config.json_path;
      out->summary_path = config.summary_path;
    }
    return exit_ok;
  } catch (const std::exception &e) {
    for (const std::string &p : written)
      std::remove(p.c_str());
    return map_exception(e, log);
  }
}

int run_eigs(const RunConfig &config, std::ostream &log) {
  try {
    const WeylProvider provider = make_provider(config);
    const SpectralReport report =
        scan_interval(provider, config.scan_a, config.scan_b, config.scan_step,
                      config.ladder, config.thresholds, config.threads);
    log << "eigenvalues in [" << config.scan_a << ", " << config.scan_b
        << "]: " << report.eigenvalues.size() << "\n";
    log << "x_refined,residue_norm,rank\n";
    for (const EigenvalueHit &h : report.eigenvalues) {
      const double refined = refine_eigenvalue(provider, h.x, config.scan_step,
                                               config.ladder);
      log << fmt(refined) << ',' << fmt(h.residue_norm) << ',' << h.rank
          << "\n";
    }
    return exit_ok;
  } catch (const std::exception &e) {
    return map_exception(e, log);
  }
}

int run_dtn_modes(const RunConfig &config, Complex lambda, std::ostream &log) {
  try {
    if (config.kind != ProblemKind::radial)
      throw config_error("problem.type", "dtn-modes requires a radial problem");
    log << "lambda = " << fmt(lambda) << ", R = " << config.radial.R << "\n";
    log << "k,dtn_interior,dtn_exterior,M,wronskian_flag\n";
    for (int k = 0; k <= config.radial.max_mode; ++k) {
      const DtnValue li = dtn_interior_mode(config.radial, k, lambda);
      const DtnValue le = dtn_exterior_mode(config.radial, k, lambda);
      const ModeWeylValue m = M_mode(config.radial, k, lambda);
      log << k << ',' << (li.pole ? std::string("pole") : fmt(li.value)) << ','
          << (le.pole ? std::string("pole") : fmt(le.value)) << ','
          << fmt(m.value) << ',' << (m.eigenvalue_candidate ? 1 : 0) << "\n";
    }
    return exit_ok;
  } catch (const std::exception &e) {
    return map_exception(e, log);
  }
}

int run_model_info(const std::string &path, std::ostream &log) {
  try {
    const TripleModel model = TripleModel::load(path);
    log << "state dim n = " << model.dim() << ", probe dim d = "
        << model.probe_dim() << "\n";
    log << "mu0 = " << fmt(model.mu0()) << ", spectral scale = "
        << model.spectral_scale() << "\n";
    log << "eigenvalue,visible,trace_rank,residue_norm\n";
    const Eigen::VectorXd &ev = model.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
      if (i > 0 && std::abs(ev(i) - ev(i - 1)) <= 1e-12 * model.spectral_scale())
        continue; // one row per distinct eigenvalue
      const Matrix res = model.residue(ev(i));
      const double norm = res.operatorNorm();
      const bool visible = norm > 1e-12 * model.spectral_scale();
      int rank = 0;
      if (visible)
        rank = int(model.trace_map_range(ev(i)).cols());
      log << fmt(ev(i)) << ',' << (visible ? 1 : 0) << ',' << rank << ','
          << fmt(norm) << "\n";
    }
    const double lo = ev.minCoeff() - 1.0, hi = ev.maxCoeff() + 1.0;
    const auto cert = model.local_simplicity(lo, hi);
    log << "globally simple: " << (cert.simple ? "yes" : "no") << " (probe rank "
        << cert.probe_rank << " / spectral rank " << cert.spectral_rank
        << ")\n";
    return exit_ok;
  } catch (const std::exception &e) {
    return map_exception(e, log);
  }
}

TripleModel random_triple_model(unsigned seed, int n, int d) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto entry = [&] { return Complex(u(rng), u(rng)); };

  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b(i, j) = entry();
  const Matrix a0 = 0.5 * (b + b.adjoint());

  Matrix g(n, d);
  for (;;) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j)
        g(i, j) = entry();
    Eigen::JacobiSVD<Matrix> svd(g);
    if (svd.rank() == d && svd.singularValues()(d - 1) > 1e-3)
      break;
  }

  Matrix c(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      c(i, j) = entry();
  const Matrix re_m0 = 0.5 * (c + c.adjoint());

  return TripleModel(a0, g, Complex(0.0, 1.0), re_m0);
}

namespace {

struct CheckTable {
  std::ostream &log;
  bool all_pass = true;

  void row(const std::string &name, double residual, double tol) {
    const bool pass = residual <= tol && std::isfinite(residual);
    all_pass = all_pass && pass;
    log << (pass ? "pass" : "FAIL") << "  " << std::left << std::setw(44)
        << name << " residual " << std::scientific << std::setprecision(3)
        << residual << "  tol " << tol << std::defaultfloat << "\n";
  }
};

double rel_err(Complex got, Complex want) {
  const double scale = std::max(std::abs(want), 1e-30);
  return std::abs(got - want) / scale;
}

void suite_lemma24(CheckTable &table, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> v(0.1, 2.0);
  auto off_axis = [&] { return Complex(u(rng), (u(rng) < 0 ? -1 : 1) * v(rng)); };

  double conj_res = 0.0, herglotz_res = 0.0, green_res = 0.0, pf_res = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + int(trial % 7);              // n in 2..8
    const int d = 1 + int(trial % std::min(3, n)); // d in 1..3, d <= n
    const TripleModel model = random_triple_model(seed + 101 * trial, n, d);
    const double scale = std::max(1.0, model.spectral_scale());

    for (int s = 0; s < 50; ++s) {
      const Complex lambda = off_axis();
      const Matrix m = model.weyl(lambda);
      conj_res = std::max(conj_res,
                          (model.weyl(std::conj(lambda)) - m.adjoint()).norm() /
                              scale);
      const Eigen::MatrixXcd imm =
          (m - m.adjoint()) / Complex(0.0, 2.0 * lambda.imag());
      Eigen::SelfAdjointEigenSolver<Matrix> es(imm);
      herglotz_res = std::max(herglotz_res, std::max(0.0, -es.eigenvalues()(0)));
    }

    for (int s = 0; s < 10; ++s) {
      const Complex lambda = off_axis(), mu = off_axis(), nu = off_axis();
      const Matrix green_lhs = (lambda - std::conj(mu)) *
                               model.gamma_field(mu).adjoint() *
                               model.gamma_field(lambda);
      const Matrix green_rhs = model.weyl(lambda) - model.weyl(mu).adjoint();
      green_res = std::max(green_res, (green_lhs - green_rhs).norm() / scale);

      if (std::abs(lambda - nu) < 1e-3 || std::abs(lambda - std::conj(mu)) < 1e-3 ||
          std::abs(nu - std::conj(mu)) < 1e-3)
        continue;
      const Matrix pf_lhs = model.gamma_field(mu).adjoint() *
                            model.resolvent(lambda) * model.gamma_field(nu);
      const Matrix pf_rhs =
          model.weyl(lambda) / ((lambda - nu) * (lambda - std::conj(mu))) +
          model.weyl(std::conj(mu)) /
              ((lambda - std::conj(mu)) * (nu - std::conj(mu))) +
          model.weyl(nu) / ((nu - lambda) * (nu - std::conj(mu)));
      pf_res = std::max(pf_res, (pf_lhs - pf_rhs).norm() / scale);
    }
  }
  table.row("conjugate symmetry M(conj l) = M(l)*", conj_res, 1e-10);
  table.row("Herglotz positivity Im M / Im l >= 0", herglotz_res, 1e-10);
  table.row("Green identity (gamma vs M)", green_res, 1e-10);
  table.row("partial-fraction resolvent identity", pf_res, 1e-10);
}

void suite_bessel(CheckTable &table) {
  using namespace bessel;

  double jy_real = 0.0;
  for (int k = 0; k <= 8; ++k)
    for (double x : {0.3, 0.7, 1.0, 2.5, 5.0, 8.0, 14.0, 22.0}) {
      jy_real = std::max(jy_real, rel_err(J(k, Complex(x, 0.0)),
                                          std::cyl_bessel_j(double(k), x)));
      jy_real = std::max(jy_real, rel_err(Y(k, Complex(x, 0.0)),
                                          std::cyl_neumann(double(k), x)));
    }
  table.row("J,Y vs <cmath> real arguments", jy_real, 1e-6);

  double ik_real = 0.0;
  for (int k = 0; k <= 6; ++k)
    for (double x : {0.4, 1.0, 2.0, 4.0, 7.0}) {
      ik_real = std::max(ik_real, rel_err(I(k, Complex(x, 0.0)),
                                          std::cyl_bessel_i(double(k), x)));
      ik_real = std::max(ik_real, rel_err(K(k, Complex(x, 0.0)),
                                          std::cyl_bessel_k(double(k), x)));
    }
  table.row("I,K vs <cmath> real arguments", ik_real, 1e-6);

  double wronskian = 0.0;
  const double pi = 3.14159265358979323846;
  for (int k = 0; k <= 8; ++k)
    for (Complex z : {Complex(1.0, 0.7), Complex(3.0, -2.0), Complex(0.5, 4.0),
                      Complex(9.0, 1.5), Complex(16.0, 3.0)}) {
      const Complex w =
          J(k, z) * (Y(k - 1, z) - Complex(double(k)) / z * Y(k, z)) -
          (J(k - 1, z) - Complex(double(k)) / z * J(k, z)) * Y(k, z);
      wronskian = std::max(wronskian, rel_err(w, 2.0 / (pi * z)));
    }
  table.row("Wronskian J Y' - J' Y = 2/(pi z)", wronskian, 1e-8);

  double hankel = 0.0;
  for (int k = 0; k <= 8; ++k)
    for (Complex z : {Complex(2.0, 1.0), Complex(6.0, 0.5), Complex(13.0, 2.0)})
      hankel = std::max(hankel,
                        rel_err(H1(k, z), J(k, z) + Complex(0, 1) * Y(k, z)));
  table.row("H1 = J + iY", hankel, 1e-8);

  // Free disk, radius 1: interior/exterior DtN closed forms and the mode-0
  // coupled value M(-1) = I0(1) K0(1).
  RadialOperator unit_disk;
  unit_disk.R = 1.0;
  unit_disk.max_mode = 8;
  unit_disk.q = Potential::free_potential();

  double dtn_err = 0.0;
  for (int k = 0; k <= 4; ++k)
    for (Complex lambda : {Complex(2.0, 1.0), Complex(-1.5, 0.8)}) {
      const Complex s = sqrt_upper(lambda);
      const DtnValue li = dtn_interior_mode(unit_disk, k, lambda);
      const Complex li_exact = s * J_deriv(k, s) / J(k, s);
      dtn_err = std::max(dtn_err, rel_err(li.value, li_exact));
      const DtnValue le = dtn_exterior_mode(unit_disk, k, lambda);
      const Complex le_exact = -s * H1_deriv(k, s) / H1(k, s);
      dtn_err = std::max(dtn_err, rel_err(le.value, le_exact));
    }
  table.row("free-disk DtN vs Bessel closed forms", dtn_err, 1e-6);

  const Complex m0 = M_mode(unit_disk, 0, Complex(-1.0, 0.0)).value;
  const Complex m0_exact =
      I(0, Complex(1.0, 0.0)) * K(0, Complex(1.0, 0.0));
  table.row("free-disk M0(-1) = I0(1) K0(1)", rel_err(m0, m0_exact), 1e-8);
}

void suite_sturm(CheckTable &table) {
  const Potential freeq = Potential::free_potential();
  double m_err = 0.0, coupled_err = 0.0;
  for (Complex lambda : {Complex(1.0, 0.5), Complex(-2.0, 0.3),
                         Complex(4.0, -1.0), Complex(0.25, 0.05)}) {
    const Complex k = sqrt_upper(lambda);
    m_err = std::max(m_err,
                     rel_err(m_half(freeq, Side::plus, lambda), Complex(0, 1) * k));
    m_err = std::max(m_err, rel_err(m_half(freeq, Side::minus, lambda),
                                    Complex(0, 1) * k));
    coupled_err = std::max(coupled_err, rel_err(coupled_m(freeq, lambda),
                                                -1.0 / (Complex(0, 2) * k)));
  }
  table.row("free half-line m(l) = i sqrt(l)", m_err, 1e-8);
  table.row("free coupled m(l) = -1/(2 i sqrt(l))", coupled_err, 1e-8);

  // Below the essential spectrum of the free line the values are real:
  // m(-1) = -1 and m-tilde(-1) = ((1/2, 1/2), (1/2, -1/2)).
  const Complex lam(-1.0, 0.0);
  double below = rel_err(m_half(freeq, Side::plus, lam), Complex(-1.0, 0.0));
  below = std::max(below, rel_err(coupled_m(freeq, lam), Complex(0.5, 0.0)));
  const Eigen::Matrix2cd mt = coupled_m_tilde(freeq, lam);
  Eigen::Matrix2cd mt_exact;
  mt_exact << 0.5, 0.5, 0.5, -0.5;
  below = std::max(below, (mt - mt_exact).norm());
  table.row("free line at l = -1 (real values)", below, 1e-8);
}

} // namespace

int run_oracle_verify(const std::string &suite, unsigned seed,
                      std::ostream &log) {
  CheckTable table{log};
  if (suite == "empty") {
    log << "suite 'empty': no checks\n";
    return exit_ok;
  }
  try {
    if (suite == "lemma24") {
      suite_lemma24(table, seed);
    } else if (suite == "bessel-free") {
      suite_bessel(table);
    } else if (suite == "sturm-free") {
      suite_sturm(table);
    } else if (suite == "all") {
      suite_lemma24(table, seed);
      suite_bessel(table);
      suite_sturm(table);
    } else {
      log << "error: unknown verification suite '" << suite << "'\n";
      return exit_config_error;
    }
  } catch (const std::exception &e) {
    return map_exception(e, log);
  }
  log << (table.all_pass ? "all checks passed\n" : "some checks FAILED\n");
  return table.all_pass ? exit_ok : exit_numeric_error;
}

} // namespace weylscan
