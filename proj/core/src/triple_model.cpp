#include "weylscan/triple_model.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace weylscan {

namespace {

Matrix json_to_matrix(const nlohmann::json &j) {
  const auto rows = j.size();
  if (rows == 0)
    return Matrix(0, 0);
  const auto cols = j.at(0).size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols)
      throw std::invalid_argument("matrix JSON: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto &e = j.at(r).at(c);
      m(long(r), long(c)) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const Matrix &m) {
  nlohmann::json j = nlohmann::json::array();
  for (long r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (long c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    j.push_back(std::move(row));
  }
  return j;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w) {
  x.resize(std::size_t(n));
  w.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - double(k) * p2) / double(k + 1);
      }
      pp = double(n) * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15)
        break;
    }
    x[std::size_t(n - 1 - i)] = t;
    w[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
}

} // namespace

TripleModel::TripleModel(Matrix a0, Matrix gamma0, Complex mu0, Matrix re_m0)
    : a0_(std::move(a0)), gamma0_(std::move(gamma0)), re_m0_(std::move(re_m0)),
      mu0_(mu0) {
  const long n = a0_.rows();
  const long d = gamma0_.cols();
  if (a0_.cols() != n)
    throw std::invalid_argument("TripleModel: A0 must be square");
  if ((a0_ - a0_.adjoint()).norm() > 1e-12 * std::max(1.0, a0_.norm()))
    throw std::invalid_argument(
        "TripleModel: A0 violates Hermitian symmetry (A0 != A0*)");
  if (gamma0_.rows() != n)
    throw std::invalid_argument("TripleModel: gamma0 row count != dim(A0)");
  if (d < 1 || d > n)
    throw std::invalid_argument("TripleModel: need 1 <= d <= n probe columns");
  if (mu0_.imag() == 0.0)
    throw std::invalid_argument("TripleModel: Im(mu0) must be nonzero");
  if (re_m0_.rows() != d || re_m0_.cols() != d)
    throw std::invalid_argument("TripleModel: Re M(mu0) must be d x d");
  if ((re_m0_ - re_m0_.adjoint()).norm() > 1e-12 * std::max(1.0, re_m0_.norm()))
    throw std::invalid_argument("TripleModel: Re M(mu0) must be Hermitian");

  Eigen::JacobiSVD<Matrix> svd(gamma0_);
  if (svd.singularValues()(d - 1) <
      1e-10 * std::max(1.0, svd.singularValues()(0)))
    throw std::invalid_argument("TripleModel: gamma0 is column rank deficient");

  a0_ = 0.5 * (a0_ + a0_.adjoint().eval()); // kill symmetric roundoff
  Eigen::SelfAdjointEigenSolver<Matrix> es(a0_);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("TripleModel: eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  scale_ = std::max(1.0, std::max(std::abs(evals_(0)), std::abs(evals_(n - 1))));
}

double TripleModel::eig_atol() const { return 1e-9 * scale_; }

bool TripleModel::is_eigenvalue(double x) const {
  for (long i = 0; i < evals_.size(); ++i)
    if (std::abs(evals_(i) - x) <= eig_atol())
      return true;
  return false;
}

Matrix TripleModel::resolvent(Complex lambda) const {
  if (lambda.imag() == 0.0 && is_eigenvalue(lambda.real()))
    throw singular_resolvent(lambda);
  Vector d(evals_.size());
  for (long i = 0; i < evals_.size(); ++i)
    d(i) = 1.0 / (evals_(i) - lambda);
  return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

Matrix TripleModel::gamma_field(Complex nu) const {
  return gamma0_ + (nu - mu0_) * (resolvent(nu) * gamma0_);
}

Matrix TripleModel::weyl(Complex lambda) const {
  const Complex c = (lambda - mu0_) * (lambda - std::conj(mu0_));
  Matrix inner = (lambda - mu0_.real()) * Matrix::Identity(dim(), dim()) +
                 c * resolvent(lambda);
  return re_m0_ + gamma0_.adjoint() * inner * gamma0_;
}

Matrix TripleModel::eigen_projection(double x) const {
  Matrix p = Matrix::Zero(dim(), dim());
  for (long i = 0; i < evals_.size(); ++i)
    if (std::abs(evals_(i) - x) <= eig_atol())
      p += evecs_.col(i) * evecs_.col(i).adjoint();
  return p;
}

Matrix TripleModel::spectral_projection(double a, double b) const {
  Matrix p = Matrix::Zero(dim(), dim());
  for (long i = 0; i < evals_.size(); ++i)
    if (evals_(i) > a && evals_(i) < b)
      p += evecs_.col(i) * evecs_.col(i).adjoint();
  return p;
}

Matrix TripleModel::residue(double x) const {
  if (!is_eigenvalue(x))
    return Matrix::Zero(probe_dim(), probe_dim());
  const Complex c = -(x - mu0_) * (x - std::conj(mu0_));
  return c * (gamma0_.adjoint() * eigen_projection(x) * gamma0_);
}

Matrix TripleModel::residue_extrapolated(double x,
                                         const LadderConfig &config) const {
  config.validate();
  const int d = probe_dim();
  std::vector<Matrix> vals;
  vals.reserve(std::size_t(config.rungs));
  double y = config.y0;
  for (int j = 0; j < config.rungs; ++j, y *= config.ratio) {
    const Complex lambda(x, y);
    vals.push_back((Complex(0.0, y) * weyl(lambda)).eval());
  }
  Matrix out(d, d);
  std::vector<Complex> entry(vals.size());
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      for (std::size_t j = 0; j < vals.size(); ++j)
        entry[j] = vals[j](r, c);
      out(r, c) = richardson2(entry, config.ratio);
    }
  return out;
}

Matrix TripleModel::trace_map_range(double x) const {
  if (!is_eigenvalue(x))
    throw std::invalid_argument("trace_map_range: x is not an eigenvalue of A0");
  std::vector<long> idx;
  for (long i = 0; i < evals_.size(); ++i)
    if (std::abs(evals_(i) - x) <= eig_atol())
      idx.push_back(i);
  Matrix b(probe_dim(), long(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    b.col(long(k)) = gamma0_.adjoint() * evecs_.col(idx[k]);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  long rank = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * std::max(1.0, smax))
      ++rank;
  return svd.matrixU().leftCols(rank);
}

std::vector<Complex> default_probe_points(double scale) {
  const double s = std::max(1.0, scale);
  return {Complex(0, s),      Complex(0, -s),      Complex(s, s),
          Complex(s, -s),     Complex(-s, s),      Complex(-s, -s),
          Complex(2 * s, 2 * s), Complex(2 * s, -2 * s)};
}

TripleModel::SimplicityCertificate
TripleModel::local_simplicity(double a, double b,
                              std::vector<Complex> probes) const {
  if (probes.empty())
    probes = default_probe_points(scale_);
  for (const Complex &nu : probes)
    if (nu.imag() == 0.0 && is_eigenvalue(nu.real()))
      throw singular_resolvent(nu);

  std::vector<long> idx;
  for (long i = 0; i < evals_.size(); ++i)
    if (evals_(i) > a && evals_(i) < b)
      idx.push_back(i);

  SimplicityCertificate cert;
  cert.spectral_rank = int(idx.size());
  if (idx.empty()) {
    cert.probe_rank = 0;
    cert.simple = true; // empty spectral subspace
    return cert;
  }

  // Rank of { E(Delta) gamma(nu) e_j } equals the rank of V^* [gamma(nu)...]
  // where V spans the spectral subspace.
  Matrix vsel(dim(), long(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    vsel.col(long(k)) = evecs_.col(idx[k]);

  Matrix stacked(long(idx.size()), long(probes.size()) * probe_dim());
  for (std::size_t p = 0; p < probes.size(); ++p)
    stacked.middleCols(long(p) * probe_dim(), probe_dim()) =
        vsel.adjoint() * gamma_field(probes[p]);

  Eigen::JacobiSVD<Matrix> svd(stacked);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  long rank = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8 * std::max(1.0, smax))
      ++rank;
  cert.probe_rank = int(rank);
  cert.simple = cert.probe_rank == cert.spectral_rank;
  return cert;
}

Matrix TripleModel::stone_projection(double a, double b, double eps,
                                     int nodes_per_panel) const {
  if (!(a < b))
    throw std::invalid_argument("stone_projection: need a < b");
  if (!(eps > 0.0))
    throw std::invalid_argument("stone_projection: need eps > 0");
  if (is_eigenvalue(a) || is_eigenvalue(b))
    throw std::invalid_argument("stone_projection: endpoint is an eigenvalue");

  // Panels graded geometrically towards every eigenvalue so the Lorentzian
  // spikes of width eps are resolved.
  std::vector<double> breaks = {a, b};
  for (long i = 0; i < evals_.size(); ++i) {
    const double lam = evals_(i);
    if (lam > a && lam < b)
      breaks.push_back(lam);
    for (double h = eps; h < (b - a) + eps; h *= 4.0) {
      if (lam - h > a && lam - h < b)
        breaks.push_back(lam - h);
      if (lam + h > a && lam + h < b)
        breaks.push_back(lam + h);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double u, double v) {
                             return std::abs(u - v) < 1e-300;
                           }),
               breaks.end());

  std::vector<double> gx, gw;
  gauss_legendre(std::max(2, nodes_per_panel), gx, gw);

  Eigen::VectorXd q = Eigen::VectorXd::Zero(evals_.size());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    for (std::size_t k = 0; k < gx.size(); ++k) {
      const double t = mid + half * gx[k];
      const double w = half * gw[k];
      for (long i = 0; i < evals_.size(); ++i) {
        const double dtl = evals_(i) - t;
        q(i) += w * (eps / M_PI) / (dtl * dtl + eps * eps);
      }
    }
  }
  return evecs_ * q.cast<Complex>().asDiagonal() * evecs_.adjoint();
}

TripleModel TripleModel::from_json(const nlohmann::json &j) {
  const auto &mu = j.at("mu0");
  return TripleModel(json_to_matrix(j.at("a0")), json_to_matrix(j.at("gamma0")),
                     Complex(mu.at(0).get<double>(), mu.at(1).get<double>()),
                     json_to_matrix(j.at("re_m0")));
}

nlohmann::json TripleModel::to_json() const {
  return {{"a0", matrix_to_json(a0_)},
          {"gamma0", matrix_to_json(gamma0_)},
          {"mu0", {mu0_.real(), mu0_.imag()}},
          {"re_m0", matrix_to_json(re_m0_)}};
}

TripleModel TripleModel::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

void TripleModel::save(const std::string &path) const {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write model file: " + path);
  out << to_json().dump(2) << '\n';
}

} // namespace weylscan
