#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weylscan/nevanlinna.hpp"

namespace weylscan {

/// Uniform evaluation contract: lambda -> d x d matrix of <M(lambda)g_j, g_k>
/// over a declared probe family. Scalar functions wrap as 1 x 1.
struct WeylProvider {
  std::string id;
  int dim = 1;
  std::function<Eigen::MatrixXcd(Complex)> eval;

  static WeylProvider scalar(std::string id,
                             std::function<Complex(Complex)> f);
};

/// Central tuning surface; every report records the values used.
struct Thresholds {
  double residue_rel = 1e-6;   // residue_norm > residue_rel * scale(|f| at y0)
  double im_zero = 1e-6;       // |Im-limit| below this counts as zero
  double exponent = 0.5;       // p_min handed to the ladder
  int closure_window = 4;      // grid window for clac / clc
  double density_floor = 0.2;  // clac
  int count_floor = 5;         // clc ("sc-candidate", never "sc-confirmed")
};

enum class SpectralTag {
  Resolvent,
  Eigenvalue,
  AbsolutelyContinuous,
  SingularContinuousCandidate,
  ContinuousUnresolved,
  Undetermined,
};

const char *to_string(SpectralTag tag);

struct SpectralClass {
  SpectralTag tag = SpectralTag::Undetermined;
  std::vector<BoundaryLimit> evidence; // one per probe (diagonal entries)
  Eigen::MatrixXcd residue;            // extrapolated lim i*y*M(x+iy)
  double residue_norm = 0.0;           // spectral norm of the residue matrix
  int residue_rank = 0;
  std::string note;
};

SpectralClass classify_point(const WeylProvider &provider, double x,
                             const LadderConfig &ladder = {},
                             const Thresholds &thresholds = {});

struct EigenvalueHit {
  double x = 0.0;
  double residue_norm = 0.0;
  int rank = 0;
};

struct ResolventInterval {
  double a = 0.0;
  double b = 0.0;
};

struct SpectralReport {
  // provenance
  std::string provider_id;
  int probe_dim = 1;
  LadderConfig ladder;
  Thresholds thresholds;
  double grid_start = 0.0;
  double grid_step = 0.0;
  std::size_t grid_count = 0;

  std::vector<SpectralClass> points; // per grid point, in grid order
  GridSet ac_set;                    // clac of the pre-closure ac flags
  GridSet sc_candidate_set;          // clc of the divergence flags
  std::vector<EigenvalueHit> eigenvalues;
  std::vector<ResolventInterval> resolvent_intervals;

  double grid_point(std::size_t i) const { return grid_start + grid_step * double(i); }
};

/// Classify every grid point in [a, b] (parallel over the grid; merge order
/// fixed by grid index) and post-process the closure sets. threads <= 0
/// selects the hardware count (WEYLSCAN_THREADS overrides).
SpectralReport scan_interval(const WeylProvider &provider, double a, double b,
                             double step, const LadderConfig &ladder = {},
                             const Thresholds &thresholds = {},
                             int threads = 0);

/// Golden-section maximization of the residue norm within [x-halfwidth,
/// x+halfwidth]; grid alignment with true eigenvalues cannot be assumed.
double refine_eigenvalue(const WeylProvider &provider, double x,
                         double halfwidth, const LadderConfig &ladder = {},
                         double xtol = 1e-10);

enum class Purity { purely_ac, purely_sc, mixed, empty };
const char *to_string(Purity p);

Purity purity_check(const SpectralReport &report);

} // namespace weylscan
