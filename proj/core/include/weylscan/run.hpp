#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "weylscan/config.hpp"
#include "weylscan/triple_model.hpp"

namespace weylscan {

/// Process exit codes shared by the library entry points and the CLI.
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,  // bad input: config validation, non-Herglotz data
  exit_numeric_error = 3, // ladder/quadrature failed to converge
};

struct RunArtifacts {
  SpectralReport scan;
  std::string csv_path;
  std::string json_path;
  std::string summary_path;
};

/// Full scan pipeline: build provider, scan, write whichever outputs are
/// configured. Writes are atomic per file: on failure partially written
/// files are removed. Log lines go to `log`.
int run_scan(const RunConfig &config, std::ostream &log, RunArtifacts *out = nullptr);

/// Eigenvalue-only listing over the configured window.
int run_eigs(const RunConfig &config, std::ostream &log);

/// Per-mode DtN/Weyl table for a radial problem at one spectral point.
int run_dtn_modes(const RunConfig &config, Complex lambda, std::ostream &log);

/// Named self-check suites ("lemma24", "bessel-free", "sturm-free", "all").
/// Returns exit_ok when every check passes.
int run_oracle_verify(const std::string &suite, unsigned seed, std::ostream &log);

/// Prints structural facts about a stored matrix model.
int run_model_info(const std::string &path, std::ostream &log);

/// Serialization used by run_scan; exposed for tests.
void write_scan_csv(const SpectralReport &scan, std::ostream &out);
void write_scan_json(const SpectralReport &scan, const RunConfig &config,
                     std::ostream &out);
void write_scan_summary(const SpectralReport &scan, std::ostream &out);

/// Deterministic random Herglotz models for self-checks and tests.
TripleModel random_triple_model(unsigned seed, int n, int d);

} // namespace weylscan
