#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylscan/classifier.hpp"
#include "weylscan/dtn_radial.hpp"
#include "weylscan/sturm_liouville.hpp"

namespace weylscan {

/// Validation failure; carries the offending field name.
class config_error : public std::runtime_error {
public:
  config_error(std::string field, const std::string &message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string &field() const { return field_; }

private:
  std::string field_;
};

/// Flat dotted-key/value view of a config file. The native format is
/// line-oriented `section.key = value`; a JSON object with the same nesting
/// is accepted as an alternative input.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string &text);
ConfigMap parse_config_file(const std::string &path);

/// Piece list syntax: "a b : c0 c1 ... ; a b : c0 ...".
std::vector<PotentialPiece> parse_pieces(const std::string &text,
                                         const std::string &field);

enum class ProblemKind { matrix_model, line, radial };
enum class LineFunction { m, mtilde };

struct RunConfig {
  ProblemKind kind = ProblemKind::line;

  // matrix problem
  std::string model_path;

  // 1-D problem
  Potential potential = Potential::free_potential();
  LineFunction line_function = LineFunction::m;

  // radial problem
  RadialOperator radial;

  double scan_a = 0.0;
  double scan_b = 1.0;
  double scan_step = 0.01;

  LadderConfig ladder;
  Thresholds thresholds;
  int threads = 0;

  std::string csv_path;
  std::string json_path;
  std::string summary_path;

  std::string verify_suite; // oracle-verify configs

  static RunConfig from_map(const ConfigMap &kv); // throws config_error
  static RunConfig load(const std::string &path);
};

/// Provider matching the configured problem block.
WeylProvider make_provider(const RunConfig &config);

} // namespace weylscan
