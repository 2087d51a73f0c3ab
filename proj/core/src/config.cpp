#include "weylscan/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "weylscan/triple_model.hpp"

namespace weylscan {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void flatten_json(const nlohmann::json &j, const std::string &prefix,
                  ConfigMap &out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                   out);
    return;
  }
  if (j.is_string())
    out[prefix] = j.get<std::string>();
  else
    out[prefix] = j.dump();
}

class Fields {
public:
  explicit Fields(const ConfigMap &kv) : kv_(kv) {}

  std::optional<std::string> get(const std::string &key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
      return std::nullopt;
    return it->second;
  }
  std::string require(const std::string &key) const {
    auto v = get(key);
    if (!v)
      throw config_error(key, "required field is missing");
    return *v;
  }
  double number(const std::string &key, double fallback) const {
    auto v = get(key);
    return v ? to_number(key, *v) : fallback;
  }
  double require_number(const std::string &key) const {
    return to_number(key, require(key));
  }
  int integer(const std::string &key, int fallback) const {
    auto v = get(key);
    if (!v)
      return fallback;
    const double d = to_number(key, *v);
    return int(d);
  }

private:
  static double to_number(const std::string &key, const std::string &v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(v, &pos);
    } catch (const std::exception &) {
      throw config_error(key, "not a number: '" + v + "'");
    }
    if (trim(v.substr(pos)) != "")
      throw config_error(key, "trailing characters in number: '" + v + "'");
    return d;
  }

  const ConfigMap &kv_;
};

} // namespace

ConfigMap parse_config_text(const std::string &text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    ConfigMap out;
    flatten_json(nlohmann::json::parse(text), "", out);
    return out;
  }

  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno),
                         "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno), "empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw config_error("config", "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<PotentialPiece> parse_pieces(const std::string &text,
                                         const std::string &field) {
  std::vector<PotentialPiece> pieces;
  std::istringstream by_piece(text);
  std::string chunk;
  while (std::getline(by_piece, chunk, ';')) {
    chunk = trim(chunk);
    if (chunk.empty())
      continue;
    const auto colon = chunk.find(':');
    if (colon == std::string::npos)
      throw config_error(field, "piece needs 'a b : coeffs...': '" + chunk + "'");
    PotentialPiece p;
    {
      std::istringstream ends(chunk.substr(0, colon));
      if (!(ends >> p.a >> p.b))
        throw config_error(field, "piece interval must be two numbers");
      std::string rest;
      if (ends >> rest)
        throw config_error(field, "piece interval must be exactly two numbers");
    }
    {
      std::istringstream cs(chunk.substr(colon + 1));
      double c = 0.0;
      while (cs >> c)
        p.coeffs.push_back(c);
      if (!cs.eof())
        throw config_error(field, "bad polynomial coefficient in '" + chunk + "'");
      if (p.coeffs.empty())
        throw config_error(field, "piece needs at least one coefficient");
    }
    pieces.push_back(std::move(p));
  }
  return pieces;
}

RunConfig RunConfig::from_map(const ConfigMap &kv) {
  Fields f(kv);
  RunConfig cfg;

  int blocks = 0;
  const bool has_model = f.get("problem.model").has_value();
  const auto type = f.get("problem.type");

  // A verification config carries no problem or scan block.
  if (auto suite = f.get("verify.suite"); suite && !type && !has_model) {
    cfg.verify_suite = *suite;
    return cfg;
  }
  std::string kind = type.value_or(has_model ? "matrix" : "");
  if (kind == "matrix" || kind == "matrix-model") {
    cfg.kind = ProblemKind::matrix_model;
    ++blocks;
  } else if (kind == "line") {
    cfg.kind = ProblemKind::line;
    ++blocks;
  } else if (kind == "radial") {
    cfg.kind = ProblemKind::radial;
    ++blocks;
  } else if (kind.empty()) {
    throw config_error("problem.type", "required field is missing");
  } else {
    throw config_error("problem.type",
                       "expected matrix|line|radial, got '" + kind + "'");
  }
  (void)blocks;

  switch (cfg.kind) {
  case ProblemKind::matrix_model:
    cfg.model_path = f.require("problem.model");
    break;
  case ProblemKind::line: {
    const std::string fn = f.get("problem.function").value_or("m");
    if (fn == "m")
      cfg.line_function = LineFunction::m;
    else if (fn == "mtilde")
      cfg.line_function = LineFunction::mtilde;
    else
      throw config_error("problem.function", "expected m|mtilde, got '" + fn + "'");
    auto pieces = f.get("problem.pieces")
                      ? parse_pieces(*f.get("problem.pieces"), "problem.pieces")
                      : std::vector<PotentialPiece>{};
    double support = f.number("problem.support", 1.0);
    for (const auto &p : pieces)
      support = std::max({support, std::abs(p.a), std::abs(p.b)});
    if (!(support > 0.0))
      throw config_error("problem.support", "must be > 0");
    try {
      cfg.potential = Potential(std::move(pieces), support);
    } catch (const std::exception &e) {
      throw config_error("problem.pieces", e.what());
    }
    break;
  }
  case ProblemKind::radial: {
    auto pieces = f.get("problem.pieces")
                      ? parse_pieces(*f.get("problem.pieces"), "problem.pieces")
                      : std::vector<PotentialPiece>{};
    double support = f.number("problem.support", 1.0);
    for (const auto &p : pieces)
      support = std::max({support, std::abs(p.a), std::abs(p.b)});
    cfg.radial.R = f.number("problem.radius", 1.0);
    if (!(cfg.radial.R > 0.0))
      throw config_error("problem.radius", "must be > 0");
    cfg.radial.max_mode = f.integer("problem.modes", 16);
    if (cfg.radial.max_mode < 0)
      throw config_error("problem.modes", "must be >= 0");
    try {
      cfg.radial.q = Potential(std::move(pieces), support);
      cfg.radial.validate();
    } catch (const std::exception &e) {
      throw config_error("problem.pieces", e.what());
    }
    break;
  }
  }

  cfg.scan_a = f.require_number("scan.a");
  cfg.scan_b = f.require_number("scan.b");
  cfg.scan_step = f.require_number("scan.step");
  if (!(cfg.scan_step > 0.0))
    throw config_error("scan.step", "must be > 0");
  if (!(cfg.scan_a < cfg.scan_b))
    throw config_error("scan.a", "need scan.a < scan.b");

  cfg.ladder.y0 = f.number("ladder.y0", cfg.ladder.y0);
  cfg.ladder.ratio = f.number("ladder.ratio", cfg.ladder.ratio);
  cfg.ladder.rungs = f.integer("ladder.rungs", cfg.ladder.rungs);
  cfg.ladder.fit_points = f.integer("ladder.fit_points", cfg.ladder.fit_points);
  cfg.ladder.rtol = f.number("ladder.rtol", cfg.ladder.rtol);
  try {
    cfg.ladder.validate();
  } catch (const std::exception &e) {
    throw config_error("ladder", e.what());
  }

  cfg.thresholds.residue_rel = f.number("thresholds.residue", cfg.thresholds.residue_rel);
  cfg.thresholds.im_zero = f.number("thresholds.im_zero", cfg.thresholds.im_zero);
  cfg.thresholds.exponent = f.number("thresholds.exponent", cfg.thresholds.exponent);
  cfg.thresholds.closure_window = f.integer("thresholds.window", cfg.thresholds.closure_window);
  cfg.thresholds.density_floor = f.number("thresholds.density_floor", cfg.thresholds.density_floor);
  cfg.thresholds.count_floor = f.integer("thresholds.count_floor", cfg.thresholds.count_floor);
  if (cfg.thresholds.closure_window < 1)
    throw config_error("thresholds.window", "must be >= 1");
  if (!(cfg.thresholds.residue_rel > 0.0))
    throw config_error("thresholds.residue", "must be > 0");

  cfg.threads = f.integer("parallel.threads", 0);

  cfg.csv_path = f.get("output.csv").value_or("");
  cfg.json_path = f.get("output.json").value_or("");
  cfg.summary_path = f.get("output.summary").value_or("");

  cfg.verify_suite = f.get("verify.suite").value_or("");
  return cfg;
}

RunConfig RunConfig::load(const std::string &path) {
  return from_map(parse_config_file(path));
}

WeylProvider make_provider(const RunConfig &config) {
  switch (config.kind) {
  case ProblemKind::matrix_model: {
    std::shared_ptr<TripleModel> model;
    try {
      model = std::make_shared<TripleModel>(TripleModel::load(config.model_path));
    } catch (const std::invalid_argument &) {
      throw; // construction-time invariant violations keep their message
    } catch (const std::exception &e) {
      throw config_error("problem.model", e.what());
    }
    WeylProvider p;
    p.id = "matrix-model:" + config.model_path;
    p.dim = model->probe_dim();
    p.eval = [model](Complex lambda) { return model->weyl(lambda); };
    return p;
  }
  case ProblemKind::line: {
    const Potential q = config.potential;
    if (config.line_function == LineFunction::m)
      return WeylProvider::scalar(
          "line:m", [q](Complex lambda) { return coupled_m(q, lambda); });
    WeylProvider p;
    p.id = "line:mtilde";
    p.dim = 2;
    p.eval = [q](Complex lambda) -> Eigen::MatrixXcd {
      return coupled_m_tilde(q, lambda);
    };
    return p;
  }
  case ProblemKind::radial: {
    const RadialOperator op = config.radial;
    WeylProvider p;
    p.id = "radial:modes<=" + std::to_string(op.max_mode);
    p.dim = op.max_mode + 1;
    p.eval = [op](Complex lambda) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(op.max_mode + 1, op.max_mode + 1);
      for (int k = 0; k <= op.max_mode; ++k) {
        m(k, k) = M_mode(op, k, lambda).value;
      }
      return m;
    };
    return p;
  }
  }
  throw std::logic_error("unreachable problem kind");
}

} // namespace weylscan
