#pragma once

// Command-line front end. run_command never writes to the process streams; the
// tools/aestruct binary forwards the captured output.
//
// Exit codes: 0 success / all pass, 1 check or validation failure, 2 usage, IO
// or evaluation error.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aestruct/catalog.hpp"
#include "aestruct/classify.hpp"
#include "aestruct/connections.hpp"
#include "aestruct/structure.hpp"
#include "aestruct/verify.hpp"

namespace aestruct::cli {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

struct CliConfig {
  std::string command;
  std::string spec_path;
  std::string point_text;
  std::string what;
  std::string kind;
  std::optional<double> s;
  std::string show = "gamma";
  std::size_t samples = 64;
  double tol = kDefaultTolerance;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  std::string output;
  std::string emit_dir;
};

inline constexpr const char* kSeedEnv = "AESTRUCT_SEED";

/// Raised for anything that maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

/// "v1,...,vn" without spaces.
inline std::vector<double> parse_point(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) throw UsageError("--point is required");
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (tok.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
      throw UsageError("invalid --point component '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << bytes)) throw UsageError("cannot write '" + path.string() + "'");
}

// Seed precedence: --seed, then AESTRUCT_SEED, then the spec's own seed.
inline ManifoldSpec load_spec_for(const CliConfig& cfg) {
  ManifoldSpec spec = load_spec(read_file(cfg.spec_path));
  if (cfg.seed) {
    spec.seed = *cfg.seed;
  } else if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    auto v = parse_unsigned(env);
    if (!v) throw UsageError(std::string(kSeedEnv) + " must be an unsigned integer, got '" + env + "'");
    spec.seed = *v;
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Formatting

inline std::string num(double v, bool json) { return format_number(v, json ? 17 : 6); }

inline std::string json_str(const std::string& s) { return nlohmann::json(s).dump(); }

inline void tensor_json_rec(const TensorValue& t, std::vector<std::size_t>& idx, std::string& out) {
  if (idx.size() == t.rank()) {
    out += num(t.at(idx), true);
    return;
  }
  out += '[';
  for (std::size_t i = 0; i < t.dim(); ++i) {
    if (i) out += ", ";
    idx.push_back(i);
    tensor_json_rec(t, idx, out);
    idx.pop_back();
  }
  out += ']';
}

inline std::string tensor_json(const TensorValue& t) {
  std::string out;
  std::vector<std::size_t> idx;
  tensor_json_rec(t, idx, out);
  return out;
}

inline std::string valence_json(const TensorValue& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (i) out += ", ";
    out += t.valence()[i] == Slot::Upper ? "\"upper\"" : "\"lower\"";
  }
  return out + "]";
}

inline std::string point_json(const std::vector<double>& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? ", " : "") + num(p[i], true);
  return out + "]";
}

/// One line per component, 1-based: "nablaJ^1_{2,1} = 2".
inline std::string tensor_text(const std::string& label, const TensorValue& t) {
  std::string out;
  const std::size_t r = t.rank(), n = t.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < r; ++i) total *= n;
  std::vector<std::size_t> idx(r, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t s = r; s-- > 0;) {
      idx[s] = rem % n;
      rem /= n;
    }
    std::string up, down;
    for (std::size_t s = 0; s < r; ++s) {
      std::string& dst = t.valence()[s] == Slot::Upper ? up : down;
      if (!dst.empty()) dst += ',';
      dst += std::to_string(idx[s] + 1);
    }
    out += label;
    if (!up.empty()) out += "^" + (up.size() > 1 ? "{" + up + "}" : up);
    if (!down.empty()) out += "_{" + down + "}";
    out += " = " + num(t.at(idx), false) + "\n";
  }
  return out;
}

inline std::string tensor_output(const CliConfig& cfg, const ManifoldSpec& spec, const std::vector<double>& point,
                                 const std::string& label, const TensorValue& t, const std::string& extra_json = {}) {
  if (cfg.format == "json") {
    return "{\"spec\": " + json_str(spec.name) + ", \"point\": " + point_json(point) + extra_json +
           ", \"quantity\": " + json_str(label) + ", \"valence\": " + valence_json(t) + ", \"components\": " +
           tensor_json(t) + "}\n";
  }
  return tensor_text(label, t);
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_validate(const CliConfig& cfg, CommandResult& res) {
  const ManifoldSpec spec = load_spec_for(cfg);
  ValidationOptions opt;
  opt.samples = cfg.samples;
  opt.tol = cfg.tol;
  const ValidationReport r = validate_structure(spec, opt);
  const bool json = cfg.format == "json";
  if (json) {
    std::string errs = "[";
    for (std::size_t i = 0; i < r.errors.size(); ++i) errs += (i ? ", " : "") + json_str(r.errors[i]);
    errs += "]";
    res.out += "{\"spec\": " + json_str(spec.name) + ", \"samples\": " + std::to_string(r.samples) +
               ", \"tol\": " + num(r.tol, true) + ", \"j_squared\": " + num(r.j_squared, true) +
               ", \"compatibility\": " + num(r.compatibility, true) + ", \"trace\": " + num(r.trace, true) +
               ", \"symmetry\": " + num(r.symmetry, true) + ", \"min_abs_det\": " + num(r.min_abs_det, true) +
               ", \"positive_definite\": " + (r.positive_definite ? "true" : "false") + ", \"errors\": " + errs +
               ", \"status\": \"" + (r.passed ? "pass" : "fail") + "\"}\n";
  } else {
    res.out += "spec " + spec.name + " samples=" + std::to_string(r.samples) + " tol=" + num(r.tol, false) + "\n";
    res.out += "j_squared=" + num(r.j_squared, false) + "\n";
    res.out += "compatibility=" + num(r.compatibility, false) + "\n";
    res.out += "trace=" + num(r.trace, false) + (r.trace_required ? "" : " (not required)") + "\n";
    res.out += "symmetry=" + num(r.symmetry, false) + "\n";
    res.out += "min_abs_det=" + num(r.min_abs_det, false) + "\n";
    if (spec.epsilon == 1) res.out += std::string("positive_definite=") + (r.positive_definite ? "true" : "false") + "\n";
    res.out += std::string(r.passed ? "PASS" : "FAIL") + " validate " + spec.name + "\n";
  }
  for (const auto& e : r.errors) res.err += "error: " + e + "\n";
  return r.passed ? 0 : 1;
}

inline int cmd_eval(const CliConfig& cfg, CommandResult& res) {
  const ManifoldSpec spec = load_spec_for(cfg);
  const auto point = parse_point(cfg.point_text);
  const PointFrame f = frame_at(spec, point);
  for (const auto& w : f.warnings) res.err += "warning: " + w + "\n";
  TensorValue t;
  if (cfg.what == "christoffel") {
    t = f.gamma_g;
  } else if (cfg.what == "nablaJ") {
    t = f.nabla_g_J;
  } else if (cfg.what == "phi") {
    t = fundamental_tensor(f);
  } else if (cfg.what == "nablaPhi") {
    t = nabla_g_phi(f);
  } else if (cfg.what == "nijenhuis") {
    t = nijenhuis(f);
  } else {
    t = second_nijenhuis(f);
  }
  res.out += tensor_output(cfg, spec, point, cfg.what, t);
  return 0;
}

inline int cmd_connection(const CliConfig& cfg, CommandResult& res) {
  const auto kind = parse_connection_kind(cfg.kind);
  if (!kind) throw UsageError("unknown connection kind '" + cfg.kind + "'");
  if (cfg.s && *kind != ConnectionKind::Canonical) throw UsageError("--s is only valid with --kind canonical");
  if (*kind == ConnectionKind::Canonical && !cfg.s) throw UsageError("--kind canonical requires --s");
  const ManifoldSpec spec = load_spec_for(cfg);
  const auto point = parse_point(cfg.point_text);
  const PointFrame f = frame_at(spec, point);
  for (const auto& w : f.warnings) res.err += "warning: " + w + "\n";
  ConnectionParams params;
  params.s = cfg.s.value_or(0.0);
  params.skew_tol = cfg.tol;
  const ConnectionAtPoint c = build_connection(f, *kind, params);
  const bool json = cfg.format == "json";
  const std::string extra = ", \"kind\": " + json_str(cfg.kind) + (cfg.s ? ", \"s\": " + num(*cfg.s, true) : "");

  if (cfg.show == "naturality") {
    const auto [rj, rg] = naturality_residuals(c);
    if (json) {
      res.out += "{\"spec\": " + json_str(spec.name) + ", \"point\": " + point_json(point) + extra +
                 ", \"nabla_J\": " + num(rj, true) + ", \"nabla_g\": " + num(rg, true) + "}\n";
    } else {
      res.out += "nabla_J=" + num(rj, false) + "\nnabla_g=" + num(rg, false) + "\n";
    }
    return 0;
  }
  TensorValue t;
  if (cfg.show == "gamma") {
    t = c.gamma;
  } else if (cfg.show == "torsion") {
    t = torsion(c);
  } else if (cfg.show == "potential") {
    t = potential(c);
  } else {
    t = f_tensor(c);
  }
  res.out += tensor_output(cfg, spec, point, cfg.show, t, extra);
  return 0;
}

inline int cmd_classify(const CliConfig& cfg, CommandResult& res) {
  const ManifoldSpec spec = load_spec_for(cfg);
  const ClassificationReport r = classify(spec, cfg.samples, cfg.tol);
  auto verdict = [](const PredicateResult& p) { return !p.applicable ? "n/a" : p.holds ? "holds" : "fails"; };
  if (cfg.format == "json") {
    std::string out = "{\"spec\": " + json_str(r.spec_name) + ", \"samples\": " + std::to_string(r.samples) +
                      ", \"tol\": " + num(r.tol, true) + ", \"predicates\": [";
    const auto preds = r.predicates();
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const auto& p = *preds[i];
      out += std::string(i ? ", " : "") + "{\"name\": " + json_str(p.name) + ", \"max_residual\": " +
             (p.applicable ? num(p.max_residual, true) : "null") + ", \"verdict\": \"" + verdict(p) +
             "\", \"samples\": " + std::to_string(p.samples) + "}";
    }
    out += "], \"second_nijenhuis_residual\": " + num(r.second_nijenhuis_residual, true) + ", \"implications\": [";
    for (std::size_t i = 0; i < r.implications.size(); ++i) {
      out += std::string(i ? ", " : "") + "{\"name\": " + json_str(r.implications[i].name) +
             ", \"consistent\": " + (r.implications[i].consistent ? "true" : "false") + "}";
    }
    res.out += out + "]}\n";
  } else {
    res.out += "classify " + r.spec_name + " samples=" + std::to_string(r.samples) + " tol=" + num(r.tol, false) + "\n";
    for (const auto* p : r.predicates()) {
      res.out += p->name + " " + verdict(*p);
      if (p->applicable) res.out += " max_residual=" + num(p->max_residual, false);
      res.out += "\n";
    }
    res.out += "second_nijenhuis max_residual=" + num(r.second_nijenhuis_residual, false) + "\n";
    for (const auto& i : r.implications) res.out += "implication " + i.name + (i.consistent ? " ok" : " VIOLATED") + "\n";
  }
  return r.consistent() ? 0 : 1;
}

inline int cmd_check(const CliConfig& cfg, CommandResult& res) {
  const ManifoldSpec spec = load_spec_for(cfg);
  SuiteConfig sc;
  sc.samples = cfg.samples;
  sc.tol = cfg.tol;
  const auto reports = run_suite(spec, sc);
  const std::string bytes = render_report(reports, cfg.format == "json" ? ReportFormat::Json : ReportFormat::Text);
  if (cfg.output.empty()) {
    res.out += bytes;
  } else {
    write_file(cfg.output, bytes);
  }
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Fail && !r.reason.empty()) res.err += "error: " + r.check_id + ": " + r.reason + "\n";
  }
  return all_passed(reports) ? 0 : 1;
}

inline int cmd_catalog(const CliConfig& cfg, CommandResult& res) {
  for (const auto& e : kCatalog) res.out += std::string(e.name) + "  " + std::string(e.summary) + "\n";
  if (!cfg.emit_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.emit_dir, ec);
    if (ec) throw UsageError("cannot create '" + cfg.emit_dir + "': " + ec.message());
    for (const auto& e : kCatalog) {
      write_file(std::filesystem::path(cfg.emit_dir) / (std::string(e.name) + ".json"), to_json(load_spec(e.json)) + "\n");
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

/// `args` excludes the program name.
inline CommandResult run_command(const std::vector<std::string>& args) {
  CommandResult res;
  CliConfig cfg;
  CLI::App app{"Adapted connections of (alpha, epsilon)-structures", "aestruct"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub, bool sampling) {
    sub->add_option("spec", cfg.spec_path, "manifold spec JSON file")->required();
    sub->add_option("--seed", seed, "override the sampling seed");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    if (sampling) {
      sub->add_option("--samples", cfg.samples, "number of sample points")->check(CLI::PositiveNumber);
      sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    }
  };

  auto* validate = app.add_subcommand("validate", "check J^2, compatibility, trace and metric nondegeneracy");
  add_common(validate, true);

  auto* eval = app.add_subcommand("eval", "evaluate a structure tensor at a point");
  add_common(eval, false);
  eval->add_option("--point", cfg.point_text, "v1,...,vn")->required();
  eval->add_option("--what", cfg.what)
      ->required()
      ->check(CLI::IsMember({"christoffel", "nablaJ", "phi", "nablaPhi", "nijenhuis", "second-nijenhuis"}));

  auto* connection = app.add_subcommand("connection", "build an adapted connection at a point");
  add_common(connection, false);
  connection->add_option("--point", cfg.point_text, "v1,...,vn")->required();
  connection->add_option("--kind", cfg.kind)
      ->required()
      ->check(CLI::IsMember({"levi-civita", "first-canonical", "kobayashi-nomizu", "yano", "chern", "well-adapted",
                             "bismut", "skew", "canonical"}));
  connection->add_option("--s", cfg.s, "family parameter for --kind canonical");
  connection->add_option("--show", cfg.show)
      ->check(CLI::IsMember({"gamma", "torsion", "potential", "naturality", "f-tensor"}));
  connection->add_option("--tol", cfg.tol, "skew existence tolerance")->check(CLI::PositiveNumber);

  auto* cls = app.add_subcommand("classify", "decide the structural types at sampled points");
  add_common(cls, true);

  auto* check = app.add_subcommand("check", "run the identity suite");
  add_common(check, true);
  check->add_option("--output", cfg.output, "write the report to PATH");

  auto* catalog = app.add_subcommand("catalog", "list bundled example specs");
  catalog->add_option("--emit", cfg.emit_dir, "write each spec to DIR/<name>.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    res.out = app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.err = "error: " + std::string(e.what()) + "\n";
    res.exit_code = 2;
    return res;
  }
  cfg.seed = seed;

  try {
    if (validate->parsed()) {
      res.exit_code = cmd_validate(cfg, res);
    } else if (eval->parsed()) {
      res.exit_code = cmd_eval(cfg, res);
    } else if (connection->parsed()) {
      res.exit_code = cmd_connection(cfg, res);
    } else if (cls->parsed()) {
      res.exit_code = cmd_classify(cfg, res);
    } else if (check->parsed()) {
      res.exit_code = cmd_check(cfg, res);
    } else {
      res.exit_code = cmd_catalog(cfg, res);
    }
  } catch (const std::exception& e) {
    res.out.clear();
    res.err += "error: " + std::string(e.what()) + "\n";
    res.exit_code = 2;
  }
  return res;
}

}  // namespace aestruct::cli
