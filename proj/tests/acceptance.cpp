// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "aestruct/aestruct.hpp"
#include "oracles.hpp"

using namespace aestruct;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<ManifoldSpec> catalog() {
  std::vector<ManifoldSpec> out;
  for (const auto& e : kCatalog) out.push_back(load_spec(e.json));
  return out;
}

bool is_flat(const ManifoldSpec& s) { return s.name.rfind("flat_", 0) == 0; }

// Max residual of the named suite checks across the catalog; -1 if one failed
// or was unexpectedly skipped.
double suite_max(const std::vector<std::string>& ids, std::size_t samples, bool minus_only = false) {
  SuiteConfig cfg;
  cfg.samples = samples;
  double worst = 0.0;
  for (const auto& s : catalog()) {
    if (minus_only && s.alpha * s.epsilon != -1) continue;
    for (const auto& r : run_suite(s, cfg)) {
      if (std::find(ids.begin(), ids.end(), r.check_id) == ids.end()) continue;
      if (r.status == CheckStatus::Fail) return -1.0;
      if (r.status == CheckStatus::Skipped && s.alpha * s.epsilon == -1) return -1.0;
      worst = std::max(worst, r.max_residual);
    }
  }
  return worst;
}

// --- 2: random expressions -------------------------------------------------

std::string random_expr(SplitMix64& rng, std::size_t nvars, int depth) {
  const auto pick = [&](std::uint64_t m) { return rng.next() % m; };
  if (depth == 0 || pick(4) == 0) {
    if (pick(3) == 0) return std::to_string(std::round(rng.uniform(-3.0, 3.0) * 100.0) / 100.0);
    return "x" + std::to_string(1 + pick(nvars));
  }
  const std::string a = random_expr(rng, nvars, depth - 1);
  const std::string b = random_expr(rng, nvars, depth - 1);
  switch (pick(10)) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + " * " + b + ")";
    case 3: return "(" + a + ") / (2 + cos(" + b + "))";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ") * " + b;
    case 6: return "exp(" + a + " / 4)";
    case 7: return "sqrt(1 + (" + a + ")^2)";
    case 8: return "(" + a + ")^" + std::to_string(2 + pick(2));
    default: return "tanh(" + a + ") - " + b;
  }
}

void criterion2() {
  SplitMix64 rng(271828);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t nvars = 1 + rng.next() % 4;
    std::vector<std::string> coords;
    for (std::size_t i = 0; i < nvars; ++i) coords.push_back("x" + std::to_string(i + 1));
    const auto e = parse_expression(random_expr(rng, nvars, 4), coords);
    for (int p = 0; p < 10; ++p) {
      std::vector<double> x(nvars);
      for (auto& v : x) v = rng.uniform(-1.5, 1.5);
      const Dual d = e.evaluate(x);
      for (std::size_t k = 0; k < nvars; ++k) {
        const double fd = oracle::central_difference([&](const auto& y) { return e.evaluate_real(y); }, x, k, 1e-6);
        worst = std::max(worst, std::abs(d.partials[k] - fd) / std::max(1.0, std::abs(fd)));
      }
    }
  }
  report(2, "dual partials vs central differences, 200 expressions x 10 points", worst < 1e-6,
         fmt("max rel err %.3g < 1e-6", worst));
}

// --- 4: naturality against finite-difference J and g -------------------------

std::pair<double, double> fd_naturality(const ManifoldSpec& s, const std::vector<double>& p, const TensorValue& G) {
  const std::size_t n = p.size();
  const auto J = oracle::eval_matrix(s.J, p);
  const auto g = oracle::eval_matrix(s.metric, p);
  const auto dJ = oracle::fd_matrix_partials(s.J, p);
  const auto dg = oracle::fd_matrix_partials(s.metric, p);
  double rj = 0.0, rg = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double vj = dJ(i, a, b), vg = dg(i, a, b);
        for (std::size_t m = 0; m < n; ++m) {
          vj += G(a, i, m) * J[m][b] - J[a][m] * G(m, i, b);
          vg -= G(m, i, a) * g[m][b] + G(m, i, b) * g[a][m];
        }
        rj = std::max(rj, std::abs(vj));
        rg = std::max(rg, std::abs(vg));
      }
  return {rj, rg};
}

void criterion4() {
  double worst = 0.0;
  for (const auto& s : catalog()) {
    for (const auto& p : sample_points(s.domain, 64, s.seed)) {
      const auto f = frame_at(s, p);
      std::vector<TensorValue> gammas{build_connection(f, ConnectionKind::FirstCanonical).gamma};
      for (double sv : {-3.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
        ConnectionParams cp;
        cp.s = sv;
        gammas.push_back(build_connection(f, ConnectionKind::Canonical, cp).gamma);
      }
      for (const auto& G : gammas) {
        const auto [rj, rg] = fd_naturality(s, p, G);
        worst = std::max({worst, rj, rg});
      }
    }
  }
  report(4, "first canonical and canonical(s) annihilate J and g", worst < 1e-8, fmt("max %.3g < 1e-8", worst));
}

// --- 5: torsion oracle -------------------------------------------------------

double oracle_torsion0_residual(const ManifoldSpec& s, const std::vector<double>& p) {
  const std::size_t n = p.size();
  const auto J = oracle::eval_matrix(s.J, p);
  const auto T = oracle::torsion(oracle::first_canonical(oracle::christoffel(s, p), oracle::nabla_j(s, p), J, s.alpha));
  const auto N = oracle::nijenhuis_bracket(s, p);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double tjj = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) tjj += J[a][i] * J[b][j] * T(k, a, b);
        worst = std::max(worst, std::abs(tjj + s.alpha * T(k, i, j) + 0.5 * N(k, i, j)));
      }
  return worst;
}

// --- 9: Kahler collapse --------------------------------------------------------

void criterion9() {
  double worst = 0.0;
  for (const auto& s : catalog()) {
    if (!is_flat(s) && s.name != "hermitian2d") continue;
    std::vector<ConnectionKind> kinds{ConnectionKind::LeviCivita, ConnectionKind::FirstCanonical,
                                      ConnectionKind::KobayashiNomizu, ConnectionKind::Yano,
                                      ConnectionKind::WellAdapted, ConnectionKind::Skew};
    if (s.alpha * s.epsilon == -1) kinds.insert(kinds.end(), {ConnectionKind::Chern, ConnectionKind::Bismut});
    for (const auto& p : sample_points(s.domain, 16, s.seed)) {
      const auto f = frame_at(s, p);
      std::vector<TensorValue> gs;
      for (auto k : kinds) gs.push_back(build_connection(f, k).gamma);
      for (std::size_t a = 0; a < gs.size(); ++a)
        for (std::size_t b = a + 1; b < gs.size(); ++b) worst = std::max(worst, max_abs_difference(gs[a], gs[b]));
    }
  }
  report(9, "named connections coincide on Kahler specs", worst < 1e-10, fmt("max pairwise %.3g < 1e-10", worst));
}

// --- 10: non-integrable witness -------------------------------------------------

void criterion10() {
  const ManifoldSpec s = catalog_spec("hermitian4d");
  const std::vector<double> origin(4, 0.0);
  const double lib = nijenhuis(frame_at(s, origin))(0, 0, 2);
  const double ref = oracle::nijenhuis_bracket(s, origin)(0, 0, 2);
  const auto cls = classify(s);
  SuiteConfig cfg;
  cfg.samples = 16;
  bool branch = false;
  for (const auto& r : run_suite(s, cfg))
    if (r.check_id == "connections.torsion0_integrability") branch = r.status == CheckStatus::Pass;
  const auto f = frame_at(s, origin);
  const auto T = torsion(build_connection(f, ConnectionKind::FirstCanonical));
  const double side = (bilinear::with_j(T, f.J, true, true) + static_cast<double>(f.alpha) * T).max_abs();
  branch = branch && side > 1e-3 && nijenhuis(f).max_abs() > 1e-3;
  const bool ok = std::abs(lib - 1.0) < 1e-8 && std::abs(ref - 1.0) < 1e-8 && !cls.integrable.holds &&
                  !cls.kahler.holds && branch;
  report(10, "hermitian4d: N^1_13(0) = 1, not integrable, not Kahler", ok,
         fmt("N^1_13 = %.12g", lib) + fmt(", oracle %.12g", ref) + fmt(", torsion side %.3g", side));
}

}  // namespace

int main() {
  const auto specs = catalog();

  {  // 1
    ValidationOptions opt;
    opt.samples = 100;
    opt.tol = 1e-10;
    bool ok = specs.size() >= 8;
    double worst = 0.0;
    for (const auto& s : specs) {
      const auto r = validate_structure(s, opt);
      const double m = std::max({r.j_squared, r.compatibility, r.trace, r.symmetry});
      worst = std::max(worst, m);
      ok = ok && r.passed && (!is_flat(s) || m == 0.0);
    }
    report(1, "catalog specs validate at 100 points", ok,
           std::to_string(specs.size()) + " specs" + fmt(", max %.3g < 1e-10, flat exactly 0", worst));
  }

  criterion2();

  {  // 3
    double worst = 0.0;
    for (const auto& s : specs)
      for (const auto& p : sample_points(s.domain, 64, s.seed))
        worst = std::max(worst, oracle::max_abs_diff(nijenhuis(frame_at(s, p)), oracle::nijenhuis_bracket(s, p)));
    report(3, "Nijenhuis from nabla J equals the bracket formula", worst < 1e-7, fmt("max %.3g < 1e-7", worst));
  }

  criterion4();

  {  // 5
    const double suite = suite_max({"connections.torsion0_formula", "connections.torsion0_nijenhuis",
                                    "connections.kn_torsion", "connections.yano_torsion"},
                                   32);
    double orc = 0.0;
    for (const auto& s : specs)
      for (const auto& p : sample_points(s.domain, 16, s.seed)) orc = std::max(orc, oracle_torsion0_residual(s, p));
    report(5, "torsion identities for first canonical, Kobayashi-Nomizu, Yano", suite >= 0.0 && suite < 1e-8 && orc < 1e-8,
           fmt("suite %.3g", suite) + fmt(", oracle %.3g < 1e-8", orc));
  }

  {  // 6
    const double r = suite_max({"connections.first_canonical_f_tensor", "connections.well_adapted_f_tensor",
                                "connections.canonical_f_tensor"},
                               32);
    report(6, "F tensor of first canonical; F(canonical(1)) = 0", r >= 0.0 && r < 1e-8, fmt("max %.3g < 1e-8", r));
  }

  {  // 7
    const double r = suite_max({"connections.chern_torsion", "connections.chern_explicit"}, 32, true);
    bool rejects = true;
    for (const auto& s : specs) {
      if (s.alpha * s.epsilon != 1) continue;
      try {
        build_connection(frame_at(s, sample_points(s.domain, 1, s.seed).front()), ConnectionKind::Chern);
        rejects = false;
      } catch (const SignatureError&) {
      }
    }
    report(7, "Chern torsion law and explicit form; rejected when alpha*epsilon=+1", r >= 0.0 && r < 1e-8 && rejects,
           fmt("max %.3g < 1e-8", r) + (rejects ? ", rejects" : ", accepted alpha*epsilon=+1"));
  }

  {  // 8
    const std::vector<std::string> ids{"connections.skew_natural", "connections.skew_torsion_totally_skew",
                                       "connections.skew_potential_half_torsion",
                                       "connections.skew_in_canonical_family"};
    const double r = suite_max(ids, 32);
    bool exists = true;
    SuiteConfig cfg;
    cfg.samples = 16;
    for (const auto& s : specs) {
      if (!is_flat(s) && s.name != "hermitian2d") continue;
      for (const auto& rep : run_suite(s, cfg))
        if (rep.check_id == "connections.skew_natural") exists = exists && rep.samples == cfg.samples;
    }
    report(8, "skew-torsion connection: natural, totally skew, S = T/2, in the canonical family",
           r >= 0.0 && r < 1e-8 && exists, fmt("max %.3g < 1e-8", r) + (exists ? "" : ", missing on a Kahler spec"));
  }

  criterion9();
  criterion10();

  {  // 11
    std::size_t violations = 0;
    for (const auto& s : specs)
      for (const auto& i : classify(s).implications) violations += i.consistent ? 0 : 1;
    report(11, "implication lattice over the catalog", violations == 0, std::to_string(violations) + " violations");
  }

  {  // 12
    bool same = true;
    for (const auto& s : specs) {
      SuiteConfig cfg;
      cfg.samples = 16;
      same = same && render_report(run_suite(s, cfg), ReportFormat::Json) ==
                         render_report(run_suite(s, cfg), ReportFormat::Json);
    }
    report(12, "check JSON byte-identical across runs", same, same ? "identical" : "differs");
  }

  return failures == 0 ? 0 : 1;
}
