#include "cli.hpp"

#include "mmtk/flow.hpp"
#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"
#include "mmtk/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mmtk::cli {

using nlohmann::json;

namespace {

json to_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
  return a;
}

json to_json(const VerificationReport& r) {
  json j{{"check", r.check},     {"samples", r.samples},     {"seed", r.seed},
         {"passed", r.passed()}, {"max_error", r.max_error}, {"threshold", r.threshold}};
  j["violation_count"] = r.violations.size();
  json v = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 20); ++i) v.push_back(r.violations[i]);
  j["violations"] = v;
  j["extras"] = json(r.extras);
  return j;
}

json to_json(const ChartCoordinates& c) { return {{"n", to_json(c.n)}, {"f", to_json(c.f)}, {"u", to_json(c.u)}}; }

// Unit representative with the first entry of largest modulus made real positive.
Vector canonical(const ProjectivePoint& x) {
  Vector v = x.vector();
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v * (std::abs(v[k]) / v[k]);
}

std::string rep_name(const RepresentationSpec& spec) {
  const auto it = spec.metadata().find("name");
  return it == spec.metadata().end() ? std::string() : it->second;
}

json polytope_json(const Polytope& poly) {
  json verts = json::array();
  for (int v : poly.vertices) verts.push_back({{"index", v}, {"point", to_json(poly.points[v])}});
  json facets = json::array();
  for (const Facet& f : poly.facets) {
    facets.push_back({{"normal", to_json(f.normal)}, {"offset", f.offset}, {"vertices", f.vertices}});
  }
  return {{"affine_dim", poly.affine_dim}, {"exact", poly.exact},   {"degenerate", poly.degenerate},
          {"vertices", verts},             {"facets", facets},      {"boundary_order", poly.boundary_order}};
}

json levels_json(const std::vector<linalg::Level>& levels) {
  json a = json::array();
  for (const auto& l : levels) a.push_back({{"value", l.value}, {"dim", l.basis.cols()}});
  return a;
}

json grading_json(const BetaGrading& g) {
  return {{"beta", to_json(g.beta)},
          {"v_levels", levels_json(g.v_levels)},
          {"dim_r_minus", g.r_minus.cols()},
          {"dim_g_zero", g.g_zero.cols()},
          {"dim_r_plus", g.r_plus.cols()},
          {"r_minus_grades", g.r_minus_grades}};
}

json chart_json(const LstChart& c) {
  return {{"base_point", to_json(canonical(c.base_point))},
          {"dim_w", c.w.dim()},
          {"dim_complement", c.complement.dim()},
          {"n_dim", c.n_dim()},
          {"f_dim", c.f_dim()},
          {"u_dim", c.u_dim()},
          {"n_grades", c.n_grades},
          {"f_levels", c.f_levels},
          {"nilpotency", c.nilpotency}};
}

RealVector parse_beta(const std::string& text, int dim) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::PreconditionViolation, "cannot parse beta entry '" + tok + "'");
    }
  }
  if (static_cast<int>(vals.size()) != dim) {
    throw Error(ErrorCode::PreconditionViolation,
                "beta needs " + std::to_string(dim) + " p-coordinates, got " + std::to_string(vals.size()));
  }
  return Eigen::Map<RealVector>(vals.data(), dim);
}

Context context_for(const RepresentationSpec& spec, const RunConfig& cfg) {
  std::optional<Subspace> w;
  if (!cfg.w.empty()) {
    Matrix basis = Matrix::Zero(spec.dim_v(), static_cast<Eigen::Index>(cfg.w.size()));
    for (std::size_t j = 0; j < cfg.w.size(); ++j) {
      if (cfg.w[j] < 0 || cfg.w[j] >= spec.dim_v()) {
        throw Error(ErrorCode::PreconditionViolation, "W index out of range: " + std::to_string(cfg.w[j]));
      }
      basis(cfg.w[j], static_cast<Eigen::Index>(j)) = 1.0;
    }
    w = Subspace{basis};
  }
  if (cfg.beta != "auto") return make_context(spec, parse_beta(cfg.beta, spec.p_dim()), w);
  const Polytope poly = momentum_polytope(spec);
  int vertex = cfg.vertex >= 0 ? cfg.vertex : auto_vertex(poly);
  if (!poly.is_vertex(vertex)) {
    throw Error(ErrorCode::PreconditionViolation, "index " + std::to_string(vertex) + " is not a polytope vertex");
  }
  const RealVector beta_torus = exposing_vector(poly, vertex);
  Context ctx = make_context(spec, spec.beta_from_torus(beta_torus), w);
  ctx.vertex = vertex;
  ctx.beta_torus = beta_torus;
  return ctx;
}

json context_json(const Context& ctx) {
  json j{{"beta", to_json(ctx.beta)}, {"dim_w", ctx.w.dim()}};
  if (ctx.vertex >= 0) {
    j["vertex"] = {{"index", ctx.vertex}, {"point", to_json(ctx.poly.points[ctx.vertex])}};
    j["beta_torus"] = to_json(ctx.beta_torus);
  }
  return j;
}

std::filesystem::path artifact(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_path);
  return std::filesystem::path(cfg.out_path) / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string polyline_csv(const Polytope& poly) {
  const int d = poly.ambient_dim();
  std::string out;
  for (int c = 0; c < d; ++c) out += (c ? ",x" : "x") + std::to_string(c);
  out += "\n";
  std::vector<int> order = poly.boundary_order.empty() ? poly.vertices : poly.boundary_order;
  if (poly.affine_dim == 2 && !order.empty()) order.push_back(order.front());
  for (int v : order) {
    for (int c = 0; c < d; ++c) out += (c ? "," : "") + csv_number(poly.points[v][c]);
    out += "\n";
  }
  return out;
}

int cmd_polytope(const RepresentationSpec& spec, const RunConfig& cfg, json& report) {
  json weights = json::array();
  for (const WeightSpace& ws : weight_decomposition(spec)) {
    weights.push_back({{"weight", to_json(ws.weight)}, {"multiplicity", ws.basis.cols()}});
  }
  const Polytope poly = momentum_polytope(spec);
  report["weights"] = weights;
  report["polytope"] = polytope_json(poly);
  if (!cfg.out_path.empty()) write_file(artifact(cfg, "polyline.csv"), polyline_csv(poly));
  return kOk;
}

int cmd_strata(const RepresentationSpec& spec, const RunConfig& cfg, json& report) {
  const Context ctx = context_for(spec, cfg);
  report["context"] = context_json(ctx);
  report["grading"] = grading_json(ctx.grading);
  report["dim_x_beta_max"] = x_beta_max(spec, ctx.grading).dim();
  report["dim_p_centralizer"] = p_centralizer(ctx.grading).size();
  if (!cfg.point.empty()) {
    const ProjectivePoint x(parse_point(cfg.point));
    if (x.dim() != spec.dim_v()) throw Error(ErrorCode::PreconditionViolation, "point has the wrong dimension");
    const StratumRecord rec = classify_point(spec, ctx.grading, x);
    report["point"] = {{"point", to_json(canonical(x))},
                       {"moment_p", to_json(moment_value(spec, x))},
                       {"moment_torus", to_json(moment_torus(spec, x))},
                       {"mu_beta", moment_component(spec, x, ctx.beta)},
                       {"fixed", rec.fixed},
                       {"level_value", rec.level_value},
                       {"in_beta_minus_max", rec.in_beta_minus_max},
                       {"forward_limit", to_json(canonical(rec.forward_limit))},
                       {"backward_limit", to_json(canonical(rec.backward_limit))}};
  }
  return kOk;
}

int cmd_chart(const RepresentationSpec& spec, const RunConfig& cfg, json& report) {
  const Context ctx = context_for(spec, cfg);
  if (!ctx.chart) build_chart(spec, ctx.grading, ctx.base_point, ctx.w);  // rethrows with its code
  const int n = cfg.samples.value_or(1000);
  report["context"] = context_json(ctx);
  report["chart"] = chart_json(*ctx.chart);
  if (!cfg.point.empty()) report["coordinates"] = to_json(phi_inverse(*ctx.chart, ProjectivePoint(parse_point(cfg.point))));
  json checks = json::array();
  bool ok = true;
  for (const auto& r : {check_chart_roundtrip(ctx, n, cfg.seed), check_fibration(ctx, n, cfg.seed),
                        check_equivariance(ctx, n, cfg.seed)}) {
    ok = ok && r.passed();
    checks.push_back(to_json(r));
  }
  report["checks"] = checks;
  return ok ? kOk : kCheckFailed;
}

int cmd_blv(const RepresentationSpec& spec, const RunConfig& cfg, json& report) {
  const Context ctx = context_for(spec, cfg);
  const LstChart chart = blv_chart(spec, ctx.grading, ctx.w, ctx.complement);
  const int n = cfg.samples.value_or(1000);
  report["context"] = context_json(ctx);
  report["chart"] = chart_json(chart);
  if (!cfg.point.empty()) report["coordinates"] = to_json(phi_inverse(chart, ProjectivePoint(parse_point(cfg.point))));
  const VerificationReport r = check_blv(ctx, n, cfg.seed);
  report["checks"] = json::array({to_json(r)});
  return r.passed() ? kOk : kCheckFailed;
}

int cmd_flow(const RepresentationSpec& spec, const RunConfig& cfg, json& report) {
  std::vector<ProjectivePoint> starts;
  if (!cfg.point.empty()) {
    starts.emplace_back(parse_point(cfg.point));
    if (starts.back().dim() != spec.dim_v()) {
      throw Error(ErrorCode::PreconditionViolation, "point has the wrong dimension");
    }
  } else {
    Sampler rng(cfg.seed);
    for (int k = 0; k < cfg.samples.value_or(20); ++k) starts.push_back(rng.projective_point(spec.dim_v()));
  }
  std::vector<Trajectory> batch;
  for (const auto& x : starts) batch.push_back(flow_eta(spec, x));

  const Polytope poly = momentum_polytope(spec);
  json trajs = json::array();
  std::string csv = "trajectory,time,eta";
  for (Eigen::Index c = 0; c < spec.dim_v(); ++c) csv += ",re" + std::to_string(c) + ",im" + std::to_string(c);
  csv += "\n";
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const Trajectory& t = batch[k];
    trajs.push_back({{"index", k},
                     {"converged", t.converged},
                     {"steps", t.steps},
                     {"eta", t.samples.back().eta},
                     {"grad_norm", t.grad_norm},
                     {"beta_limit", to_json(t.beta_limit)},
                     {"limit", to_json(canonical(t.limit))}});
    for (const FlowSample& s : t.samples) {
      csv += std::to_string(k) + "," + csv_number(s.time) + "," + csv_number(s.eta);
      const Vector v = canonical(s.point);
      for (Eigen::Index c = 0; c < v.size(); ++c) csv += "," + csv_number(v[c].real()) + "," + csv_number(v[c].imag());
      csv += "\n";
    }
  }
  json certs = json::array();
  bool ok = true;
  const std::vector<int> maxi = batch_maximizers(batch);
  for (int k : maxi) {
    const CertificateReport c = evaluate_certificate(spec, batch[k], poly);
    ok = ok && c.passed;
    json j{{"trajectory", k},           {"passed", c.passed},           {"clause", c.failed_clause},
           {"message", c.message},      {"spectrum_gap", c.spectrum_gap}, {"stabilizer_field", c.stabilizer_field}};
    if (c.vertex >= 0) {
      j["vertex"] = to_json(poly.points[c.vertex]);
      j["vertex_error"] = c.vertex_error;
    }
    certs.push_back(j);
  }
  if (maxi.empty()) ok = false;
  report["trajectories"] = trajs;
  report["maximizers"] = maxi;
  report["certificates"] = certs;
  if (!cfg.out_path.empty()) write_file(artifact(cfg, "trajectory.csv"), csv);
  return ok ? kOk : kCheckFailed;
}

int cmd_verify(const RepresentationSpec& spec, const RunConfig& cfg, json& report, std::ostream& table) {
  const auto reports = run_battery(spec, BatteryOptions{cfg.samples.value_or(1000), cfg.seed});
  json checks = json::array();
  bool ok = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %8s %12s %12s %10s  %s\n", "check", "samples", "max_error", "threshold",
                "violations", "status");
  table << line;
  for (const auto& r : reports) {
    ok = ok && r.passed();
    checks.push_back(to_json(r));
    std::snprintf(line, sizeof line, "%-20s %8d %12.3e %12.3e %10zu  %s\n", r.check.c_str(), r.samples, r.max_error,
                  r.threshold, r.violations.size(), r.passed() ? "PASS" : "FAIL");
    table << line;
  }
  report["checks"] = checks;
  report["passed"] = ok;
  return ok ? kOk : kCheckFailed;
}

}  // namespace

Complex parse_complex(const std::string& token) {
  auto number = [&](const std::string& s, double sign_only) {
    if (s.empty() || s == "+") return sign_only;
    if (s == "-") return -sign_only;
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  };
  try {
    if (token.empty()) throw std::invalid_argument(token);
    if (token.back() != 'i') return {number(token, 0.0), 0.0};
    const std::string body = token.substr(0, token.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) return {0.0, number(body, 1.0)};
    return {number(body.substr(0, split), 0.0), number(body.substr(split), 1.0)};
  } catch (const std::exception&) {
    throw Error(ErrorCode::PreconditionViolation, "cannot parse complex number '" + token + "'");
  }
}

Vector parse_point(const std::vector<std::string>& tokens) {
  Vector v(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t k = 0; k < tokens.size(); ++k) v[static_cast<Eigen::Index>(k)] = parse_complex(tokens[k]);
  return v;
}

Tolerances apply_overrides(const std::map<std::string, double>& overrides) {
  Tolerances t;
  const std::map<std::string, double*> fields{
      {"hermitian", &t.hermitian}, {"commute", &t.commute},     {"closure", &t.closure},
      {"cluster_gap", &t.cluster_gap}, {"drop", &t.drop},       {"fixed", &t.fixed},
      {"invariance", &t.invariance},   {"cell", &t.cell},       {"orbit_rank", &t.orbit_rank}};
  for (const auto& [key, value] : overrides) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorCode::PreconditionViolation, "unknown tolerance '" + key + "'");
    if (!(value > 0.0)) throw Error(ErrorCode::PreconditionViolation, "tolerance '" + key + "' must be positive");
    *it->second = value;
  }
  return t;
}

int run(const RunConfig& cfg, std::ostream& out) {
  const RepresentationSpec spec = load_representation_file(cfg.rep_path, apply_overrides(cfg.tol));
  json report{{"command", cfg.command},
              {"representation", rep_name(spec)},
              {"dim_v", spec.dim_v()},
              {"dim_g", spec.algebra().dim()},
              {"seed", cfg.seed}};
  int code = kOk;
  std::ostringstream table;
  if (cfg.command == "polytope") code = cmd_polytope(spec, cfg, report);
  else if (cfg.command == "strata") code = cmd_strata(spec, cfg, report);
  else if (cfg.command == "chart") code = cmd_chart(spec, cfg, report);
  else if (cfg.command == "blv") code = cmd_blv(spec, cfg, report);
  else if (cfg.command == "flow") code = cmd_flow(spec, cfg, report);
  else if (cfg.command == "verify") code = cmd_verify(spec, cfg, report, table);
  else throw Error(ErrorCode::PreconditionViolation, "unknown command '" + cfg.command + "'");

  const std::string text = report.dump(2) + "\n";
  if (!cfg.out_path.empty()) write_file(artifact(cfg, "report.json"), text);
  out << (cfg.command == "verify" ? table.str() : text);
  return code;
}

int main(int argc, char** argv) {
  CLI::App app{"Momentum maps, polytopes, strata and cell charts for matrix group representations"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol;
  std::optional<int> samples;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"polytope", "torus weights and the momentum polytope"},
      {"strata", "grading and stratum data for a point"},
      {"chart", "cell chart on W and its round-trip checks"},
      {"blv", "cell chart on V = W + complement"},
      {"flow", "gradient flow of the norm square and extreme-point certificates"},
      {"verify", "full property battery"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--rep", cfg.rep_path, "representation JSON file")->required();
    sub->add_option("--out", cfg.out_path, "directory for report.json and CSV artifacts");
    sub->add_option("--seed", seed, "random seed (default: $MMTK_SEED, else 7)");
    sub->add_option("--samples", samples, "sample count (flow: number of random starts)");
    sub->add_option("--tol", tol, "tolerance override name=value")->take_all();
    if (name != "polytope" && name != "verify") {
      sub->add_option("--beta", cfg.beta, "'auto' or comma-separated p-coordinates")->capture_default_str();
      sub->add_option("--vertex", cfg.vertex, "polytope vertex index used by --beta auto");
      sub->add_option("--w", cfg.w, "coordinate indices spanning W")->delimiter(',');
    }
    if (name != "polytope" && name != "verify") {
      sub->add_option("--point", cfg.point, "point coordinates, e.g. 1,0.5+0.2i,-i")->delimiter(',');
    }
    sub->final_callback([&cfg, name = name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (seed) {
      cfg.seed = *seed;
    } else if (const char* env = std::getenv("MMTK_SEED")) {
      cfg.seed = std::stoull(env);
    }
    cfg.samples = samples;
    for (const std::string& t : tol) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::PreconditionViolation, "expected name=value, got '" + t + "'");
      cfg.tol[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    }
    if (cfg.samples && *cfg.samples < 1) throw Error(ErrorCode::PreconditionViolation, "--samples must be positive");
    return run(cfg, std::cout);
  } catch (const Error& e) {
    std::cout << json{{"error", std::string(error_name(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return e.code() == ErrorCode::IoError ? kIoError : kLibraryError;
  } catch (const std::exception& e) {
    std::cout << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return kLibraryError;
  }
}

}  // namespace mmtk::cli
