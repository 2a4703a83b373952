// One line per acceptance criterion; exit status is the number of failures.
#include "mmtk/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace mmtk;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr double kGradientTol = 1e-8;
constexpr double kMembershipTol = 1e-7;
constexpr double kKillTol = 1e-8;
constexpr double kRoundTripTol = 1e-9;
constexpr double kEquivarianceTol = 1e-7;
constexpr double kSymbolicTol = 1e-10;
constexpr double kReductionTol = 1e-12;
constexpr double kQuotientTol = 1e-8;
constexpr double kVertexTol = 1e-6;
constexpr double kMultiplicativityTol = 1e-9;
constexpr double kAngleTol = 1e-8;

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

void absorb(Outcome& o, const VerificationReport& r, const std::string& label) {
  if (!r.passed()) {
    o.passed = false;
    o.detail += "; " + label + ": " + std::to_string(r.violations.size()) + " violations (" + r.violations.front() + ")";
  }
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double extra(const VerificationReport& r, const std::string& key) {
  const auto it = r.extras.find(key);
  return it == r.extras.end() ? 0.0 : it->second;
}

struct Reps {
  RepresentationSpec sym2 = load_representation_file(std::string(MMTK_DATA_DIR) + "/sl2_sym2.json");
  RepresentationSpec torus = load_representation_file(std::string(MMTK_DATA_DIR) + "/torus_p2.json");
  RepresentationSpec plus = load_representation_file(std::string(MMTK_DATA_DIR) + "/sl2_sym2_plus_trivial.json");

  std::vector<std::pair<std::string, const RepresentationSpec*>> all() const {
    return {{"sl2_sym2", &sym2}, {"torus_p2", &torus}, {"sl2_sym2_plus_trivial", &plus}};
  }
};

Outcome gradient(const Reps& reps) {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, spec] : reps.all()) {
    const VerificationReport r = check_gradient(*spec, 1000, kSeed);
    worst = std::max(worst, r.max_error);
    absorb(o, r, name);
  }
  o.passed = o.passed && worst < kGradientTol;
  o.detail = "3 x 1000 samples, max |grad - field| " + sci(worst) + " (tol " + sci(kGradientTol) + ")" + o.detail;
  return o;
}

Outcome monotony(const Reps& reps) {
  Outcome o;
  std::size_t violations = 0;
  for (const auto& [name, spec] : reps.all()) {
    const VerificationReport r = check_monotony(*spec, 200, kSeed, 50);
    violations += r.violations.size();
    absorb(o, r, name);
  }
  o.detail = "3 x 200 trajectories x 50 times, " + std::to_string(violations) + " violations" + o.detail;
  return o;
}

Outcome oracle() {
  Outcome o;
  const VerificationReport r = check_polytope_oracle(100, kSeed);
  absorb(o, r, "oracle");
  o.detail = "100 instances (d = 1..3, <= 12 points), exact and floating paths" + o.detail;
  return o;
}

Outcome max_component(const Context& ctx) {
  Outcome o;
  const VerificationReport r = check_max_component(ctx, 500, kSeed);
  absorb(o, r, "membership");
  const double sigma = ctx.poly.points[ctx.vertex][0];
  if (std::abs(sigma - 2.0) > kMembershipTol) {
    o.passed = false;
    o.detail += "; vertex is " + sci(sigma) + ", expected 2";
  }
  const double kill = std::max(extra(r, "max_rplus_field"), extra(r, "max_pbeta_field"));
  const double smin = extra(r, "min_orbit_sigma");
  o.passed = o.passed && kill < kKillTol && smin > kKillTol;
  o.detail = "500 points, sigma = " + sci(sigma) + ", r_plus/p_beta field " + sci(kill) + ", sigma_min " + sci(smin) +
             "" + o.detail;
  return o;
}

Outcome round_trip(const Context& ctx) {
  Outcome o;
  if (!ctx.chart) return {false, "no chart: " + ctx.chart_error};
  const LstChart& chart = *ctx.chart;
  const VerificationReport rt = check_chart_roundtrip(ctx, 1000, kSeed);
  const VerificationReport eq = check_equivariance(ctx, 1000, kSeed);
  absorb(o, rt, "round trip");
  absorb(o, eq, "equivariance");
  o.passed = o.passed && rt.max_error < kRoundTripTol && eq.max_error < kEquivarianceTol;

  // [1:2:3] = x² + 2xy + 3y²; closed form 2s = a, c = b − s².
  const double a = 2.0, b = 3.0;
  const double s_expected = a / 2.0;
  const double c_expected = b - s_expected * s_expected;
  Vector z(3);
  z << 1.0, a / std::sqrt(2.0), b;
  double s = NAN, c = NAN;
  try {
    const ChartCoordinates coords = phi_inverse(chart, ProjectivePoint(z));
    Matrix f = Matrix::Zero(3, 3);
    f(1, 0) = std::sqrt(2.0);
    f(2, 1) = std::sqrt(2.0);
    Matrix rn = Matrix::Zero(3, 3);
    for (int i = 0; i < chart.n_dim(); ++i) rn += coords.n[i] * chart.n_basis[i];
    s = linalg::trace_inner(rn, f) / f.squaredNorm();
    Vector fpart = Vector::Zero(3);
    for (int i = 0; i < chart.f_dim(); ++i) fpart += coords.f[i] * chart.f_dirs[i];
    c = fpart[2].real();
  } catch (const Error& e) {
    o.detail += std::string("; [1:2:3]: ") + e.what();
  }
  const double sym_err = std::max(std::abs(s - s_expected), std::abs(c - c_expected));
  o.passed = o.passed && sym_err < kSymbolicTol;
  o.detail = "box " + sci(extra(rt, "max_box_error")) + ", cell " + sci(extra(rt, "max_cell_error")) +
             ", equivariance " + sci(eq.max_error) + ", [1:2:3] -> (s, c) = (" + fixed(s) + ", " + fixed(c) + ")" + o.detail;
  return o;
}

Outcome reducible(const Reps& reps) {
  Outcome o;
  const Context ctx = make_context(reps.plus);
  const VerificationReport r = check_blv(ctx, 1000, kSeed);
  absorb(o, r, "blv");
  const double red = extra(r, "max_reduction_error");
  o.passed = o.passed && r.max_error < kRoundTripTol && red < kReductionTol && ctx.complement.dim() == 1;
  o.detail = "Sym2 + C, 1000 samples, round trip " + sci(r.max_error) + ", reduction " + sci(red) + o.detail;
  return o;
}

Outcome freeness(const Context& ctx) {
  Outcome o;
  const VerificationReport fr = check_freeness(ctx, 1000, kSeed);
  const VerificationReport qu = check_quotient(ctx, 1000, kSeed);
  absorb(o, fr, "freeness");
  absorb(o, qu, "quotient");
  o.passed = o.passed && qu.max_error < kQuotientTol;
  o.detail = "1000 samples, min separation " + sci(extra(fr, "min_separation")) + ", invariance " +
             sci(extra(qu, "max_invariance_error")) + ", p o q " + sci(extra(qu, "max_base_error")) + o.detail;
  return o;
}

Outcome flow(const Context& ctx) {
  Outcome o;
  const VerificationReport r = check_flow(ctx, 100, kSeed);
  absorb(o, r, "flow");
  o.passed = o.passed && r.max_error < kVertexTol;
  o.detail = "100 starts, " + std::to_string(static_cast<int>(extra(r, "maximizers"))) +
             " maximizers certified, max vertex error " + sci(r.max_error) + o.detail;
  return o;
}

Outcome grading(const Reps& reps) {
  Outcome o;
  double mult = 0.0, angle = 0.0;
  for (const auto& [name, spec] : reps.all()) {
    const VerificationReport r = check_grading(*spec, 200, kSeed);
    mult = std::max(mult, extra(r, "max_multiplicativity"));
    angle = std::max(angle, extra(r, "max_theta_angle"));
    absorb(o, r, name);
  }
  o.passed = o.passed && mult < kMultiplicativityTol && angle < kAngleTol;
  o.detail = "3 x 200 beta, multiplicativity " + sci(mult) + ", theta angle " + sci(angle) + o.detail;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  const Reps reps;
  const Context sym2 = make_context(reps.sym2);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient condition", [&] { return gradient(reps); }},
      {"monotony", [&] { return monotony(reps); }},
      {"polytope oracle equivalence", [] { return oracle(); }},
      {"maximal component", [&] { return max_component(sym2); }},
      {"cell chart round trip", [&] { return round_trip(sym2); }},
      {"reducible chart", [&] { return reducible(reps); }},
      {"freeness and quotient", [&] { return freeness(sym2); }},
      {"gradient flow certificates", [&] { return flow(sym2); }},
      {"grading algebra", [&] { return grading(reps); }},
  };
  // Optional argument: run only criterion k (1-based).
  std::size_t first = 0, last = criteria.size();
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion index must be in 1..%zu\n", criteria.size());
      return 2;
    }
    first = static_cast<std::size_t>(k - 1);
    last = first + 1;
  }
  int failures = 0;
  for (std::size_t i = first; i < last; ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(last - first) - failures, last - first, secs);
  return failures;
}
