#pragma once

#include "mmtk/flow.hpp"
#include "mmtk/lst.hpp"
#include "mmtk/polytope.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mmtk {

/// Derived objects shared by the property suites for one representation:
/// polytope, the "auto" β (exposing vector of the lexicographically largest
/// vertex), its grading, the irreducible component W through the top weight
/// and the chart built on it.
struct Context {
  const RepresentationSpec* spec = nullptr;
  Polytope poly;
  int vertex = -1;
  RealVector beta_torus;
  RealVector beta;
  BetaGrading grading;
  std::vector<Subspace> components;  // irreducible invariant summands of V
  Subspace w;                        // component containing X^β_max
  Subspace complement;               // sum of the other components
  ProjectivePoint base_point;
  std::optional<LstChart> chart;     // chart on W
  std::string chart_error;           // why `chart` is empty
};

/// Lexicographically largest vertex of the torus polytope.
int auto_vertex(const Polytope& poly);
Context make_context(const RepresentationSpec& spec);
/// Context for an explicit β (p-coordinates); W defaults to the component
/// with the largest overlap with the top ρ(β)-eigenspace of V.
Context make_context(const RepresentationSpec& spec, const RealVector& beta,
                     const std::optional<Subspace>& w = std::nullopt);

/// Orthogonal decomposition of C^N into irreducible invariant subspaces, from
/// the eigenspaces of a generic Hermitian element of the commutant.
std::vector<Subspace> invariant_decomposition(const RepresentationSpec& spec, std::uint64_t seed = 11);

/// Runs `body(count, seed + shard)` over a fixed number of shards on worker
/// threads and merges the partial reports in shard order.
VerificationReport run_sharded(const std::string& check, int samples, std::uint64_t seed,
                               const std::function<VerificationReport(int, std::uint64_t)>& body, int shards = 8);

/// Brute-force extreme-point oracle for integral points: a point is
/// non-extreme iff it lies in a simplex spanned by at most d+1 other distinct
/// points (Carathéodory), decided in exact rational arithmetic. Repeated
/// points collapse onto their first occurrence.
std::vector<int> oracle_extreme_points(const std::vector<std::vector<long long>>& points);

/// Central-difference gradient of μ^β over the tangent frame (step h).
Vector finite_difference_gradient(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta,
                                  double h = 1e-6);

VerificationReport check_algebra(const RepresentationSpec& spec);
VerificationReport check_weights(const RepresentationSpec& spec);
VerificationReport check_gradient(const RepresentationSpec& spec, int samples, std::uint64_t seed);
VerificationReport check_monotony(const RepresentationSpec& spec, int trajectories, std::uint64_t seed,
                                  int times = 50);
VerificationReport check_moment_equivariance(const RepresentationSpec& spec, int samples, std::uint64_t seed);
VerificationReport check_image_containment(const RepresentationSpec& spec, const Polytope& poly, int samples,
                                           std::uint64_t seed);
VerificationReport check_polytope_oracle(int instances, std::uint64_t seed);
VerificationReport check_exposure(const Polytope& poly, int samples, std::uint64_t seed);
VerificationReport check_grading(const RepresentationSpec& spec, int samples, std::uint64_t seed);
VerificationReport check_bb_limits(const RepresentationSpec& spec, int samples, std::uint64_t seed);
VerificationReport check_max_component(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_chart_roundtrip(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_fibration(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_equivariance(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_freeness(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_quotient(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_blv(const Context& ctx, int samples, std::uint64_t seed);
VerificationReport check_flow(const Context& ctx, int starts, std::uint64_t seed);
VerificationReport check_cell_coverage(const Context& ctx, int samples, std::uint64_t seed);

struct BatteryOptions {
  int samples = 1000;
  std::uint64_t seed = 7;
};

/// Every property suite applicable to the representation, in a fixed order.
std::vector<VerificationReport> run_battery(const RepresentationSpec& spec, const BatteryOptions& options);

}  // namespace mmtk
