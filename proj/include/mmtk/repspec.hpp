#pragma once

#include "mmtk/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace mmtk {

enum class GeneratorTag { P, K };  // Hermitian (𝔭) / anti-Hermitian (𝔨)

struct Generator {
  std::string name;
  Matrix matrix;
  GeneratorTag tag = GeneratorTag::P;
};

/// Trace-form orthonormal basis of a bracket- and θ-closed real matrix Lie algebra.
///
/// Elements are ordered with all Hermitian (𝔭) elements first, then the
/// anti-Hermitian (𝔨) ones. Structure constants are stored as
/// bracket_table[k](i, j) = ⟨[e_i, e_j], e_k⟩.
struct AlgebraBasis {
  std::vector<Matrix> elements;
  std::vector<RealMatrix> bracket_table;
  std::vector<int> p_indices;
  std::vector<int> k_indices;
  std::vector<int> a_indices;

  int dim() const { return static_cast<int>(elements.size()); }
  /// Coordinates of `x` on the basis (orthogonal projection).
  RealVector coordinates(const Matrix& x) const;
  Matrix element(const RealVector& coords) const;
  /// ‖x − proj(x)‖_F: distance from the real span.
  double residual(const Matrix& x) const;
};

struct ClosureOptions {
  double tol = 1e-9;
  int max_dim = 64;
};

/// Smallest real subspace containing `generators` that is closed under the
/// commutator and under θ(X) = −X*, orthonormalized for Re tr(A B*).
/// `seeds_first` counts leading Hermitian inputs whose span is kept as the
/// first basis directions (used to pin 𝔞 at the front of 𝔭).
AlgebraBasis lie_closure(const std::vector<Matrix>& generators, const ClosureOptions& options = {},
                         int seeds_first = 0);

/// Validated representation of a reductive matrix Lie algebra on C^N.
///
/// After construction the algebra is closed, 𝔭 is its Hermitian part with
/// orthonormal basis p_basis() (𝔞 first), and the raw a_basis matrices are
/// kept for torus weight coordinates μ_a(x)_j = v* H_j v.
class RepresentationSpec {
 public:
  RepresentationSpec(int dim_v, std::vector<Generator> generators, std::vector<std::string> p_names,
                     std::vector<std::string> a_names, std::map<std::string, std::string> metadata = {},
                     const Tolerances& tol = {});

  int dim_v() const { return dim_v_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<std::string>& p_names() const { return p_names_; }
  const std::vector<std::string>& a_names() const { return a_names_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  const AlgebraBasis& algebra() const { return algebra_; }
  const Tolerances& tolerances() const { return tol_; }

  int p_dim() const { return static_cast<int>(algebra_.p_indices.size()); }
  int k_dim() const { return static_cast<int>(algebra_.k_indices.size()); }
  int a_rank() const { return static_cast<int>(a_raw_.size()); }

  /// Orthonormal Hermitian basis element A_k of ρ(𝔭).
  const Matrix& p_element(int k) const { return algebra_.elements[algebra_.p_indices[k]]; }
  const Matrix& k_element(int k) const { return algebra_.elements[algebra_.k_indices[k]]; }
  const std::vector<Matrix>& a_raw() const { return a_raw_; }

  /// ρ(β) = Σ β_k A_k for β in p-coordinates.
  Matrix rho_p(const RealVector& beta) const;
  /// p-coordinates of a Hermitian matrix (orthogonal projection onto ρ(𝔭)).
  RealVector p_coordinates(const Matrix& h) const;
  /// p-coordinates of Σ b_j H_j for b in raw torus coordinates.
  RealVector beta_from_torus(const RealVector& b) const;
  /// Gram matrix ⟨H_i, H_j⟩ of the raw a_basis.
  RealMatrix a_gram() const;

  const Generator& generator(const std::string& name) const;

 private:
  int dim_v_;
  std::vector<Generator> generators_;
  std::vector<std::string> p_names_;
  std::vector<std::string> a_names_;
  std::map<std::string, std::string> metadata_;
  Tolerances tol_;
  AlgebraBasis algebra_;
  std::vector<Matrix> a_raw_;
};

/// Parses the representation JSON document and validates it.
RepresentationSpec load_representation(const std::string& document, const Tolerances& tol = {});
RepresentationSpec load_representation_file(const std::string& path, const Tolerances& tol = {});

struct WeightSpace {
  RealVector weight;
  Matrix basis;  // orthonormal columns
};

/// Joint eigenspaces of the commuting a_basis matrices, ordered by
/// lexicographically descending weight.
std::vector<WeightSpace> weight_decomposition(const RepresentationSpec& spec);

}  // namespace mmtk
