#include "mmtk/repspec.hpp"

#include "mmtk/linalg.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mmtk {

namespace {

using linalg::trace_inner;

// Gram–Schmidt insertion (two passes) into an orthonormal list.
bool insert_direction(std::vector<Matrix>& basis, Matrix y, double tol, int cap, int total_other) {
  const double scale = std::max(1.0, y.norm());
  for (int pass = 0; pass < 2; ++pass) {
    for (const Matrix& e : basis) y -= trace_inner(y, e) * e;
  }
  const double n = y.norm();
  if (n <= tol * scale) return false;
  if (static_cast<int>(basis.size()) + total_other + 1 > cap) {
    throw Error(ErrorCode::ClosureOverflow,
                "Lie closure exceeds the dimension cap of " + std::to_string(cap));
  }
  basis.push_back(y / n);
  return true;
}

}  // namespace

RealVector AlgebraBasis::coordinates(const Matrix& x) const {
  RealVector c(dim());
  for (int i = 0; i < dim(); ++i) c[i] = trace_inner(x, elements[i]);
  return c;
}

Matrix AlgebraBasis::element(const RealVector& coords) const {
  if (elements.empty()) return Matrix();
  Matrix x = Matrix::Zero(elements.front().rows(), elements.front().cols());
  for (int i = 0; i < dim(); ++i) x += coords[i] * elements[i];
  return x;
}

double AlgebraBasis::residual(const Matrix& x) const {
  if (elements.empty()) return x.norm();
  return (x - element(coordinates(x))).norm();
}

AlgebraBasis lie_closure(const std::vector<Matrix>& generators, const ClosureOptions& options,
                         int seeds_first) {
  std::vector<Matrix> herm;
  std::vector<Matrix> anti;
  auto add = [&](const Matrix& x) {
    const Matrix hp = 0.5 * (x + x.adjoint());
    const Matrix ap = 0.5 * (x - x.adjoint());
    bool added = insert_direction(herm, hp, options.tol, options.max_dim, static_cast<int>(anti.size()));
    added = insert_direction(anti, ap, options.tol, options.max_dim, static_cast<int>(herm.size())) || added;
    return added;
  };

  AlgebraBasis out;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    add(generators[i]);
    if (static_cast<int>(i) + 1 == seeds_first) {
      for (int k = 0; k < static_cast<int>(herm.size()); ++k) out.a_indices.push_back(k);
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Matrix> all = herm;
    all.insert(all.end(), anti.begin(), anti.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        if (add(linalg::bracket(all[i], all[j]))) changed = true;
      }
    }
  }

  out.elements = herm;
  out.elements.insert(out.elements.end(), anti.begin(), anti.end());
  for (int i = 0; i < static_cast<int>(herm.size()); ++i) out.p_indices.push_back(i);
  for (int i = 0; i < static_cast<int>(anti.size()); ++i) {
    out.k_indices.push_back(static_cast<int>(herm.size()) + i);
  }

  const int d = out.dim();
  out.bracket_table.assign(static_cast<std::size_t>(d), RealMatrix::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Matrix b = linalg::bracket(out.elements[i], out.elements[j]);
      for (int k = 0; k < d; ++k) out.bracket_table[k](i, j) = trace_inner(b, out.elements[k]);
    }
  }
  return out;
}

RepresentationSpec::RepresentationSpec(int dim_v, std::vector<Generator> generators,
                                       std::vector<std::string> p_names, std::vector<std::string> a_names,
                                       std::map<std::string, std::string> metadata, const Tolerances& tol)
    : dim_v_(dim_v),
      generators_(std::move(generators)),
      p_names_(std::move(p_names)),
      a_names_(std::move(a_names)),
      metadata_(std::move(metadata)),
      tol_(tol) {
  if (dim_v_ < 1 || dim_v_ > tol_.max_dim_v) {
    throw Error(ErrorCode::MalformedDocument, "dim must lie in [1, " + std::to_string(tol_.max_dim_v) + "]");
  }
  if (generators_.empty()) throw Error(ErrorCode::MalformedDocument, "generator list is empty");

  std::set<std::string> seen;
  for (const Generator& g : generators_) {
    if (!seen.insert(g.name).second) {
      throw Error(ErrorCode::MalformedDocument, "duplicate generator name '" + g.name + "'");
    }
    if (g.matrix.rows() != dim_v_ || g.matrix.cols() != dim_v_) {
      throw Error(ErrorCode::MalformedDocument, "generator '" + g.name + "' is not " +
                                                    std::to_string(dim_v_) + "x" + std::to_string(dim_v_));
    }
    const Matrix defect = g.tag == GeneratorTag::P ? Matrix(g.matrix - g.matrix.adjoint())
                                                   : Matrix(g.matrix + g.matrix.adjoint());
    if (linalg::max_abs(defect) >= tol_.hermitian) {
      throw Error(ErrorCode::HermiticityViolation,
                  "generator '" + g.name + (g.tag == GeneratorTag::P ? "' is not Hermitian" : "' is not anti-Hermitian"));
    }
  }

  if (p_names_.empty()) {
    for (const Generator& g : generators_) {
      if (g.tag == GeneratorTag::P) p_names_.push_back(g.name);
    }
  }
  for (const std::string& name : p_names_) {
    if (generator(name).tag != GeneratorTag::P) {
      throw Error(ErrorCode::MalformedDocument, "p_basis entry '" + name + "' is not tagged \"p\"");
    }
  }
  for (const std::string& name : a_names_) {
    if (std::find(p_names_.begin(), p_names_.end(), name) == p_names_.end()) {
      throw Error(ErrorCode::MalformedDocument, "a_basis entry '" + name + "' is not in p_basis");
    }
    a_raw_.push_back(generator(name).matrix);
  }
  for (std::size_t i = 0; i < a_raw_.size(); ++i) {
    for (std::size_t j = i + 1; j < a_raw_.size(); ++j) {
      if (linalg::max_abs(linalg::bracket(a_raw_[i], a_raw_[j])) >= tol_.commute) {
        throw Error(ErrorCode::NonCommutingTorus,
                    "a_basis elements '" + a_names_[i] + "' and '" + a_names_[j] + "' do not commute");
      }
    }
  }

  // Seed order: 𝔞 first so that it spans the leading p-directions.
  std::vector<Matrix> ordered;
  std::set<std::string> used;
  for (const std::string& name : a_names_) {
    ordered.push_back(generator(name).matrix);
    used.insert(name);
  }
  const int seeds = static_cast<int>(ordered.size());
  for (const std::string& name : p_names_) {
    if (used.insert(name).second) ordered.push_back(generator(name).matrix);
  }
  for (const Generator& g : generators_) {
    if (used.insert(g.name).second) ordered.push_back(g.matrix);
  }
  ClosureOptions closure{tol_.closure, std::min(tol_.max_closure_dim, 30)};
  algebra_ = lie_closure(ordered, closure, seeds);

  // The named p_basis must span the Hermitian part of the closed algebra.
  std::vector<Matrix> p_span;
  for (const std::string& name : p_names_) {
    insert_direction(p_span, generator(name).matrix, tol_.closure, 1 << 20, 0);
  }
  if (static_cast<int>(p_span.size()) != p_dim()) {
    throw Error(ErrorCode::MalformedDocument,
                "p_basis spans dimension " + std::to_string(p_span.size()) +
                    " but the Hermitian part of the closed algebra has dimension " + std::to_string(p_dim()));
  }
  for (int i = 0; i < p_dim(); ++i) {
    for (int j = i + 1; j < p_dim(); ++j) {
      const Matrix b = linalg::bracket(p_element(i), p_element(j));
      if ((0.5 * (b + b.adjoint())).norm() > tol_.closure) {
        throw Error(ErrorCode::MalformedDocument, "[p, p] is not contained in k");
      }
    }
  }
}

const Generator& RepresentationSpec::generator(const std::string& name) const {
  for (const Generator& g : generators_) {
    if (g.name == name) return g;
  }
  throw Error(ErrorCode::MalformedDocument, "unknown generator name '" + name + "'");
}

Matrix RepresentationSpec::rho_p(const RealVector& beta) const {
  if (beta.size() != p_dim()) {
    throw Error(ErrorCode::PreconditionViolation,
                "beta has " + std::to_string(beta.size()) + " coordinates, p has dimension " + std::to_string(p_dim()));
  }
  Matrix m = Matrix::Zero(dim_v_, dim_v_);
  for (int k = 0; k < p_dim(); ++k) m += beta[k] * p_element(k);
  return m;
}

RealVector RepresentationSpec::p_coordinates(const Matrix& h) const {
  RealVector c(p_dim());
  for (int k = 0; k < p_dim(); ++k) c[k] = linalg::trace_inner(h, p_element(k));
  return c;
}

RealVector RepresentationSpec::beta_from_torus(const RealVector& b) const {
  if (b.size() != a_rank()) throw Error(ErrorCode::PreconditionViolation, "torus vector has wrong length");
  Matrix m = Matrix::Zero(dim_v_, dim_v_);
  for (int j = 0; j < a_rank(); ++j) m += b[j] * a_raw_[j];
  return p_coordinates(m);
}

RealMatrix RepresentationSpec::a_gram() const {
  RealMatrix g(a_rank(), a_rank());
  for (int i = 0; i < a_rank(); ++i) {
    for (int j = 0; j < a_rank(); ++j) g(i, j) = linalg::trace_inner(a_raw_[i], a_raw_[j]);
  }
  return g;
}

namespace {

Complex parse_entry(const nlohmann::json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw Error(ErrorCode::MalformedDocument, "matrix entry must be a [re, im] pair");
}

std::vector<std::string> parse_names(const nlohmann::json& doc, const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " must be an array");
  for (const auto& n : doc[key]) {
    if (!n.is_string()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " entries must be strings");
    out.push_back(n.get<std::string>());
  }
  return out;
}

}  // namespace

RepresentationSpec load_representation(const std::string& document, const Tolerances& tol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "document must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw Error(ErrorCode::MalformedDocument, "missing integer field 'dim'");
  }
  const int n = doc["dim"].get<int>();
  if (!doc.contains("generators") || !doc["generators"].is_array()) {
    throw Error(ErrorCode::MalformedDocument, "missing array field 'generators'");
  }
  if (doc["generators"].empty()) throw Error(ErrorCode::MalformedDocument, "generator list is empty");
  if (n < 1) throw Error(ErrorCode::MalformedDocument, "dim must be positive");

  std::vector<Generator> gens;
  for (const auto& g : doc["generators"]) {
    if (!g.is_object() || !g.contains("name") || !g["name"].is_string() || !g.contains("matrix") ||
        !g["matrix"].is_array()) {
      throw Error(ErrorCode::MalformedDocument, "generator needs 'name' and 'matrix'");
    }
    Generator gen;
    gen.name = g["name"].get<std::string>();
    const std::string tag = g.value("tag", std::string("p"));
    if (tag == "p") {
      gen.tag = GeneratorTag::P;
    } else if (tag == "k") {
      gen.tag = GeneratorTag::K;
    } else {
      throw Error(ErrorCode::MalformedDocument, "tag must be \"p\" or \"k\"");
    }
    const auto& rows = g["matrix"];
    if (static_cast<int>(rows.size()) != n) {
      throw Error(ErrorCode::MalformedDocument, "generator '" + gen.name + "' has wrong row count");
    }
    gen.matrix.resize(n, n);
    for (int i = 0; i < n; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) {
        throw Error(ErrorCode::MalformedDocument, "generator '" + gen.name + "' has a malformed row");
      }
      for (int j = 0; j < n; ++j) gen.matrix(i, j) = parse_entry(rows[i][j]);
    }
    gens.push_back(std::move(gen));
  }

  std::map<std::string, std::string> metadata;
  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    for (const auto& [k, v] : doc["metadata"].items()) {
      metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return RepresentationSpec(n, std::move(gens), parse_names(doc, "p_basis"), parse_names(doc, "a_basis"),
                            std::move(metadata), tol);
}

RepresentationSpec load_representation_file(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open representation file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_representation(buffer.str(), tol);
}

std::vector<WeightSpace> weight_decomposition(const RepresentationSpec& spec) {
  if (spec.a_rank() == 0) throw Error(ErrorCode::PreconditionViolation, "a_basis is empty");
  const double gap = spec.tolerances().cluster_gap;
  std::vector<WeightSpace> spaces{{RealVector(0), Matrix::Identity(spec.dim_v(), spec.dim_v())}};
  for (const Matrix& h : spec.a_raw()) {
    std::vector<WeightSpace> refined;
    for (const WeightSpace& s : spaces) {
      const Matrix compressed = s.basis.adjoint() * h * s.basis;
      for (const linalg::Level& level : linalg::hermitian_levels(compressed, gap)) {
        WeightSpace w;
        w.weight.resize(s.weight.size() + 1);
        w.weight << s.weight, level.value;
        w.basis = s.basis * level.basis;
        refined.push_back(std::move(w));
      }
    }
    spaces = std::move(refined);
  }
  std::sort(spaces.begin(), spaces.end(), [](const WeightSpace& a, const WeightSpace& b) {
    for (Eigen::Index i = 0; i < a.weight.size(); ++i) {
      if (a.weight[i] != b.weight[i]) return a.weight[i] > b.weight[i];
    }
    return false;
  });
  return spaces;
}

}  // namespace mmtk
