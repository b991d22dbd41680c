#include "assc/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace assc {

int DataMatrix::num_clusters() const {
  if (!labels) return 0;
  return static_cast<int>(std::set<int>(labels->begin(), labels->end()).size());
}

std::vector<Index> DataMatrix::members(int k) const {
  std::vector<Index> out;
  if (!labels) return out;
  for (std::size_t i = 0; i < labels->size(); ++i)
    if ((*labels)[i] == k) out.push_back(static_cast<Index>(i));
  return out;
}

Matrix DataMatrix::columns(const std::vector<Index>& idx) const {
  Matrix out(points.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= points.cols())
      throw InvalidInput("DataMatrix::columns: index out of range");
    out.col(static_cast<Index>(k)) = points.col(idx[k]);
  }
  return out;
}

void DataMatrix::validate() const {
  if (!all_finite(points)) throw InvalidInput("DataMatrix: non-finite entries");
  if (!labels) return;
  if (static_cast<Index>(labels->size()) != points.cols()) {
    throw InvalidInput("DataMatrix: " + std::to_string(labels->size()) +
                       " labels for " + std::to_string(points.cols()) + " points");
  }
  if (labels->empty()) return;
  const int n = *std::max_element(labels->begin(), labels->end());
  std::vector<bool> seen(static_cast<std::size_t>(std::max(n, 0)) + 1, false);
  for (int l : *labels) {
    if (l < 1) throw InvalidInput("DataMatrix: labels must be positive, got " + std::to_string(l));
    seen[l] = true;
  }
  for (int k = 1; k <= n; ++k) {
    if (!seen[k]) throw InvalidInput("DataMatrix: label " + std::to_string(k) + " unused; ids must be dense 1..n");
  }
}

std::vector<int> normalize_labels(const std::vector<int>& raw) {
  std::map<int, int> id;
  for (int l : raw) id.emplace(l, 0);
  int next = 1;
  for (auto& [k, v] : id) v = next++;
  std::vector<int> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(), [&](int l) { return id[l]; });
  return out;
}

double AffineSubspaceModel::distance(const Vector& x) const {
  if (x.size() != offset.size()) throw InvalidInput("AffineSubspaceModel::distance: dimension mismatch");
  const Vector d = x - offset;
  return (d - basis * (basis.transpose() * d)).norm();
}

void AffineSubspaceModel::validate() const {
  if (basis.rows() != offset.size()) throw InvalidInput("AffineSubspaceModel: basis/offset dimension mismatch");
  if (!all_finite(offset) || !all_finite(basis)) throw InvalidInput("AffineSubspaceModel: non-finite entries");
  if (basis.cols() > offset.size())
    throw InvalidInput("AffineSubspaceModel: subspace dimension exceeds ambient dimension");
  const Matrix gram = basis.transpose() * basis;
  if (dim() > 0 && (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidInput("AffineSubspaceModel: basis is not orthonormal");
}

void Arrangement::validate(double tol) const {
  data.validate();
  if (!data.labels) throw InvalidInput("Arrangement: data must be labeled");
  if (data.num_clusters() != static_cast<int>(subspaces.size())) {
    throw InvalidInput("Arrangement: " + std::to_string(subspaces.size()) +
                       " subspaces for " + std::to_string(data.num_clusters()) + " clusters");
  }
  for (const auto& s : subspaces) {
    s.validate();
    if (s.ambient_dim() != data.dim()) throw InvalidInput("Arrangement: subspace ambient dimension mismatch");
  }
  const double scale = std::max(1.0, data.points.size() ? data.points.cwiseAbs().maxCoeff() : 0.0);
  for (Index i = 0; i < data.size(); ++i) {
    const auto& s = subspaces[(*data.labels)[i] - 1];
    const double d = s.distance(data.points.col(i));
    if (d > tol * scale) {
      throw InvalidInput("Arrangement: point " + std::to_string(i) + " is " + std::to_string(d) +
                         " away from its subspace");
    }
  }
}

DataMatrix embed_matrix(const DataMatrix& X) {
  DataMatrix out;
  out.points.resize(X.dim() + 1, X.size());
  out.points.topRows(X.dim()) = X.points;
  out.points.row(X.dim()).setOnes();
  out.labels = X.labels;
  return out;
}

AffineSubspaceModel fit_affine_subspace(const Matrix& points, double tol) {
  if (points.cols() < 1) throw InvalidInput("fit_affine_subspace: need at least one point");
  if (!all_finite(points)) throw InvalidInput("fit_affine_subspace: non-finite entries");
  AffineSubspaceModel m;
  m.offset = points.rowwise().mean();
  const Matrix centered = points.colwise() - m.offset;
  // Absolute floor keeps numerically coincident points at d = 0.
  const double scale = std::max(1.0, points.cwiseAbs().maxCoeff());
  if (centered.cwiseAbs().maxCoeff() <= tol * scale) {
    m.basis = Matrix(points.rows(), 0);
    return m;
  }
  m.basis = orthonormal_basis(centered, tol);
  return m;
}

}  // namespace assc
