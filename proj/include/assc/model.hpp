#pragma once

#include <optional>
#include <vector>

#include "assc/numerics.hpp"

namespace assc {

/// D x N point set, one point per column, with optional cluster ids in 1..n.
struct DataMatrix {
  Matrix points;
  std::optional<std::vector<int>> labels;

  Index dim() const { return points.rows(); }
  Index size() const { return points.cols(); }
  bool labeled() const { return labels.has_value(); }

  /// Number of distinct clusters; 0 when unlabeled.
  int num_clusters() const;
  /// Column indices carrying label `k`.
  std::vector<Index> members(int k) const;
  /// Columns of `points` picked by `idx`, in order.
  Matrix columns(const std::vector<Index>& idx) const;

  /// Throws InvalidInput unless points are finite and labels are dense ids
  /// 1..n, each used at least once, one per column.
  void validate() const;
};

/// Maps an arbitrary label alphabet onto 1..n, preserving sorted order.
std::vector<int> normalize_labels(const std::vector<int>& raw);

/// Affine subspace offset + span(basis), with orthonormal basis columns.
struct AffineSubspaceModel {
  Vector offset;
  Matrix basis;

  Index ambient_dim() const { return offset.size(); }
  Index dim() const { return basis.cols(); }

  /// Euclidean distance of `x` to the subspace.
  double distance(const Vector& x) const;
  void validate() const;
};

struct Arrangement {
  std::vector<AffineSubspaceModel> subspaces;
  DataMatrix data;

  /// Checks labels, dimensions, and that every point lies within `tol`
  /// (relative to the data scale) of its own subspace.
  void validate(double tol = 1e-8) const;
};

template <typename Derived>
Vector homogeneous_embed(const Eigen::MatrixBase<Derived>& x) {
  Vector out(x.size() + 1);
  out.head(x.size()) = x;
  out(x.size()) = 1.0;
  return out;
}

/// [X; 1'] with labels carried over.
DataMatrix embed_matrix(const DataMatrix& X);

/// Column mean as offset, principal directions above the relative
/// singular-value threshold `tol` as basis.
AffineSubspaceModel fit_affine_subspace(const Matrix& points, double tol = kRankTol);

}  // namespace assc
