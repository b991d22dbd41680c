#pragma once

#include <vector>

#include "assc/model.hpp"

namespace assc {

/// Dimension of the affine hull of the columns of `points`.
Index affine_hull_dim(const Matrix& points, double tol = kRankTol);

/// Offset followed by offset + each basis direction: d + 1 points whose
/// affine hull is the subspace.
Matrix affine_basis_points(const AffineSubspaceModel& a);

/// Empty intersection and trivially intersecting direction spaces.
bool are_affinely_disjoint(const AffineSubspaceModel& a, const AffineSubspaceModel& b,
                           double tol = kRankTol);

/// dim aff(union) equals the sum of dimensions plus (count - 1).
bool is_affinely_independent(const std::vector<AffineSubspaceModel>& subspaces,
                             double tol = kRankTol);

/// Linear independence of the spans of the homogeneous-embedded subspaces.
bool embedded_spans_independent(const std::vector<AffineSubspaceModel>& subspaces,
                                double tol = kRankTol);

enum class PointKind { RelativeInterior, BoundaryFace, Extreme };

const char* to_string(PointKind k) noexcept;

/// Position of a sample point relative to the convex hull of its own cluster.
/// `generators` are column indices (into the cluster's point matrix, the point
/// itself included) spanning the minimal face that holds the point in its
/// relative interior.
struct PointClass {
  PointKind kind = PointKind::Extreme;
  std::vector<Index> generators;
  Index face_dim = 0;
  /// Set when the point coincides with another sample; such points are
  /// reported as a 0-dimensional boundary face.
  bool duplicate = false;
};

inline constexpr double kGeneratorTol = 1e-7;

PointClass classify_point(Index j, const Matrix& same_subspace_points,
                          double tol = kGeneratorTol);

/// Fraction of columns that are vertices of their convex hull.
double extreme_fraction(const Matrix& points);

/// Does the affine subspace meet conv(other_points)?
bool subspace_intersects_hull(const AffineSubspaceModel& a, const Matrix& other_points,
                              double tol = kFeasTol);

/// Does aff(face_points) meet conv(non_face_points)?
bool face_affine_hull_intersects_hull(const Matrix& face_points,
                                      const Matrix& non_face_points,
                                      double tol = kFeasTol);

/// Convex weights, all strictly positive, reproducing `x` from `points`.
/// Requires x in the relative interior of conv(points).
Vector strict_convex_combination(const Vector& x, const Matrix& points,
                                 double tol = 1e-8);

}  // namespace assc
