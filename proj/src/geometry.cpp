#include "assc/geometry.hpp"

#include <algorithm>
#include <string>

namespace assc {

namespace {

double data_scale(const Matrix& m) {
  return m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
}

void check_same_ambient(const std::vector<AffineSubspaceModel>& subspaces) {
  if (subspaces.empty()) throw InvalidInput("empty subspace list");
  const Index D = subspaces.front().ambient_dim();
  for (const auto& s : subspaces) {
    if (s.ambient_dim() != D || s.basis.rows() != D)
      throw InvalidInput("subspaces live in different ambient dimensions");
  }
}

// Convex-combination feasibility  points * c = x, 1'c = 1, c >= 0.
LpSolution convex_representation(const Vector& x, const Matrix& points,
                                  const Vector& objective) {
  const Index m = points.cols();
  LpProblem p = LpProblem::nonnegative(m);
  p.objective = objective;
  p.eq_lhs.resize(points.rows() + 1, m);
  p.eq_lhs << points, Eigen::RowVectorXd::Ones(m);
  p.eq_rhs.resize(points.rows() + 1);
  p.eq_rhs << x, 1.0;
  return solve_lp(p);
}

}  // namespace

const char* to_string(PointKind k) noexcept {
  switch (k) {
    case PointKind::RelativeInterior: return "relative-interior";
    case PointKind::BoundaryFace: return "boundary-face";
    case PointKind::Extreme: return "extreme";
  }
  return "unknown";
}

Index affine_hull_dim(const Matrix& points, double tol) {
  if (points.cols() < 1) throw InvalidInput("affine_hull_dim: need at least one point");
  if (!all_finite(points)) throw InvalidInput("affine_hull_dim: non-finite entries");
  const Matrix centered = points.colwise() - points.col(0);
  if (centered.cwiseAbs().maxCoeff() <= tol * data_scale(points)) return 0;
  return rank_with_tol(centered, tol);
}

Matrix affine_basis_points(const AffineSubspaceModel& a) {
  Matrix out(a.ambient_dim(), a.dim() + 1);
  out.col(0) = a.offset;
  out.rightCols(a.dim()) = a.basis.colwise() + a.offset;
  return out;
}

bool are_affinely_disjoint(const AffineSubspaceModel& a, const AffineSubspaceModel& b,
                           double tol) {
  check_same_ambient({a, b});
  Matrix dirs(a.ambient_dim(), a.dim() + b.dim());
  dirs << a.basis, b.basis;
  const bool directions_trivial = rank_with_tol(dirs, tol) == a.dim() + b.dim();

  // a.offset + A s = b.offset + B t has a solution iff the offset difference
  // lies in the joint direction span.
  const Vector diff = b.offset - a.offset;
  bool intersect;
  if (dirs.cols() == 0) {
    intersect = diff.norm() <= tol * std::max(1.0, a.offset.norm() + b.offset.norm());
  } else {
    const Vector coef = dirs.completeOrthogonalDecomposition().solve(diff);
    const double res = (dirs * coef - diff).norm();
    intersect = res <= 1e3 * tol * std::max(1.0, diff.norm());
  }
  const bool disjoint = !intersect && directions_trivial;

  Matrix pooled(a.ambient_dim(), a.dim() + b.dim() + 2);
  pooled << affine_basis_points(a), affine_basis_points(b);
  const bool by_dimension = affine_hull_dim(pooled, tol) == a.dim() + b.dim() + 1;
  if (by_dimension != disjoint) {
    throw InternalError("are_affinely_disjoint: intersection test and dimension identity disagree");
  }
  return disjoint;
}

bool is_affinely_independent(const std::vector<AffineSubspaceModel>& subspaces, double tol) {
  check_same_ambient(subspaces);
  Index total = 0, cols = 0;
  for (const auto& s : subspaces) {
    total += s.dim();
    cols += s.dim() + 1;
  }
  Matrix pooled(subspaces.front().ambient_dim(), cols);
  Index at = 0;
  for (const auto& s : subspaces) {
    pooled.middleCols(at, s.dim() + 1) = affine_basis_points(s);
    at += s.dim() + 1;
  }
  return affine_hull_dim(pooled, tol) == total + static_cast<Index>(subspaces.size()) - 1;
}

bool embedded_spans_independent(const std::vector<AffineSubspaceModel>& subspaces, double tol) {
  check_same_ambient(subspaces);
  const Index D = subspaces.front().ambient_dim();
  Index cols = 0;
  for (const auto& s : subspaces) cols += s.dim() + 1;
  Matrix stacked = Matrix::Zero(D + 1, cols);
  Index at = 0;
  for (const auto& s : subspaces) {
    stacked.col(at) = homogeneous_embed(s.offset);
    stacked.block(0, at + 1, D, s.dim()) = s.basis;
    at += s.dim() + 1;
  }
  return rank_with_tol(stacked, tol) == cols;
}

PointClass classify_point(Index j, const Matrix& P, double tol) {
  const Index m = P.cols();
  if (m < 2) throw InvalidInput("classify_point: need at least two same-subspace points");
  if (j < 0 || j >= m) throw InvalidInput("classify_point: index out of range");
  if (!all_finite(P)) throw InvalidInput("classify_point: non-finite entries");

  const Vector x = P.col(j);
  const double scale = data_scale(P);
  PointClass out;

  std::vector<Index> others;
  for (Index i = 0; i < m; ++i)
    if (i != j) others.push_back(i);

  std::vector<Index> copies;
  for (Index i : others)
    if ((P.col(i) - x).cwiseAbs().maxCoeff() <= 1e-10 * scale) copies.push_back(i);
  if (!copies.empty()) {
    out.kind = PointKind::BoundaryFace;
    out.duplicate = true;
    out.generators = copies;
    out.generators.push_back(j);
    std::sort(out.generators.begin(), out.generators.end());
    out.face_dim = 0;
    return out;
  }

  Matrix Q(P.rows(), m - 1);
  for (std::size_t k = 0; k < others.size(); ++k) Q.col(static_cast<Index>(k)) = P.col(others[k]);

  LpSolution feas = convex_representation(x, Q, Vector::Zero(m - 1));
  if (!feas.optimal()) {
    out.kind = PointKind::Extreme;
    out.generators = {j};
    out.face_dim = 0;
    return out;
  }

  std::vector<bool> gen(m - 1, false);
  auto absorb = [&](const Vector& c) {
    for (Index k = 0; k < c.size(); ++k)
      if (c(k) > tol) gen[k] = true;
  };
  absorb(feas.x);
  for (Index k = 0; k < m - 1; ++k) {
    if (gen[k]) continue;
    Vector obj = Vector::Zero(m - 1);
    obj(k) = -1.0;
    LpSolution s = convex_representation(x, Q, obj);
    if (!s.optimal()) throw SolverFailure("classify_point: per-index LP lost feasibility");
    absorb(s.x);
  }

  out.generators.push_back(j);
  for (Index k = 0; k < m - 1; ++k)
    if (gen[k]) out.generators.push_back(others[k]);
  std::sort(out.generators.begin(), out.generators.end());

  Matrix F(P.rows(), static_cast<Index>(out.generators.size()));
  for (std::size_t k = 0; k < out.generators.size(); ++k)
    F.col(static_cast<Index>(k)) = P.col(out.generators[k]);
  out.face_dim = affine_hull_dim(F);
  out.kind = static_cast<Index>(out.generators.size()) == m ? PointKind::RelativeInterior
                                                             : PointKind::BoundaryFace;
  return out;
}

double extreme_fraction(const Matrix& points) {
  if (points.cols() < 2) return points.cols() == 1 ? 1.0 : 0.0;
  Index count = 0;
  for (Index j = 0; j < points.cols(); ++j)
    if (classify_point(j, points).kind == PointKind::Extreme) ++count;
  return static_cast<double>(count) / static_cast<double>(points.cols());
}

bool subspace_intersects_hull(const AffineSubspaceModel& a, const Matrix& other, double tol) {
  if (other.rows() != a.ambient_dim())
    throw InvalidInput("subspace_intersects_hull: dimension mismatch");
  const Index d = a.dim(), m = other.cols();
  if (m == 0) return false;
  // Variables (t, c): basis t - other c = -offset, 1'c = 1, c >= 0.
  LpProblem p = LpProblem::nonnegative(d + m);
  p.lower.head(d).setConstant(-kInf);
  p.eq_lhs = Matrix::Zero(a.ambient_dim() + 1, d + m);
  p.eq_lhs.topLeftCorner(a.ambient_dim(), d) = a.basis;
  p.eq_lhs.topRightCorner(a.ambient_dim(), m) = -other;
  p.eq_lhs.bottomRightCorner(1, m).setOnes();
  p.eq_rhs.resize(a.ambient_dim() + 1);
  p.eq_rhs << -a.offset, 1.0;
  return solve_lp(p, {tol, kOptTol}).optimal();
}

bool face_affine_hull_intersects_hull(const Matrix& F, const Matrix& Q, double tol) {
  if (F.rows() != Q.rows() && Q.cols() > 0)
    throw InvalidInput("face_affine_hull_intersects_hull: dimension mismatch");
  if (F.cols() == 0) throw InvalidInput("face_affine_hull_intersects_hull: empty face");
  const Index f = F.cols(), m = Q.cols(), D = F.rows();
  if (m == 0) return false;
  LpProblem p = LpProblem::nonnegative(f + m);
  p.lower.head(f).setConstant(-kInf);
  p.eq_lhs = Matrix::Zero(D + 2, f + m);
  p.eq_lhs.topLeftCorner(D, f) = F;
  p.eq_lhs.topRightCorner(D, m) = -Q;
  p.eq_lhs.block(D, 0, 1, f).setOnes();
  p.eq_lhs.block(D + 1, f, 1, m).setOnes();
  p.eq_rhs = Vector::Zero(D + 2);
  p.eq_rhs(D) = 1.0;
  p.eq_rhs(D + 1) = 1.0;
  return solve_lp(p, {tol, kOptTol}).optimal();
}

Vector strict_convex_combination(const Vector& x, const Matrix& P, double tol) {
  const Index m = P.cols(), D = P.rows();
  if (m == 0 || x.size() != D) throw InvalidInput("strict_convex_combination: dimension mismatch");
  const double scale = data_scale(P);

  Vector avg = Vector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    const Vector dir = x - P.col(i);
    if (dir.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
      avg(i) += 1.0;
      continue;
    }
    // Push x away from y_i as far as the hull allows: x + s (x - y_i) = P c.
    LpProblem p = LpProblem::nonnegative(m + 1);
    p.objective(m) = -1.0;
    p.eq_lhs = Matrix::Zero(D + 1, m + 1);
    p.eq_lhs.topLeftCorner(D, m) = P;
    p.eq_lhs.topRightCorner(D, 1) = -dir;
    p.eq_lhs.bottomLeftCorner(1, m).setOnes();
    p.eq_rhs.resize(D + 1);
    p.eq_rhs << x, 1.0;
    const LpSolution sol = solve_lp(p);
    if (sol.status == LpStatus::Infeasible)
      throw PreconditionViolation("strict_convex_combination: x is not in the convex hull");
    if (sol.status == LpStatus::Unbounded)
      throw InternalError("strict_convex_combination: unbounded antipode search");
    const double s = sol.x(m);
    if (s <= tol) {
      throw PreconditionViolation("strict_convex_combination: x is on the relative boundary (no room away from point " +
                                  std::to_string(i) + ")");
    }
    // x = antipode/(1+s) + y_i s/(1+s).
    avg += sol.x.head(m) / (1.0 + s);
    avg(i) += s / (1.0 + s);
  }
  avg /= static_cast<double>(m);

  if (avg.minCoeff() <= 0.0)
    throw PreconditionViolation("strict_convex_combination: a weight vanished");
  const double err = (P * avg - x).norm();
  if (err > 1e3 * tol * scale)
    throw InternalError("strict_convex_combination: reconstruction error " + std::to_string(err));
  return avg;
}

}  // namespace assc
