#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "assc/errors.hpp"

namespace assc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRankTol = 1e-9;
inline constexpr double kFeasTol = 1e-8;
inline constexpr double kOptTol = 1e-8;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

/// Number of singular values strictly above `tol` times the largest one.
template <typename Derived>
Index rank_with_tol(const Eigen::MatrixBase<Derived>& m,
                    typename Derived::RealScalar tol = kRankTol) {
  if (m.size() == 0) return 0;
  if (!all_finite(m)) throw InvalidInput("rank_with_tol: non-finite entries");
  if (!(tol > 0)) throw InvalidInput("rank_with_tol: tol must be positive");
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.derived());
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  const auto cutoff = tol * s(0);
  return (s.array() > cutoff).count();
}

/// Shrinkage operator sign(v) * max(|v| - tau, 0), applied elementwise.
template <typename Derived>
typename Derived::PlainObject soft_threshold(
    const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar tau) {
  if (tau < 0) throw InvalidInput("soft_threshold: negative threshold");
  using Scalar = typename Derived::Scalar;
  return v.unaryExpr([tau](Scalar a) {
    const Scalar mag = std::abs(a) - tau;
    return mag > Scalar(0) ? std::copysign(mag, a) : Scalar(0);
  });
}

/// Orthonormal basis of the column span of `m`, using the same relative
/// cutoff as `rank_with_tol`.
Matrix orthonormal_basis(const Matrix& m, double tol = kRankTol);

// ---------------------------------------------------------------------------
// Linear programming
// ---------------------------------------------------------------------------

/// min objective'x  s.t.  eq_lhs x = eq_rhs,  ineq_lhs x <= ineq_rhs,
///                        x >= lower   (lower may hold -inf).
/// The inequality block is optional and may have zero rows.
struct LpProblem {
  Vector objective;
  Matrix eq_lhs;
  Vector eq_rhs;
  Matrix ineq_lhs;
  Vector ineq_rhs;
  Vector lower;

  Index num_vars() const { return objective.size(); }

  /// Problem with `n` variables, every variable bounded below by zero and no
  /// constraints yet.
  static LpProblem nonnegative(Index n);
  /// Problem with `n` free variables.
  static LpProblem free(Index n);

  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s) noexcept;

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  /// Multipliers of the equality rows followed by those of the inequality
  /// rows: objective - duals' * lhs is the reduced cost vector. When every
  /// finite lower bound is zero, objective = duals' * rhs at optimality.
  Vector duals;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct LpTolerances {
  double feas = kFeasTol;
  double opt = kOptTol;
};

/// Dense two-phase revised simplex. Uses Dantzig pricing and falls back to
/// Bland's rule after a run of degenerate pivots.
LpSolution solve_lp(const LpProblem& p, const LpTolerances& tol = {});

/// Least Euclidean norm point of the optimal face of `p`, i.e. the
/// minimum-norm x with A x = b, G x <= h, x >= lower and objective'x pinned
/// at the optimum reported by `sol`.
Vector min_norm_on_optimal_face(const LpProblem& p, const LpSolution& sol,
                                const LpTolerances& tol = {});

// ---------------------------------------------------------------------------
// Eigen-decomposition
// ---------------------------------------------------------------------------

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns, orthonormal
};

SymmetricEigen symmetric_eig(const Matrix& m);

}  // namespace assc
