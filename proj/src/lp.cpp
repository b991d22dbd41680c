#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "assc/numerics.hpp"

namespace assc {

const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

LpProblem LpProblem::nonnegative(Index n) {
  LpProblem p;
  p.objective = Vector::Zero(n);
  p.eq_lhs = Matrix(0, n);
  p.eq_rhs = Vector(0);
  p.ineq_lhs = Matrix(0, n);
  p.ineq_rhs = Vector(0);
  p.lower = Vector::Zero(n);
  return p;
}

LpProblem LpProblem::free(Index n) {
  LpProblem p = nonnegative(n);
  p.lower.setConstant(-kInf);
  return p;
}

void LpProblem::validate() const {
  const Index n = objective.size();
  if (eq_lhs.cols() != n || eq_lhs.rows() != eq_rhs.size())
    throw InvalidInput("LpProblem: equality block has inconsistent dimensions");
  if (ineq_lhs.cols() != n || ineq_lhs.rows() != ineq_rhs.size())
    throw InvalidInput("LpProblem: inequality block has inconsistent dimensions");
  if (lower.size() != n)
    throw InvalidInput("LpProblem: lower bounds have wrong length");
  if (!all_finite(objective) || !all_finite(eq_lhs) || !all_finite(eq_rhs) ||
      !all_finite(ineq_lhs) || !all_finite(ineq_rhs))
    throw InvalidInput("LpProblem: non-finite data");
  for (Index i = 0; i < n; ++i) {
    if (std::isnan(lower(i)) || lower(i) == kInf)
      throw InvalidInput("LpProblem: lower bound must be finite or -inf");
  }
}

namespace {

// Standard form  min c'y  s.t.  T y = rhs, y >= 0, built from an LpProblem.
// Columns: structural (one per bounded var, two per free var), one slack per
// inequality row, then one artificial per row.
struct StandardForm {
  Matrix T;
  Vector rhs;
  Vector cost;
  std::vector<double> row_sign;
  std::vector<Index> pos_col, neg_col;  // per user variable; -1 if absent
  Vector shift;                          // finite part of lower bounds
  Index num_structural = 0;              // structural + slack columns
  Index m = 0;
};

StandardForm to_standard_form(const LpProblem& p) {
  StandardForm sf;
  const Index n = p.num_vars();
  const Index me = p.eq_lhs.rows();
  const Index mi = p.ineq_lhs.rows();
  sf.m = me + mi;
  sf.pos_col.assign(n, -1);
  sf.neg_col.assign(n, -1);
  sf.shift = Vector::Zero(n);

  Index col = 0;
  for (Index i = 0; i < n; ++i) {
    sf.pos_col[i] = col++;
    if (std::isinf(p.lower(i))) {
      sf.neg_col[i] = col++;
    } else {
      sf.shift(i) = p.lower(i);
    }
  }
  const Index n_vars = col;
  sf.num_structural = n_vars + mi;
  const Index ncols = sf.num_structural + sf.m;

  sf.T = Matrix::Zero(sf.m, ncols);
  sf.cost = Vector::Zero(ncols);
  Matrix stacked(sf.m, n);
  stacked << p.eq_lhs, p.ineq_lhs;
  Vector rhs(sf.m);
  rhs << p.eq_rhs, p.ineq_rhs;
  rhs -= stacked * sf.shift;

  for (Index i = 0; i < n; ++i) {
    sf.T.col(sf.pos_col[i]) = stacked.col(i);
    sf.cost(sf.pos_col[i]) = p.objective(i);
    if (sf.neg_col[i] >= 0) {
      sf.T.col(sf.neg_col[i]) = -stacked.col(i);
      sf.cost(sf.neg_col[i]) = -p.objective(i);
    }
  }
  for (Index r = 0; r < mi; ++r) sf.T(me + r, n_vars + r) = 1.0;

  sf.row_sign.assign(sf.m, 1.0);
  for (Index r = 0; r < sf.m; ++r) {
    if (rhs(r) < 0) {
      sf.row_sign[r] = -1.0;
      rhs(r) = -rhs(r);
      sf.T.row(r) *= -1.0;
    }
    sf.T(r, sf.num_structural + r) = 1.0;
  }
  sf.rhs = rhs;
  return sf;
}

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardForm& sf, const LpTolerances& tol)
      : sf_(sf), tol_(tol), m_(sf.m), ncols_(sf.T.cols()) {
    basis_.resize(m_);
    is_basic_.assign(ncols_, false);
    for (Index r = 0; r < m_; ++r) {
      basis_[r] = sf_.num_structural + r;
      is_basic_[basis_[r]] = true;
    }
    refactor();
  }

  enum class Outcome { Optimal, Unbounded };

  Outcome run(const Vector& cost, bool allow_artificial_entering) {
    const double cost_scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
    const double dj_tol = tol_.opt * cost_scale;
    int degenerate_run = 0;
    bool bland = false;
    const int max_iters = 1000 + 50 * static_cast<int>(m_ + ncols_);

    for (int it = 0;; ++it) {
      if (it > max_iters) {
        throw SolverFailure("solve_lp: iteration limit reached (" +
                            std::to_string(max_iters) + ")");
      }
      if (since_refactor_ >= 50) refactor();

      Vector cb(m_);
      for (Index r = 0; r < m_; ++r) cb(r) = cost(basis_[r]);
      const Vector y = binv_.transpose() * cb;

      Index enter = -1;
      double best = -dj_tol;
      for (Index j = 0; j < ncols_; ++j) {
        if (is_basic_[j]) continue;
        if (!allow_artificial_entering && j >= sf_.num_structural) continue;
        const double dj = cost(j) - sf_.T.col(j).dot(y);
        if (dj < best) {
          enter = j;
          if (bland) break;
          best = dj;
        }
      }
      if (enter < 0) return Outcome::Optimal;

      const Vector u = binv_ * sf_.T.col(enter);
      Index leave = -1;
      double ratio = kInf;
      double leave_u = 0.0;
      for (Index r = 0; r < m_; ++r) {
        double cand;
        const bool artificial = basis_[r] >= sf_.num_structural;
        if (u(r) > kPivotTol) {
          cand = std::max(xb_(r), 0.0) / u(r);
        } else if (artificial && !allow_artificial_entering &&
                   std::abs(u(r)) > kPivotTol) {
          // A zero-level artificial left in the basis must not grow.
          cand = 0.0;
        } else {
          continue;
        }
        bool take = false;
        if (cand < ratio - 1e-12) {
          take = true;
        } else if (cand <= ratio + 1e-12 && leave >= 0) {
          take = bland ? basis_[r] < basis_[leave]
                       : std::abs(u(r)) > std::abs(leave_u);
        }
        if (take) {
          leave = r;
          ratio = cand;
          leave_u = u(r);
        }
      }
      if (leave < 0) return Outcome::Unbounded;

      pivot(enter, leave, u, ratio);
      ++iterations_;

      if (ratio <= 1e-12) {
        if (++degenerate_run > 30) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  // Pivot basic artificials out of the basis where a structural column
  // allows it. Artificials that cannot leave sit on redundant rows.
  void expel_artificials() {
    for (Index r = 0; r < m_; ++r) {
      if (basis_[r] < sf_.num_structural) continue;
      const Eigen::RowVectorXd row = binv_.row(r) * sf_.T;
      Index best = -1;
      double best_abs = 1e-9;
      for (Index j = 0; j < sf_.num_structural; ++j) {
        if (is_basic_[j]) continue;
        if (std::abs(row(j)) > best_abs) {
          best_abs = std::abs(row(j));
          best = j;
        }
      }
      if (best < 0) continue;
      const Vector u = binv_ * sf_.T.col(best);
      pivot(best, r, u, xb_(r) / u(r));
    }
  }

  void refactor() {
    Matrix B(m_, m_);
    for (Index r = 0; r < m_; ++r) B.col(r) = sf_.T.col(basis_[r]);
    Eigen::FullPivLU<Matrix> lu(B);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
      throw SolverFailure("solve_lp: numerically singular basis (rank " +
                          std::to_string(lu.rank()) + " of " +
                          std::to_string(m_) + ")");
    }
    binv_ = lu.inverse();
    xb_ = binv_ * sf_.rhs;
    since_refactor_ = 0;
  }

  double artificial_mass() const {
    double s = 0.0;
    for (Index r = 0; r < m_; ++r) {
      if (basis_[r] >= sf_.num_structural) s += std::max(xb_(r), 0.0);
    }
    return s;
  }

  Vector primal() const {
    Vector x = Vector::Zero(ncols_);
    for (Index r = 0; r < m_; ++r) x(basis_[r]) = std::max(xb_(r), 0.0);
    return x;
  }

  Vector row_duals(const Vector& cost) const {
    Vector cb(m_);
    for (Index r = 0; r < m_; ++r) cb(r) = cost(basis_[r]);
    return binv_.transpose() * cb;
  }

  int iterations() const { return iterations_; }

 private:
  static constexpr double kPivotTol = 1e-9;

  void pivot(Index enter, Index leave, const Vector& u, double theta) {
    xb_ -= theta * u;
    xb_(leave) = theta;
    const double piv = u(leave);
    binv_.row(leave) /= piv;
    for (Index r = 0; r < m_; ++r) {
      if (r == leave || u(r) == 0.0) continue;
      binv_.row(r) -= u(r) * binv_.row(leave);
    }
    is_basic_[basis_[leave]] = false;
    basis_[leave] = enter;
    is_basic_[enter] = true;
    ++since_refactor_;
  }

  const StandardForm& sf_;
  LpTolerances tol_;
  Index m_;
  Index ncols_;
  std::vector<Index> basis_;
  std::vector<bool> is_basic_;
  Matrix binv_;
  Vector xb_;
  int since_refactor_ = 0;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpTolerances& tol) {
  p.validate();
  const Index n = p.num_vars();
  LpSolution out;

  if (p.eq_lhs.rows() + p.ineq_lhs.rows() == 0) {
    // Only bounds: optimum at the lower bound unless some cost pulls a
    // variable towards -inf.
    out.x = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (std::isinf(p.lower(i))) {
        if (std::abs(p.objective(i)) > tol.opt) {
          out.status = LpStatus::Unbounded;
          return out;
        }
      } else {
        if (p.objective(i) < -tol.opt) {
          out.status = LpStatus::Unbounded;
          return out;
        }
        out.x(i) = p.lower(i);
      }
    }
    out.status = LpStatus::Optimal;
    out.objective = p.objective.dot(out.x);
    out.duals = Vector(0);
    return out;
  }

  const StandardForm sf = to_standard_form(p);
  RevisedSimplex simplex(sf, tol);

  Vector phase1_cost = Vector::Zero(sf.T.cols());
  phase1_cost.tail(sf.m).setOnes();
  simplex.run(phase1_cost, true);
  simplex.refactor();
  const double rhs_scale = std::max(1.0, sf.rhs.cwiseAbs().maxCoeff());
  if (simplex.artificial_mass() > tol.feas * rhs_scale) {
    out.status = LpStatus::Infeasible;
    out.iterations = simplex.iterations();
    return out;
  }
  simplex.expel_artificials();

  const auto outcome = simplex.run(sf.cost, false);
  out.iterations = simplex.iterations();
  if (outcome == RevisedSimplex::Outcome::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  simplex.refactor();

  const Vector y = simplex.primal();
  out.x = sf.shift;
  for (Index i = 0; i < n; ++i) {
    out.x(i) += y(sf.pos_col[i]);
    if (sf.neg_col[i] >= 0) out.x(i) -= y(sf.neg_col[i]);
  }
  out.objective = p.objective.dot(out.x);
  out.duals = simplex.row_duals(sf.cost);
  for (Index r = 0; r < sf.m; ++r) out.duals(r) *= sf.row_sign[r];
  out.status = LpStatus::Optimal;

  // Residual check against the caller's data.
  const double x_scale = std::max(1.0, out.x.cwiseAbs().maxCoeff());
  if (p.eq_lhs.rows() > 0) {
    const double a_scale = std::max(1.0, p.eq_lhs.cwiseAbs().maxCoeff());
    const double res = (p.eq_lhs * out.x - p.eq_rhs).cwiseAbs().maxCoeff();
    if (res > 1e3 * tol.feas * a_scale * x_scale) {
      throw SolverFailure("solve_lp: equality residual " + std::to_string(res) +
                          " exceeds tolerance after refactorization");
    }
  }
  if (p.ineq_lhs.rows() > 0) {
    const double g_scale = std::max(1.0, p.ineq_lhs.cwiseAbs().maxCoeff());
    const double viol = (p.ineq_lhs * out.x - p.ineq_rhs).maxCoeff();
    if (viol > 1e3 * tol.feas * g_scale * x_scale) {
      throw SolverFailure("solve_lp: inequality violation " +
                          std::to_string(viol) + " exceeds tolerance");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Least-norm point of the optimal face: primal active-set method on
//   min 1/2 |x|^2  s.t.  E x = f,  G x <= h
// started from the (feasible) LP optimum.
// ---------------------------------------------------------------------------

namespace {

// Rows of `rows` that are linearly independent, chosen greedily in order.
std::vector<Index> independent_rows(const Matrix& rows) {
  std::vector<Index> keep;
  Matrix acc(0, rows.cols());
  for (Index i = 0; i < rows.rows(); ++i) {
    Matrix trial(acc.rows() + 1, rows.cols());
    trial << acc, rows.row(i);
    if (rank_with_tol(trial.transpose().eval(), 1e-10) == trial.rows()) {
      acc = std::move(trial);
      keep.push_back(i);
    }
  }
  return keep;
}

}  // namespace

Vector min_norm_on_optimal_face(const LpProblem& p, const LpSolution& sol,
                                const LpTolerances& tol) {
  p.validate();
  if (!sol.optimal() || sol.x.size() != p.num_vars()) {
    throw InternalError("min_norm_on_optimal_face: solution is not optimal for p");
  }
  const Index n = p.num_vars();
  Vector x = sol.x;

  // Equalities, including the pinned objective.
  Matrix E(p.eq_lhs.rows() + 1, n);
  E << p.eq_lhs, p.objective.transpose();
  Vector f(E.rows());
  f << p.eq_rhs, p.objective.dot(x);

  // Inequalities, including finite lower bounds as -x_i <= -lower_i.
  std::vector<Index> bounded;
  for (Index i = 0; i < n; ++i)
    if (!std::isinf(p.lower(i))) bounded.push_back(i);
  const Index mi = p.ineq_lhs.rows() + static_cast<Index>(bounded.size());
  Matrix G = Matrix::Zero(mi, n);
  Vector h(mi);
  G.topRows(p.ineq_lhs.rows()) = p.ineq_lhs;
  h.head(p.ineq_lhs.rows()) = p.ineq_rhs;
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const Index r = p.ineq_lhs.rows() + static_cast<Index>(k);
    G(r, bounded[k]) = -1.0;
    h(r) = -p.lower(bounded[k]);
  }

  const double x_scale = 1.0 + x.norm();
  const double feas = 1e3 * tol.feas * x_scale;
  if ((E * x - f).cwiseAbs().maxCoeff() >
      feas * std::max(1.0, E.cwiseAbs().maxCoeff())) {
    throw InternalError("min_norm_on_optimal_face: pinned point infeasible");
  }
  if (mi > 0 && (G * x - h).maxCoeff() > feas) {
    throw InternalError("min_norm_on_optimal_face: bound violated at start");
  }

  const std::vector<Index> eq_rows = independent_rows(E);
  Matrix K(static_cast<Index>(eq_rows.size()), n);
  for (std::size_t k = 0; k < eq_rows.size(); ++k) K.row(k) = E.row(eq_rows[k]);
  const Index n_eq = K.rows();

  // Working set: active inequalities that keep K full row rank.
  std::vector<Index> working;
  std::vector<bool> in_working(mi, false);
  for (Index r = 0; r < mi; ++r) {
    if (h(r) - G.row(r).dot(x) > 1e-9 * x_scale) continue;
    Matrix trial(K.rows() + 1, n);
    trial << K, G.row(r);
    if (rank_with_tol(trial.transpose().eval(), 1e-10) == trial.rows()) {
      K = std::move(trial);
      working.push_back(r);
      in_working[r] = true;
    }
  }

  const int max_iters = 20 * static_cast<int>(n + mi + 10);
  for (int it = 0; it < max_iters; ++it) {
    // Minimum-norm y with K y = K x, i.e. projection of x onto rowspace(K).
    Vector y = Vector::Zero(n);
    Vector z(K.rows());
    if (K.rows() > 0) {
      Eigen::HouseholderQR<Matrix> qr(K.transpose());
      const Matrix Q = qr.householderQ() * Matrix::Identity(n, K.rows());
      const Matrix R = qr.matrixQR().topRows(K.rows()).triangularView<Eigen::Upper>();
      const Vector qx = Q.transpose() * x;
      y = Q * qx;
      z = R.triangularView<Eigen::Upper>().solve(qx);
    }
    const Vector step = y - x;
    if (step.norm() <= 1e-12 * x_scale) {
      // Multipliers of G rows are -z; all must be nonnegative.
      Index drop = -1;
      double worst = 1e-10 * x_scale;
      for (std::size_t k = 0; k < working.size(); ++k) {
        const double zk = z(n_eq + static_cast<Index>(k));
        if (zk > worst) {
          worst = zk;
          drop = static_cast<Index>(k);
        }
      }
      if (drop < 0) {
        const double gap = std::abs(p.objective.dot(x) - sol.objective);
        if (gap > 1e3 * tol.opt * std::max(1.0, std::abs(sol.objective))) {
          throw InternalError("min_norm_on_optimal_face: lost optimality");
        }
        return x;
      }
      in_working[working[drop]] = false;
      working.erase(working.begin() + drop);
      Matrix Knew(K.rows() - 1, n);
      Index row = 0;
      for (Index r = 0; r < K.rows(); ++r) {
        if (r == n_eq + drop) continue;
        Knew.row(row++) = K.row(r);
      }
      K = std::move(Knew);
      continue;
    }

    double alpha = 1.0;
    Index block = -1;
    for (Index r = 0; r < mi; ++r) {
      if (in_working[r]) continue;
      const double gp = G.row(r).dot(step);
      if (gp <= 1e-14 * x_scale) continue;
      const double a = std::max(0.0, (h(r) - G.row(r).dot(x)) / gp);
      if (a < alpha) {
        alpha = a;
        block = r;
      }
    }
    x += alpha * step;
    if (block >= 0) {
      Matrix Knew(K.rows() + 1, n);
      Knew << K, G.row(block);
      K = std::move(Knew);
      working.push_back(block);
      in_working[block] = true;
    }
  }
  throw InternalError("min_norm_on_optimal_face: active-set iteration limit");
}

}  // namespace assc
