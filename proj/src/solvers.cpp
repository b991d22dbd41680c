#include "assc/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace assc {

const char* to_string(Mode m) noexcept {
  return m == Mode::SSC ? "ssc" : "assc";
}

void SolverConfig::validate() const {
  if (!(mu0 > 0)) throw InvalidInput("SolverConfig: mu0 must be positive");
  if (!(rho > 1)) throw InvalidInput("SolverConfig: rho must exceed 1");
  if (!(mu_max >= mu0)) throw InvalidInput("SolverConfig: mu_max must be at least mu0");
  if (max_iters < 1) throw InvalidInput("SolverConfig: max_iters must be positive");
  if (!(primal_tol > 0) || !(dual_tol > 0)) throw InvalidInput("SolverConfig: tolerances must be positive");
  if (const auto* n = std::get_if<Noisy>(&variant); n && !(n->lambda > 0))
    throw InvalidInput("SolverConfig: noisy variant needs lambda > 0");
}

namespace {

constexpr double kColumnScale = 10.0;

// Per-column problem data after removing x_j and rescaling.
struct ColumnProblem {
  std::vector<Index> others;
  Matrix dict;   // X_{-j}, or Y = X_{-j} - x_j 1' for ASSC; divided by `scale`
  Vector target; // x_j / scale for SSC, zero for ASSC
  double scale = 1.0;
};

ColumnProblem make_column_problem(const DataMatrix& X, Index j, Mode mode) {
  const Index N = X.size();
  if (N < 2) throw InvalidInput("need at least two points to represent a column");
  if (j < 0 || j >= N) throw InvalidInput("column index " + std::to_string(j) + " out of range");
  ColumnProblem cp;
  for (Index i = 0; i < N; ++i)
    if (i != j) cp.others.push_back(i);
  cp.dict = X.columns(cp.others);
  const Vector x = X.points.col(j);
  if (mode == Mode::ASSC) {
    cp.dict.colwise() -= x;
    cp.target = Vector::Zero(X.dim());
  } else {
    cp.target = x;
  }
  const double big = cp.dict.colwise().norm().maxCoeff();
  cp.scale = big > 0 ? big / kColumnScale : 1.0;
  cp.dict /= cp.scale;
  cp.target /= cp.scale;
  return cp;
}

// Solves (alpha I + B'B) c = r through the small system alpha I + B B'.
class ShiftedGramSolver {
 public:
  void factor(const Matrix& B, double alpha) {
    B_ = &B;
    alpha_ = alpha;
    Matrix K = B * B.transpose();
    K.diagonal().array() += alpha;
    llt_.compute(K);
    if (llt_.info() != Eigen::Success) throw InternalError("ADMM: c-update system not positive definite");
  }
  Vector solve(const Vector& r) const {
    if (B_->rows() == 0) return r / alpha_;
    return (r - B_->transpose() * llt_.solve(*B_ * r)) / alpha_;
  }

 private:
  const Matrix* B_ = nullptr;
  double alpha_ = 1.0;
  Eigen::LLT<Matrix> llt_;
};

ColumnSolution scatter(const DataMatrix& X, Index j, const std::vector<Index>& others,
                       const Vector& c_local) {
  ColumnSolution out;
  out.j = j;
  out.c = Vector::Zero(X.size());
  for (std::size_t k = 0; k < others.size(); ++k) out.c(others[k]) = c_local(static_cast<Index>(k));
  return out;
}

ColumnSolution admm_exact(const DataMatrix& X, Index j, const SolverConfig& cfg) {
  const ColumnProblem cp = make_column_problem(X, j, cfg.mode);
  const Index m = cp.dict.cols();
  const bool affine = cfg.mode == Mode::ASSC;

  Matrix A(cp.dict.rows() + (affine ? 1 : 0), m);
  Vector b(A.rows());
  if (affine) {
    A << cp.dict, Eigen::RowVectorXd::Ones(m);
    b << cp.target, 1.0;
  } else {
    A = cp.dict;
    b = cp.target;
  }
  ShiftedGramSolver gram;
  gram.factor(A, 1.0);
  const Vector Atb = A.transpose() * b;

  Vector c = Vector::Zero(m), z = Vector::Zero(m), y = Vector::Zero(m);
  Vector lam = Vector::Zero(A.rows());
  double mu = cfg.mu0;
  double p_res = kInf, d_res = kInf;
  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iters; ++it) {
    const Vector z_old = z;
    z = soft_threshold(c - y / mu, 1.0 / mu);
    c = gram.solve(z + Atb + (y - A.transpose() * lam) / mu);
    const Vector r_c = A * c - b;
    y += mu * (z - c);
    lam += mu * r_c;
    p_res = std::max({(z - c).norm(), r_c.norm(), (A * z - b).norm()});
    d_res = mu * (z - z_old).norm();
    if (p_res < cfg.primal_tol && d_res < cfg.dual_tol) {
      converged = true;
      ++it;
      break;
    }
    mu = std::min(mu * cfg.rho, cfg.mu_max);
  }

  ColumnSolution out = scatter(X, j, cp.others, z);
  out.objective = z.lpNorm<1>();
  out.dual_w = lam.head(cp.dict.rows()) / cp.scale;
  out.dual_nu = affine ? lam(A.rows() - 1) : 0.0;
  out.iterations = it;
  out.converged = converged;
  out.primal_residual = p_res;
  out.dual_residual = d_res;
  return out;
}

ColumnSolution admm_noisy(const DataMatrix& X, Index j, const SolverConfig& cfg, double lambda) {
  ColumnProblem cp = make_column_problem(X, j, Mode::SSC);
  const Index m = cp.dict.cols();
  const bool affine = cfg.mode == Mode::ASSC;
  // Residual term in scaled units.
  const double lam_s = lambda * cp.scale * cp.scale;
  const Vector Xtx = lam_s * (cp.dict.transpose() * cp.target);

  Matrix B(cp.dict.rows() + (affine ? 1 : 0), m);
  auto refresh = [&](double mu, ShiftedGramSolver& g) {
    B.topRows(cp.dict.rows()) = std::sqrt(lam_s) * cp.dict;
    if (affine) B.bottomRows(1).setConstant(std::sqrt(mu));
    g.factor(B, mu);
  };

  Vector c = Vector::Zero(m), z = Vector::Zero(m), y = Vector::Zero(m);
  double nu = 0.0;
  double mu = cfg.mu0;
  ShiftedGramSolver gram;
  refresh(mu, gram);
  double p_res = kInf, d_res = kInf;
  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iters; ++it) {
    const Vector z_old = z;
    z = soft_threshold(c - y / mu, 1.0 / mu);
    Vector rhs = Xtx + y + mu * z;
    if (affine) rhs.array() += mu - nu;
    c = gram.solve(rhs);
    y += mu * (z - c);
    double aff_c = 0.0, aff_z = 0.0;
    if (affine) {
      aff_c = c.sum() - 1.0;
      aff_z = z.sum() - 1.0;
      nu += mu * aff_c;
    }
    p_res = std::max({(z - c).norm(), std::abs(aff_c), std::abs(aff_z)});
    d_res = mu * (z - z_old).norm();
    if (p_res < cfg.primal_tol && d_res < cfg.dual_tol) {
      converged = true;
      ++it;
      break;
    }
    const double next = std::min(mu * cfg.rho, cfg.mu_max);
    if (next != mu) {
      mu = next;
      refresh(mu, gram);
    }
  }

  ColumnSolution out = scatter(X, j, cp.others, z);
  const Vector resid = (cp.target - cp.dict * z) * cp.scale;
  out.objective = z.lpNorm<1>() + 0.5 * lambda * resid.squaredNorm();
  out.dual_w = Vector::Zero(X.dim());
  out.dual_nu = affine ? nu : 0.0;
  out.iterations = it;
  out.converged = converged;
  out.primal_residual = p_res;
  out.dual_residual = d_res;
  return out;
}

}  // namespace

ColumnSolution solve_column_admm(const DataMatrix& X, Index j, const SolverConfig& cfg) {
  cfg.validate();
  if (!all_finite(X.points)) throw InvalidInput("solve_column_admm: non-finite data");
  if (const auto* n = std::get_if<Noisy>(&cfg.variant)) return admm_noisy(X, j, cfg, n->lambda);
  return admm_exact(X, j, cfg);
}

ColumnSolution solve_column_oracle(const DataMatrix& X, Index j, Mode mode, const OracleOptions& opt) {
  if (!all_finite(X.points)) throw InvalidInput("solve_column_oracle: non-finite data");
  if (X.size() == 1 && j == 0) throw NoRepresentation("solve_column_oracle: no other points to represent column 0");
  const ColumnProblem cp = make_column_problem(X, j, mode);
  const Index m = cp.dict.cols();
  const bool affine = mode == Mode::ASSC;

  Matrix A(cp.dict.rows() + (affine ? 1 : 0), m);
  Vector b(A.rows());
  if (affine) {
    A << cp.dict, Eigen::RowVectorXd::Ones(m);
    b << cp.target, 1.0;
  } else {
    A = cp.dict;
    b = cp.target;
  }

  // Split c = c+ - c- unless the sign is fixed.
  const Index nv = opt.nonnegative ? m : 2 * m;
  LpProblem p = LpProblem::nonnegative(nv);
  p.objective.setOnes();
  p.eq_lhs.resize(A.rows(), nv);
  if (opt.nonnegative) {
    p.eq_lhs = A;
  } else {
    p.eq_lhs << A, -A;
  }
  p.eq_rhs = b;
  const LpSolution sol = solve_lp(p);
  if (sol.status == LpStatus::Infeasible) {
    throw NoRepresentation("column " + std::to_string(j) + " has no " +
                           (affine ? "affine" : "linear") + " representation by the other columns" +
                           (opt.nonnegative ? " with nonnegative weights" : ""));
  }
  if (!sol.optimal()) throw SolverFailure("solve_column_oracle: LP reported " + std::string(to_string(sol.status)));

  const Vector c = opt.nonnegative ? Vector(sol.x) : Vector(sol.x.head(m) - sol.x.tail(m));
  ColumnSolution out = scatter(X, j, cp.others, c);
  out.objective = c.lpNorm<1>();
  out.dual_w = -sol.duals.head(cp.dict.rows()) / cp.scale;
  out.dual_nu = affine ? -sol.duals(A.rows() - 1) : 0.0;
  out.iterations = sol.iterations;
  out.converged = true;
  out.primal_residual = (A * c - b).norm() * cp.scale;
  out.dual_residual = 0.0;
  return out;
}

Vector compute_dual_point(const Matrix& P, const Vector& x, double tol) {
  if (P.rows() != x.size()) throw InvalidInput("compute_dual_point: dimension mismatch");
  if (P.cols() == 0) throw InvalidInput("compute_dual_point: no points");
  if (!all_finite(P) || !all_finite(x)) throw InvalidInput("compute_dual_point: non-finite data");
  const Matrix U = orthonormal_basis(P);
  if (U.cols() == 0) throw InvalidInput("compute_dual_point: points span only the origin");
  const Vector a = U.transpose() * x;
  const double off = (x - U * a).norm();
  if (off > tol * std::max(1.0, x.norm())) {
    throw InvalidInput("compute_dual_point: x is " + std::to_string(off) + " away from the span of the points");
  }
  const Matrix Abar = U.transpose() * P;

  // max a'w  s.t.  -1 <= Abar' w <= 1.
  const Index r = U.cols(), m = P.cols();
  LpProblem p = LpProblem::free(r);
  p.objective = -a;
  p.ineq_lhs.resize(2 * m, r);
  p.ineq_lhs << Abar.transpose(), -Abar.transpose();
  p.ineq_rhs = Vector::Ones(2 * m);
  const LpSolution sol = solve_lp(p);
  if (!sol.optimal()) throw SolverFailure("compute_dual_point: dual LP reported " + std::string(to_string(sol.status)));
  return U * min_norm_on_optimal_face(p, sol);
}

double compute_lambda(const DataMatrix& X, double alpha) {
  if (!(alpha > 0)) throw InvalidInput("compute_lambda: alpha must be positive");
  if (X.size() < 2) throw InvalidInput("compute_lambda: need at least two points");
  Matrix G = X.points.transpose() * X.points;
  G.diagonal().setConstant(-kInf);
  const double denom = G.colwise().maxCoeff().minCoeff();
  if (!(denom > 0)) {
    throw InvalidInput("compute_lambda: min_j max_{i!=j} x_i'x_j = " + std::to_string(denom) +
                       " is not positive");
  }
  return alpha / denom;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ASSC_NUM_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

CoefficientMatrix build_coefficient_matrix(const DataMatrix& X, const SolverConfig& cfg) {
  cfg.validate();
  X.validate();
  const Index N = X.size();
  if (N < 2) throw InvalidInput("build_coefficient_matrix: need at least two points");

  CoefficientMatrix out;
  out.C = Matrix::Zero(N, N);
  out.columns.resize(N);

  std::atomic<Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (Index j; (j = next.fetch_add(1)) < N;) {
      try {
        out.columns[j] = solve_column_admm(X, j, cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(static_cast<std::size_t>(N));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (Index j = 0; j < N; ++j) {
    out.C.col(j) = out.columns[j].c;
    if (!out.columns[j].converged) ++out.failed;
  }
  return out;
}

}  // namespace assc
