#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "assc/model.hpp"

namespace assc {

enum class Mode { SSC, ASSC };

const char* to_string(Mode m) noexcept;

struct Exact {};
struct Noisy {
  double lambda = 0.0;
};
using Variant = std::variant<Exact, Noisy>;

/// ADMM settings. The constraint rows are rescaled internally so the largest
/// column of the (translated) dictionary has norm 10; mu0 and mu_max refer to
/// that scale.
struct SolverConfig {
  Mode mode = Mode::ASSC;
  Variant variant = Exact{};
  double mu0 = 1.0;
  double rho = 1.05;
  double mu_max = 30.0;
  int max_iters = 50000;
  double primal_tol = 1e-7;
  double dual_tol = 1e-7;
  std::uint64_t seed = 0;

  bool noisy() const { return std::holds_alternative<Noisy>(variant); }
  void validate() const;
};

/// Representation of column j by the other columns. Dual variables follow
/// the Lagrangian |c|_1 + <w, A c - b> + nu (1'c - 1), where A c = b is
/// Y c = 0 (ASSC, Y = X_{-j} - x_j 1') or X_{-j} c = x_j (SSC); nu is 0 for
/// SSC and for noisy problems w is 0.
struct ColumnSolution {
  Index j = 0;
  Vector c;
  double objective = 0.0;
  Vector dual_w;
  double dual_nu = 0.0;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

ColumnSolution solve_column_admm(const DataMatrix& X, Index j, const SolverConfig& cfg);

struct OracleOptions {
  /// Adds c >= 0 to the program.
  bool nonnegative = false;
};

/// Exact l1 program solved as a linear program. Throws NoRepresentation when
/// x_j is outside the span (SSC) or affine hull (ASSC) of the other columns.
ColumnSolution solve_column_oracle(const DataMatrix& X, Index j, Mode mode,
                                   const OracleOptions& opt = {});

/// Least-norm optimum of  max w'a  s.t. |A' w|_inf <= 1  with a, A the
/// coordinates of x and of the points in an orthonormal basis of their span,
/// mapped back to the ambient space.
Vector compute_dual_point(const Matrix& subspace_points, const Vector& x,
                          double tol = 1e-8);

/// alpha / min_j max_{i != j} x_i'x_j.
double compute_lambda(const DataMatrix& X, double alpha);

struct CoefficientMatrix {
  Matrix C;
  std::vector<ColumnSolution> columns;
  int failed = 0;  // columns that did not converge

  bool all_converged() const { return failed == 0; }
};

/// Solves every column with ADMM. Columns run on worker threads; the count is
/// capped by the ASSC_NUM_THREADS environment variable.
CoefficientMatrix build_coefficient_matrix(const DataMatrix& X, const SolverConfig& cfg);

/// Worker count honoring ASSC_NUM_THREADS.
unsigned worker_count(std::size_t jobs);

}  // namespace assc
