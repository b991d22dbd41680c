#include "assc/numerics.hpp"

#include <string>

namespace assc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::NoRepresentation: return "no-representation";
    case ErrorKind::GenerationFailure: return "generation-failure";
    case ErrorKind::InternalError: return "internal-error";
  }
  return "unknown";
}

Matrix orthonormal_basis(const Matrix& m, double tol) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  if (!all_finite(m)) throw InvalidInput("orthonormal_basis: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Index r = 0;
  if (s.size() > 0 && s(0) > 0) r = (s.array() > tol * s(0)).count();
  return svd.matrixU().leftCols(r);
}

SymmetricEigen symmetric_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("symmetric_eig: matrix not square");
  if (!all_finite(m)) throw InvalidInput("symmetric_eig: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && asym > 1e-10 * scale) {
    throw InvalidInput("symmetric_eig: matrix not symmetric (max |m - m'| = " +
                       std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) {
    throw SolverFailure("symmetric_eig: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace assc
