#pragma once

#include <optional>
#include <string>
#include <vector>

#include "assc/geometry.hpp"
#include "assc/solvers.hpp"

namespace assc {

/// Coefficients with |c_i| <= 1e-5 |c|_inf count as zero.
inline constexpr double kSupportRelTol = 1e-5;

double support_threshold(const Vector& c);

/// No weight above `tol` on points from other clusters. `tol` defaults to
/// the relative support threshold.
bool is_subspace_preserving(const Vector& c, const std::vector<int>& labels, Index j,
                            std::optional<double> tol = std::nullopt);

/// Subspace-preserving with weight above `tol` on every other same-cluster point.
bool is_subspace_dense(const Vector& c, const std::vector<int>& labels, Index j,
                       std::optional<double> tol = std::nullopt);

/// max over clusters of |X_k' v / |v||_inf.
double subspace_incoherence(const Vector& dual_point, const std::vector<Matrix>& other_clusters);

struct IncoherenceCheck {
  double mu_tilde = 0.0;
  double inv_dual_norm = 0.0;
  bool holds = false;
};

/// Incoherence test on the embedded data for column j. Throws InvalidInput
/// when the embedded point is outside the span of its cluster mates.
IncoherenceCheck check_incoherence(const DataMatrix& X, Index j);

enum class Guarantee {
  EmbeddedIndependent,
  AffineIndependent,
  InteriorSeparated,
  FaceSeparated,
  FaceHullDisjoint,
  ExtremeLeak,
  ExtremeNonnegativeLeak,
};

const char* to_string(Guarantee g) noexcept;

/// The two extreme-point guarantees predict failure; all others predict success.
inline bool is_negative(Guarantee g) { return g == Guarantee::ExtremeLeak || g == Guarantee::ExtremeNonnegativeLeak; }

struct PointGuarantees {
  Index j = 0;
  int label = 0;
  /// Generators are global column indices.
  PointClass cls;
  std::vector<Guarantee> applicable;
  std::optional<IncoherenceCheck> incoherence;
  /// Boundary points only: global indices of the points of X lying in the
  /// affine hull of the minimal face.
  std::vector<Index> face_points;
};

struct ArrangementVerdicts {
  bool affinely_independent = false;
  bool embedded_independent = false;
  /// Per subspace: does it meet the hull of the other clusters' points?
  std::vector<bool> meets_other_hull;
};

struct GuaranteeReport {
  ArrangementVerdicts arrangement;
  std::vector<PointGuarantees> points;
};

GuaranteeReport evaluate_guarantees(const Arrangement& arr);

/// Per cluster: is the subgraph on its members connected through edges with
/// weight above `tol`?
std::vector<bool> cluster_connectivity(const Matrix& A, const std::vector<int>& labels,
                                       double tol = 0.0);

struct PointCertificate {
  Index j = 0;
  std::optional<int> label;
  double objective = 0.0;
  bool nonnegative = false;
  // Fields below need labels.
  std::optional<PointClass> cls;
  bool subspace_preserving = false;
  bool subspace_dense = false;
  /// Boundary points: support confined to the affine hull of the minimal face.
  std::optional<bool> face_preserving;
  std::optional<IncoherenceCheck> incoherence;
  std::vector<Guarantee> guarantees;
  std::optional<bool> oracle_preserving;
  std::optional<double> oracle_objective;
  std::string violation;  // nonempty when a theorem's prediction failed
};

struct CertificateReport {
  bool labeled = false;
  std::vector<PointCertificate> points;
  std::optional<ArrangementVerdicts> arrangement;
  std::vector<bool> connectivity;
  bool correct_clustering = false;
  std::optional<double> clustering_error;
  int theory_violations = 0;
};

/// Full report for a coefficient matrix. Without labels only per-column
/// solver statistics are filled in; `arr.subspaces` may then be empty.
CertificateReport certify(const Arrangement& arr, const Matrix& C,
                          const std::optional<std::vector<int>>& predicted = std::nullopt);

}  // namespace assc
