#include "assc/certificates.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "assc/clustering.hpp"

namespace assc {

double support_threshold(const Vector& c) {
  return c.size() ? kSupportRelTol * c.cwiseAbs().maxCoeff() : 0.0;
}

namespace {

void check_labels(const Vector& c, const std::vector<int>& labels, Index j) {
  if (static_cast<Index>(labels.size()) != c.size())
    throw InvalidInput("coefficient vector and labels differ in length");
  if (j < 0 || j >= c.size()) throw InvalidInput("column index out of range");
}

Matrix drop_column(const Matrix& m, Index k) {
  Matrix out(m.rows(), m.cols() - 1);
  out << m.leftCols(k), m.rightCols(m.cols() - k - 1);
  return out;
}

std::vector<Index> complement(Index N, const std::vector<Index>& idx) {
  std::vector<bool> in(N, false);
  for (Index i : idx) in[i] = true;
  std::vector<Index> out;
  for (Index i = 0; i < N; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

// Is x_j a convex combination of the other columns of X?
bool has_nonnegative_representation(const Matrix& X, Index j) {
  if (X.cols() < 2) return false;
  const Matrix others = drop_column(X, j);
  LpProblem p = LpProblem::nonnegative(others.cols());
  p.eq_lhs.resize(X.rows() + 1, others.cols());
  p.eq_lhs << others, Eigen::RowVectorXd::Ones(others.cols());
  p.eq_rhs.resize(X.rows() + 1);
  p.eq_rhs << X.col(j), 1.0;
  return solve_lp(p).optimal();
}

}  // namespace

bool is_subspace_preserving(const Vector& c, const std::vector<int>& labels, Index j,
                            std::optional<double> tol) {
  check_labels(c, labels, j);
  const double t = tol.value_or(support_threshold(c));
  for (Index i = 0; i < c.size(); ++i)
    if (labels[i] != labels[j] && std::abs(c(i)) > t) return false;
  return true;
}

bool is_subspace_dense(const Vector& c, const std::vector<int>& labels, Index j,
                       std::optional<double> tol) {
  if (!is_subspace_preserving(c, labels, j, tol)) return false;
  const double t = tol.value_or(support_threshold(c));
  for (Index i = 0; i < c.size(); ++i)
    if (i != j && labels[i] == labels[j] && !(std::abs(c(i)) > t)) return false;
  return true;
}

double subspace_incoherence(const Vector& v, const std::vector<Matrix>& others) {
  const double nrm = v.norm();
  if (!(nrm > 0)) throw InvalidInput("subspace_incoherence: zero dual point");
  const Vector dir = v / nrm;
  double mu = 0.0;
  for (const Matrix& X : others) {
    if (X.cols() == 0) continue;
    if (X.rows() != v.size()) throw InvalidInput("subspace_incoherence: dimension mismatch");
    mu = std::max(mu, (X.transpose() * dir).cwiseAbs().maxCoeff());
  }
  return mu;
}

IncoherenceCheck check_incoherence(const DataMatrix& X, Index j) {
  if (!X.labels) throw InvalidInput("check_incoherence: labels required");
  if (j < 0 || j >= X.size()) throw InvalidInput("check_incoherence: column index out of range");
  const DataMatrix E = embed_matrix(X);
  const int own = (*X.labels)[j];
  std::vector<Index> mates = X.members(own);
  mates.erase(std::remove(mates.begin(), mates.end(), j), mates.end());
  if (mates.empty()) throw InvalidInput("check_incoherence: point has no cluster mates");

  const Vector v = compute_dual_point(E.columns(mates), E.points.col(j));
  std::vector<Matrix> others;
  for (int k = 1; k <= X.num_clusters(); ++k)
    if (k != own) others.push_back(E.columns(X.members(k)));

  IncoherenceCheck out;
  out.mu_tilde = subspace_incoherence(v, others);
  out.inv_dual_norm = 1.0 / v.norm();
  out.holds = out.mu_tilde < out.inv_dual_norm;
  return out;
}

const char* to_string(Guarantee g) noexcept {
  switch (g) {
    case Guarantee::EmbeddedIndependent: return "embedded-independent";
    case Guarantee::AffineIndependent: return "affine-independent";
    case Guarantee::InteriorSeparated: return "interior-separated";
    case Guarantee::FaceSeparated: return "face-separated";
    case Guarantee::FaceHullDisjoint: return "face-hull-disjoint";
    case Guarantee::ExtremeLeak: return "extreme-leak";
    case Guarantee::ExtremeNonnegativeLeak: return "extreme-nonnegative-leak";
  }
  return "unknown";
}

GuaranteeReport evaluate_guarantees(const Arrangement& arr) {
  arr.validate();
  const DataMatrix& X = arr.data;
  const Index N = X.size();
  const int n = X.num_clusters();
  const double scale = std::max(1.0, X.points.cwiseAbs().maxCoeff());

  GuaranteeReport rep;
  rep.arrangement.affinely_independent = is_affinely_independent(arr.subspaces);
  rep.arrangement.embedded_independent = embedded_spans_independent(arr.subspaces);
  for (int k = 1; k <= n; ++k) {
    const Matrix rest = X.columns(complement(N, X.members(k)));
    rep.arrangement.meets_other_hull.push_back(subspace_intersects_hull(arr.subspaces[k - 1], rest));
  }

  rep.points.resize(N);
  for (int k = 1; k <= n; ++k) {
    const std::vector<Index> mem = X.members(k);
    const Matrix P = X.columns(mem);
    const Index d = arr.subspaces[k - 1].dim();
    const bool separated = !rep.arrangement.meets_other_hull[k - 1];

    for (std::size_t local = 0; local < mem.size(); ++local) {
      const Index j = mem[local];
      PointGuarantees& pg = rep.points[j];
      pg.j = j;
      pg.label = k;
      if (mem.size() >= 2) {
        pg.cls = classify_point(static_cast<Index>(local), P);
        for (Index& g : pg.cls.generators) g = mem[g];
      } else {
        pg.cls.kind = PointKind::Extreme;
        pg.cls.generators = {j};
      }

      if (mem.size() >= 2) {
        const Matrix mates = drop_column(P, static_cast<Index>(local));
        Matrix emb(mates.rows() + 1, mates.cols());
        emb << mates, Eigen::RowVectorXd::Ones(mates.cols());
        if (rep.arrangement.embedded_independent && rank_with_tol(emb) == d + 1)
          pg.applicable.push_back(Guarantee::EmbeddedIndependent);
        if (rep.arrangement.affinely_independent && affine_hull_dim(mates) == d)
          pg.applicable.push_back(Guarantee::AffineIndependent);
      }

      const PointClass& cls = pg.cls;
      if (cls.kind == PointKind::RelativeInterior && separated)
        pg.applicable.push_back(Guarantee::InteriorSeparated);
      if (cls.kind == PointKind::BoundaryFace && !cls.duplicate && cls.face_dim > 0 &&
          cls.face_dim < d) {
        const Matrix F = X.columns(cls.generators);
        if (separated) pg.applicable.push_back(Guarantee::FaceSeparated);
        if (!face_affine_hull_intersects_hull(F, X.columns(complement(N, cls.generators))))
          pg.applicable.push_back(Guarantee::FaceHullDisjoint);
        const AffineSubspaceModel face = fit_affine_subspace(F);
        for (Index i = 0; i < N; ++i)
          if (face.distance(X.points.col(i)) <= 1e-9 * scale) pg.face_points.push_back(i);
      }
      if (cls.kind == PointKind::Extreme && has_nonnegative_representation(X.points, j)) {
        pg.applicable.push_back(Guarantee::ExtremeLeak);
        pg.applicable.push_back(Guarantee::ExtremeNonnegativeLeak);
      }

      try {
        pg.incoherence = check_incoherence(X, j);
      } catch (const InvalidInput&) {
        pg.incoherence.reset();  // embedded problem infeasible: not applicable
      }
    }
  }
  return rep;
}

std::vector<bool> cluster_connectivity(const Matrix& A, const std::vector<int>& labels, double tol) {
  const Index N = A.rows();
  if (A.cols() != N || static_cast<Index>(labels.size()) != N)
    throw InvalidInput("cluster_connectivity: shape mismatch");
  if (N == 0) return {};
  const int n = *std::max_element(labels.begin(), labels.end());
  std::vector<bool> out(std::max(n, 0), true);
  for (int k = 1; k <= n; ++k) {
    std::vector<Index> mem;
    for (Index i = 0; i < N; ++i)
      if (labels[i] == k) mem.push_back(i);
    if (mem.size() <= 1) continue;
    std::vector<bool> seen(N, false);
    std::queue<Index> q;
    q.push(mem.front());
    seen[mem.front()] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
      const Index u = q.front();
      q.pop();
      for (Index v : mem) {
        if (!seen[v] && (A(u, v) > tol || A(v, u) > tol)) {
          seen[v] = true;
          ++reached;
          q.push(v);
        }
      }
    }
    out[k - 1] = reached == mem.size();
  }
  return out;
}

CertificateReport certify(const Arrangement& arr, const Matrix& C,
                          const std::optional<std::vector<int>>& predicted) {
  const DataMatrix& X = arr.data;
  const Index N = X.size();
  if (C.rows() != N || C.cols() != N) {
    throw InvalidInput("certify: coefficient matrix is " + std::to_string(C.rows()) + "x" +
                       std::to_string(C.cols()) + " for " + std::to_string(N) + " points");
  }
  CertificateReport rep;
  rep.points.resize(N);
  for (Index j = 0; j < N; ++j) {
    auto& pc = rep.points[j];
    pc.j = j;
    const Vector c = C.col(j);
    pc.objective = c.lpNorm<1>();
    pc.nonnegative = c.size() == 0 || c.minCoeff() >= -support_threshold(c);
  }
  if (!X.labels) return rep;

  rep.labeled = true;
  const std::vector<int>& labels = *X.labels;
  const GuaranteeReport g = evaluate_guarantees(arr);
  rep.arrangement = g.arrangement;

  for (Index j = 0; j < N; ++j) {
    auto& pc = rep.points[j];
    const PointGuarantees& pg = g.points[j];
    const Vector c = C.col(j);
    pc.label = labels[j];
    pc.cls = pg.cls;
    pc.subspace_preserving = is_subspace_preserving(c, labels, j);
    pc.subspace_dense = is_subspace_dense(c, labels, j);
    pc.incoherence = pg.incoherence;
    pc.guarantees = pg.applicable;
    if (pg.cls.kind == PointKind::BoundaryFace && !pg.cls.duplicate) {
      const double t = support_threshold(c);
      bool inside = true;
      for (Index i = 0; i < N; ++i) {
        if (std::abs(c(i)) > t &&
            std::find(pg.face_points.begin(), pg.face_points.end(), i) == pg.face_points.end())
          inside = false;
      }
      pc.face_preserving = inside;
    }

    bool positive = pg.incoherence && pg.incoherence->holds;
    bool negative = false;
    for (Guarantee q : pg.applicable) (is_negative(q) ? negative : positive) = true;

    try {
      const ColumnSolution o = solve_column_oracle(X, j, Mode::ASSC);
      pc.oracle_objective = o.objective;
      pc.oracle_preserving = is_subspace_preserving(o.c, labels, j);
    } catch (const NoRepresentation&) {
      pc.oracle_preserving.reset();
    }

    if (positive && pc.oracle_preserving != true) {
      pc.violation = pc.oracle_preserving ? "THEORY-VIOLATION: positive guarantee but oracle solution leaks"
                                          : "THEORY-VIOLATION: positive guarantee but no affine representation";
    } else if (negative && pc.oracle_preserving == true) {
      pc.violation = "THEORY-VIOLATION: negative guarantee but oracle solution is subspace-preserving";
    }
    if (!pc.violation.empty()) ++rep.theory_violations;
  }

  rep.connectivity = cluster_connectivity(build_affinity(C), labels);

  bool all_preserving = true;
  std::vector<bool> has_dense(X.num_clusters(), false);
  for (const auto& pc : rep.points) {
    all_preserving = all_preserving && pc.subspace_preserving;
    if (pc.subspace_dense) has_dense[*pc.label - 1] = true;
  }
  rep.correct_clustering =
      all_preserving && std::all_of(has_dense.begin(), has_dense.end(), [](bool b) { return b; });
  if (predicted) rep.clustering_error = clustering_error(*predicted, labels);
  return rep;
}

}  // namespace assc
