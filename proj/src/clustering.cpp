#include "assc/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <string>

namespace assc {

Matrix build_affinity(const Matrix& C) {
  if (C.rows() != C.cols()) throw InvalidInput("build_affinity: coefficient matrix must be square");
  if (!all_finite(C)) throw InvalidInput("build_affinity: non-finite coefficients");
  if (C.size() && C.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw InvalidInput("build_affinity: coefficient matrix has a nonzero diagonal");
  return 0.5 * (C.cwiseAbs() + C.transpose().cwiseAbs());
}

SpectralResult kmeans(const Matrix& P, int k, std::uint64_t seed, const KMeansOptions& km) {
  const Index N = P.rows();
  if (k < 1 || k > N) throw InvalidInput("kmeans: need 1 <= k <= number of points");
  std::mt19937_64 rng(seed);
  SpectralResult best;
  best.inertia = std::numeric_limits<double>::infinity();

  std::vector<int> assign(N);
  for (int restart = 0; restart < std::max(1, km.restarts); ++restart) {
    // k-means++ seeding.
    Matrix centers(k, P.cols());
    std::uniform_int_distribution<Index> pick(0, N - 1);
    centers.row(0) = P.row(pick(rng));
    Vector d2 = (P.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double total = d2.sum();
      Index chosen;
      if (total <= 0) {
        chosen = pick(rng);
      } else {
        std::discrete_distribution<Index> dist(d2.data(), d2.data() + N);
        chosen = dist(rng);
      }
      centers.row(c) = P.row(chosen);
      d2 = d2.cwiseMin((P.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    double inertia = 0.0;
    for (int it = 0; it < km.max_iters; ++it) {
      bool changed = it == 0;
      inertia = 0.0;
      for (Index i = 0; i < N; ++i) {
        Index arg;
        const double dist = (centers.rowwise() - P.row(i)).rowwise().squaredNorm().minCoeff(&arg);
        inertia += dist;
        if (assign[i] != static_cast<int>(arg)) {
          assign[i] = static_cast<int>(arg);
          changed = true;
        }
      }
      if (!changed) break;
      Matrix sums = Matrix::Zero(k, P.cols());
      std::vector<Index> counts(k, 0);
      for (Index i = 0; i < N; ++i) {
        sums.row(assign[i]) += P.row(i);
        ++counts[assign[i]];
      }
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) {
          centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        } else {
          // Re-seed an empty cluster at the point farthest from its center.
          Index far;
          Vector dd(N);
          for (Index i = 0; i < N; ++i) dd(i) = (P.row(i) - centers.row(assign[i])).squaredNorm();
          dd.maxCoeff(&far);
          centers.row(c) = P.row(far);
        }
      }
    }
    if (inertia < best.inertia - 1e-12) {
      best.inertia = inertia;
      best.labels.assign(assign.begin(), assign.end());
    }
  }
  for (int& l : best.labels) ++l;
  return best;
}

SpectralResult spectral_cluster(const Matrix& A, int n, std::uint64_t seed, const KMeansOptions& km) {
  const Index N = A.rows();
  if (A.cols() != N) throw InvalidInput("spectral_cluster: affinity must be square");
  if (n < 1 || n > N) throw InvalidInput("spectral_cluster: need 1 <= n <= N");
  if (!all_finite(A) || (N > 0 && A.minCoeff() < 0))
    throw InvalidInput("spectral_cluster: affinity must be finite and nonnegative");
  if (n == 1) return {std::vector<int>(N, 1), 0, 0.0};

  Vector deg = A.rowwise().sum();
  SpectralResult out;
  for (Index i = 0; i < N; ++i) {
    if (deg(i) <= 0) {
      deg(i) = 1e-12;
      ++out.isolated_vertices;
    }
  }
  const Vector dinv = deg.cwiseSqrt().cwiseInverse();
  Matrix L = -(dinv.asDiagonal() * A * dinv.asDiagonal());
  L.diagonal().array() += 1.0;
  L = 0.5 * (L + L.transpose());
  const SymmetricEigen eig = symmetric_eig(L);
  Matrix V = eig.vectors.leftCols(n);
  for (Index i = 0; i < N; ++i) {
    const double nrm = V.row(i).norm();
    if (nrm > 0) V.row(i) /= nrm;
  }
  const SpectralResult km_result = kmeans(V, n, seed, km);
  out.labels = km_result.labels;
  out.inertia = km_result.inertia;
  return out;
}

namespace {

// Minimum-cost assignment on a square cost matrix (Hungarian method,
// potentials formulation). Returns row -> column.
std::vector<int> hungarian(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

double clustering_error(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw InvalidInput("clustering_error: " + std::to_string(pred.size()) + " predictions for " +
                       std::to_string(truth.size()) + " labels");
  }
  if (pred.empty()) return 0.0;
  std::map<int, int> pid, tid;
  for (int l : pred) pid.emplace(l, static_cast<int>(pid.size()));
  for (int l : truth) tid.emplace(l, static_cast<int>(tid.size()));
  const int k = static_cast<int>(std::max(pid.size(), tid.size()));
  Matrix overlap = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < pred.size(); ++i) overlap(pid[pred[i]], tid[truth[i]]) += 1.0;
  const std::vector<int> match = hungarian(-overlap);
  double hit = 0.0;
  for (int r = 0; r < k; ++r) hit += overlap(r, match[r]);
  return 100.0 * (1.0 - hit / static_cast<double>(pred.size()));
}

}  // namespace assc
