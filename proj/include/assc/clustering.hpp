#pragma once

#include <cstdint>
#include <vector>

#include "assc/numerics.hpp"

namespace assc {

/// A = (|C| + |C'|) / 2. C must be square with a zero diagonal.
Matrix build_affinity(const Matrix& C);

struct SpectralResult {
  std::vector<int> labels;     // 1..n
  int isolated_vertices = 0;   // zero-degree rows, regularized
  double inertia = 0.0;        // best k-means objective
};

struct KMeansOptions {
  int restarts = 20;
  int max_iters = 300;
};

/// Normalized spectral clustering on a symmetric nonnegative affinity.
SpectralResult spectral_cluster(const Matrix& A, int n, std::uint64_t seed,
                                const KMeansOptions& km = {});

/// Rows of `points` clustered into k groups (labels 1..k), best of restarts.
SpectralResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                      const KMeansOptions& km = {});

/// Percentage of points misassigned under the best one-to-one matching of
/// predicted to true clusters.
double clustering_error(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace assc
