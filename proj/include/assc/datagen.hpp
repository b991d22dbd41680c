#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "assc/geometry.hpp"

namespace assc {

enum class ToyId { TwoLinesR3, TwoLinesR2, TriangleLineR3, TriangleR2, DualExampleR2 };

const char* to_string(ToyId id) noexcept;
/// Accepts "TwoLinesR3" or "two-lines-r3" spellings. Throws InvalidInput.
ToyId parse_toy_id(const std::string& name);
std::vector<ToyId> all_toy_ids();

/// Known outcomes for a toy dataset. Indices are 0-based columns; unset
/// entries carry no claim.
struct ExpectedFacts {
  std::optional<bool> affinely_independent;
  std::vector<std::optional<PointKind>> classes;
  /// Oracle solution expected to be subspace-preserving (or not).
  std::vector<std::optional<bool>> preserving;
  /// Support expected to stay inside the affine hull of the minimal face.
  std::vector<Index> face_preserving;
  /// ADMM expected to return a subspace-dense column.
  std::vector<Index> dense;
  /// Optimal solution expected nonnegative / to contain a negative entry.
  std::vector<Index> nonnegative;
  std::vector<Index> has_negative;
  std::optional<double> clustering_error;
};

struct ToyDataset {
  ToyId id;
  Arrangement arrangement;
  ExpectedFacts expected;
};

/// DualExampleR2 uses `second` as its single second-cluster sample.
ToyDataset make_toy(ToyId id, const Eigen::Vector2d& second = Eigen::Vector2d(0.0, 0.0));

/// Region of second-cluster samples for which the incoherence test passes
/// for point `j` (0..3) of the DualExampleR2 line, as a strict inequality.
bool dual_example_region(Index j, const Eigen::Vector2d& p);

struct RandomArrangementSpec {
  int n = 2;
  std::vector<int> dims{1, 1};
  int ambient = 3;
  std::vector<int> points_per_cluster{10, 10};
  double spread = 1.0;      // half-width of the sampling box in subspace coordinates
  double separation = 1.0;  // standard deviation of the offsets
  bool force_affinely_independent = false;
  int max_attempts = 200;
  std::uint64_t seed = 0;
};

Arrangement random_arrangement(const RandomArrangementSpec& spec);

/// Adds i.i.d. N(0, sigma^2) noise to every coordinate.
DataMatrix add_gaussian_noise(const DataMatrix& X, double sigma, std::uint64_t seed);

}  // namespace assc
