#include "assc/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>

namespace assc {

const char* to_string(ToyId id) noexcept {
  switch (id) {
    case ToyId::TwoLinesR3: return "TwoLinesR3";
    case ToyId::TwoLinesR2: return "TwoLinesR2";
    case ToyId::TriangleLineR3: return "TriangleLineR3";
    case ToyId::TriangleR2: return "TriangleR2";
    case ToyId::DualExampleR2: return "DualExampleR2";
  }
  return "unknown";
}

std::vector<ToyId> all_toy_ids() {
  return {ToyId::TwoLinesR3, ToyId::TwoLinesR2, ToyId::TriangleLineR3, ToyId::TriangleR2,
          ToyId::DualExampleR2};
}

ToyId parse_toy_id(const std::string& name) {
  auto squash = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '-' || c == '_'; }), s.end());
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  const std::string key = squash(name);
  for (ToyId id : all_toy_ids())
    if (squash(to_string(id)) == key) return id;
  throw InvalidInput("unknown toy dataset '" + name + "'");
}

namespace {

AffineSubspaceModel line(const Vector& through, const Vector& direction) {
  return {through, direction.normalized()};
}

Arrangement assemble(const std::vector<Matrix>& blocks, std::vector<AffineSubspaceModel> subspaces) {
  Arrangement arr;
  Index N = 0;
  for (const auto& b : blocks) N += b.cols();
  arr.data.points.resize(blocks.front().rows(), N);
  std::vector<int> labels;
  Index at = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    arr.data.points.middleCols(at, blocks[k].cols()) = blocks[k];
    labels.insert(labels.end(), blocks[k].cols(), static_cast<int>(k) + 1);
    at += blocks[k].cols();
  }
  arr.data.labels = labels;
  arr.subspaces = std::move(subspaces);
  return arr;
}

template <typename T>
std::vector<std::optional<T>> fill(Index n, std::initializer_list<std::pair<Index, T>> entries) {
  std::vector<std::optional<T>> out(n);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

}  // namespace

ToyDataset make_toy(ToyId id, const Eigen::Vector2d& second) {
  using K = PointKind;
  ToyDataset t{id, {}, {}};
  ExpectedFacts& e = t.expected;
  switch (id) {
    case ToyId::TwoLinesR3: {
      Matrix X1(3, 5), X2(3, 5);
      X1 << -2, -1, 0, 1, 2,
             1,  1, 1, 1, 1,
             1,  1, 1, 1, 1;
      X2 << 1, 0, -1, -2, -3,
            0, 1,  2,  3,  4,
            0, 0,  0,  0,  0;
      t.arrangement = assemble({X1, X2}, {line(X1.col(2), Eigen::Vector3d(1, 0, 0)),
                                          line(X2.col(0), Eigen::Vector3d(-1, 1, 0))});
      e.affinely_independent = true;
      e.classes = fill<K>(10, {{0, K::Extreme}, {1, K::RelativeInterior}, {2, K::RelativeInterior},
                               {3, K::RelativeInterior}, {4, K::Extreme}, {5, K::Extreme},
                               {6, K::RelativeInterior}, {7, K::RelativeInterior},
                               {8, K::RelativeInterior}, {9, K::Extreme}});
      e.preserving.assign(10, true);
      e.dense = {1, 2, 3, 6, 7, 8};
      e.clustering_error = 0.0;
      break;
    }
    case ToyId::TwoLinesR2:
    case ToyId::DualExampleR2: {
      Matrix X1(2, 4);
      X1 << -1, 0, 1, 2,
             1, 1, 1, 1;
      if (id == ToyId::DualExampleR2) {
        Matrix X2 = second;
        t.arrangement = assemble({X1, X2}, {line(X1.col(1), Eigen::Vector2d(1, 0)),
                                            AffineSubspaceModel{second, Matrix(2, 0)}});
        e.classes = fill<K>(5, {{0, K::Extreme}, {1, K::RelativeInterior},
                                {2, K::RelativeInterior}, {3, K::Extreme}});
        break;
      }
      Matrix X2(2, 4);
      X2 << -1, 0, 1, 2,
            -4, -4, -4, -4;
      t.arrangement = assemble({X1, X2}, {line(X1.col(1), Eigen::Vector2d(1, 0)),
                                          line(X2.col(1), Eigen::Vector2d(1, 0))});
      e.affinely_independent = false;
      e.classes = fill<K>(8, {{0, K::Extreme}, {1, K::RelativeInterior}, {2, K::RelativeInterior},
                              {3, K::Extreme}, {4, K::Extreme}, {5, K::RelativeInterior},
                              {6, K::RelativeInterior}, {7, K::Extreme}});
      e.preserving = fill<bool>(8, {{0, false}, {1, true}, {2, true}, {3, false},
                                    {4, false}, {5, true}, {6, true}, {7, false}});
      e.dense = {1, 2, 5, 6};
      e.clustering_error = 0.0;
      break;
    }
    case ToyId::TriangleLineR3: {
      Matrix X1(3, 6), X2(3, 6);
      X1 << 0, 1, 2, 0.5, 1.5,  1,
            1, 1, 1, 0,   0,   -1,
            0, 0, 0, 0,   0,    0;
      X2 << 0,  1,  2,  3,  4,  5,
           -2, -2, -2, -2, -2, -2,
            1,  1,  1,  1,  1,  1;
      AffineSubspaceModel plane{Vector::Zero(3), Matrix::Identity(3, 2)};
      t.arrangement = assemble({X1, X2}, {plane, line(X2.col(0), Eigen::Vector3d(1, 0, 0))});
      e.affinely_independent = false;
      e.classes = fill<K>(12, {{0, K::Extreme}, {1, K::BoundaryFace}, {2, K::Extreme},
                               {3, K::BoundaryFace}, {4, K::BoundaryFace}, {5, K::Extreme},
                               {6, K::Extreme}, {7, K::RelativeInterior}, {8, K::RelativeInterior},
                               {9, K::RelativeInterior}, {10, K::RelativeInterior},
                               {11, K::Extreme}});
      e.preserving = fill<bool>(12, {{1, true}, {3, true}, {4, true}, {7, true}, {8, true},
                                     {9, true}, {10, true}});
      e.face_preserving = {1, 3, 4};
      break;
    }
    case ToyId::TriangleR2: {
      // Sixteen points on the triangle (0,-1), (1,1), (2,-1): five on the
      // left edge, five on the right edge, eight on the base, vertices shared.
      Matrix X(2, 16);
      for (int k = 0; k <= 4; ++k) X.col(k) << 0.25 * k, -1.0 + 0.5 * k;
      for (int k = 1; k <= 4; ++k) X.col(4 + k) << 1.0 + 0.25 * k, 1.0 - 0.5 * k;
      for (int k = 1; k <= 7; ++k) X.col(8 + k) << 2.0 - 0.25 * k, -1.0;
      t.arrangement = assemble({X}, {AffineSubspaceModel{Vector::Zero(2), Matrix::Identity(2, 2)}});
      e.classes.assign(16, K::BoundaryFace);
      for (Index v : {0, 4, 8}) e.classes[v] = K::Extreme;
      for (Index i = 0; i < 16; ++i) {
        if (i == 0 || i == 4 || i == 8) e.has_negative.push_back(i);
        else e.nonnegative.push_back(i);
      }
      break;
    }
  }
  return t;
}

bool dual_example_region(Index j, const Eigen::Vector2d& p) {
  switch (j) {
    case 0: return -3 + 2 * p(0) < p(1) && p(1) < 1 + 2 * p(0);
    case 1:
    case 2: return -3 < p(1) && p(1) < 1;
    case 3: return -1 < p(0) && p(0) < 1;
    default: throw InvalidInput("dual_example_region: point index must be 0..3");
  }
}

Arrangement random_arrangement(const RandomArrangementSpec& s) {
  if (s.n < 1) throw InvalidInput("random_arrangement: need at least one cluster");
  if (static_cast<int>(s.dims.size()) != s.n || static_cast<int>(s.points_per_cluster.size()) != s.n)
    throw InvalidInput("random_arrangement: dims and points_per_cluster need one entry per cluster");
  for (int d : s.dims)
    if (d < 0 || d >= s.ambient) throw InvalidInput("random_arrangement: every dimension must be below the ambient one");
  for (int p : s.points_per_cluster)
    if (p < 1) throw InvalidInput("random_arrangement: clusters need at least one point");
  const int total_dim = std::accumulate(s.dims.begin(), s.dims.end(), 0);
  if (s.force_affinely_independent && total_dim + s.n - 1 > s.ambient) {
    throw GenerationFailure("random_arrangement: " + std::to_string(s.n) + " subspaces of total dimension " +
                            std::to_string(total_dim) + " cannot be affinely independent in R^" +
                            std::to_string(s.ambient));
  }

  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> box(-s.spread, s.spread);
  const Index D = s.ambient;

  for (int attempt = 0; attempt < std::max(1, s.max_attempts); ++attempt) {
    std::vector<AffineSubspaceModel> subs;
    std::vector<Matrix> blocks;
    for (int k = 0; k < s.n; ++k) {
      Matrix G(D, s.dims[k]);
      for (Index i = 0; i < G.size(); ++i) G.data()[i] = gauss(rng);
      Eigen::HouseholderQR<Matrix> qr(G);
      AffineSubspaceModel a;
      a.basis = qr.householderQ() * Matrix::Identity(D, s.dims[k]);
      a.offset.resize(D);
      for (Index i = 0; i < D; ++i) a.offset(i) = s.separation * gauss(rng);
      Matrix P(D, s.points_per_cluster[k]);
      for (Index c = 0; c < P.cols(); ++c) {
        Vector u(s.dims[k]);
        for (Index i = 0; i < u.size(); ++i) u(i) = box(rng);
        P.col(c) = a.offset + a.basis * u;
      }
      subs.push_back(std::move(a));
      blocks.push_back(std::move(P));
    }
    if (s.force_affinely_independent && !is_affinely_independent(subs)) continue;

    Arrangement arr;
    Index N = 0;
    for (const auto& b : blocks) N += b.cols();
    arr.data.points.resize(D, N);
    std::vector<int> labels;
    Index at = 0;
    for (int k = 0; k < s.n; ++k) {
      arr.data.points.middleCols(at, blocks[k].cols()) = blocks[k];
      labels.insert(labels.end(), blocks[k].cols(), k + 1);
      at += blocks[k].cols();
    }
    arr.data.labels = labels;
    arr.subspaces = std::move(subs);
    return arr;
  }
  throw GenerationFailure("random_arrangement: no affinely independent draw in " +
                          std::to_string(s.max_attempts) + " attempts");
}

DataMatrix add_gaussian_noise(const DataMatrix& X, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0)) throw InvalidInput("add_gaussian_noise: sigma must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma > 0 ? sigma : 1.0);
  DataMatrix out = X;
  if (sigma == 0) return out;
  for (Index i = 0; i < out.points.size(); ++i) out.points.data()[i] += gauss(rng);
  return out;
}

}  // namespace assc
