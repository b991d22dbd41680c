#include <doctest.h>

#include <random>

#include "assc/datagen.hpp"
#include "assc/model.hpp"

using namespace assc;

namespace {

Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("homogeneous_embed appends a one") {
  CHECK(homogeneous_embed(Eigen::Vector2d(0, 1)) == Eigen::Vector3d(0, 1, 1));
  CHECK(homogeneous_embed(Eigen::Vector2d(-1, 1)) == Eigen::Vector3d(-1, 1, 1));
  CHECK(homogeneous_embed(Eigen::Vector3d::Zero()) == Eigen::Vector4d(0, 0, 0, 1));
}

TEST_CASE("embed_matrix") {
  const auto dual = make_toy(ToyId::DualExampleR2);
  DataMatrix X1{dual.arrangement.data.points.leftCols(4), std::nullopt};
  const DataMatrix E = embed_matrix(X1);
  CHECK(E.dim() == 3);
  CHECK(E.size() == 4);
  CHECK(E.points.row(2).isOnes());
  CHECK_FALSE(E.labeled());

  const auto toy1 = make_toy(ToyId::TwoLinesR3);
  const DataMatrix E1 = embed_matrix(toy1.arrangement.data);
  CHECK(E1.dim() == 4);
  CHECK(E1.size() == 10);
  CHECK(E1.labels == toy1.arrangement.data.labels);
  CHECK(E1.points.topRows(3) == toy1.arrangement.data.points);
}

TEST_CASE("fit_affine_subspace examples") {
  const Vector p = Eigen::Vector3d(1, 2, 3);
  const auto single = fit_affine_subspace(p);
  CHECK(single.dim() == 0);
  CHECK(single.offset == p);

  const auto toy1 = make_toy(ToyId::TwoLinesR3);
  const auto a = fit_affine_subspace(toy1.arrangement.data.points.leftCols(5));
  REQUIRE(a.dim() == 1);
  CHECK(std::abs(a.basis(0, 0)) == doctest::Approx(1));

  const auto toy3 = make_toy(ToyId::TriangleLineR3);
  CHECK(fit_affine_subspace(toy3.arrangement.data.points.leftCols(6)).dim() == 2);
}

TEST_CASE("fit_affine_subspace rejects non-finite input") {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fit_affine_subspace(m), InvalidInput);
}

TEST_CASE("fit_affine_subspace is translation-equivariant and reconstructs") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    const Index D = 3 + t % 5, d = t % D, N = d + 2 + t % 4;
    Matrix B(D, d), U(d, N);
    for (Index i = 0; i < B.size(); ++i) B.data()[i] = g(rng);
    for (Index i = 0; i < U.size(); ++i) U.data()[i] = g(rng);
    Vector o(D), shift(D);
    for (Index i = 0; i < D; ++i) {
      o(i) = g(rng);
      shift(i) = 5 * g(rng);
    }
    const Matrix P = (B * U).colwise() + o;
    const auto a = fit_affine_subspace(P);
    const auto b = fit_affine_subspace(P.colwise() + shift);
    CHECK(a.dim() == b.dim());
    CHECK((b.offset - a.offset - shift).norm() < 1e-9 * (1 + shift.norm()));
    CHECK((projector(a.basis) - projector(b.basis)).norm() < 1e-8);
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    for (Index c = 0; c < N; ++c) CHECK(a.distance(P.col(c)) <= 1e-8 * scale);
  }
}

TEST_CASE("embedding round-trips") {
  const auto toy = make_toy(ToyId::TriangleLineR3);
  const DataMatrix E = embed_matrix(toy.arrangement.data);
  CHECK(E.points.topRows(E.dim() - 1) == toy.arrangement.data.points);
}

TEST_CASE("label handling") {
  CHECK(normalize_labels({7, 3, 7, 9}) == std::vector<int>{2, 1, 2, 3});
  DataMatrix X{Matrix::Zero(2, 3), std::vector<int>{1, 3, 3}};
  CHECK_THROWS_AS(X.validate(), InvalidInput);
  X.labels = std::vector<int>{1, 2};
  CHECK_THROWS_AS(X.validate(), InvalidInput);
  X.labels = std::vector<int>{2, 1, 2};
  CHECK_NOTHROW(X.validate());
  CHECK(X.num_clusters() == 2);
  CHECK(X.members(2) == std::vector<Index>{0, 2});
}

TEST_CASE("subspace model validation") {
  AffineSubspaceModel a{Vector::Zero(3), Matrix::Ones(3, 1)};
  CHECK_THROWS_AS(a.validate(), InvalidInput);
  a.basis = Matrix::Identity(3, 1);
  CHECK_NOTHROW(a.validate());
  CHECK(a.distance(Eigen::Vector3d(5, 3, 4)) == doctest::Approx(5));
}

TEST_CASE("toy arrangements validate") {
  for (ToyId id : all_toy_ids()) {
    CAPTURE(to_string(id));
    CHECK_NOTHROW(make_toy(id).arrangement.validate());
  }
}

}
