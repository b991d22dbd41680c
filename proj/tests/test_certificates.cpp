#include <doctest.h>

#include <algorithm>
#include <random>

#include "assc/certificates.hpp"
#include "assc/clustering.hpp"
#include "assc/datagen.hpp"

using namespace assc;

namespace {

bool has(const std::vector<Guarantee>& gs, Guarantee g) {
  return std::find(gs.begin(), gs.end(), g) != gs.end();
}

// Vertex of the first cluster that sits strictly inside the global hull.
Arrangement vertex_inside_hull() {
  Matrix X1(2, 3), X2(2, 3);
  X1 << 0, 1, 2,
        0, 0, 0;
  X2 << -1, -1, -1,
        -1, 1, 0.5;
  Arrangement arr;
  arr.data.points.resize(2, 6);
  arr.data.points << X1, X2;
  arr.data.labels = std::vector<int>{1, 1, 1, 2, 2, 2};
  arr.subspaces = {{Vector::Zero(2), Matrix::Identity(2, 1)},
                   {Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, 1)}};
  return arr;
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("is_subspace_preserving examples") {
  const auto t1 = make_toy(ToyId::TwoLinesR3).arrangement.data;
  const auto s1 = solve_column_admm(t1, 2, SolverConfig{});
  CHECK(is_subspace_preserving(s1.c, *t1.labels, 2));
  const auto t2 = make_toy(ToyId::TwoLinesR2).arrangement.data;
  const auto s2 = solve_column_oracle(t2, 0, Mode::ASSC);
  CHECK_FALSE(is_subspace_preserving(s2.c, *t2.labels, 0));
  CHECK(is_subspace_preserving(Vector::Zero(10), *t1.labels, 0));
  CHECK_THROWS_AS(is_subspace_preserving(Vector::Zero(3), *t1.labels, 0), InvalidInput);
}

TEST_CASE("is_subspace_dense examples") {
  const auto t1 = make_toy(ToyId::TwoLinesR3).arrangement.data;
  const auto s1 = solve_column_admm(t1, 2, SolverConfig{});
  CHECK(is_subspace_dense(s1.c, *t1.labels, 2));

  const auto t4 = make_toy(ToyId::TriangleR2).arrangement.data;
  const auto s4 = solve_column_admm(t4, 0, SolverConfig{});
  CHECK_FALSE(is_subspace_dense(s4.c, *t4.labels, 0));

  Vector c = Vector::Zero(10);
  c << 0.25, 0.25, 0, 0.25, 0, 0, 0, 0, 0, 0;
  CHECK_FALSE(is_subspace_dense(c, *t1.labels, 2));
  c(4) = 0.25;
  CHECK(is_subspace_dense(c, *t1.labels, 2));
}

TEST_CASE("subspace_incoherence examples") {
  const Vector v = Eigen::Vector3d(0, 0.5, 0.5);
  const Matrix other = Eigen::Vector3d(0, 0, 1);
  // |<(0,0,1), v/|v|>| = 0.5 / sqrt(0.5).
  CHECK(subspace_incoherence(v, {other}) == doctest::Approx(0.5 / std::sqrt(0.5)));
  CHECK(subspace_incoherence(v, {Matrix(Eigen::Vector3d(1, 0, 0))}) == 0.0);
  CHECK(subspace_incoherence(v, {Matrix(v)}) == doctest::Approx(v.norm()));
  CHECK_THROWS_AS(subspace_incoherence(Vector::Zero(3), {other}), InvalidInput);
}

TEST_CASE("check_incoherence examples") {
  auto at = [](double a, double b, Index j) {
    return check_incoherence(make_toy(ToyId::DualExampleR2, {a, b}).arrangement.data, j);
  };
  const auto origin = at(0, 0, 1);
  CHECK(origin.mu_tilde == doctest::Approx(0.5 / std::sqrt(0.5)));
  CHECK(origin.inv_dual_norm == doctest::Approx(std::sqrt(2.0)));
  CHECK(origin.holds);
  CHECK_FALSE(at(0, 2, 1).holds);
  CHECK(at(0, 0, 3).holds);
  CHECK_THROWS_AS(check_incoherence(make_toy(ToyId::DualExampleR2).arrangement.data, 4), InvalidInput);
}

TEST_CASE("check_incoherence matches the regions on a coarse grid") {
  int agree = 0, total = 0;
  for (double a = -3.75; a <= 3.75; a += 1.5) {
    for (double b = -4.75; b <= 3.75; b += 1.0) {
      const auto toy = make_toy(ToyId::DualExampleR2, {a, b});
      for (Index j = 0; j < 4; ++j) {
        ++total;
        agree += check_incoherence(toy.arrangement.data, j).holds ==
                 dual_example_region(j, Eigen::Vector2d(a, b));
      }
    }
  }
  CHECK(agree == total);
}

TEST_CASE("evaluate_guarantees on the toys") {
  const auto r1 = evaluate_guarantees(make_toy(ToyId::TwoLinesR3).arrangement);
  CHECK(r1.arrangement.affinely_independent);
  for (const auto& p : r1.points) CHECK(has(p.applicable, Guarantee::AffineIndependent));

  const auto r2 = evaluate_guarantees(make_toy(ToyId::TwoLinesR2).arrangement);
  CHECK_FALSE(r2.arrangement.affinely_independent);
  for (Index j : {1, 2, 5, 6}) CHECK(has(r2.points[j].applicable, Guarantee::InteriorSeparated));
  for (Index j : {0, 3, 4, 7}) {
    for (Guarantee g : r2.points[j].applicable) CHECK(is_negative(g));
    CHECK_FALSE(r2.points[j].incoherence->holds);
  }

  const auto r3 = evaluate_guarantees(make_toy(ToyId::TriangleLineR3).arrangement);
  for (Index j : {1, 3, 4}) CHECK(has(r3.points[j].applicable, Guarantee::FaceHullDisjoint));
  for (Index j : {7, 8, 9, 10}) CHECK(has(r3.points[j].applicable, Guarantee::InteriorSeparated));
}

TEST_CASE("vertex inside the global hull gets a negative guarantee") {
  const auto arr = vertex_inside_hull();
  const auto r = evaluate_guarantees(arr);
  CHECK(has(r.points[0].applicable, Guarantee::ExtremeNonnegativeLeak));
  CHECK(has(r.points[0].applicable, Guarantee::ExtremeLeak));
  const auto o = solve_column_oracle(arr.data, 0, Mode::ASSC);
  CHECK_FALSE(is_subspace_preserving(o.c, *arr.data.labels, 0));
}

TEST_CASE("cluster_connectivity examples") {
  const auto t1 = make_toy(ToyId::TwoLinesR3).arrangement.data;
  const auto cm = build_coefficient_matrix(t1, SolverConfig{});
  CHECK(cluster_connectivity(build_affinity(cm.C), *t1.labels) == std::vector<bool>{true, true});

  Matrix A = Matrix::Zero(3, 3);
  A(0, 1) = A(1, 0) = 1;
  CHECK(cluster_connectivity(A, {1, 1, 1}) == std::vector<bool>{false});
  CHECK(cluster_connectivity(A, {1, 1, 2}) == std::vector<bool>{true, true});
}

TEST_CASE("certify examples") {
  const auto t1 = make_toy(ToyId::TwoLinesR3).arrangement;
  const auto cm1 = build_coefficient_matrix(t1.data, SolverConfig{});
  const auto rep1 = certify(t1, cm1.C);
  CHECK(rep1.correct_clustering);
  CHECK(rep1.theory_violations == 0);
  CHECK(rep1.arrangement->affinely_independent);

  const auto t2 = make_toy(ToyId::TwoLinesR2).arrangement;
  const auto cm2 = build_coefficient_matrix(t2.data, SolverConfig{});
  const auto pred = spectral_cluster(build_affinity(cm2.C), 2, 0).labels;
  const auto rep2 = certify(t2, cm2.C, pred);
  CHECK_FALSE(rep2.correct_clustering);
  CHECK(rep2.theory_violations == 0);
  CHECK(*rep2.clustering_error == 0.0);

  Arrangement bare;
  bare.data.points = t1.data.points;
  const auto rep3 = certify(bare, cm1.C);
  CHECK_FALSE(rep3.labeled);
  CHECK_FALSE(rep3.arrangement);
  CHECK(rep3.points.size() == 10);
  CHECK_FALSE(rep3.points[0].cls);
  CHECK_THROWS_AS(certify(t1, Matrix::Zero(3, 3)), InvalidInput);
}

TEST_CASE("face preservation on the triangle and line") {
  const auto t3 = make_toy(ToyId::TriangleLineR3).arrangement;
  const auto cm = build_coefficient_matrix(t3.data, SolverConfig{});
  const auto rep = certify(t3, cm.C);
  for (Index j : {1, 3, 4}) CHECK(rep.points[j].face_preserving == true);
  CHECK(rep.theory_violations == 0);
}

TEST_CASE("certificates are sound on random arrangements") {
  std::mt19937_64 rng(55);
  int interior_seen = 0;
  for (int t = 0; t < 40; ++t) {
    RandomArrangementSpec spec;
    spec.n = 2 + t % 2;
    spec.ambient = 2 + t % 3;
    spec.dims.assign(spec.n, 0);
    spec.points_per_cluster.assign(spec.n, 0);
    for (int k = 0; k < spec.n; ++k) {
      spec.dims[k] = 1 + (t + k) % spec.ambient;
      if (spec.dims[k] >= spec.ambient) spec.dims[k] = spec.ambient - 1;
      spec.points_per_cluster[k] = spec.dims[k] + 3 + (t % 4);
    }
    spec.separation = 1.0 + t % 3;
    spec.seed = rng();
    const Arrangement arr = random_arrangement(spec);
    const auto cm = build_coefficient_matrix(arr.data, SolverConfig{});
    const auto rep = certify(arr, cm.C);
    CAPTURE(t);
    CHECK(rep.theory_violations == 0);
    for (const auto& pc : rep.points) {
      if (has(pc.guarantees, Guarantee::FaceSeparated)) {
        CHECK(has(pc.guarantees, Guarantee::FaceHullDisjoint));
      }
      if (pc.cls->kind == PointKind::RelativeInterior) {
        ++interior_seen;
        CHECK(*pc.oracle_objective == doctest::Approx(1).epsilon(1e-6));
        const auto nn = solve_column_oracle(arr.data, pc.j, Mode::ASSC, {true});
        CHECK(nn.objective == doctest::Approx(*pc.oracle_objective).epsilon(1e-6));
      }
      if (is_subspace_dense(cm.C.col(pc.j), *arr.data.labels, pc.j))
        CHECK(rep.connectivity[*pc.label - 1]);
    }
  }
  CHECK(interior_seen > 0);
}

}
