#include <doctest.h>

#include "dqm/quat_matrix.hpp"
#include "support/random.hpp"
#include "support/reference_example.hpp"

using dqm::EtaAxis;
using dqm::testing::distance;
using M = dqm::QuatMatrix<double>;
using Q = dqm::Quaternion<double>;
using CM = M::ComplexMatrix;

namespace {

constexpr Q one{1, 0, 0, 0};
constexpr Q i{0, 1, 0, 0};
constexpr Q j{0, 0, 1, 0};
constexpr Q k{0, 0, 0, 1};
constexpr Q zero{};

// Entrywise Hamilton-sum product, independent of the Cayley-Dickson kernel.
M naive_product(M const& a, M const& b) {
  M out(a.rows(), b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      Q acc;
      for (Eigen::Index t = 0; t < a.cols(); ++t) acc += a(r, t) * b(t, c);
      out.set(r, c, acc);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("quat_matrix") {
  TEST_CASE("construction rejects degenerate shapes") {
    CHECK_THROWS_AS(M(0, 3), dqm::ShapeError);
    CHECK_THROWS_AS(M(2, 0), dqm::ShapeError);
    CHECK_THROWS_AS((M{{one, i}, {j}}), dqm::ShapeError);
  }

  TEST_CASE("matmul examples") {
    M const a0{{i, zero}, {zero, j}};
    CHECK(a0 * M::Identity(2) == a0);
    CHECK(M{{i}} * M{{j}} == M{{k}});
    dqm::testing::ReferenceExample<double> const ex;
    CHECK(distance(ex.a.std_part * ex.d.std_part, ex.a0d0) <= 1e-12);
    CHECK_THROWS_AS(a0 * M(3, 1), dqm::ShapeError);
    CHECK_THROWS_AS(a0 + M(2, 3), dqm::ShapeError);
  }

  TEST_CASE("matmul agrees with the entrywise Hamilton sum") {
    dqm::testing::RandomMatrices rnd(21);
    for (int t = 0; t < 100; ++t) {
      auto const m = rnd.uniform_index(1, 5), n = rnd.uniform_index(1, 5), p = rnd.uniform_index(1, 5);
      M const a = rnd.gaussian(m, n), b = rnd.gaussian(n, p);
      CHECK(distance(a * b, naive_product(a, b)) <= 1e-12 * (1 + a.norm() * b.norm()));
    }
  }

  TEST_CASE("conjugate transpose") {
    M const row{{i, j}};
    CHECK(row.conj_transpose() == M{{-i}, {-j}});
    dqm::testing::RandomMatrices rnd(22);
    for (int t = 0; t < 100; ++t) {
      M const a = rnd.gaussian(3, 4), b = rnd.gaussian(4, 2);
      CHECK(a.conj_transpose().conj_transpose() == a);
      CHECK(distance((a * b).conj_transpose(), b.conj_transpose() * a.conj_transpose()) <=
            1e-12 * (1 + a.norm() * b.norm()));
    }
  }

  TEST_CASE("eta conjugate transpose") {
    CHECK(M::Identity(2).eta_conj_transpose(EtaAxis::j) == M::Identity(2));
    CHECK(M{{i}}.eta_conj_transpose(EtaAxis::i) == M{{-i}});
    dqm::testing::RandomMatrices rnd(23);
    for (int t = 0; t < 100; ++t) {
      M const a = rnd.gaussian(3, 3), b = rnd.gaussian(3, 3), c = rnd.gaussian(3, 2);
      for (EtaAxis eta : dqm::kAllEtas) {
        CHECK(distance(eta_conj_transpose(eta_conj_transpose(a, eta), eta), a) <= 1e-14 * (1 + a.norm()));
        CHECK(distance(eta_conj_transpose(a + b, eta),
                       eta_conj_transpose(a, eta) + eta_conj_transpose(b, eta)) <=
              1e-12 * (1 + a.norm() + b.norm()));
        CHECK(distance(eta_conj_transpose(a * c, eta),
                       eta_conj_transpose(c, eta) * eta_conj_transpose(a, eta)) <=
              1e-12 * (1 + a.norm() * c.norm()));
        // Entrywise definition: -eta * conj(a(c, r)) * eta.
        Q const u = Q::unit(eta);
        CHECK(eta_conj_transpose(a, eta)(0, 1) == -(u * a(1, 0).conjugate() * u));
      }
    }
  }

  TEST_CASE("complex adjoint embedding") {
    CM expected_j(2, 2);
    expected_j << 0, 1, -1, 0;
    CHECK(to_adjoint(M{{j}}) == expected_j);
    CHECK(to_adjoint(M{{one}}) == CM::Identity(2, 2));

    dqm::testing::RandomMatrices rnd(24);
    for (int t = 0; t < 100; ++t) {
      M const a = rnd.gaussian(3, 4), a2 = rnd.gaussian(3, 4), b = rnd.gaussian(4, 2);
      double const s = 1 + a.norm() * (b.norm() + a2.norm());
      CHECK((to_adjoint(a * b) - to_adjoint(a) * to_adjoint(b)).norm() <= 1e-12 * s);
      CHECK((to_adjoint(a + a2) - (to_adjoint(a) + to_adjoint(a2))).norm() <= 1e-12 * s);
      CHECK((to_adjoint(a.conj_transpose()) - to_adjoint(a).adjoint()).norm() <= 1e-12 * s);
      CHECK(dqm::from_adjoint<double>(to_adjoint(a)) == a);
      CHECK(to_adjoint(a).norm() == doctest::Approx(std::sqrt(2.0) * a.norm()).epsilon(1e-12));
    }
  }

  TEST_CASE("from_adjoint rejects broken block symmetry") {
    CM m = to_adjoint(M{{one, i}});
    m(2, 0) += 1.0;
    CHECK_THROWS_AS(dqm::from_adjoint<double>(m), dqm::BlockSymmetryError);
    CHECK_THROWS_AS(dqm::from_adjoint<double>(CM::Zero(3, 2)), dqm::ShapeError);
  }

  TEST_CASE("rank examples") {
    CHECK(rank(M{{i, zero}, {zero, j}}) == 2);
    CHECK(rank(M::Zero(3, 2)) == 0);
    CHECK(rank(M{{one, i}, {j, -k}}) == 1);
  }

  TEST_CASE("rank invariants") {
    dqm::testing::RandomMatrices rnd(25);
    for (int t = 0; t < 100; ++t) {
      auto const m = rnd.uniform_index(1, 6), n = rnd.uniform_index(1, 6), r = rnd.uniform_index(1, std::min(m, n));
      M const a = rnd.low_rank(m, n, r);
      Eigen::JacobiSVD<CM> svd(to_adjoint(a));
      auto const& sv = svd.singularValues();
      Eigen::Index adjoint_rank = 0;
      for (Eigen::Index s = 0; s < sv.size(); ++s) adjoint_rank += sv(s) > 1e-10 * sv(0);
      CHECK(adjoint_rank % 2 == 0);
      CHECK(rank(a) == r);
      CHECK(rank(a.conj_transpose()) == r);
      CHECK(2 * rank(a) == adjoint_rank);
    }
  }

  TEST_CASE("pinv examples") {
    CHECK(distance(pinv(M{{i, zero}, {zero, j}}), M{{-i, zero}, {zero, -j}}) <= 1e-14);
    CHECK(pinv(M::Zero(2, 3)) == M::Zero(3, 2));
    CHECK(distance(pinv(M{{one, i}}), M{{Q{0.5, 0, 0, 0}}, {Q{0, -0.5, 0, 0}}}) <= 1e-14);
  }

  TEST_CASE("projector examples") {
    M const inv{{one, i}, {j, one}};
    CHECK(proj_L(inv).norm() <= 1e-12);
    CHECK(proj_R(inv).norm() <= 1e-12);
    CHECK(proj_L(M::Zero(2, 3)) == M::Identity(3));
    CHECK(proj_R(M::Zero(2, 3)) == M::Identity(2));

    // Oracle: a+ = a* / (a a*) for a nonzero row, so L_a = I - a* a / 2.
    M const row{{one, i}};
    M const oracle = M::Identity(2) - 0.5 * (row.conj_transpose() * row);
    M const l = proj_L(row);
    CHECK(distance(l, oracle) <= 1e-14);
    CHECK(distance(l, M{{Q{0.5, 0, 0, 0}, Q{0, -0.5, 0, 0}}, {Q{0, 0.5, 0, 0}, Q{0.5, 0, 0, 0}}}) <= 1e-14);
    CHECK(distance(l * l, l) <= 1e-14);
  }

  TEST_CASE("Penrose equations and projector identities") {
    dqm::testing::RandomMatrices rnd(26);
    for (int t = 0; t < 200; ++t) {
      auto const m = rnd.uniform_index(1, 6), n = rnd.uniform_index(1, 6);
      M const a = rnd.mixed_rank_with_zero(m, n);
      M const x = pinv(a);
      double const sa = 1 + a.norm();
      CHECK(distance(a * x * a, a) <= 1e-10 * sa);
      CHECK(distance(x * a * x, x) <= 1e-10 * (1 + x.norm()));
      CHECK(distance((a * x).conj_transpose(), a * x) <= 1e-10);
      CHECK(distance((x * a).conj_transpose(), x * a) <= 1e-10);

      M const l = proj_L(a), r = proj_R(a);
      for (M const* p : {&l, &r}) {
        CHECK(distance(*p * *p, *p) <= 1e-10 * sa);
        CHECK(distance(p->conj_transpose(), *p) <= 1e-10 * sa);
        CHECK(distance(pinv(*p), *p) <= 1e-10 * sa);
      }
      for (EtaAxis eta : dqm::kAllEtas) {
        M const ae = eta_conj_transpose(a, eta);
        CHECK(distance(eta_conj_transpose(l, eta), proj_R(ae)) <= 1e-10 * sa);
        CHECK(distance(eta_conj_transpose(r, eta), proj_L(ae)) <= 1e-10 * sa);
      }
    }
  }

  TEST_CASE("tolerance validation") {
    dqm::Tolerance bad;
    bad.rank_rel = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(rank(M{{one}}, bad), std::invalid_argument);
  }

  TEST_CASE("block assembly") {
    M const a{{one}}, b{{i, j}};
    M const g = dqm::blocks<double>({{a, b}, {M{{k}}, M{{one, one}}}});
    CHECK(g.rows() == 2);
    CHECK(g.cols() == 3);
    CHECK(g(0, 2) == j);
    CHECK(g(1, 0) == k);
    CHECK_THROWS_AS(dqm::blocks<double>({{a, b}, {M{{k}}, M{{one}}}}), dqm::ShapeError);
    CHECK_THROWS_AS(dqm::hcat<double>({a, M(2, 1)}), dqm::ShapeError);
    CHECK(dqm::vcat<double>({a, M{{k}}}) == M{{one}, {k}});
  }

  TEST_CASE("Marsaglia-Styan examples") {
    auto const zeros = dqm::marsaglia_styan_check(M(2, 2), M(2, 2), M(2, 2), M(2, 2), M(2, 2));
    CHECK(zeros.lhs_rank == 0);
    CHECK(zeros.rhs_rank == 0);
    CHECK(zeros.holds);

    dqm::testing::RandomMatrices rnd(27);
    M const a = rnd.low_rank(3, 3, 1);
    auto const full = dqm::marsaglia_styan_check(a, rnd.gaussian(3, 2), rnd.gaussian(2, 3),
                                                 rnd.gaussian(2, 2), rnd.gaussian(2, 2));
    CHECK(full.holds);
    CHECK(full.lhs_rank == 1);
    CHECK_THROWS_AS(dqm::marsaglia_styan_check(a, M(2, 2), M(2, 3), M(2, 2), M(2, 2)), dqm::ShapeError);
  }

  TEST_CASE("Marsaglia-Styan identity on random blocks") {
    dqm::testing::RandomMatrices rnd(28);
    for (int t = 0; t < 200; ++t) {
      auto const n = rnd.uniform_index(1, 4), m = rnd.uniform_index(1, 4), l = rnd.uniform_index(1, 4),
                 k = rnd.uniform_index(1, 4), l1 = rnd.uniform_index(1, 4), l2 = rnd.uniform_index(1, 4);
      auto const result = dqm::marsaglia_styan_check(
          rnd.mixed_rank_with_zero(n, m), rnd.mixed_rank_with_zero(n, l), rnd.mixed_rank_with_zero(k, m),
          rnd.mixed_rank_with_zero(l1, l), rnd.mixed_rank_with_zero(k, l2));
      CHECK(result.holds);
    }
  }
}
