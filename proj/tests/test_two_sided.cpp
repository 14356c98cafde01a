#include <doctest.h>

#include "dqm/two_sided.hpp"
#include "support/random.hpp"

using dqm::testing::distance;
using M = dqm::QuatMatrix<double>;

namespace {

struct PairInstance {
  M a2, b2, c2, a3, b3, c3;
};

// Y* is n x k; every factor is rank deficient where its shape allows.
PairInstance planted_pair(dqm::testing::RandomMatrices& rnd, M& y_star) {
  auto const n = rnd.uniform_index(1, 4), k = rnd.uniform_index(1, 4);
  auto const p = rnd.uniform_index(1, 4), q = rnd.uniform_index(1, 4), r = rnd.uniform_index(1, 4),
             s = rnd.uniform_index(1, 4);
  y_star = rnd.gaussian(n, k);
  PairInstance in{rnd.mixed_rank(p, n), rnd.mixed_rank(k, q), M(1, 1),
                  rnd.mixed_rank(r, n), rnd.mixed_rank(k, s), M(1, 1)};
  in.c2 = in.a2 * y_star * in.b2;
  in.c3 = in.a3 * y_star * in.b3;
  return in;
}

double pair_residual(PairInstance const& in, M const& y) {
  return distance(in.a2 * y * in.b2, in.c2) + distance(in.a3 * y * in.b3, in.c3);
}

double pair_scale(PairInstance const& in) {
  return 1 + in.a2.norm() + in.b2.norm() + in.c2.norm() + in.a3.norm() + in.b3.norm() + in.c3.norm();
}

struct CoupledInstance {
  M a, a1, b, c, c1, d;
};

double coupled_residual(CoupledInstance const& in, M const& x, M const& y) {
  M const r_c = proj_R(in.c), l_a = proj_L(in.a);
  return distance(in.a * x + in.a1 * y * r_c, in.b) + distance(x * in.c + l_a * y * in.c1, in.d);
}

}  // namespace

TEST_SUITE("two_sided") {
  TEST_CASE("identity pair returns C") {
    dqm::testing::RandomMatrices rnd(41);
    M const c = rnd.gaussian(3, 2);
    auto const out = dqm::solve_two_sided_pair(M::Identity(3), M::Identity(2), c, M::Identity(3), M::Identity(2), c);
    REQUIRE(out.solvable);
    CHECK(distance(*out.particular, c) <= 1e-12);
    CHECK(distance(out.sample(7, 1.0), c) <= 1e-12);
  }

  TEST_CASE("contradictory identity pair is unsolvable") {
    dqm::testing::RandomMatrices rnd(42);
    M const c = rnd.gaussian(2, 2);
    M e = M::Zero(2, 2);
    e.set(0, 1, {0, 0, 1, 0});
    auto const out = dqm::solve_two_sided_pair(M::Identity(2), M::Identity(2), c, M::Identity(2), M::Identity(2), c + e);
    CHECK_FALSE(out.solvable);
    CHECK_FALSE(out.failed_conditions.empty());
    CHECK_FALSE(out.particular.has_value());
    CHECK_FALSE(static_cast<bool>(out.sample));
    CHECK(out.failed_conditions.back() == "R_{A00}C00L_{B00}=0");
  }

  TEST_CASE("planted pairs round trip") {
    dqm::testing::RandomMatrices rnd(43);
    for (int t = 0; t < 100; ++t) {
      M y_star(1, 1);
      auto const in = planted_pair(rnd, y_star);
      auto const out = dqm::solve_two_sided_pair(in.a2, in.b2, in.c2, in.a3, in.b3, in.c3);
      REQUIRE(out.solvable);
      double const bound = 1e-8 * pair_scale(in);
      CHECK(pair_residual(in, *out.particular) <= bound);
      for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(pair_residual(in, out.sample(seed, 1.0)) <= bound);
    }
  }

  TEST_CASE("samples are deterministic per seed") {
    dqm::testing::RandomMatrices rnd(44);
    M y_star(1, 1);
    auto const in = planted_pair(rnd, y_star);
    auto const out = dqm::solve_two_sided_pair(in.a2, in.b2, in.c2, in.a3, in.b3, in.c3);
    REQUIRE(out.solvable);
    CHECK(out.sample(5, 2.0) == out.sample(5, 2.0));
  }

  TEST_CASE("pair shape mismatch") {
    CHECK_THROWS_AS(dqm::solve_two_sided_pair(M(2, 2), M(2, 2), M(3, 2), M(2, 2), M(2, 2), M(2, 2)),
                    dqm::ShapeError);
  }

  TEST_CASE("coupled system degenerates to X = B") {
    dqm::testing::RandomMatrices rnd(45);
    M const b = rnd.gaussian(3, 3);
    auto const out = dqm::solve_coupled_system(M::Identity(3), M::Zero(3, 3), b, M::Identity(3), M::Zero(3, 3), b);
    REQUIRE(out.solvable);
    CHECK(distance(out.particular->x, b) <= 1e-12);
    CHECK(distance(out.sample(3, 1.0).x, b) <= 1e-12);
  }

  TEST_CASE("coupled system with B != D fails AD=BC") {
    dqm::testing::RandomMatrices rnd(46);
    auto const out = dqm::solve_coupled_system(M::Identity(2), M::Zero(2, 2), rnd.gaussian(2, 2), M::Identity(2),
                                               M::Zero(2, 2), rnd.gaussian(2, 2));
    CHECK_FALSE(out.solvable);
    REQUIRE_FALSE(out.failed_conditions.empty());
    CHECK(out.failed_conditions.front() == "AD=BC");
  }

  TEST_CASE("planted coupled systems round trip") {
    dqm::testing::RandomMatrices rnd(47);
    for (int t = 0; t < 100; ++t) {
      auto const m = rnd.uniform_index(1, 4), n = rnd.uniform_index(1, 4), k = rnd.uniform_index(1, 4),
                 l = rnd.uniform_index(1, 4);
      CoupledInstance in{rnd.mixed_rank(m, n), rnd.mixed_rank(m, n), M(1, 1),
                         rnd.mixed_rank(k, l), rnd.mixed_rank(k, l), M(1, 1)};
      M const x_star = rnd.gaussian(n, k), y_star = rnd.gaussian(n, k);
      in.b = in.a * x_star + in.a1 * y_star * proj_R(in.c);
      in.d = x_star * in.c + proj_L(in.a) * y_star * in.c1;

      auto const out = dqm::solve_coupled_system(in.a, in.a1, in.b, in.c, in.c1, in.d);
      REQUIRE(out.solvable);
      double const bound =
          1e-8 * (1 + in.a.norm() + in.a1.norm() + in.b.norm() + in.c.norm() + in.c1.norm() + in.d.norm());
      CHECK(coupled_residual(in, out.particular->x, out.particular->y) <= bound);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto const s = out.sample(seed, 1.0);
        CHECK(coupled_residual(in, s.x, s.y) <= bound);
      }
    }
  }

  TEST_CASE("coupled shape mismatch") {
    CHECK_THROWS_AS(dqm::solve_coupled_system(M(2, 2), M(2, 3), M(2, 2), M(2, 2), M(2, 2), M(2, 2)),
                    dqm::ShapeError);
  }
}
