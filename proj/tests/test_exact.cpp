#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "aot/analysis.hpp"
#include "aot/errors.hpp"
#include "aot/exact.hpp"
#include "aot/measures.hpp"
#include "lp_oracle.hpp"
#include "test_util.hpp"

using namespace aot;

TEST_SUITE("exact") {

TEST_CASE("augment borders the problem with zero-cost atoms") {
  const auto problem =
      augment(testutil::toy_mu_measure(), testutil::toy_nu_measure(),
              testutil::toy_cost());
  REQUIRE(problem.mu_hat.size() == 7);
  REQUIRE(problem.nu_hat.size() == 6);
  CHECK(problem.mu_hat[6] == doctest::Approx(1.0));
  CHECK(problem.nu_hat[5] == doctest::Approx(1.0));
  CHECK(problem.mu_hat.total() == doctest::Approx(2.0));
  CHECK(problem.nu_hat.total() == doctest::Approx(2.0));
  for (std::size_t j = 0; j < 6; ++j) CHECK(problem.c_hat(6, j) == 0.0);
  for (std::size_t i = 0; i < 7; ++i) CHECK(problem.c_hat(i, 5) == 0.0);
  CHECK(problem.c_hat(0, 0) == -1.0);

  const auto tiny = augment(make_measure({1}), make_measure({1}), make_cost({{5}}));
  CHECK(tiny.mu_hat.weights() == std::vector<double>{1, 1});
  CHECK(tiny.nu_hat.weights() == std::vector<double>{1, 1});
  CHECK(tiny.c_hat(0, 0) == 5.0);
  CHECK(tiny.c_hat(0, 1) == 0.0);
  CHECK(tiny.c_hat(1, 0) == 0.0);

  const auto degen = augment(make_measure({0}), make_measure({1}), make_cost({{-1}}));
  CHECK(degen.mu_hat.weights() == std::vector<double>{0, 1});
  CHECK(degen.nu_hat.weights() == std::vector<double>{1, 0});

  CHECK_THROWS_AS(augment(make_measure({1}), make_measure({1}), make_cost({{1}, {2}})),
                  ShapeError);
}

TEST_CASE("solve_balanced reaches the optimal value") {
  const auto toy = augment(testutil::toy_mu_measure(), testutil::toy_nu_measure(),
                           testutil::toy_cost());
  const auto sol = solve_balanced(toy);
  double value = 0.0;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 6; ++j) value += sol.plan_hat(i, j) * toy.c_hat(i, j);
  CHECK(value == doctest::Approx(-11.0 / 15.0).epsilon(1e-9));

  // Equality marginals hold exactly up to rounding.
  for (std::size_t i = 0; i < 7; ++i)
    CHECK(sol.plan_hat.row_marginals()[i] ==
          doctest::Approx(toy.mu_hat[i]).epsilon(1e-12));
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(sol.plan_hat.col_marginals()[j] ==
          doctest::Approx(toy.nu_hat[j]).epsilon(1e-12));

  // Complementary slackness against the node potentials.
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (sol.plan_hat(i, j) > 1e-12)
        CHECK(sol.node_potentials_u[i] + sol.node_potentials_v[j] ==
              doctest::Approx(toy.c_hat(i, j)).epsilon(1e-9));

  const auto skip = augment(make_measure({1}), make_measure({1}), make_cost({{5}}));
  const auto skip_sol = solve_balanced(skip);
  CHECK(skip_sol.plan_hat(0, 1) == doctest::Approx(1.0));
  CHECK(skip_sol.plan_hat(1, 0) == doctest::Approx(1.0));
  CHECK(skip_sol.plan_hat(0, 0) == doctest::Approx(0.0));

  AugmentedProblem flat;
  flat.mu_hat = make_measure({0.5, 0.5});
  flat.nu_hat = make_measure({0.25, 0.75});
  flat.c_hat = make_cost({{0, 0}, {0, 0}});
  const auto flat_sol = solve_balanced(flat);
  double flat_value = 0.0;
  for (std::size_t k = 0; k < flat_sol.plan_hat.mass_matrix().size(); ++k)
    flat_value += flat_sol.plan_hat.mass_matrix().data()[k];
  CHECK(flat_value == doctest::Approx(1.0));
}

TEST_CASE("restrict_plan drops the border atoms") {
  const auto toy = augment(testutil::toy_mu_measure(), testutil::toy_nu_measure(),
                           testutil::toy_cost());
  const auto plan = restrict_plan(solve_balanced(toy));
  REQUIRE(plan.rows() == 6);
  REQUIRE(plan.cols() == 5);
  CHECK(plan.total_mass() == doctest::Approx(11.0 / 15.0).epsilon(1e-9));

  const auto positive = augment(make_measure({0.3, 0.7}), make_measure({0.5, 0.5}),
                                make_cost({{1, 2}, {3, 4}}));
  const auto zero_plan = restrict_plan(solve_balanced(positive));
  CHECK(zero_plan.total_mass() == doctest::Approx(0.0));

  const auto single = augment(make_measure({1}), make_measure({1}), make_cost({{-2}}));
  const auto single_plan = restrict_plan(solve_balanced(single));
  CHECK(single_plan(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("solve_aot_exact on the reference instance") {
  const auto report = solve_aot_exact(testutil::toy_mu_measure(),
                                      testutil::toy_nu_measure(), testutil::toy_cost());
  CHECK(report.method == "aot-exact");
  CHECK(report.objective() == doctest::Approx(-11.0 / 15.0).epsilon(1e-9));
  CHECK(report.mass() == doctest::Approx(11.0 / 15.0).epsilon(1e-9));
  CHECK(report.marginals.feasible());
  CHECK(report.duality_gap <= 1e-7);
  CHECK(report.dual_value == doctest::Approx(-11.0 / 15.0).epsilon(1e-7));

  const auto regions = active_regions(report.plan);
  CHECK(regions.inactive_rows == std::vector<std::size_t>{5});
  CHECK(regions.inactive_cols == std::vector<std::size_t>{4});

  const auto theorem1 =
      check_mass_allocation(report.plan, testutil::toy_cost(),
                            testutil::toy_mu_measure(), testutil::toy_nu_measure());
  CHECK(theorem1.passed);
}

TEST_CASE("solve_aot_exact trivial instances") {
  const auto positive = solve_aot_exact(make_measure({0.5, 0.5}),
                                        make_measure({0.4, 0.6}),
                                        make_cost({{1, 0.5}, {2, 3}}));
  CHECK(positive.objective() == doctest::Approx(0.0));
  CHECK(positive.mass() == doctest::Approx(0.0));

  const auto diag = solve_aot_exact(make_measure({0.5, 0.5}), make_measure({0.5, 0.5}),
                                    make_cost({{-1, 2}, {2, -1}}));
  CHECK(diag.objective() == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(diag.mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(diag.plan(0, 0) == doctest::Approx(0.5));
  CHECK(diag.plan(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("recovered duals are feasible and tight") {
  const auto toy = augment(testutil::toy_mu_measure(), testutil::toy_nu_measure(),
                           testutil::toy_cost());
  const auto duals = recover_duals(solve_balanced(toy), toy);
  double value = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(duals.phi[i] <= 0.0);
    value += duals.phi[i] / 6.0;
  }
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(duals.psi[j] <= 0.0);
    value += duals.psi[j] / 5.0;
  }
  CHECK(value == doctest::Approx(-11.0 / 15.0).epsilon(1e-9));
  const auto C = testutil::toy_cost();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(duals.phi[i] + duals.psi[j] <= C(i, j) + 1e-9);

  const auto positive = augment(make_measure({1}), make_measure({1}), make_cost({{5}}));
  const auto zero_duals = recover_duals(solve_balanced(positive), positive);
  CHECK(zero_duals.phi[0] == doctest::Approx(0.0));
  CHECK(zero_duals.psi[0] == doctest::Approx(0.0));

  const auto single = augment(make_measure({1}), make_measure({1}), make_cost({{-2}}));
  const auto tight = recover_duals(solve_balanced(single), single);
  CHECK(tight.phi[0] + tight.psi[0] == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(tight.phi[0] <= 0.0);
  CHECK(tight.psi[0] <= 0.0);
}

TEST_CASE("objective matches the reference LP on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testutil::random_instance(rng);
    const auto report = solve_aot_exact(make_measure(inst.mu), make_measure(inst.nu),
                                        make_cost(inst.cost));
    const double oracle = lp::transport_value_leq(inst.mu, inst.nu, inst.cost);
    CHECK(report.objective() == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(report.marginals.feasible());
    CHECK(report.duality_gap <= 1e-7);
  }
}

TEST_CASE("mass never exceeds the smaller total") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testutil::random_instance(rng);
    const auto report = solve_aot_exact(make_measure(inst.mu), make_measure(inst.nu),
                                        make_cost(inst.cost));
    double mu_total = 0.0, nu_total = 0.0;
    for (double v : inst.mu) mu_total += v;
    for (double v : inst.nu) nu_total += v;
    CHECK(report.mass() <= std::min(mu_total, nu_total) + 1e-9);
  }
}

}  // TEST_SUITE
