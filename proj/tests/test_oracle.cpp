#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "pdmnu/oracle.hpp"

using namespace pdmnu;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams reference() { return {10.0, 1.0, -1.0, -0.5, 0.0, 0.5}; }

// m = 1 and V_eff = 0 to double precision on [0, 1].
ModelParams free_particle() { return {0.0, 1.0, 1e-200, 0.0, -1.0, 0.0}; }

}  // namespace

TEST_CASE("sturm count on a small matrix", "[oracle]") {
  // tridiag(-1, 2, -1) of size 3: eigenvalues 2 - sqrt2, 2, 2 + sqrt2
  TridiagonalOperator t;
  t.diag = {2.0, 2.0, 2.0};
  t.off = {-1.0, -1.0};
  t.grid = {0.0, 1.0, 5};
  CHECK(sturm_count(t, 0.5) == 0);
  CHECK(sturm_count(t, 1.0) == 1);
  CHECK(sturm_count(t, 2.5) == 2);
  CHECK(sturm_count(t, 4.0) == 3);
  const auto [lo, hi] = spectral_bounds(t);
  CHECK(lo <= 2.0 - std::sqrt(2.0));
  CHECK(hi >= 2.0 + std::sqrt(2.0));
  const auto pairs = eigenvalues_below(t, 10.0, 3);
  REQUIRE(pairs.size() == 3);
  CHECK_THAT(pairs[0].eigenvalue, WithinAbs(2.0 - std::sqrt(2.0), 1e-12));
  CHECK_THAT(pairs[1].eigenvalue, WithinAbs(2.0, 1e-12));
  CHECK_THAT(pairs[2].eigenvalue, WithinAbs(2.0 + std::sqrt(2.0), 1e-12));
}

TEST_CASE("particle in a box: exact discrete spectrum", "[oracle]") {
  const auto p = free_particle();
  const GridSpec g{0.0, 1.0, 1001};
  const auto t = discretize(p, g);
  const double h = g.h();
  const auto pairs = eigenvalues_below(t, 1000.0, 10);
  REQUIRE(pairs.size() == 10);
  for (int k = 1; k <= 10; ++k) {
    const double s = std::sin(k * std::numbers::pi * h / 2.0);
    CHECK_THAT(pairs[k - 1].eigenvalue, WithinRel(4.0 / (h * h) * s * s, 1e-10));
  }
}

TEST_CASE("particle in a box: second-order convergence", "[oracle]") {
  ConvergenceOptions opts;
  opts.threshold = 500.0;
  opts.leakage_tol = 1.0;
  const auto table = convergence_study(free_particle(),
                                       {{0.0, 1.0, 101}, {0.0, 1.0, 201}, {0.0, 1.0, 401}}, opts);
  REQUIRE(table.levels.size() == 7);
  for (const auto& lv : table.levels) {
    CHECK_THAT(lv.observed_order, WithinAbs(2.0, 0.2));
    const double exact = std::pow((lv.n + 1) * std::numbers::pi, 2);
    CHECK(std::fabs(lv.extrapolated - exact) < std::fabs(lv.eigenvalue.back() - exact));
  }
}

TEST_CASE("ladder and grid validation", "[oracle]") {
  const auto ladder = refinement_ladder({-30.0, 30.0, 4000});
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[2].intervals() == 3996);
  CHECK_THAT(ladder[0].h() / ladder[1].h(), WithinRel(2.0, 1e-12));
  CHECK_THROWS_AS(convergence_study(reference(), {ladder[0], ladder[2]}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(reference(), {ladder[0], ladder[0], ladder[2]}),
                  std::invalid_argument);
  CHECK_THROWS(GridSpec{1.0, 0.0, 100}.validate());
  CHECK_THROWS(GridSpec{0.0, 1.0, 2}.validate());
  const ModelParams hp{10.0, 1.0, 0.5, -0.5, 0.0, 0.5};
  CHECK_THROWS_AS(discretize(hp, {-5.0, 5.0, 100}), DomainError);
  const auto clipped = GridSpec::clipped_to_domain(hp, -5.0, 5.0, 100, 1e-3);
  CHECK_THAT(clipped.x_min, WithinAbs(std::log(0.5) + 1e-3, 1e-12));
  CHECK_THROWS_AS(discretize(hp, clipped, LeftClosure::principal_exponent), std::invalid_argument);
}

TEST_CASE("reference oracle matches the closed form", "[oracle]") {
  const auto p = reference();
  ConvergenceOptions opts;
  opts.closure = LeftClosure::principal_exponent;
  const auto table = convergence_study(p, refinement_ladder({-30.0, 30.0, 4000}), opts);
  REQUIRE(table.levels.size() == 3);
  CHECK(table.accepted_per_grid == std::vector<int>{3, 3, 3});
  for (const auto& lv : table.levels) {
    const double e = *energy_level(p, lv.n);
    CHECK_THAT(lv.extrapolated, WithinRel(e, 1e-5));
    CHECK_THAT(lv.eigenvalue.back(), WithinRel(e, 1e-3));
    CHECK_THAT(lv.observed_order, WithinAbs(2.0, 0.2));
    CHECK(lv.max_leakage < 1e-8);
  }
}

TEST_CASE("oracle eigenvectors approximate the closed form", "[oracle]") {
  const auto p = reference();
  const GridSpec g{-30.0, 30.0, 4000};
  const auto pairs = eigenvalues_below(discretize(p, g, LeftClosure::principal_exponent), 0.0, 3);
  REQUIRE(pairs.size() == 3);
  for (const auto& pr : pairs) {
    const Wavefunction wf(p, bound_state(p, pr.index));
    double worst = 0.0;
    for (int i = 0; i < g.n_points; i += 7) worst = std::max(worst, std::fabs(pr.vector[i] - wf.phi(g.x(i))));
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("plain truncation is biased at the left end", "[oracle]") {
  // with mu_sq = 0 the solution tends to a constant times s^{1/2}, so a
  // Dirichlet wall at x_min shifts levels by O(1/|x_min|)
  const auto p = reference();
  const double e0 = *energy_level(p, 0);
  const auto near = eigenvalues_below(discretize(p, {-30.0, 30.0, 4000}), 0.0, 1);
  const auto far = eigenvalues_below(discretize(p, {-60.0, 30.0, 6000}), 0.0, 1);
  const double err_near = std::fabs(near[0].eigenvalue - e0);
  const double err_far = std::fabs(far[0].eigenvalue - e0);
  CHECK(err_near > 1e-2);
  CHECK(err_far < err_near);
  CHECK(err_far > 0.3 * err_near);
  const auto closed = eigenvalues_below(
      discretize(p, {-30.0, 30.0, 4000}, LeftClosure::principal_exponent), 0.0, 1);
  CHECK(std::fabs(closed[0].eigenvalue - e0) < 1e-3 * std::fabs(e0));
}

TEST_CASE("domain fit widens a tight box at fixed spacing", "[oracle]") {
  const auto p = reference();
  const GridSpec tight{-30.0, 3.0, 1651};
  const auto fit = fit_domain(p, tight, 3, LeftClosure::principal_exponent);
  CHECK(fit.contained);
  CHECK(fit.growth_steps >= 1);
  CHECK_THAT(fit.grid.h(), WithinRel(tight.h(), 1e-3));
  CHECK(fit.grid.x_max > tight.x_max);
  const auto roomy = fit_domain(p, {-30.0, 30.0, 4000}, 3, LeftClosure::principal_exponent);
  CHECK(roomy.contained);
  CHECK(roomy.growth_steps == 0);
}

TEST_CASE("residual scan", "[oracle]") {
  const auto p = reference();
  for (int n = 0; n < 3; ++n) {
    auto st = bound_state(p, n);
    CHECK(residual_scan(p, st) <= 1e-8);
    st.energy += 0.1;
    CHECK(residual_scan(p, st) > 1e-3);
  }
}
