#include <cmath>

#include "doctest.h"
#include "gelfand/constants.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/identities.hpp"
#include "gelfand/shooting.hpp"
#include "oracles.hpp"

using namespace gelfand;

namespace {

const double kQ5 = 105.0 / 16;

std::vector<double> us_center(int n) {
  const auto c = closed_form_eval(round_factor(n), 0.0);
  return {c.value, c.lap};
}

}  // namespace

TEST_CASE("Newton from near the round factor returns it") {
  const auto p = ProblemSpec::fourth_order(5, kQ5);
  auto seed = us_center(5);
  seed[0] += 0.05;
  seed[1] -= 0.3;
  const auto s = solve_bvp(p, seed, 1e-10);
  CHECK(s.delta_u_at_1 == doctest::Approx(-1.75).epsilon(1e-6));
  double err = 0.0;
  for (std::size_t i = 0; i < s.profile.size(); ++i)
    err = std::max(err, std::fabs(s.profile.u[i] - closed_form_eval(round_factor(5), s.profile.r[i]).value));
  CHECK(err <= 1e-6);
}

TEST_CASE("Newton from a larger centre value finds the second solution") {
  const auto p = ProblemSpec::fourth_order(5, kQ5);
  const std::vector<double> seed{1.9, -28.0};
  const auto s = solve_bvp(p, seed, 1e-10);
  CHECK(std::fabs(s.delta_u_at_1 + 0.75) <= 1e-4);
  CHECK(s.u0() > 1.8);
}

TEST_CASE("finer integration changes the centre value by less than 10 tol") {
  const auto p = ProblemSpec::fourth_order(5, 6.0);
  const double tol = 1e-8;
  const auto a = solve_bvp(p, us_center(5), tol);
  ShootingOptions fine;
  fine.ivp.tol = 1e-14;
  const auto b = solve_bvp(p, a.shooting_params, tol, fine);
  CHECK(std::fabs(a.u0() - b.u0()) < 10 * tol);
}

TEST_CASE("exactly two solutions at the round value for n = 5") {
  const auto p = ProblemSpec::fourth_order(5, kQ5);
  const auto sols = find_all_solutions(p, default_seed_box(p), 1e-10);
  REQUIRE(sols.size() == 2);
  CHECK(sols[0].delta_u_at_1 == doctest::Approx(-1.75).epsilon(1e-6));
  CHECK(std::fabs(sols[1].delta_u_at_1 + 0.75) <= 1e-4);
  const auto [a, b] = pohozaev_roots(5, kQ5);
  for (const auto& s : sols) CHECK(std::min(std::fabs(s.delta_u_at_1 - a), std::fabs(s.delta_u_at_1 - b)) <= 1e-6);
}

TEST_CASE("no solutions above the fold") {
  const auto p5 = ProblemSpec::fourth_order(5, 9.0);
  CHECK(find_all_solutions(p5, default_seed_box(p5), 1e-10).empty());
  const auto p2 = ProblemSpec::second_order(2, 1.05);
  CHECK(find_all_solutions(p2, default_seed_box(p2), 1e-10).empty());
}

TEST_CASE("two caps just below the second-order fold for n = 3") {
  const auto p = ProblemSpec::second_order(3, 0.75 * (1 - 1e-3));
  const auto sols = find_all_solutions(p, default_seed_box(p), 1e-11);
  REQUIRE(sols.size() == 2);
  CHECK(sols[1].u0() - sols[0].u0() > 1e-3);

  // independent scan: RK4 mismatch u(1) against u(0), bisected
  auto mismatch = [&](double u0) { return oracle::rk4_radial(p, {u0}, 1e-3).u.back(); };
  std::vector<double> roots;
  double prev_x = 0.01, prev_f = mismatch(prev_x);
  for (double x = 0.02; x <= 2.0; x += 0.01) {
    const double f = mismatch(x);
    if ((f > 0) != (prev_f > 0)) {
      double lo = prev_x, hi = x, flo = prev_f;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi), fm = mismatch(mid);
        if ((fm > 0) == (flo > 0)) lo = mid, flo = fm; else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_f = f;
  }
  REQUIRE(roots.size() == 2);
  CHECK(sols[0].u0() == doctest::Approx(roots[0]).epsilon(1e-6));
  CHECK(sols[1].u0() == doctest::Approx(roots[1]).epsilon(1e-6));
}

TEST_CASE("cylinder BVP at lambda = 6 returns -ln cosh") {
  const auto v = solve_cylinder_bvp(6.0, 20.0, {-0.8, 0.3}, 1e-10);
  CHECK(v.d2v.front() == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::fabs(v.d3v.front()) <= 1e-6);
  double err = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::fabs(v.v[i] + std::log(std::cosh(v.t[i]))));
  CHECK(err <= 1e-6);
}

TEST_CASE("cylinder BVP with v'''(0) >= 0 enforced") {
  CylinderBvpOptions opt;
  opt.enforce_nonnegative_v3 = true;
  for (auto seed : {std::pair{-1.0, 0.0}, std::pair{0.0, 0.0}, std::pair{1.0, -3.0}}) {
    const auto v = solve_cylinder_bvp(6.0, 20.0, seed, 1e-10, opt);
    CHECK(v.d2v.front() == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::fabs(v.d3v.front()) <= 1e-6);
  }
}

TEST_CASE("cylinder BVP at lambda = 0 converges to the linear far-field profile") {
  const auto v = solve_cylinder_bvp(0.0, 20.0, {-1.0, 0.0}, 1e-10);
  CHECK(v.d2v.front() == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(v.d3v.front() == doctest::Approx(4.0).epsilon(1e-8));
  for (std::size_t i = 0; i < v.size(); i += 100)
    CHECK(v.v[i] == doctest::Approx(-v.t[i] + 0.5 * (1 - std::exp(-2 * v.t[i]))).epsilon(1e-8));
}

TEST_CASE("invalid problems are rejected") {
  CHECK_THROWS_AS(ProblemSpec::fourth_order(3), Error);
  ProblemSpec p = ProblemSpec::second_order(3);
  p.nonlinearity = Nonlinearity::QPower;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_THROWS_AS(solve_cylinder_bvp(6.0, 5.0, {-1.0, 0.0}, 1e-10), Error);
}
