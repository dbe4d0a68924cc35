#include <cmath>
#include <random>

#include "doctest.h"
#include "gelfand/constants.hpp"
#include "gelfand/continuation.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/identities.hpp"
#include "gelfand/monotone.hpp"

using namespace gelfand;

namespace {

const double kQ5 = 105.0 / 16;

double distance_to(const RadialProfile& u, const std::function<double(double)>& f) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::fabs(u.u[i] - f(u.r[i])));
  return e;
}

Branch branch_with_upper(const ProblemSpec& tmpl) {
  StopCriteria stop;
  stop.points_after_fold = 400;
  return trace_branch(tmpl, lambda_zero_solution(tmpl), {}, stop);
}

}  // namespace

TEST_CASE("linear clamped solves with known answers") {
  const auto q = linear_biharmonic_solve(5, [](double) { return 0.0; }, 1000, {1.0, -0.5});
  CHECK(distance_to(q, [](double r) { return 1.25 - 0.25 * r * r; }) <= 1e-13);

  const auto cf = round_factor(5);
  const auto us = linear_biharmonic_solve(5, [&](double r) { return kQ5 * std::pow(closed_form_eval(cf, r).value, 9); }, 1000,
                                          {1.0, -0.5});
  CHECK(distance_to(us, [&](double r) { return closed_form_eval(cf, r).value; }) <= 1e-8);

  // Δw = 1 gives w = r²/10 + c1; Δu = w gives u = r⁴/280 + c1 r²/10 + c0, clamped at 0
  const auto one = linear_biharmonic_solve(5, [](double) { return 1.0; }, 1000, {0.0, 0.0});
  CHECK(distance_to(one, [](double r) { return std::pow(r, 4) / 280 - r * r / 140 + 1.0 / 280; }) <= 1e-12);
}

TEST_CASE("larger right-hand sides give larger clamped solutions") {
  std::mt19937 gen(20240611);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), bump(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a0 = coef(gen), a1 = coef(gen), a2 = coef(gen), b0 = bump(gen), b1 = bump(gen);
    auto base = [=](double r) { return a0 + a1 * std::cos(3 * r) + a2 * r * r; };
    auto more = [=](double r) { return base(r) + b0 + b1 * r; };
    const auto u2 = linear_biharmonic_solve(5, base, 400, {1.0, -0.5});
    const auto u1 = linear_biharmonic_solve(5, more, 400, {1.0, -0.5});
    for (std::size_t i = 0; i < u1.size(); ++i) CHECK(u1.u[i] >= u2.u[i] - 1e-14);
  }
}

TEST_CASE("iteration from between the two solutions reaches the round factor") {
  const auto tmpl = ProblemSpec::fourth_order(5);
  const auto b = branch_with_upper(tmpl);
  const auto lo = minimal_solution(tmpl, kQ5, b);
  const auto hi = upper_solution(tmpl, kQ5, b);
  const auto start = blend_profiles(lo.profile, hi.profile, 0.5);
  auto [s, log] = iterate_minimal(tmpl.with_lambda(kQ5), start);
  CHECK(log.converged);
  CHECK_FALSE(log.monotonicity_broken);
  for (double v : log.monotone_violations) CHECK(v <= 1e-10);
  for (const auto& it : log.iterates) CHECK(barrier_check(it, 5).pass);
  const auto cf = round_factor(5);
  CHECK(distance_to(s.profile, [&](double r) { return closed_form_eval(cf, r).value; }) <= 1e-6);
  CHECK(log.sup_norm_deltas.size() <= 500);
}

TEST_CASE("the round factor is a fixed point") {
  const auto cf = round_factor(5);
  RadialProfile us;
  us.n = 5;
  us.r = uniform_grid(1000);
  for (double r : us.r) {
    const auto v = closed_form_eval(cf, r);
    us.u.push_back(v.value);
    us.du.push_back(v.d1);
    us.lap.push_back(v.lap);
    us.dlap.push_back(v.dlap);
  }
  auto [s, log] = iterate_minimal(ProblemSpec::fourth_order(5, kQ5), us);
  REQUIRE_FALSE(log.sup_norm_deltas.empty());
  CHECK(log.sup_norm_deltas.front() <= 1e-8);
}

TEST_CASE("n = 4 iteration converges to ln(2/(1+r^2))") {
  const auto tmpl = ProblemSpec::fourth_order(4);
  const auto b = branch_with_upper(tmpl);
  const auto lo = minimal_solution(tmpl, 6.0, b);
  const auto hi = upper_solution(tmpl, 6.0, b);
  auto [s, log] = iterate_minimal(tmpl.with_lambda(6.0), blend_profiles(lo.profile, hi.profile, 0.5));
  CHECK(log.converged);
  CHECK(distance_to(s.profile, [](double r) { return std::log(2.0 / (1 + r * r)); }) <= 1e-6);
  CHECK(sup_distance(s.profile.u, lo.profile.u) <= 1e-6);
}

TEST_CASE("iteration rejects second-order problems") {
  RadialProfile u;
  u.n = 3;
  u.r = uniform_grid(10);
  u.u.assign(11, 0.0);
  CHECK_THROWS_AS(iterate_minimal(ProblemSpec::second_order(3, 0.5), u), Error);
}
