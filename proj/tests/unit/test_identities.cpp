#include <cmath>

#include "doctest.h"
#include "gelfand/constants.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/identities.hpp"
#include "gelfand/shooting.hpp"

using namespace gelfand;

namespace {

const double kQ5 = 105.0 / 16;

RadialSolution round_solution(int n) {
  const auto c = closed_form_eval(round_factor(n), 0.0);
  const std::vector<double> center{c.value, c.lap};
  return solve_bvp(ProblemSpec::fourth_order(n, *reference_constants(n).q_rhs), center, 1e-12);
}

CylProfile log_cosh_profile(double T) {
  std::vector<double> t, v, d1, d2, d3;
  for (double x : cylinder_samples(T)) {
    const auto e = closed_form_eval({ClosedFormKind::CylinderLogCosh, 4}, x);
    t.push_back(x);
    v.push_back(e.value);
    d1.push_back(e.d1);
    d2.push_back(e.d2);
    d3.push_back(e.d3);
  }
  return make_cyl_profile(6.0, t, v, d1, d2, d3);
}

}  // namespace

TEST_CASE("boundary identity holds for the round factor") {
  const auto s = round_solution(5);
  const auto r = pohozaev_boundary_residual(s, 5, kQ5, 1e-8);
  CHECK(r.pass);
  CHECK(r.residual <= 1e-8);
  CHECK(pohozaev_interior(s.profile, 5, kQ5).pass);
}

TEST_CASE("boundary identity value for a synthetic boundary Laplacian") {
  CHECK(std::fabs(pohozaev_boundary_value(5, kQ5, 1.0, -0.5, -1.0)) == doctest::Approx(0.09375).epsilon(1e-15));
}

TEST_CASE("boundary identity is rejected for the wrong problem") {
  const auto c = closed_form_eval(round_factor(4), 0.0);
  const std::vector<double> center{c.value, c.lap};
  const auto s = solve_bvp(ProblemSpec::fourth_order(4, 6.0), center, 1e-10);
  try {
    pohozaev_boundary_residual(s, 4, 6.0);
    FAIL("expected WrongProblem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongProblem);
  }
}

TEST_CASE("roots of the boundary quadratic") {
  auto [a, b] = pohozaev_roots(5, kQ5);
  if (a > b) std::swap(a, b);
  CHECK(a == doctest::Approx(-1.75).epsilon(1e-14));
  CHECK(b == doctest::Approx(-0.75).epsilon(1e-14));
  auto [z0, z1] = pohozaev_roots(5, 0.0);
  if (z0 > z1) std::swap(z0, z1);
  CHECK(z0 == doctest::Approx(-2.5).epsilon(1e-15));
  CHECK(std::fabs(z1) <= 1e-15);
  const auto [d0, d1] = pohozaev_roots(5, 125.0 / 16);
  CHECK(d0 == doctest::Approx(d1).epsilon(1e-7));
  try {
    pohozaev_roots(5, 8.0);
    FAIL("expected NoRealRoots");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoRealRoots);
  }
}

TEST_CASE("discriminant vanishes at n^3 (n-4) / 16") {
  for (int n = 5; n <= 8; ++n) {
    const double l = double(n) * n * n * (n - 4) / 16.0;
    CHECK(std::fabs(pohozaev_discriminant(n, l)) <= 1e-12);
    CHECK(pohozaev_discriminant(n, l * (1 + 1e-9)) < 0.0);
    CHECK_THROWS_AS(pohozaev_roots(n, l * (1 + 1e-6)), Error);
  }
}

TEST_CASE("cylinder boundary roots") {
  const auto [a, b] = cylinder_boundary_roots(6.0);
  CHECK(std::min(a, b) == doctest::Approx(-3.0));
  CHECK(std::max(a, b) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cylinder_boundary_roots(8.5), Error);
}

TEST_CASE("first integral is conserved along -ln cosh") {
  const auto r = first_integral_series(log_cosh_profile(20.0), 6.0);
  CHECK(r.value == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(r.residual <= 1e-8);
  CHECK(r.pass);
  CHECK(r.details.back().second == doctest::Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("first integral of the zero profile") {
  const auto t = cylinder_samples(5.0);
  const std::vector<double> z(t.size(), 0.0);
  const auto r = first_integral_series(make_cyl_profile(0.0, t, z, z, z, z), 0.0);
  CHECK(r.value == 0.0);
  CHECK(r.residual == 0.0);
}

TEST_CASE("first integral does not increase along supersolution trajectories") {
  struct Case {
    double lambda, forcing, v2, v3;
  };
  for (const auto& c : {Case{6, 7, -1, 0}, Case{6, 8, -1.5, 1}, Case{1, 3, -0.5, -0.2}, Case{0, 6, -1, 0}, Case{5, 6, -1, 0}}) {
    const auto r = supersolution_first_integral(c.lambda, c.forcing, c.v2, c.v3, 10.0);
    CHECK(r.pass);
    CHECK(r.details.size() > 50);
  }
  CHECK_THROWS_AS(supersolution_first_integral(6, 5, -1, 0, 10.0), Error);
}

TEST_CASE("barrier margins") {
  const auto s = round_solution(5);
  const auto r = barrier_check(s, 5);
  CHECK(r.pass);
  CHECK(r.value >= -1e-12);
  RadialProfile par;
  par.n = 5;
  par.r = uniform_grid(100);
  for (double x : par.r) par.u.push_back(1.25 - 0.25 * x * x);
  const auto z = barrier_check(par, 5);
  CHECK(std::fabs(z.value) <= 1e-15);
  for (const auto& [x, m] : z.details) CHECK(std::fabs(m) <= 1e-15);
}

TEST_CASE("Jensen gap of the convex nonlinearity") {
  const auto p = ProblemSpec::fourth_order(5);
  const std::vector<double> a{1.0}, b{2.0};
  const auto r = convexity_gap(a, b, 0.5, p);
  CHECK(r.value == doctest::Approx(38.443359375 - 256.5).epsilon(1e-14));
  CHECK(r.pass);
  const std::vector<double> u{0.5, 1.0, 1.5}, v{2.0, 1.2, 0.7};
  for (double t : {0.0, 1.0}) CHECK(std::fabs(convexity_gap(u, v, t, p).value) <= 1e-13);
  CHECK(convexity_gap(u, u, 0.3, p).value <= 1e-13);
}
