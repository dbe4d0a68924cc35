#include "gelfand/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

bool is_cylinder(const RadialConformalMetric& m) { return m.representation == MetricRepresentation::CylinderFactor; }

void resize_all(RadialConformalMetric& m, std::size_t k) {
  for (auto* v : {&m.x, &m.u, &m.d1, &m.d2, &m.d3, &m.d4}) v->resize(k);
  if (!is_cylinder(m)) {
    m.lap.resize(k);
    m.bilap.resize(k);
  }
}

void require_positive(const RadialConformalMetric& m) {
  if (is_cylinder(m) || m.n == 4) return;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m.u[i] > 0.0)) {
      std::ostringstream os;
      os << "conformal factor u = " << m.u[i] << " at r = " << m.x[i];
      fail(ErrorCode::NonpositiveFactor, os.str());
    }
  }
}

}  // namespace

RadialConformalMetric RadialConformalMetric::from_closed_form(const ClosedForm& cf, std::span<const double> grid) {
  RadialConformalMetric m;
  m.representation = cf.cylindrical() ? MetricRepresentation::CylinderFactor : MetricRepresentation::BallFactor;
  m.n = cf.cylindrical() ? 4 : cf.n;
  resize_all(m, grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = closed_form_eval(cf, grid[i]);
    m.x[i] = grid[i];
    m.u[i] = v.value;
    m.d1[i] = v.d1;
    m.d2[i] = v.d2;
    m.d3[i] = v.d3;
    m.d4[i] = v.d4;
    if (cf.cylindrical()) {
      m.paneitz.push_back(v.paneitz);
    } else {
      m.lap[i] = v.lap;
      m.bilap[i] = v.bilap;
    }
  }
  return m;
}

RadialConformalMetric RadialConformalMetric::from_solution(const RadialSolution& s) {
  const auto& p = s.problem;
  if (p.order != 4) fail(ErrorCode::InvalidArgument, "conformal factors come from fourth-order solutions");
  const auto& pr = s.profile;
  RadialConformalMetric m;
  m.representation = MetricRepresentation::BallFactor;
  m.n = p.n;
  resize_all(m, pr.size());
  const int n = p.n;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const double r = pr.r[i];
    m.x[i] = r;
    m.u[i] = pr.u[i];
    m.d1[i] = pr.du[i];
    m.lap[i] = pr.lap[i];
    m.bilap[i] = s.lambda * p.f(pr.u[i]);
    if (r == 0.0) {
      m.d2[i] = pr.lap[i] / n;
      m.d3[i] = 0.0;
      m.d4[i] = 3.0 * m.bilap[i] / (n * (n + 2.0));
    } else {
      const double u1 = pr.du[i];
      const double u2 = pr.lap[i] - (n - 1) * u1 / r;
      const double u3 = pr.dlap[i] - (n - 1) * (u2 / r - u1 / (r * r));
      const double w2 = m.bilap[i] - (n - 1) * pr.dlap[i] / r;  // (Δu)''
      m.d2[i] = u2;
      m.d3[i] = u3;
      m.d4[i] = w2 - (n - 1) * (u3 / r - 2 * u2 / (r * r) + 2 * u1 / (r * r * r));
    }
  }
  return m;
}

RadialConformalMetric RadialConformalMetric::from_cylinder(const CylProfile& v) {
  RadialConformalMetric m;
  m.representation = MetricRepresentation::CylinderFactor;
  m.n = 4;
  m.x = v.t;
  m.u = v.v;
  m.d1 = v.dv;
  m.d2 = v.d2v;
  m.d3 = v.d3v;
  m.d4 = v.d4v;
  m.paneitz.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m.paneitz[i] = v.lambda * std::exp(4.0 * v.v[i]);
  return m;
}

RadialConformalMetric RadialConformalMetric::round(int n, std::span<const double> grid, bool cylinder) {
  if (cylinder) return from_closed_form({ClosedFormKind::CylinderLogCosh, 4}, grid);
  return from_closed_form(round_factor(n), grid);
}

RadialConformalMetric RadialConformalMetric::scaled(double c) const {
  RadialConformalMetric m = *this;
  for (auto* v : {&m.u, &m.d1, &m.d2, &m.d3, &m.d4, &m.lap, &m.bilap, &m.paneitz})
    for (double& x : *v) x *= c;
  return m;
}

double derive_cylinder_product_q(double t) {
  const auto w = closed_form_eval({ClosedFormKind::CylinderLogCosh, 4}, t);
  const double q_round = *reference_constants(4).q0;
  return q_round * std::exp(4 * w.value) - w.paneitz;
}

std::vector<double> q_curvature(const RadialConformalMetric& m) {
  std::vector<double> q(m.size());
  if (is_cylinder(m)) {
    const bool exact = m.paneitz.size() == m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double p0 = exact ? m.paneitz[i] : m.d4[i] - 4 * m.d2[i];
      q[i] = std::exp(-4 * m.u[i]) * (p0 + cylinder_product_q);
    }
    return q;
  }
  require_positive(m);
  const int n = m.n;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (n == 4) q[i] = std::exp(-4 * m.u[i]) * m.bilap[i];
    else q[i] = 2.0 / (n - 4) * std::pow(m.u[i], -(n + 4.0) / (n - 4.0)) * m.bilap[i];
  }
  return q;
}

std::vector<double> scalar_curvature(const RadialConformalMetric& m) {
  std::vector<double> R(m.size());
  if (is_cylinder(m)) {
    for (std::size_t i = 0; i < m.size(); ++i)
      R[i] = 6 * std::exp(-2 * m.u[i]) * (1 - m.d2[i] - m.d1[i] * m.d1[i]);
    return R;
  }
  require_positive(m);
  const int n = m.n;
  if (n == 2) fail(ErrorCode::InvalidArgument, "scalar curvature law needs n != 2");
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double u = m.u[i], du = m.d1[i];
    if (n == 4) {
      R[i] = -6 * std::exp(-2 * u) * (m.lap[i] + du * du);
    } else {
      const double e = (n - 2.0) / (n - 4.0);
      const double dphi = e * std::pow(u, e - 1) * m.lap[i] + e * (e - 1) * std::pow(u, e - 2) * du * du;
      R[i] = -4.0 * (n - 1) / (n - 2.0) * dphi / std::pow(u, (n + 2.0) / (n - 4.0));
    }
  }
  return R;
}

TCurvature t_curvature_boundary(const RadialConformalMetric& m) {
  if (!is_cylinder(m)) fail(ErrorCode::InvalidArgument, "T-curvature needs the cylinder form");
  if (m.size() == 0 || m.x.front() != 0.0) fail(ErrorCode::DomainError, "profile must include t = 0");
  TCurvature t;
  t.normal_derivative_R = 6 * m.d3.front();
  t.value = t.normal_derivative_R / 12.0;
  t.integral = 2 * std::numbers::pi * std::numbers::pi * t.value;
  t.sign = t.value > 0 ? 1 : (t.value < 0 ? -1 : 0);
  return t;
}

RigidityReport rigidity_hypothesis_report(const RadialConformalMetric& m, double tol) {
  RigidityReport rep;
  const bool cyl = is_cylinder(m);
  const int n = m.n;
  if (m.size() == 0) fail(ErrorCode::InvalidArgument, "empty metric");
  if (!cyl && n < 3) fail(ErrorCode::InvalidArgument, "rigidity report needs n >= 3");
  const double q0 = *reference_constants(n).q0;

  auto add = [&](std::string name, double margin, bool equality) {
    Hypothesis h;
    h.name = std::move(name);
    h.margin = margin;
    h.pass = equality ? std::fabs(margin) <= tol : margin >= -tol;
    rep.hypotheses.push_back(h);
  };

  // Round comparison profile on the same abscissae.
  const ClosedForm ref = cyl ? ClosedForm{ClosedFormKind::CylinderLogCosh, 4} : round_factor(n);
  std::vector<double> ref_u(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) ref_u[i] = closed_form_eval(ref, m.x[i]).value;

  bool q_ok = true;
  double qmin = INFINITY;
  try {
    for (double q : q_curvature(m)) qmin = std::min(qmin, q - q0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonpositiveFactor) throw;
    q_ok = false;
  }
  add("Q_g >= Q0", q_ok ? qmin : -INFINITY, false);

  if (cyl) {
    if (m.x.front() != 0.0) fail(ErrorCode::DomainError, "cylinder profile must include t = 0");
    add("boundary metric: u(0) = 0", -std::fabs(m.u.front()), true);
    add("totally geodesic: u_t(0) = 0", -std::fabs(m.d1.front()), true);
    add("integral of T >= 0", t_curvature_boundary(m).integral, false);
  } else {
    if (m.x.back() != 1.0) fail(ErrorCode::DomainError, "ball profile must include r = 1");
    const auto b = closed_form_eval(ref, 1.0);
    add("boundary metric: u(1) = u_s(1)", -std::fabs(m.u.back() - b.value), true);
    add("totally geodesic: u'(1) = u_s'(1)", -std::fabs(m.d1.back() - b.d1), true);
    double rb = -INFINITY;
    try {
      rb = scalar_curvature(m).back() - n * (n - 1.0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonpositiveFactor) throw;
    }
    add("boundary R_g >= n(n-1)", rb, false);
  }
  rep.distance_to_round = sup_distance(m.u, ref_u);
  rep.all_pass = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(), [](const Hypothesis& h) { return h.pass; });
  rep.zero_margins = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(),
                                 [tol](const Hypothesis& h) { return std::fabs(h.margin) <= tol; });
  std::ostringstream os;
  if (rep.all_pass) os << "all hypotheses hold: expect the round metric (distance " << rep.distance_to_round << ")";
  else os << "hypotheses violated: rigidity does not apply";
  rep.verdict = os.str();
  return rep;
}

RadialConformalMetric ball_to_cylinder(const RadialConformalMetric& ball) {
  if (is_cylinder(ball) || ball.n != 4) fail(ErrorCode::InvalidArgument, "ball_to_cylinder needs an n = 4 ball factor");
  RadialConformalMetric c;
  c.representation = MetricRepresentation::CylinderFactor;
  c.n = 4;
  for (std::size_t k = ball.size(); k-- > 0;) {
    const double r = ball.x[k];
    if (!(r > 0.0)) continue;
    // a_j = r^j u^{(j)}; d/dt = -r d/dr gives v' = -a1 - 1, v'' = a1 + a2, ...
    const double a1 = r * ball.d1[k], a2 = r * r * ball.d2[k], a3 = r * r * r * ball.d3[k],
                 a4 = r * r * r * r * ball.d4[k];
    const double t = -std::log(r);
    c.x.push_back(t == 0.0 ? 0.0 : t);
    c.u.push_back(ball.u[k] - t);
    c.d1.push_back(-a1 - 1);
    c.d2.push_back(a1 + a2);
    c.d3.push_back(-a1 - 3 * a2 - a3);
    c.d4.push_back(a1 + 7 * a2 + 6 * a3 + a4);
  }
  return c;
}

RadialConformalMetric cylinder_to_ball(const RadialConformalMetric& cyl) {
  if (!is_cylinder(cyl)) fail(ErrorCode::InvalidArgument, "cylinder_to_ball needs a cylinder factor");
  RadialConformalMetric b;
  b.representation = MetricRepresentation::BallFactor;
  b.n = 4;
  for (std::size_t k = cyl.size(); k-- > 0;) {
    const double t = cyl.x[k];
    const double r = std::exp(-t);
    const double a1 = -(cyl.d1[k] + 1);
    const double a2 = cyl.d2[k] - a1;
    const double a3 = -cyl.d3[k] - a1 - 3 * a2;
    const double a4 = cyl.d4[k] - a1 - 7 * a2 - 6 * a3;
    const double u1 = a1 / r, u2 = a2 / (r * r), u3 = a3 / (r * r * r), u4 = a4 / (r * r * r * r);
    b.x.push_back(r);
    b.u.push_back(cyl.u[k] + t);
    b.d1.push_back(u1);
    b.d2.push_back(u2);
    b.d3.push_back(u3);
    b.d4.push_back(u4);
    b.lap.push_back(u2 + 3 * u1 / r);
    b.bilap.push_back(u4 + 6 * u3 / r + 3 * u2 / (r * r) - 3 * u1 / (r * r * r));
  }
  return b;
}

}  // namespace gelfand
