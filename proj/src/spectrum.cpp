#include "gelfand/spectrum.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/parallel.hpp"

namespace gelfand {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

std::vector<double> dual_volumes(int n, int N) {
  const double h = 1.0 / N;
  std::vector<double> V(std::size_t(N) + 1);
  for (int i = 0; i <= N; ++i) {
    const double lo = std::max(0.0, (i - 0.5) * h), hi = std::min(1.0, (i + 0.5) * h);
    V[std::size_t(i)] = (std::pow(hi, n) - std::pow(lo, n)) / n;
  }
  return V;
}

double flux(int n, int N, int i) {  // coefficient between nodes i and i+1
  const double h = 1.0 / N;
  return std::pow((i + 0.5) * h, n - 1) / h;
}

std::vector<double> potential_on_grid(const ProblemSpec& p, const std::vector<double>& center, int N) {
  const auto g = uniform_grid(N);
  const Trajectory t = integrate_radial_ivp(p, center, 1e-12, g);
  std::vector<double> c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) c[i] = p.lambda * p.df(t.states[i].u);
  return c;
}

// Quotient evaluated in factored form (sums of squares) to avoid the
// cancellation in xᵀAx for the ill-conditioned fourth-order matrix.
double rayleigh(const LinearizedOperator& op, const Vec& x) {
  const Vec gx = op.G * x;
  double num = gx.dot(op.W.cwiseProduct(gx)), den = 0.0;
  for (int i = 0; i < op.N; ++i) {
    num -= op.mass(i) * op.potential[std::size_t(i)] * x(i) * x(i);
    den += op.mass(i) * x(i) * x(i);
  }
  return num / den;
}

}  // namespace

LinearizedOperator assemble_operator(int order, int n, const std::vector<double>& potential) {
  if (order != 2 && order != 4) fail(ErrorCode::InvalidArgument, "order must be 2 or 4");
  if (potential.size() < 5) fail(ErrorCode::InvalidArgument, "grid too small");
  const int N = int(potential.size()) - 1;
  LinearizedOperator op;
  op.n = n;
  op.order = order;
  op.N = N;
  op.r = uniform_grid(N);
  op.potential = potential;
  const auto V = dual_volumes(n, N);
  op.mass.resize(N);
  for (int i = 0; i < N; ++i) op.mass(i) = V[std::size_t(i)];

  std::vector<Eigen::Triplet<double>> tg;
  if (order == 2) {
    // Edge i joins nodes i and i+1; φ_N = 0.
    op.G.resize(N, N);
    op.W.resize(N);
    for (int i = 0; i < N; ++i) {
      op.W(i) = flux(n, N, i);
      tg.emplace_back(i, i, -1.0);
      if (i + 1 < N) tg.emplace_back(i, i + 1, 1.0);
    }
  } else {
    op.G.resize(N + 1, N);
    op.W.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
      const double vi = V[std::size_t(i)];
      op.W(i) = vi;
      if (i < N) {
        const double ap = flux(n, N, i);
        tg.emplace_back(i, i, -ap / vi);
        if (i + 1 < N) tg.emplace_back(i, i + 1, ap / vi);
      }
      if (i > 0) {
        const double am = flux(n, N, i - 1);
        tg.emplace_back(i, i - 1, am / vi);
        if (i < N) tg.emplace_back(i, i, -am / vi);
      }
    }
  }
  op.G.setFromTriplets(tg.begin(), tg.end());
  SpMat GtWG = SpMat(op.G.transpose()) * op.W.asDiagonal() * op.G;
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < GtWG.outerSize(); ++k)
    for (SpMat::InnerIterator it(GtWG, k); it; ++it) trip.emplace_back(int(it.row()), int(it.col()), it.value());
  for (int i = 0; i < N; ++i) trip.emplace_back(i, i, -V[std::size_t(i)] * potential[std::size_t(i)]);
  op.A.resize(N, N);
  op.A.setFromTriplets(trip.begin(), trip.end());
  op.A.makeCompressed();
  return op;
}

LinearizedOperator assemble_linearized(const ProblemSpec& p, const std::vector<double>& center, int grid_size) {
  p.validate();
  return assemble_operator(p.order, p.n, potential_on_grid(p, center, grid_size));
}

SpectrumResult smallest_eigenpair(const LinearizedOperator& op) {
  const SpMat& A = op.A;
  const Vec& M = op.mass;
  const int N = op.N;
  const double cmax = *std::max_element(op.potential.begin(), op.potential.end());

  // Phase 1: shift strictly below the spectrum, so A - σM is SPD.
  const double sigma1 = -std::max(cmax, 0.0) - 1.0;
  SpMat S = A;
  for (int i = 0; i < N; ++i) S.coeffRef(i, i) -= sigma1 * M(i);
  Eigen::SimplicialLDLT<SpMat> ldlt(S);
  if (ldlt.info() != Eigen::Success) fail(ErrorCode::SingularShift, "factorization failed below the spectrum");

  Vec x = Vec::Ones(N);
  x /= std::sqrt(x.dot(M.cwiseProduct(x)));
  double mu = rayleigh(op, x);
  int iters = 0;
  for (; iters < 2000; ++iters) {
    Vec y = ldlt.solve(M.cwiseProduct(x));
    y /= std::sqrt(y.dot(M.cwiseProduct(y)));
    const double mu_new = rayleigh(op, y);
    const double change = std::fabs(mu_new - mu);
    x = y;
    mu = mu_new;
    if (change <= 1e-6 * (1.0 + std::fabs(mu))) break;
  }

  // Phase 2: fixed shift just below the current estimate.
  double sigma2 = mu - 1e-2 * (1.0 + std::fabs(mu));
  for (int attempt = 0;; ++attempt) {
    SpMat S2 = A;
    for (int i = 0; i < N; ++i) S2.coeffRef(i, i) -= sigma2 * M(i);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(S2);
    if (lu.info() == Eigen::Success) {
      bool ok = true;
      for (int k = 0; k < 60; ++k, ++iters) {
        Vec y = lu.solve(M.cwiseProduct(x));
        if (!y.allFinite()) {
          ok = false;
          break;
        }
        y /= std::sqrt(y.dot(M.cwiseProduct(y)));
        if (y.dot(M.cwiseProduct(x)) < 0) y = -y;
        const double mu_new = rayleigh(op, y);
        const double dmu = std::fabs(mu_new - mu);
        const double dx = (y - x).cwiseAbs().maxCoeff();
        x = y;
        mu = mu_new;
        if (dmu <= 1e-11 * (1.0 + std::fabs(mu)) || dx <= 1e-9 * x.cwiseAbs().maxCoeff()) break;
      }
      if (ok) break;
    }
    if (attempt >= 5) fail(ErrorCode::SingularShift, "no usable shift near the smallest eigenvalue");
    sigma2 -= 1e-3 * (1.0 + std::fabs(mu)) * (attempt + 1);
  }

  SpectrumResult res;
  res.mu1 = mu;
  res.grid_size = N;
  res.iterations = iters;
  // Sign convention: positive at the centre (or at the largest entry).
  Eigen::Index imax;
  x.cwiseAbs().maxCoeff(&imax);
  if ((std::fabs(x(0)) > 1e-12 ? x(0) : x(imax)) < 0) x = -x;
  RadialProfile& ep = res.eigenprofile;
  ep.n = op.n;
  ep.r = op.r;
  ep.u.assign(std::size_t(N) + 1, 0.0);
  for (int i = 0; i < N; ++i) ep.u[std::size_t(i)] = x(i);
  const double h = 1.0 / N;
  ep.du.assign(std::size_t(N) + 1, 0.0);
  for (int i = 1; i < N; ++i) ep.du[std::size_t(i)] = (ep.u[std::size_t(i) + 1] - ep.u[std::size_t(i) - 1]) / (2 * h);
  ep.lap.assign(std::size_t(N) + 1, 0.0);
  if (op.order == 4) {
    const Vec lap = op.G * x;
    for (int i = 0; i <= N; ++i) ep.lap[std::size_t(i)] = lap(i);
  }
  ep.dlap.assign(std::size_t(N) + 1, 0.0);
  const double scale = 1e-8 * x.cwiseAbs().maxCoeff();
  int sign = 0;
  for (int i = 0; i < N; ++i) {
    const double v = x(i);
    if (std::fabs(v) <= scale) continue;
    const int sg = v > 0 ? 1 : -1;
    if (sign != 0 && sg != sign) ++res.sign_changes;
    sign = sg;
  }
  return res;
}

SpectrumResult mu1(const ProblemSpec& p, const RadialSolution& s, int grid_size) {
  if (grid_size < 200) fail(ErrorCode::InvalidArgument, "grid_size must be >= 200");
  const ProblemSpec q = p.with_lambda(s.lambda);
  SpectrumResult fine = smallest_eigenpair(assemble_linearized(q, s.shooting_params, grid_size));
  const SpectrumResult coarse = smallest_eigenpair(assemble_linearized(q, s.shooting_params, grid_size / 2));
  fine.mu1_coarse = coarse.mu1;
  fine.discretization_error_estimate = std::fabs(fine.mu1 - coarse.mu1) / 3.0;
  return fine;
}

BranchSpectrum mu1_along_branch(const Branch& b, int count, int grid_size) {
  BranchSpectrum out;
  const std::size_t m = b.points.size();
  if (m == 0) return out;
  std::set<std::size_t> idx;
  const int c = std::max(count, 2);
  for (int k = 0; k < c; ++k) idx.insert(std::size_t(std::llround(double(k) * double(m - 1) / (c - 1))));
  if (b.fold_index) {
    const std::size_t f = *b.fold_index;
    for (std::size_t j = (f >= 2 ? f - 2 : 0); j <= std::min(m - 1, f + 2); ++j) idx.insert(j);
  }
  const std::vector<std::size_t> order(idx.begin(), idx.end());
  auto values = parallel_map(order.size(), [&](std::size_t k) {
    const auto& pt = b.points[order[k]];
    const ProblemSpec p = b.problem.with_lambda(pt.lambda);
    return smallest_eigenpair(assemble_linearized(p, pt.params, grid_size)).mu1;
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& pt = b.points[order[k]];
    const bool minimal = pt.tangent.empty() || pt.tangent.back() > 0.0;
    out.samples.push_back({pt.s, pt.lambda, values[k], minimal ? "minimal" : "upper"});
  }
  for (std::size_t k = 0; k + 1 < out.samples.size(); ++k) {
    if (!(out.samples[k].mu1 > 0.0 && out.samples[k + 1].mu1 <= 0.0)) continue;
    // Illinois iteration on μ₁(σ) between the bracketing samples, with every
    // trial point Newton-corrected onto the branch.
    const std::size_t i0 = order[k];
    const double span = out.samples[k + 1].s - out.samples[k].s;
    auto mu_at = [&](double sigma, double& lam, double& s) {
      const BranchPoint bp = branch_point_along(b, i0, sigma);
      lam = bp.lambda;
      s = bp.s;
      return smallest_eigenpair(assemble_linearized(b.problem.with_lambda(bp.lambda), bp.params, grid_size)).mu1;
    };
    double sa = 0.0, fa = out.samples[k].mu1;
    double sb = span, fb = out.samples[k + 1].mu1;
    double lam = out.samples[k].lambda, s_here = out.samples[k].s;
    int side = 0;
    try {
      for (int it = 0; it < 60; ++it) {
        double sm = (sa * fb - sb * fa) / (fb - fa);
        if (!(sm > sa && sm < sb)) sm = 0.5 * (sa + sb);
        const double fm = mu_at(sm, lam, s_here);
        if ((fm > 0.0) == (fa > 0.0)) {
          sa = sm;
          fa = fm;
          if (side == -1) fb *= 0.5;
          side = -1;
        } else {
          sb = sm;
          fb = fm;
          if (side == 1) fa *= 0.5;
          side = 1;
        }
        if (std::fabs(fm) <= 1e-9 * (1.0 + std::fabs(out.samples.front().mu1)) || sb - sa <= 1e-12 * (1.0 + span)) break;
      }
    } catch (const Error&) {
      // Fall back to linear interpolation between the samples.
      const auto& a = out.samples[k];
      const auto& z = out.samples[k + 1];
      s_here = a.s + a.mu1 * (z.s - a.s) / (a.mu1 - z.mu1);
      lam = a.lambda + (s_here - a.s) / (z.s - a.s) * (z.lambda - a.lambda);
    }
    out.s_at_zero = s_here;
    out.lambda_at_zero = lam;
    break;
  }
  return out;
}

}  // namespace gelfand
