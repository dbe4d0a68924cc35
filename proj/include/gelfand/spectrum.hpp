#pragma once

#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "gelfand/continuation.hpp"

namespace gelfand {

/// Radial discretization of L φ = (Δ² - c) φ (order 4, φ(1) = φ'(1) = 0) or
/// (-Δ - c) φ (order 2, φ(1) = 0) on r_i = i/N, unknowns φ_0..φ_{N-1}.
///
/// Vertex-centred finite volumes: dual-cell volumes V_i = ∫ r^{n-1} over
/// [r_{i-1/2}, r_{i+1/2}] ∩ [0, 1], fluxes r_{i+1/2}^{n-1}(φ_{i+1} - φ_i)/h,
/// no flux through r = 0. For order 4 the discrete Laplacian B also has no
/// flux through r = 1 (this encodes φ'(1) = 0) and A = Bᵀ diag(V) B; for
/// order 2, A is the Dirichlet stiffness matrix. Both are symmetric.
struct LinearizedOperator {
  int n = 0;
  int order = 4;
  int N = 0;
  std::vector<double> r;          // r_0..r_N
  std::vector<double> potential;  // c(r_i), i = 0..N
  Eigen::SparseMatrix<double> A;  // N x N
  Eigen::VectorXd mass;           // V_0..V_{N-1}
  // A = Gᵀ diag(W) G - diag(mass·c): G is the discrete Laplacian (order 4,
  // (N+1) x N) or the edge difference operator (order 2, N x N).
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd W;
};

/// c(r) = λ f'(u(r)) for the problem's nonlinearity, with u integrated from
/// the given centre values on the operator grid.
LinearizedOperator assemble_linearized(const ProblemSpec& p, const std::vector<double>& center, int grid_size);
/// Same with an explicit potential on r_i = i/N (size N+1).
LinearizedOperator assemble_operator(int order, int n, const std::vector<double>& potential);

struct SpectrumResult {
  double mu1 = 0.0;
  double mu1_coarse = 0.0;  // same discretization at N/2
  RadialProfile eigenprofile;  // unit discrete L² norm, positive at the centre
  int grid_size = 0;
  double discretization_error_estimate = 0.0;  // Richardson, order 2
  int sign_changes = 0;  // interior sign changes of the eigenprofile
  int iterations = 0;
  std::string label = "radial mu1";
};

/// Smallest eigenvalue of L φ = μ M φ, M = diag(V), by shift-inverted
/// iteration: first with a shift below the spectrum (LDLT), then with a
/// shift at the Rayleigh quotient (LU). Throws SingularShift if no usable
/// shift is found after perturbation.
SpectrumResult smallest_eigenpair(const LinearizedOperator& op);

/// μ₁ of the linearized operator at a solution; grid_size >= 200.
SpectrumResult mu1(const ProblemSpec& p, const RadialSolution& s, int grid_size = 800);

struct SpectrumSample {
  double s = 0.0;
  double lambda = 0.0;
  double mu1 = 0.0;
  std::string segment;  // "minimal" or "upper"
};

struct BranchSpectrum {
  std::vector<SpectrumSample> samples;
  std::optional<double> lambda_at_zero;  // λ where μ₁ interpolates through 0
  std::optional<double> s_at_zero;
};

/// μ₁ at `count` branch points spread along the branch plus the points next
/// to the fold. The zero crossing is located by linear interpolation of μ₁
/// in arclength and mapped to λ through the quadratic through the three
/// nearest branch points.
BranchSpectrum mu1_along_branch(const Branch& b, int count = 24, int grid_size = 400);

}  // namespace gelfand
