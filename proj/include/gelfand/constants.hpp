#pragma once

#include <optional>
#include <span>
#include <utility>

namespace gelfand {

/// Closed-form constants attached to dimension n. Entries that have no
/// meaning at the given n are left empty.
struct ReferenceConstants {
  int n = 0;
  std::optional<double> q_rhs;            // RHS constant of the round fourth-order equation
  std::optional<double> q0;               // Q-curvature of the round n-sphere
  std::optional<double> a1, a2;           // admissible Δu(1) values at λ = q_rhs
  double lambda_star_2nd = 0.0;           // second-order extremal parameter
  std::optional<double> lambda_conj_4th;  // conjectured fourth-order extremal parameter
  std::optional<std::pair<double, double>> barrier_coeffs;  // (n/4, (n-4)/4)
};

/// Throws InvalidArgument for n <= 1.
ReferenceConstants reference_constants(int n);

enum class ClosedFormKind {
  SecondOrderHemisphere,       // 1+u = (2/(1+r²))^{(n-2)/2}, or ln(2/(1+r²)) for n = 2
  FourthOrderHemisphere_n5plus,// (2/(1+r²))^{(n-4)/2}
  FourthOrderHemisphere_n4,    // ln(2/(1+r²))
  FourthOrder_n3,              // sqrt((1+r²)/2)
  CylinderLogCosh,             // -ln cosh t
  LambdaZeroParabola,          // λ = 0 clamped solution, n/4 - (n-4)r²/4 for n >= 5
};

const char* to_string(ClosedFormKind kind);

struct ClosedForm {
  ClosedFormKind kind;
  int n;

  bool cylindrical() const { return kind == ClosedFormKind::CylinderLogCosh; }
};

/// Value and derivatives of a closed form at one abscissa. For radial forms
/// d1..d4 are r-derivatives and lap/dlap/bilap are Δu, (Δu)', Δ²u; for the
/// cylinder form d1..d4 are t-derivatives, `paneitz` is w'''' - 4w'' and the
/// Laplacian fields are zero. The difference w'''' - 4w'' cancels to about
/// e^{-2t} relative, so it is formed in 50-digit arithmetic.
struct ClosedFormValue {
  double value = 0.0;
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  double lap = 0.0, dlap = 0.0, bilap = 0.0;
  double paneitz = 0.0;
};

/// Analytic evaluation (exact Taylor-jet differentiation of the formula).
/// Throws DomainError outside [0, 1] (radial) or [0, inf) (cylindrical).
ClosedFormValue closed_form_eval(const ClosedForm& cf, double x);

/// sup over the grid of |LHS - RHS| of the equation the form solves with
/// equality:
///   SecondOrderHemisphere          Δu + λ* g(u)
///   FourthOrderHemisphere_n5plus   Δ²u - Q u^{(n+4)/(n-4)}
///   FourthOrderHemisphere_n4       Δ²u - 6 e^{4u}
///   FourthOrder_n3                 Δ²u + (15/16) u^{-7}
///   LambdaZeroParabola             Δ²u
///   CylinderLogCosh                w'''' - 4 w'' - 6 e^{4w}
/// The `n` argument overrides cf.n; evaluated in extended precision.
double closed_form_residual(const ClosedForm& cf, int n, std::span<const double> grid);

/// The round (hemisphere) factor for the fourth-order conformal problem in
/// dimension n (n = 3, 4 or >= 5).
ClosedForm round_factor(int n);

}  // namespace gelfand
