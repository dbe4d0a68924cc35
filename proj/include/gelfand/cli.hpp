#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

namespace gelfand {

/// Parameters of one gelfand_atlas invocation. Serialized into every JSON
/// report so a result names the run that produced it.
struct RunConfig {
  std::string command;
  int order = 2;
  int dim = 2;
  std::string g;  // empty: the conformal nonlinearity for (order, dim)
  double lambda = 0.0;
  bool has_lambda = false;
  double tol = 1e-10;         // Newton / BVP residual
  double refine_tol = 1e-3;   // reported λ* uncertainty
  int grid = 800;             // spectral grid size
  int samples = 24;           // spectrum samples along a branch
  int after_fold = -1;        // branch points kept past the fold (-1: command default)
  int mu1_every = 0;          // branch: sample μ₁ at every k-th point (0: off)
  double seed_span = 4.0;     // u(0) scan range above the λ = 0 centre value
  double fraction = 0.9;      // iterate: λ as a fraction of the fold
  double start_weight = 0.5;  // iterate: start = t·minimal + (1-t)·upper
  std::string check = "pohozaev-roots";
  std::string metric = "round";
  double scale = 1.05;
  double horizon = 20.0;
  std::string out_dir = ".";
  std::string csv, svg, json_out;  // explicit output paths (empty: defaults)

  /// Throws InvalidArgument.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Entry point shared by the executable and the tests. Returns the process
/// exit status: 0 on success, 1 for usage errors, 2 for numerical failures
/// (reported on `err` as "error: <ErrorName>: ...").
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gelfand
