#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circlops/differential_operator.hpp"
#include "circlops/pseudo_differential.hpp"
#include "circlops/random.hpp"
#include "circlops/serialization.hpp"

namespace circlops {

struct RunConfig {
  int n = 3;
  GroupClass group = GroupClass::PSL;
  int band = 16;
  int steps = 4096;
  double membership_tol = kMembershipTolerance;
  double integration_tol = 1e-6;
  double certification_tol = 1e-6;  // the --tol flag
  std::uint64_t seed = 0;
  double amplitude = 1.0;
  int instances = 100;
};

/// Throws InvalidInput: n ∈ [2, 4], band ≥ 1, steps a power of two ≥ 256,
/// tolerances and amplitude positive, instances ≥ 1, parity fits the group.
void validate(const RunConfig& config);

/// Overlays the keys of a JSON object on `base`. Keys mirror the CLI flags:
/// n, group, band, steps, tol, seed, amplitude, instances, membership_tol,
/// integration_tol. Unknown keys and wrong types throw InvalidInput.
RunConfig config_from_json(const Json& j, RunConfig base = {});
Json to_json(const RunConfig& config);

/// Independent, reproducible stream for (seed, instance, stream).
Rng instance_rng(std::uint64_t seed, std::uint64_t instance, std::uint64_t stream = 0);

/// Monic order-n operator with random band-limited coefficients a₀..a_{n−2},
/// a_{n−1} = 0; PSp/PSO inputs are projected by (L ± L*)/2 and re-monicized.
/// Instance 0 is the operator of the bare config. Amplitude 0 gives Dⁿ.
DifferentialOperator generate_operator(const RunConfig& config, int instance = 0);

/// Σ_{k=1}^{n} x_k D^{−k} with random coefficients.
PseudoDifferentialSymbol random_symbol(Rng& rng, int n, int band, double amplitude);

struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// pass iff residual ≤ tol (NaN fails).
Check make_check(std::string name, double residual, double tol);
/// pass iff value ≥ threshold; reported with residual = value, tol = threshold.
Check make_lower_bound_check(std::string name, double value, double threshold);

struct Report {
  std::string suite;
  RunConfig config;
  std::vector<Check> checks;

  bool pass() const;
  Json to_json() const;
};

const std::vector<std::string>& suite_names();
/// Runs the invariant battery of one module at the config scale; throws
/// InvalidInput for unknown names or an invalid config.
Report run_suite(std::string_view name, const RunConfig& config);

}  // namespace circlops
