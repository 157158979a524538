#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <json.hpp>
#include <optional>

#include "circlops/differential_operator.hpp"
#include "circlops/drinfeld_sokolov.hpp"
#include "circlops/projective_curve.hpp"
#include "circlops/pseudo_differential.hpp"

namespace circlops {

using Json = nlohmann::json;

/// [mean, c₁, s₁, …, c_N, s_N].
Json to_json(const PeriodicFunction& f);
PeriodicFunction periodic_function_from_json(const Json& j);

/// {"n", "group", "coeffs"}: a₀ upward, a_n omitted when monic. `group` is
/// "none" unless given.
Json to_json(const DifferentialOperator& op, std::optional<GroupClass> group = std::nullopt);
/// Monic when coeffs has n entries, general when it has n+1.
DifferentialOperator operator_from_json(const Json& j);

/// {"orders": {"-1": […], …}}.
Json to_json(const PseudoDifferentialSymbol& s);
PseudoDifferentialSymbol symbol_from_json(const Json& j);

/// {"n", "entries"}, row-major.
Json to_json(const MatrixConnection& a);
MatrixConnection connection_from_json(const Json& j);

/// Array of rows; complex vectors as [re, im] pairs.
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Eigen::VectorXcd& v);
Eigen::MatrixXd matrix_from_json(const Json& j);

/// Writes `csv` (t, Γ₁..Γₙ per grid point) and `csv` with extension .json
/// ({n, monodromy, winding?}; winding only when n = 2). Throws
/// std::ios_base::failure on I/O errors.
void export_curve(const ProjectiveCurve& curve, const std::filesystem::path& csv);
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

}  // namespace circlops
