#include "circlops/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "circlops/error.hpp"

namespace circlops {

namespace {

const Json& require(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string(what) + ": missing key \"" + key + "\"");
  return j.at(key);
}

int require_int(const Json& j, const char* key, const char* what) {
  const Json& v = require(j, key, what);
  if (!v.is_number_integer()) throw InvalidInput(std::string(what) + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace

Json to_json(const PeriodicFunction& f) {
  Json out = Json::array();
  for (double c : f.coefficients()) out.push_back(c);
  return out;
}

PeriodicFunction periodic_function_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || j.size() % 2 == 0)
    throw InvalidInput("PeriodicFunction: expected an odd-length array [mean, c1, s1, ...]");
  std::vector<double> c;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidInput("PeriodicFunction: coefficients must be numbers");
    c.push_back(v.get<double>());
  }
  const int band = static_cast<int>(c.size() / 2);
  return PeriodicFunction(band, std::move(c));
}

Json to_json(const DifferentialOperator& op, std::optional<GroupClass> group) {
  Json coeffs = Json::array();
  const int n = op.order();
  const int last = op.is_monic() ? n - 1 : n;
  for (int i = 0; i <= last; ++i) coeffs.push_back(to_json(op.coefficient(i)));
  return Json{{"n", n}, {"group", group ? std::string(to_string(*group)) : std::string("none")}, {"coeffs", coeffs}};
}

DifferentialOperator operator_from_json(const Json& j) {
  const int n = require_int(j, "n", "operator");
  if (n < 1) throw InvalidInput("operator: n must be >= 1");
  const Json& coeffs = require(j, "coeffs", "operator");
  if (!coeffs.is_array()) throw InvalidInput("operator: coeffs must be an array");
  if (j.contains("group")) {
    const Json& g = j.at("group");
    if (!g.is_string()) throw InvalidInput("operator: group must be a string");
    const auto name = g.get<std::string>();
    if (name != "none") {
      const auto cls = parse_group_class(name);
      if (!cls) throw InvalidInput("operator: unknown group \"" + name + "\"");
      require_parity(n, *cls);
    }
  }
  std::vector<PeriodicFunction> c;
  for (const auto& f : coeffs) c.push_back(periodic_function_from_json(f));
  if (static_cast<int>(c.size()) == n) return DifferentialOperator::monic(std::move(c));
  if (static_cast<int>(c.size()) == n + 1) return DifferentialOperator::general(std::move(c));
  throw InvalidInput("operator: coeffs must hold n (monic) or n+1 functions");
}

Json to_json(const PseudoDifferentialSymbol& s) {
  Json orders = Json::object();
  for (const auto& [k, f] : s.terms()) orders[std::to_string(k)] = to_json(f);
  return Json{{"orders", orders}};
}

PseudoDifferentialSymbol symbol_from_json(const Json& j) {
  const Json& orders = require(j, "orders", "symbol");
  if (!orders.is_object()) throw InvalidInput("symbol: orders must be an object");
  PseudoDifferentialSymbol s;
  for (const auto& [key, value] : orders.items()) {
    std::size_t used = 0;
    int order = 0;
    try {
      order = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty()) throw InvalidInput("symbol: order key \"" + key + "\" is not an integer");
    s.set(order, periodic_function_from_json(value));
  }
  return s;
}

Json to_json(const MatrixConnection& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.n(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < a.n(); ++k) row.push_back(to_json(a(i, k)));
    rows.push_back(row);
  }
  return Json{{"n", a.n()}, {"entries", rows}};
}

MatrixConnection connection_from_json(const Json& j) {
  const int n = require_int(j, "n", "connection");
  if (n < 1) throw InvalidInput("connection: n must be >= 1");
  const Json& rows = require(j, "entries", "connection");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw InvalidInput("connection: entries must have n rows");
  PeriodicMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const Json& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw InvalidInput("connection: every row must have n entries");
    for (int k = 0; k < n; ++k) m(i, k) = periodic_function_from_json(row.at(static_cast<std::size_t>(k)));
  }
  return MatrixConnection(std::move(m));
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.at(0).is_array()) throw InvalidInput("matrix: expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw InvalidInput("matrix: ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (!row.at(static_cast<std::size_t>(k)).is_number()) throw InvalidInput("matrix: entries must be numbers");
      m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
  }
  return m;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  if (p == csv) p += ".json";
  return p;
}

void export_curve(const ProjectiveCurve& curve, const std::filesystem::path& csv) {
  std::ofstream out(csv);
  if (!out) throw std::ios_base::failure("cannot open " + csv.string() + " for writing");
  out << "t";
  for (int i = 1; i <= curve.n; ++i) out << ",gamma" << i;
  out << '\n';
  const int m = curve.steps();
  char buffer[32];
  for (int j = 0; j <= m; ++j) {
    std::snprintf(buffer, sizeof buffer, "%.17g", static_cast<double>(j) / m);
    out << buffer;
    for (int i = 0; i < curve.n; ++i) {
      std::snprintf(buffer, sizeof buffer, "%.17g", curve.lift[static_cast<std::size_t>(j)](i));
      out << ',' << buffer;
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw std::ios_base::failure("write to " + csv.string() + " failed");

  Json side{{"n", curve.n}, {"monodromy", to_json(curve.monodromy)}, {"steps", m}};
  if (curve.n == 2) {
    const auto w = winding_lift_n2(curve);
    side["winding"] = w.winding;
    side["angle"] = w.angle;
  }
  const auto path = sidecar_path(csv);
  std::ofstream s(path);
  if (!s) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  s << side.dump(2) << '\n';
  s.flush();
  if (!s) throw std::ios_base::failure("write to " + path.string() + " failed");
}

}  // namespace circlops
