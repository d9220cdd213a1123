#include "qfilter/io.hpp"

#include <fstream>

namespace qfilter {

namespace {

using nlohmann::json;

double real_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

const json& require(const json& doc, const char* key, const std::string& what) {
  if (!doc.is_object()) throw FormatError(what + ": expected a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(what + ": missing key \"" + key + "\"");
  return *it;
}

Complex complex_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw FormatError(where + ": expected [re, im]");
  return {real_at(j[0], where), real_at(j[1], where)};
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Vec3 vec3_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw FormatError(where + ": expected 3 reals");
  return {real_at(j[0], where), real_at(j[1], where), real_at(j[2], where)};
}

Vec2 vec2_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw FormatError(where + ": expected two [re, im] pairs");
  return {complex_at(j[0], where), complex_at(j[1], where)};
}

}  // namespace

TwoQubitState state_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("state: expected a JSON object");
  const bool has_matrix = doc.contains("matrix");
  const bool has_pauli = doc.contains("pauli");
  if (has_matrix == has_pauli) {
    throw FormatError("state: exactly one of \"matrix\" or \"pauli\" must be present");
  }
  if (has_matrix) {
    const json& rows = doc["matrix"];
    if (!rows.is_array() || rows.size() != 4) throw FormatError("state.matrix: expected 4 rows");
    Mat4 m;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 4) {
        throw FormatError("state.matrix: row " + std::to_string(i) + " must hold 4 entries");
      }
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = complex_at(rows[i][j], "state.matrix");
    }
    return TwoQubitState::from_density_matrix(m);
  }
  const json& p = doc["pauli"];
  PauliCoefficients c;
  c.a = vec3_at(require(p, "a", "state.pauli"), "state.pauli.a");
  c.b = vec3_at(require(p, "b", "state.pauli"), "state.pauli.b");
  const json& t = require(p, "T", "state.pauli");
  if (!t.is_array() || t.size() != 3) throw FormatError("state.pauli.T: expected 3 rows");
  for (std::size_t j = 0; j < 3; ++j) c.t[j] = vec3_at(t[j], "state.pauli.T");
  return TwoQubitState::from_pauli(c);
}

json state_to_json(const TwoQubitState& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < 4; ++j) row.push_back(complex_to_json(s.rho()(i, j)));
    rows.push_back(row);
  }
  return json{{"matrix", rows}};
}

Side parse_side(const std::string& text) {
  if (text == "A") return Side::Alice;
  if (text == "B") return Side::Bob;
  throw FormatError("side must be \"A\" or \"B\", got \"" + text + "\"");
}

std::string side_label(Side side) { return side == Side::Alice ? "A" : "B"; }

FilterOperator filter_from_json(const json& doc) {
  const double x0 = real_at(require(doc, "x0", "filter"), "filter.x0");
  const Vec3 x = vec3_at(require(doc, "x", "filter"), "filter.x");
  const json& side = require(doc, "side", "filter");
  if (!side.is_string()) throw FormatError("filter.side: expected \"A\" or \"B\"");
  return FilterOperator::from_params(x0, x, parse_side(side.get<std::string>()));
}

json filter_to_json(const FilterOperator& f) {
  return json{{"x0", f.x0()}, {"x", f.x()}, {"side", side_label(f.side())}};
}

DichotomicMeasurement measurement_from_json(const json& doc) {
  const double theta = real_at(require(doc, "theta", "measurement"), "measurement.theta");
  const double phi = real_at(require(doc, "phi", "measurement"), "measurement.phi");
  auto basis = DichotomicMeasurement::computational_basis();
  if (doc.contains("basis")) {
    const json& b = doc["basis"];
    if (!b.is_array() || b.size() != 2) throw FormatError("measurement.basis: expected two vectors");
    basis = {vec2_at(b[0], "measurement.basis"), vec2_at(b[1], "measurement.basis")};
  }
  return DichotomicMeasurement::from_angles(theta, phi, basis);
}

json measurement_to_json(const DichotomicMeasurement& m) {
  json basis = json::array();
  for (const Vec2& v : m.basis()) basis.push_back(json::array({complex_to_json(v[0]), complex_to_json(v[1])}));
  return json{{"theta", m.theta()}, {"phi", m.phi()}, {"basis", basis}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace qfilter
