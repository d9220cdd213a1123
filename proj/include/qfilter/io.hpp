#pragma once

// JSON documents for states, filters and measurements.
//
//   state:       {"matrix": [[[re, im] x4] x4]}   or
//                {"pauli": {"a": [3], "b": [3], "T": [[3] x3]}}   (exactly one key)
//   filter:      {"x0": real, "x": [3], "side": "A" | "B"}
//   measurement: {"theta": real, "phi": real, "basis": [[[re, im] x2] x2]}  (basis optional)

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qfilter/filtering.hpp"
#include "qfilter/measurement.hpp"
#include "qfilter/state.hpp"

namespace qfilter {

/// A document that does not follow one of the formats above.
class FormatError : public Error {
 public:
  using Error::Error;
};

TwoQubitState state_from_json(const nlohmann::json& doc);
nlohmann::json state_to_json(const TwoQubitState& s);

FilterOperator filter_from_json(const nlohmann::json& doc);
nlohmann::json filter_to_json(const FilterOperator& f);

DichotomicMeasurement measurement_from_json(const nlohmann::json& doc);
nlohmann::json measurement_to_json(const DichotomicMeasurement& m);

Side parse_side(const std::string& text);
std::string side_label(Side side);

/// Parses a whole file; syntax errors and missing files become FormatError.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace qfilter
