#pragma once

#include "ququart/decomposition.hpp"
#include "ququart/toric.hpp"
#include "ququart/trotter.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace ququart {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Columns t, occupations (labels from the record), delta_n.
std::string run_record_csv(const RunRecord& rec);
/// Same layout with the oracle occupations and no delta_n column.
std::string oracle_csv(const RunRecord& rec);
Json run_record_json(const RunRecord& rec, const Json& config_echo);

/// Terms as coefficient plus (qudit, factor label) pairs.
Json to_json(const MappedModel& model);
Json to_json(const Circuit& circuit);
Json to_json(const GateCountReport& report);
Json to_json(const VacuumCertificate& cert, const Json& config_echo);

Json to_json(const VvcLayout& layout);
/// Throws std::invalid_argument on malformed input.
VvcLayout vvc_layout_from_json(const Json& j);

/// <base>.bin holds interleaved little-endian (re, im) doubles; <base>.json is
/// the sidecar {n_qudits, ordering}.
void write_snapshot(const QuditState& state, const std::filesystem::path& base);
/// Throws std::runtime_error on a missing or inconsistent snapshot.
QuditState read_snapshot(const std::filesystem::path& base);

/// Throws std::runtime_error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ququart
