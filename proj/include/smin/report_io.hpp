#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "smin/properties.hpp"

namespace smin {

inline constexpr const char* kVersion = "0.1.0";

// Doubles formatted with 17 significant digits (round-trip exact).
std::string format_g17(double v);

// Flat report object; worst_margin serializes as null when nothing was
// tested (it is +inf internally).
nlohmann::json report_to_json(const PropertyReport& rep);

nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& params);

void write_json_file(const std::string& path, const nlohmann::json& doc);

// CSV with the manifest embedded as a leading '#' comment line, then a
// header row; numbers carry 17 significant digits.
void write_csv(const std::string& path, const nlohmann::json& manifest,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace smin
