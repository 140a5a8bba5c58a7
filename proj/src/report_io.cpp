#include "smin/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "smin/errors.hpp"

namespace smin {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json report_to_json(const PropertyReport& rep) {
  nlohmann::json j;
  j["lemma_id"] = rep.lemma_id;
  j["spec"] = {{"n", rep.spec.n},
               {"alpha", rep.spec.alpha},
               {"beta", rep.spec.beta}};
  if (rep.deltas.size() == 1) {
    j["delta"] = rep.deltas.front();
  } else {
    j["delta_grid"] = rep.deltas;
  }
  j["samples_tested"] = rep.samples_tested;
  j["violations"] = rep.violations;
  if (std::isfinite(rep.worst_margin)) {
    j["worst_margin"] = rep.worst_margin;
  } else {
    j["worst_margin"] = nullptr;
  }
  // elapsed_seconds stays in-memory only: report files must be bit-for-bit
  // reproducible up to the manifest timestamp
  j["measured_constants"] = rep.measured_constants;
  j["seed"] = rep.seed;
  return j;
}

nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& params) {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&t));
  return nlohmann::json{{"command", command},
                        {"params", params},
                        {"tool_version", kVersion},
                        {"timestamp", stamp}};
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
}

void write_csv(const std::string& path, const nlohmann::json& manifest,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "# " << manifest.dump() << '\n';
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_g17(row[c]);
    }
    out << '\n';
  }
}

}  // namespace smin
