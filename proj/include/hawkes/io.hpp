#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/core.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/inference.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes::io {

// Shortest round-trip decimal encoding of a double.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view s);

// Spike files: JSON lines with a leading header record
//   {"meta": {"trials": N, "horizon": T}}
// followed by one record per event {"trial": k, "unit": "id", "t": seconds},
// or CSV with columns trial,unit,t (horizon supplied by the caller then).
TrialSet read_spikes(const std::string& path, const std::string& format = "auto",
                     std::optional<double> horizon = std::nullopt,
                     std::optional<int> trials = std::nullopt);

void write_spikes_jsonl(const TrialSet& data, const std::string& path);

nlohmann::json network_spec_to_json(const NetworkSpec& spec);
NetworkSpec network_spec_from_json(const nlohmann::json& j);

nlohmann::json fit_result_to_json(const FitResult& fit);
// Graph document {nodes, edges} consumable by external viewers.
nlohmann::json network_edges_to_json(const inference::NetworkEdges& net,
                                     const std::vector<std::string>& nodes);

// Collects artifacts under one directory and finalizes a manifest with a
// config hash, the seed, and the artifact list. Filenames are deterministic.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path write_csv(const std::string& name,
                                  const std::vector<std::string>& header,
                                  const std::vector<std::vector<double>>& rows);
  std::filesystem::path write_text(const std::string& name, const std::string& kind,
                                   const std::string& content);
  std::filesystem::path write_json(const std::string& name, const nlohmann::json& j);
  void note_artifact(const std::string& name, const std::string& kind,
                     const std::filesystem::path& path);

  // Writes manifest.json: {version, config_hash, seed, artifacts:[...]}.
  std::filesystem::path finalize(const nlohmann::json& config, std::uint64_t seed);

 private:
  std::filesystem::path dir_;
  nlohmann::json artifacts_ = nlohmann::json::array();
};

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace hawkes::io
