#pragma once

#include <string>

#include "json.hpp"
#include "oscillab/checks.hpp"
#include "oscillab/experiments.hpp"

namespace oscillab {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a over a canonical string; stamps configs into outputs.
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

nlohmann::json to_json(const ConditionCheck& c);
nlohmann::json to_json(const PhaseReport& r);
nlohmann::json to_json(const BandReport& r);
nlohmann::json to_json(const SharpnessProbe& r);
nlohmann::json to_json(const DispersiveReport& r);

/// bands.csv: one "j,ratio,slope" line per band (deterministic formatting).
std::string band_report_csv(const BandReport& r);
std::string sharpness_csv(const SharpnessProbe& r);
std::string dispersive_csv(const DispersiveReport& r);

void write_text(const std::string& path, const std::string& content);

}  // namespace oscillab
