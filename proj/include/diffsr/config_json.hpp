#pragma once

#include <string>

#include <json.hpp>

#include "diffsr/resample.hpp"
#include "diffsr/schedule.hpp"

namespace diffsr {

nlohmann::json filter_spec_to_json(const FilterSpec& spec);
FilterSpec filter_spec_from_json(const nlohmann::json& j);

/// Rejects unknown keys (strict schema) before any compute happens.
void require_keys_subset(const nlohmann::json& j, const std::vector<std::string>& allowed,
                         const std::string& context);

}  // namespace diffsr
