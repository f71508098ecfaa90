#pragma once

// JSON representation of the sector-model types. Keys match the cascade
// subcommand's configuration keys, so a serialized CascadeConfig is a valid
// `cascade --config` file.

#include "purify/sector_model.hpp"

#include <json.hpp>

namespace purify {

void to_json(nlohmann::json& j, const SectorDistribution& s);
void from_json(const nlohmann::json& j, SectorDistribution& s);

void to_json(nlohmann::json& j, const PairEnsemble& p);
void from_json(const nlohmann::json& j, PairEnsemble& p);

void to_json(nlohmann::json& j, const LossChannel& c);
void from_json(const nlohmann::json& j, LossChannel& c);

void to_json(nlohmann::json& j, const CascadeConfig& c);
void from_json(const nlohmann::json& j, CascadeConfig& c);

std::string to_string(LossPlacement placement);
LossPlacement parse_loss_placement(std::string_view text);

}  // namespace purify
