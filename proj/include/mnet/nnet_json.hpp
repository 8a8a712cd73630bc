#pragma once

#include "mnet/nnet.hpp"
#include "mnet/sdae.hpp"

#include <json.hpp>

namespace mnet::nnet {

void to_json(nlohmann::json& j, const LayerSpec& spec);
void from_json(const nlohmann::json& j, LayerSpec& spec);
void to_json(nlohmann::json& j, const NetworkSpec& spec);
void from_json(const nlohmann::json& j, NetworkSpec& spec);
void to_json(nlohmann::json& j, const SdaeSpec& spec);
void from_json(const nlohmann::json& j, SdaeSpec& spec);

} // namespace mnet::nnet
