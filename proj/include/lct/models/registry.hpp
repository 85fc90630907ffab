#pragma once

#include <map>

#include "lct/models/model.hpp"

namespace lct::models {

// The five builtin models: sc, tso, rc11_lite, rc11_lb, armv8_lite.
const std::map<std::string, ModelSpec>& builtin_models();

// Throws Error(UnknownModel) for names outside the registry.
const ModelSpec& lookup_model(const std::string& name);

}  // namespace lct::models
