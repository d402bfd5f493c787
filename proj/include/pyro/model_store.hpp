#pragma once

#include "pyro/bifidelity.hpp"

#include <string>

namespace pyro {

/// Persist a trained model as a directory: manifest.json plus per-node basis
/// files in the snapshot format under basis/.
void save_model(const std::string& dir, const BiFiModel& model);

BiFiModel load_model(const std::string& dir);

bool model_exists(const std::string& dir);

}  // namespace pyro
