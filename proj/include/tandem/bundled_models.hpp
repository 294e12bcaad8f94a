#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tandem/model.hpp"

namespace tandem {

struct BundledModel {
  std::string name;    // file stem, e.g. "broker-fixed"
  std::string source;  // `.cmod` text
};

/// The models shipped under models/: broker-fixed, broker-lossy, counter and
/// travel-agent, in name order.
std::vector<BundledModel> bundled_models();

/// Parsed bundled model by name; throws std::out_of_range for unknown names.
Model load_bundled_model(std::string_view name);

std::string bundled_source(std::string_view name);

}  // namespace tandem
