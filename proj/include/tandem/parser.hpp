#pragma once

#include <string_view>

#include "tandem/model.hpp"

namespace tandem {

/// Parses and type-checks `.cmod` source. Throws ModelError carrying the
/// line and column of the first problem found.
Model parse_model(std::string_view source);

}  // namespace tandem
