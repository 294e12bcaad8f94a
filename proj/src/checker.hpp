#pragma once

#include "tandem/model.hpp"

namespace tandem::detail {

/// Resolves names, assigns types and local slots, and computes the state
/// layout and binding tables of a freshly parsed model.
void check_model(Model& m);

}  // namespace tandem::detail
