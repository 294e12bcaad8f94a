#pragma once

#include <string>

#include "tandem/model.hpp"

namespace tandem {

/// Renders a model back to `.cmod` source. Re-parsing the output yields a
/// structurally equal model.
std::string pretty_print(const Model& m);

std::string format_expr(const Expr& e);

}  // namespace tandem
