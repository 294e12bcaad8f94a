#include "tandem/bundled_models.hpp"

#include <stdexcept>
#include <utility>

#include "tandem/parser.hpp"

namespace tandem {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_models();
}

std::vector<BundledModel> bundled_models() {
  std::vector<BundledModel> out;
  for (const auto& [name, text] : detail::embedded_models()) out.push_back({std::string(name), std::string(text)});
  return out;
}

std::string bundled_source(std::string_view name) {
  for (const auto& [n, text] : detail::embedded_models()) {
    if (n == name) return std::string(text);
  }
  throw std::out_of_range("no bundled model named " + std::string(name));
}

Model load_bundled_model(std::string_view name) { return parse_model(bundled_source(name)); }

}  // namespace tandem
