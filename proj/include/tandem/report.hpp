#pragma once

#include "tandem/explorer.hpp"
#include "tandem/trace_checker.hpp"
#include "tandem/value_io.hpp"

namespace tandem {

/// Machine-readable forms of the reports. Timing is left out unless asked
/// for, so that the default output is identical from run to run.
Json path_to_json(const Model& m, const Path& path);
Json report_to_json(const Model& m, const ExplorationReport& r, bool with_timing = false);
Json report_to_json(const ConformanceReport& r);
Json summary_to_json(const CorpusSummary& s, bool with_timing = false);

}  // namespace tandem
