#include "tandem/trace_checker.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tandem/kernel.hpp"
#include "tandem/value_io.hpp"

namespace tandem {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Conforms:
      return "conforms";
    case Verdict::Diverges:
      return "diverges";
    case Verdict::InvariantViolation:
      return "invariant-violation";
  }
  return "?";
}

namespace {

struct Observation {
  std::size_t variable;
  Value value;
};

ConformanceReport diverge(ConformanceReport r, const TraceEvent& e, std::string why) {
  r.verdict = Verdict::Diverges;
  r.first_bad_seq = e.seq;
  r.frontier_sizes.push_back(0);
  r.diagnosis = "seq " + std::to_string(e.seq) + " (" + e.op + "): " + std::move(why);
  return r;
}

std::string describe(const Model& m, std::size_t var, const Value& v) {
  return format_value(m.enums, m.variables[var].domain, v);
}

}  // namespace

ConformanceReport check_trace(const Model& m, const Trace& trace) {
  ConformanceReport r;
  if (trace.header && trace.header->model && *trace.header->model != m.name) {
    r.warnings.push_back("trace header names model " + *trace.header->model + ", checking against " + m.name);
  }
  std::vector<State> frontier{init_state(m)};

  for (const auto& e : trace.events) {
    const auto op = m.find_operation(e.op);
    if (!op) return diverge(std::move(r), e, "unknown operation " + e.op);
    const auto& operation = m.operations[*op];
    Transition t{*op, {}};
    try {
      t.binding = decode_binding(m, operation, e.params);
    } catch (const std::invalid_argument& ex) {
      return diverge(std::move(r), e, std::string("bad params: ") + ex.what());
    }

    std::vector<Observation> observed;
    if (e.observed) {
      for (const auto& [name, j] : e.observed->items()) {
        const auto var = m.find_variable(name);
        if (!var) return diverge(std::move(r), e, "observation of unknown variable " + name);
        try {
          observed.push_back({*var, decode_value(m, m.variables[*var].domain, j)});
        } catch (const std::invalid_argument& ex) {
          return diverge(std::move(r), e, "bad observation of " + name + ": " + ex.what());
        }
      }
    }

    std::vector<State> next;
    std::unordered_set<State, StateHash> seen;
    bool enabled_somewhere = false;
    std::string mismatch;
    std::string eval_failure;
    for (const auto& s : frontier) {
      if (!guard_holds(m, s, t)) continue;
      enabled_somewhere = true;
      State post;
      try {
        post = apply(m, s, t);
      } catch (const EvalError& ex) {
        if (eval_failure.empty()) eval_failure = ex.what();
        continue;
      }
      bool consistent = true;
      for (const auto& o : observed) {
        const Value actual = read_variable(m, post, o.variable);
        if (!(actual == o.value)) {
          if (mismatch.empty()) {
            mismatch = "observation mismatch: " + m.variables[o.variable].name + " observed " +
                       describe(m, o.variable, o.value) + ", model has " + describe(m, o.variable, actual);
          }
          consistent = false;
          break;
        }
      }
      if (consistent && seen.insert(post).second) next.push_back(std::move(post));
    }

    if (next.empty()) {
      std::string why;
      if (!enabled_somewhere) {
        why = "guard never enabled for " + format_transition(m, t);
      } else if (!mismatch.empty()) {
        why = mismatch;
      } else {
        why = "evaluation error: " + eval_failure;
      }
      return diverge(std::move(r), e, std::move(why));
    }
    frontier = std::move(next);
    r.frontier_sizes.push_back(frontier.size());

    // Invariants failed by every candidate make a definite violation.
    std::vector<std::string> common;
    std::size_t violating = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      auto bad = violated_invariants(m, frontier[i]);
      if (!bad.empty()) ++violating;
      if (i == 0) {
        common = std::move(bad);
      } else {
        std::erase_if(common, [&](const std::string& n) { return std::find(bad.begin(), bad.end(), n) == bad.end(); });
      }
    }
    if (violating == frontier.size()) {
      r.verdict = Verdict::InvariantViolation;
      r.first_bad_seq = e.seq;
      if (common.empty()) {
        r.diagnosis = "seq " + std::to_string(e.seq) + " (" + e.op + "): every candidate state violates an invariant";
      } else {
        std::string names;
        for (const auto& n : common) names += (names.empty() ? "" : ", ") + n;
        r.diagnosis = "seq " + std::to_string(e.seq) + " (" + e.op + "): all candidates violate invariant " + names;
      }
      r.violated = std::move(common);
      return r;
    }
    if (violating > 0) {
      r.warnings.push_back("seq " + std::to_string(e.seq) + ": " + std::to_string(violating) + " of " +
                           std::to_string(frontier.size()) + " candidate states violate an invariant");
    }
  }
  return r;
}

CorpusSummary check_corpus(const Model& m, std::span<const std::filesystem::path> inputs) {
  namespace fs = std::filesystem;
  const auto started = std::chrono::steady_clock::now();

  std::set<std::string> files;
  CorpusSummary summary;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      for (const auto& entry : fs::directory_iterator(in, ec)) {
        if (entry.path().extension() == ".trace") files.insert(entry.path().string());
      }
      if (ec) summary.entries.push_back({in.string(), std::nullopt, ec.message()});
    } else {
      files.insert(in.string());
    }
  }

  for (const auto& file : files) {
    CorpusEntry entry{file, std::nullopt, {}};
    std::ifstream is(file, std::ios::binary);
    if (!is) {
      entry.error = "cannot read file";
    } else {
      std::ostringstream text;
      text << is.rdbuf();
      try {
        const auto trace = parse_trace(text.str());
        summary.events += trace.events.size();
        entry.report = check_trace(m, trace);
      } catch (const std::exception& ex) {
        entry.error = ex.what();
      }
    }
    summary.entries.push_back(std::move(entry));
  }
  std::sort(summary.entries.begin(), summary.entries.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.file < b.file; });

  for (const auto& entry : summary.entries) {
    if (!entry.report) {
      ++summary.unreadable;
    } else if (entry.report->verdict == Verdict::Conforms) {
      ++summary.conforms;
    } else if (entry.report->verdict == Verdict::Diverges) {
      ++summary.diverges;
    } else {
      ++summary.violations;
    }
  }
  summary.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return summary;
}

}  // namespace tandem
