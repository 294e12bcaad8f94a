// tandem: command-line front end.
//
// Exit status: 0 success / clean / conforms, 1 a violation or divergence was
// found, 2 usage or runtime error.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tandem/broker_sim.hpp"
#include "tandem/bundled_models.hpp"
#include "tandem/explorer.hpp"
#include "tandem/kernel.hpp"
#include "tandem/parser.hpp"
#include "tandem/report.hpp"
#include "tandem/server.hpp"
#include "tandem/trace_checker.hpp"

namespace fs = std::filesystem;
using namespace tandem;

namespace {

constexpr int kOk = 0;
constexpr int kFound = 1;
constexpr int kError = 2;

constexpr const char* kVersion = "0.3.0";
constexpr int kDefaultPort = 8765;

// Anything that should end the run with exit status 2 and a one-line message.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Human, Machine };

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Failure("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw Failure("cannot write " + path);
}

// A path, or the name of a bundled model when no such file exists.
Model load_model(const std::string& arg) {
  std::string source;
  if (fs::exists(arg)) {
    source = read_file(arg);
  } else {
    try {
      source = bundled_source(arg);
    } catch (const std::out_of_range&) {
      throw Failure("cannot read " + arg + " (not a file or bundled model)");
    }
  }
  try {
    return parse_model(source);
  } catch (const ModelError& e) {
    throw Failure(arg + ":" + e.what());
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

// --- validate ---------------------------------------------------------------

struct ValidateArgs {
  std::vector<std::string> models;
};

int run_validate(const ValidateArgs& a, Format fmt) {
  Json out = Json::array();
  bool all_valid = true;
  for (const auto& file : a.models) {
    Json entry{{"file", file}};
    try {
      const Model m = parse_model(read_file(file));
      entry["valid"] = true;
      entry["machine"] = m.name;
      entry["variables"] = m.variables.size();
      entry["operations"] = m.operations.size();
      entry["invariants"] = m.invariants.size();
      if (fmt == Format::Human) {
        std::cout << file << ": ok (MACHINE " << m.name << ", " << m.variables.size() << (m.variables.size() == 1 ? " variable, " : " variables, ")
                  << m.operations.size() << (m.operations.size() == 1 ? " operation, " : " operations, ") << m.invariants.size()
                  << (m.invariants.size() == 1 ? " invariant)\n" : " invariants)\n");
      }
    } catch (const ModelError& e) {
      all_valid = false;
      entry["valid"] = false;
      entry["error"] = e.what();
      entry["line"] = e.loc().line;
      entry["column"] = e.loc().column;
      if (fmt == Format::Human) std::cout << file << ":" << e.what() << '\n';
    }
    out.push_back(std::move(entry));
  }
  if (fmt == Format::Machine) emit({{"models", out}});
  return all_valid ? kOk : kFound;
}

// --- check ------------------------------------------------------------------

struct CheckArgs {
  std::string model;
  std::size_t max_states = 1'000'000;
  std::size_t max_depth = 0;
  std::string strategy = "bfs";
  std::optional<std::uint64_t> seed;
  bool all_violations = false;
  bool no_deadlocks = false;
  bool timing = false;
  std::string out;
};

void print_path(const Model& m, const Path& path, const std::string& last_note) {
  const auto states = replay(m, path);
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::cout << "  " << (i + 1 < 10 ? " " : "") << i + 1 << ". " << format_transition(m, path[i]);
    // Lost messages are what the user usually needs to see first.
    std::string note = m.operations[path[i].op].name == "Drop" ? "message lost" : "";
    if (i + 1 == path.size() && !last_note.empty()) note += (note.empty() ? "" : "; ") + last_note;
    if (!note.empty()) std::cout << "    <== " << note;
    std::cout << '\n';
    for (std::size_t v = 0; v < m.variables.size(); ++v) {
      const auto before = read_variable(m, states[i], v);
      const auto after = read_variable(m, states[i + 1], v);
      if (!(before == after)) {
        std::cout << "        " << m.variables[v].name << " := " << format_value(m.enums, m.variables[v].domain, after)
                  << '\n';
      }
    }
  }
}

int run_check(const CheckArgs& a, Format fmt) {
  const Model m = load_model(a.model);
  ExploreConfig config;
  config.max_states = a.max_states == 0 ? std::nullopt : std::optional(a.max_states);
  config.max_depth = a.max_depth == 0 ? std::nullopt : std::optional(a.max_depth);
  config.strategy = a.strategy == "dfs" ? Strategy::DepthFirst : a.strategy == "random" ? Strategy::Random : Strategy::BreadthFirst;
  config.seed = a.seed;
  config.stop_at_first_violation = !a.all_violations;
  config.report_deadlocks = !a.no_deadlocks;
  if (config.strategy == Strategy::Random && !config.seed) throw Failure("--strategy random needs --seed");

  ExplorationReport r;
  try {
    r = explore(m, config);
  } catch (const ExplorationError& e) {
    throw Failure(std::string("evaluation error: ") + e.what());
  } catch (const EvalError& e) {
    throw Failure(std::string("evaluation error: ") + e.what());
  }
  const Json report = report_to_json(m, r, a.timing);
  if (!a.out.empty()) write_file(a.out, report.dump(2) + "\n");

  if (fmt == Format::Machine) {
    emit(report);
  } else {
    std::cout << "MACHINE " << m.name << ": " << r.states_visited << " states, " << r.transitions_fired
              << " transitions, "
              << (r.frontier_exhausted ? "frontier exhausted"
                  : r.violations.empty() ? "stopped at a limit"
                                         : "stopped at first violation");
    if (a.timing) std::cout << ", " << r.wall_time.count() << " ms";
    std::cout << '\n';
    if (r.violations.empty()) std::cout << "no invariant violations\n";
    for (const auto& v : r.violations) {
      std::cout << "\ninvariant " << v.invariant << " violated after " << v.path.size() << " steps:\n";
      print_path(m, v.path, "violates " + v.invariant);
      std::cout << "violating state:\n  " << format_state(m, v.state) << '\n';
    }
    if (!r.deadlocks.empty()) {
      std::cout << '\n' << r.deadlocks.size() << " deadlocked state(s); the first found is "
                << r.deadlocks.front().path.size() << " steps from the initial state:\n  " << format_state(m, r.deadlocks.front().state) << '\n';
    }
  }
  return r.violations.empty() ? kOk : kFound;
}

// --- trace-check ------------------------------------------------------------

struct TraceCheckArgs {
  std::string model;
  std::vector<std::string> traces;
  bool corpus = false;
  bool timing = false;
};

void print_report(const ConformanceReport& r) {
  std::cout << to_string(r.verdict);
  if (r.first_bad_seq) std::cout << " at seq " << *r.first_bad_seq;
  std::cout << " (" << r.frontier_sizes.size() << " events checked)\n";
  if (!r.diagnosis.empty()) std::cout << "  " << r.diagnosis << '\n';
  for (const auto& w : r.warnings) std::cout << "  warning: " << w << '\n';
}

int run_trace_check(const TraceCheckArgs& a, Format fmt) {
  const Model m = load_model(a.model);
  const bool corpus = a.corpus || a.traces.size() > 1 ||
                      (a.traces.size() == 1 && a.traces[0] != "-" && fs::is_directory(a.traces[0]));

  if (!corpus) {
    const auto& file = a.traces.at(0);
    Trace trace;
    try {
      trace = parse_trace(read_file(file));
    } catch (const TraceFormatError& e) {
      throw Failure((file == "-" ? "<stdin>" : file) + ": " + e.what());
    }
    const auto r = check_trace(m, trace);
    if (fmt == Format::Machine) {
      emit(report_to_json(r));
    } else {
      print_report(r);
    }
    return r.verdict == Verdict::Conforms ? kOk : kFound;
  }

  std::vector<fs::path> inputs;
  for (const auto& t : a.traces) {
    if (t == "-") throw Failure("standard input cannot be part of a corpus");
    inputs.emplace_back(t);
  }
  const auto s = check_corpus(m, inputs);
  if (fmt == Format::Machine) {
    emit(summary_to_json(s, a.timing));
  } else {
    for (const auto& e : s.entries) {
      std::cout << e.file << ": ";
      if (e.report) {
        print_report(*e.report);
      } else {
        std::cout << "unreadable (" << e.error << ")\n";
      }
    }
    const double secs = static_cast<double>(s.wall_time.count()) / 1000.0;
    std::cout << s.entries.size() << " traces: " << s.conforms << " conform, " << s.diverges << " diverge, "
              << s.violations << " invariant-violation, " << s.unreadable << " unreadable; " << s.events
              << " events in " << s.wall_time.count() << " ms";
    if (secs > 0) std::cout << " (" << static_cast<long long>(static_cast<double>(s.events) / secs) << " events/s)";
    std::cout << '\n';
  }
  if (s.diverges + s.violations > 0) return kFound;
  return s.unreadable > 0 ? kError : kOk;
}

// --- simulate / testbot -----------------------------------------------------

struct SimArgs {
  std::string config_file;
  broker::SimConfig config;
  std::string drop;
  std::string fault;
  CLI::App* app = nullptr;  // to tell which flags were given
};

void add_sim_options(CLI::App* sub, SimArgs& s) {
  s.app = sub;
  sub->add_option("--config", s.config_file, "JSON config file; flags override it")->check(CLI::ExistingFile);
  sub->add_option("--lenders", s.config.lenders, "number of lenders (default 2)");
  sub->add_option("--insurers", s.config.insurers, "number of insurers (default 1)");
  sub->add_option("--drop-probability", s.drop, "chance a message is lost, e.g. 1/10 or 0.1 (default 1/10)");
  sub->add_flag("--commit-priority", s.config.commit_priority,
                "deliver Commit/Reject before other messages and never drop them");
  sub->add_option("--offer-ttl", s.config.offer_ttl, "offer lifetime in ticks (default 2)");
  sub->add_option("--seed", s.config.seed, "random seed (default 0)");
  sub->add_option("--max-ticks", s.config.max_ticks, "give up after this many ticks (default 40)");
  sub->add_option("--fault", s.fault, "none, commit-wrong-lender, skip-reject or ignore-deadline")
      ->check(CLI::IsMember({"none", "commit-wrong-lender", "skip-reject", "ignore-deadline"}));
}

broker::SimConfig resolve(const SimArgs& s) {
  broker::SimConfig c;
  try {
    if (!s.config_file.empty()) {
      Json j;
      try {
        j = Json::parse(read_file(s.config_file));
      } catch (const Json::parse_error& e) {
        throw Failure(s.config_file + ": " + e.what());
      }
      c = broker::config_from_json(j);
    }
    auto given = [&](const char* flag) { return s.app->count(flag) > 0; };
    if (given("--lenders")) c.lenders = s.config.lenders;
    if (given("--insurers")) c.insurers = s.config.insurers;
    if (given("--commit-priority")) c.commit_priority = s.config.commit_priority;
    if (given("--offer-ttl")) c.offer_ttl = s.config.offer_ttl;
    if (given("--seed")) c.seed = s.config.seed;
    if (given("--max-ticks")) c.max_ticks = s.config.max_ticks;
    if (given("--fault")) c.fault = *broker::parse_fault(s.fault);
    if (given("--drop-probability")) {
      try {
        c.drop_probability = Probability::parse(s.drop);
      } catch (const std::invalid_argument& e) {
        throw Failure(std::string("--drop-probability: ") + e.what());
      }
    }
    broker::validate(c);
  } catch (const broker::ConfigError& e) {
    throw Failure(std::string("config: ") + e.what());
  }
  return c;
}

struct SimulateArgs {
  SimArgs sim;
  std::string out;
  std::string snapshot;
};

int run_simulate(const SimulateArgs& a, Format fmt) {
  const auto c = resolve(a.sim);
  const auto result = broker::run_sim(c);
  const auto text = write_trace(result.trace);
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
  if (!a.snapshot.empty()) write_file(a.snapshot, result.snapshot.dump(2) + "\n");
  if (fmt == Format::Human) {
    std::cerr << "simulated " << result.trace.events.size() << " events over " << result.snapshot["tick"].get<int>()
              << " ticks (seed " << c.seed << ", " << (result.quiescent ? "quiescent" : "stopped at max-ticks")
              << ")\n";
  }
  return kOk;
}

struct TestbotArgs {
  SimArgs sim;
  int runs = 100;
  std::string out_dir = "corpus";
  std::string check_model;
  bool timing = false;
};

int run_testbot(const TestbotArgs& a, Format fmt) {
  const auto c = resolve(a.sim);
  if (a.runs < 0) throw Failure("--runs must be non-negative");
  std::optional<Model> model;
  if (!a.check_model.empty()) model = load_model(a.check_model);
  std::vector<fs::path> files;
  try {
    files = broker::testbot(c, a.runs, a.out_dir);
  } catch (const std::exception& e) {
    throw Failure(e.what());
  }

  Json out;
  out["runs"] = a.runs;
  out["directory"] = a.out_dir;
  out["config"] = broker::config_to_json(c);
  out["files"] = Json::array();
  for (const auto& f : files) out["files"].push_back(f.filename().string());
  int status = kOk;
  std::optional<CorpusSummary> summary;
  if (model) {
    const fs::path dir(a.out_dir);
    summary = check_corpus(*model, std::span(&dir, 1));
    out["check"] = summary_to_json(*summary, a.timing);
    if (!summary->all_conform()) status = summary->diverges + summary->violations > 0 ? kFound : kError;
  }
  if (fmt == Format::Machine) {
    emit(out);
  } else {
    std::cout << "wrote " << files.size() << " traces to " << a.out_dir << " (seeds " << c.seed << ".."
              << c.seed + static_cast<std::uint64_t>(std::max(a.runs, 1) - 1) << ", fault " << to_string(c.fault) << ")\n";
    if (summary) {
      std::cout << "checked against MACHINE " << model->name << ": " << summary->conforms << " conform, "
                << summary->diverges << " diverge, " << summary->violations << " invariant-violation, "
                << summary->unreadable << " unreadable\n";
      for (const auto& e : summary->entries) {
        if (e.report && e.report->verdict != Verdict::Conforms) {
          std::cout << "  " << fs::path(e.file).filename().string() << ": " << e.report->diagnosis << '\n';
        }
      }
    }
  }
  return status;
}

// --- animate ----------------------------------------------------------------

struct AnimateArgs {
  std::string model;
  std::string host = "127.0.0.1";
  std::optional<int> port;
  std::string ui_dir;
  std::size_t enabled_cap = 500;
};

int default_port() {
  const char* env = std::getenv("TANDEM_PORT");
  if (env == nullptr || *env == '\0') return kDefaultPort;
  try {
    std::size_t used = 0;
    const int p = std::stoi(env, &used);
    if (used == std::strlen(env) && p >= 0 && p < 65536) return p;
  } catch (const std::exception&) {
  }
  throw Failure(std::string("TANDEM_PORT is not a port number: ") + env);
}

int run_animate(const AnimateArgs& a, Format fmt) {
  ServerOptions options;
  options.host = a.host;
  options.port = a.port ? *a.port : default_port();
  options.enabled_cap = a.enabled_cap;
  if (!a.ui_dir.empty()) options.static_dir = a.ui_dir;
  std::optional<Model> model;
  if (!a.model.empty()) model = load_model(a.model);

  // Block the stop signals before any thread starts so sigwait sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);

  AnimatorServer server(options);
  int port = 0;
  try {
    port = server.start();
  } catch (const std::runtime_error& e) {
    throw Failure(e.what());
  }
  const std::string url = "http://" + a.host + ":" + std::to_string(port) + "/";
  Json info{{"url", url}, {"port", port}};
  if (model) {
    const auto name = model->name;
    info["session"] = server.sessions().create(std::move(*model)).first;
    info["machine"] = name;
  }
  if (fmt == Format::Machine) {
    std::cout << info.dump() << std::endl;
  } else {
    std::cout << "animator listening on " << url << std::endl;
    if (model) std::cout << "session " << info["session"].get<std::string>() << " (MACHINE " << info["machine"].get<std::string>() << ")" << std::endl;
  }
  int sig = 0;
  sigwait(&stop, &sig);
  server.stop();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tandem: model checking, animation and trace-checking for guarded-command models", "tandem"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "human";
  app.add_option("--format", format, "output format: human or machine (JSON)")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "parse and type-check model files");
  validate->add_option("models", validate_args.models, "model files")->required();

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "explore the state space and report invariant violations");
  check->add_option("model", check_args.model, "model file or bundled model name")->required();
  check->add_option("--max-states", check_args.max_states, "stop after this many states; 0 for no limit")
      ->capture_default_str();
  check->add_option("--max-depth", check_args.max_depth, "do not expand beyond this depth; 0 for no limit")
      ->capture_default_str();
  check->add_option("--strategy", check_args.strategy, "bfs, dfs or random")
      ->check(CLI::IsMember({"bfs", "dfs", "random"}))
      ->capture_default_str();
  check->add_option("--seed", check_args.seed, "seed for --strategy random");
  check->add_flag("--all-violations", check_args.all_violations, "keep exploring after the first violation");
  check->add_flag("--no-deadlocks", check_args.no_deadlocks, "do not report deadlocked states");
  check->add_flag("--timing", check_args.timing, "include wall-clock time in the report");
  check->add_option("--out", check_args.out, "also write the machine report to this file");

  TraceCheckArgs tc_args;
  auto* trace_check = app.add_subcommand("trace-check", "check traces against a model");
  trace_check->add_option("model", tc_args.model, "model file or bundled model name")->required();
  trace_check->add_option("traces", tc_args.traces, "trace files or directories; - reads standard input")
      ->required();
  trace_check->add_flag("--corpus", tc_args.corpus, "report as a corpus even for a single file");
  trace_check->add_flag("--timing", tc_args.timing, "include time and throughput in the machine report");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "run the mortgage-broker simulator and print its trace");
  add_sim_options(simulate, sim_args.sim);
  simulate->add_option("--out", sim_args.out, "write the trace here instead of standard output");
  simulate->add_option("--snapshot", sim_args.snapshot, "write the final snapshot (JSON) here");

  TestbotArgs bot_args;
  auto* testbot = app.add_subcommand("testbot", "run the simulator repeatedly and write a trace corpus");
  add_sim_options(testbot, bot_args.sim);
  testbot->add_option("--runs", bot_args.runs, "number of runs, seeds seed..seed+runs-1")->capture_default_str();
  testbot->add_option("--out-dir", bot_args.out_dir, "corpus directory")->capture_default_str();
  testbot->add_option("--check", bot_args.check_model, "check the corpus against this model afterwards");
  testbot->add_flag("--timing", bot_args.timing, "include time and throughput in the machine report");

  AnimateArgs anim_args;
  auto* animate = app.add_subcommand("animate", "serve the animator API (and UI assets) on loopback");
  animate->add_option("model", anim_args.model, "model to open a session for");
  animate->add_option("--host", anim_args.host, "address to bind")->capture_default_str();
  animate->add_option("--port", anim_args.port, "port (default $TANDEM_PORT or 8765; 0 picks one)");
  animate->add_option("--ui-dir", anim_args.ui_dir, "directory of UI assets to serve at /")
      ->check(CLI::ExistingDirectory);
  animate->add_option("--enabled-cap", anim_args.enabled_cap, "max enabled steps listed per view")
      ->capture_default_str();

  // CLI11 would only say "a subcommand is required"; name the culprit.
  for (int i = 1; i < argc; ++i) {
    const std::string word = argv[i];
    if (word == "--format") {
      ++i;
      continue;
    }
    if (word.starts_with("-")) continue;
    if (app.get_subcommand_no_throw(word) == nullptr) {
      std::cerr << "tandem: unknown subcommand " << word << "\n" << app.help();
      return kError;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  const Format fmt = format == "machine" ? Format::Machine : Format::Human;
  try {
    if (*validate) return run_validate(validate_args, fmt);
    if (*check) return run_check(check_args, fmt);
    if (*trace_check) return run_trace_check(tc_args, fmt);
    if (*simulate) return run_simulate(sim_args, fmt);
    if (*testbot) return run_testbot(bot_args, fmt);
    if (*animate) return run_animate(anim_args, fmt);
  } catch (const Failure& e) {
    std::cerr << "tandem: " << e.what() << '\n';
    return kError;
  } catch (const InitViolation& e) {
    std::cerr << "tandem: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "tandem: error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
