#include "tandem/trace.hpp"

namespace tandem {

TraceFormatError::TraceFormatError(std::size_t line, const std::string& what)
    : std::runtime_error(what + " at line " + std::to_string(line)), line_(line) {}

namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

TraceHeader parse_header(const Json& h, std::size_t line) {
  if (!h.is_object()) throw TraceFormatError(line, "header must be an object");
  TraceHeader out;
  for (const auto& [key, v] : h.items()) {
    if (key == "model") {
      if (v.is_null()) continue;
      if (!v.is_string()) throw TraceFormatError(line, "header field model must be a string");
      out.model = v.get<std::string>();
    } else if (key == "source") {
      if (!v.is_string()) throw TraceFormatError(line, "header field source must be a string");
      out.source = v.get<std::string>();
    } else if (key == "seed") {
      if (v.is_null()) continue;
      if (!v.is_number_unsigned()) throw TraceFormatError(line, "header field seed must be a non-negative integer");
      out.seed = v.get<std::uint64_t>();
    } else if (key == "deadlocked") {
      if (!v.is_boolean()) throw TraceFormatError(line, "header field deadlocked must be a boolean");
      out.deadlocked = v.get<bool>();
    } else {
      throw TraceFormatError(line, "unknown header field " + key);
    }
  }
  return out;
}

TraceEvent parse_event(const Json& j, std::size_t line) {
  TraceEvent e;
  e.line = line;
  bool have_seq = false;
  bool have_op = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "seq") {
      if (!v.is_number_unsigned()) throw TraceFormatError(line, "seq must be a non-negative integer");
      e.seq = v.get<std::uint64_t>();
      have_seq = true;
    } else if (key == "op") {
      if (!v.is_string() || v.get<std::string>().empty()) throw TraceFormatError(line, "op must be a non-empty string");
      e.op = v.get<std::string>();
      have_op = true;
    } else if (key == "params") {
      if (!v.is_object()) throw TraceFormatError(line, "params must be an object");
      e.params = v;
    } else if (key == "observed") {
      if (!v.is_object()) throw TraceFormatError(line, "observed must be an object");
      e.observed = v;
    } else if (key == "ts") {
      if (!v.is_string()) throw TraceFormatError(line, "ts must be a string");
      e.ts = v.get<std::string>();
    } else {
      throw TraceFormatError(line, "unknown field " + key);
    }
  }
  if (!have_seq) throw TraceFormatError(line, "missing field seq");
  if (!have_op) throw TraceFormatError(line, "missing field op");
  return e;
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace trace;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    const auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (blank(line)) continue;

    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw TraceFormatError(line_no, "malformed line");
    }
    if (!j.is_object()) throw TraceFormatError(line_no, "expected a JSON object");
    if (j.contains("header")) {
      if (j.size() != 1) throw TraceFormatError(line_no, "header line carries extra fields");
      if (trace.header || !trace.events.empty()) throw TraceFormatError(line_no, "header must be the first line");
      trace.header = parse_header(j.at("header"), line_no);
      continue;
    }
    TraceEvent e = parse_event(j, line_no);
    if (!trace.events.empty() && e.seq <= trace.events.back().seq) {
      throw TraceFormatError(line_no, "non-monotone seq");
    }
    trace.events.push_back(std::move(e));
  }
  return trace;
}

std::string write_header(const TraceHeader& h) {
  Json body = Json::object();
  body["model"] = h.model ? Json(*h.model) : Json(nullptr);
  body["source"] = h.source;
  body["seed"] = h.seed ? Json(*h.seed) : Json(nullptr);
  body["deadlocked"] = h.deadlocked;
  Json line = Json::object();
  line["header"] = std::move(body);
  return line.dump();
}

std::string write_event(const TraceEvent& e) {
  Json j = Json::object();
  j["seq"] = e.seq;
  j["op"] = e.op;
  j["params"] = e.params;
  if (e.observed) j["observed"] = *e.observed;
  if (e.ts) j["ts"] = *e.ts;
  return j.dump();
}

std::string write_trace(const Trace& trace) {
  std::string out;
  if (trace.header) out += write_header(*trace.header) + "\n";
  for (const auto& e : trace.events) out += write_event(e) + "\n";
  return out;
}

TraceEvent make_event(const Model& m, std::uint64_t seq, const Transition& t, const State& post) {
  const auto& op = m.operations.at(t.op);
  TraceEvent e;
  e.seq = seq;
  e.op = op.name;
  e.params = encode_binding(m, op, t.binding);
  e.observed = encode_state(m, post);
  return e;
}

}  // namespace tandem
